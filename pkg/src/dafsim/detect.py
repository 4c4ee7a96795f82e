"""Non-coherent decision variables, combiners and the sign decision rule.

The decision variable of a branch is Re{conj(y[k-1]) * y[k]}.  Selection
combining picks the branch with the largest magnitude (ties go to the
direct branch); the semi maximum-ratio combiner weights each branch by
the inverse of its average noise level, using channel statistics only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .relaylink import FrameTrace, PowerSpec, amplification_factor


@dataclass
class DecisionStats:
    """Per-symbol decision variables and the combiner outcome."""

    zeta0: float
    zeta_relay: Sequence[float]
    combined: float = 0.0
    chosen_branch: str = "direct"


def decision_variable(y_prev: complex, y_curr: complex) -> float:
    """Re{conj(y_prev) * y_curr}."""
    return (np.conj(y_prev) * y_curr).real


def decision_variables(y: np.ndarray) -> np.ndarray:
    """Decision variables of a whole reception sequence (length m for m+1 uses)."""
    y = np.asarray(y)
    return (np.conj(y[:-1]) * y[1:]).real


def sc_combine(stats: DecisionStats) -> tuple[float, str]:
    """Pick the branch value with the largest magnitude; ties keep the direct branch."""
    best = stats.zeta0
    chosen = "direct"
    for l, z in enumerate(stats.zeta_relay):
        if abs(z) > abs(best):
            best = z
            chosen = f"relay {l + 1}"
    stats.combined = best
    stats.chosen_branch = chosen
    return best, chosen


def semi_mrc_combine(
    stats: DecisionStats,
    n0: float,
    amplification: float | Sequence[float],
    sigma2_sq: float | Sequence[float],
) -> float:
    """zeta0/N0 + sum_l zeta_l / (N0 * (1 + A_l^2 * sigma2_l^2)).

    For several relays the per-branch weights follow the single-relay rule
    branch by branch; this multi-relay extension is a simulation baseline,
    not an analyzed combiner.
    """
    n_relays = len(stats.zeta_relay)
    amps = np.broadcast_to(np.asarray(amplification, dtype=np.float64), (n_relays,))
    sig = np.broadcast_to(np.asarray(sigma2_sq, dtype=np.float64), (n_relays,))
    out = stats.zeta0 / n0
    for z, a, s2 in zip(stats.zeta_relay, amps, sig):
        out += z / (n0 * (1.0 + a * a * s2))
    stats.combined = out
    stats.chosen_branch = "semi-mrc"
    return out


def decide(combined: float) -> int:
    """Sign decision; the measure-zero tie at exactly zero maps to +1."""
    return -1 if combined < 0 else 1


def detect_frame(
    trace: FrameTrace,
    method: str = "sc",
    power: PowerSpec | None = None,
    sigma1_sq: float | None = None,
    sigma2_sq: float | None = None,
) -> np.ndarray:
    """Decode a whole frame with the chosen combiner; returns +-1 symbols.

    The semi-MRC method needs the power spec and the channel variances to
    form its weights; selection combining and direct-only detection do not.
    """
    z0 = decision_variables(trace.y0)
    z_relay = [decision_variables(y) for y in trace.y_relay]
    if method == "direct":
        combined = z0
    elif method == "sc":
        combined = z0.copy()
        for z in z_relay:
            swap = np.abs(z) > np.abs(combined)
            combined[swap] = z[swap]
    elif method == "smrc":
        if power is None or sigma1_sq is None or sigma2_sq is None:
            raise ValueError("semi-MRC detection needs power and channel variances")
        a = amplification_factor(power, sigma1_sq)
        combined = z0 / power.noise_variance
        for z in z_relay:
            combined = combined + z / (power.noise_variance * (1.0 + a * a * sigma2_sq))
    else:
        raise ValueError(f"unknown method {method!r}")
    return np.where(combined < 0, -1.0, 1.0)
