"""End-to-end signal chain of the differential amplify-and-forward link.

Per frame: the source differentially encodes BPSK symbols and transmits;
the destination and relay receive noisy copies; the relay scales its
reception by a fixed gain and re-transmits; the destination receives the
cascaded copy.  Noise is calibrated so all powers are expressed relative
to the per-sample noise variance N0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .channel import ChannelSpec

DEFAULT_FRAME_LENGTH = 100


@dataclass(frozen=True)
class PowerSpec:
    """Total network power over noise and its split between source and relay.

    The source transmits with p0 = q * p_total and the relay with
    p1 = p_total - p0 (exact by construction).
    """

    total_power_over_noise: float
    q: float
    noise_variance: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.total_power_over_noise) or self.total_power_over_noise <= 0:
            raise ValueError(f"total power over noise must be positive, got {self.total_power_over_noise}")
        if not 0.0 < self.q < 1.0:
            raise ValueError(f"power allocation factor must lie in (0, 1), got {self.q}")
        if not math.isfinite(self.noise_variance) or self.noise_variance <= 0:
            raise ValueError(f"noise variance must be positive, got {self.noise_variance}")

    @classmethod
    def from_db(cls, p_over_n0_db: float, q: float, noise_variance: float = 1.0) -> "PowerSpec":
        return cls(10.0 ** (p_over_n0_db / 10.0), q, noise_variance)

    @property
    def p_total(self) -> float:
        return self.total_power_over_noise * self.noise_variance

    @property
    def p0(self) -> float:
        return self.q * self.p_total

    @property
    def p1(self) -> float:
        return self.p_total - self.p0


@dataclass(frozen=True)
class SnrSummary:
    """Average SNRs of the two links.

    rho2_of_lambda gives the cascaded-link SNR conditioned on the squared
    magnitude of the relay-destination coefficient; it increases from 0 to
    rho1 as that magnitude grows.
    """

    rho0: float
    rho1: float
    rho2_of_lambda: Callable[[float], float]


@dataclass
class FrameTrace:
    """Everything observed over one simulated frame."""

    symbols: np.ndarray            # data symbols v[k], +-1, length m
    encoded: np.ndarray            # s[k], length m+1 (leading reference symbol)
    y0: np.ndarray                 # direct-link reception, length m+1
    y_relay: list[np.ndarray] = field(default_factory=list)  # cascaded receptions per relay
    frame_length: int = 0


def amplification_factor(power: PowerSpec, sigma1_sq: float) -> float:
    """Fixed relay gain A = sqrt(p1 / (p0 * sigma1^2 + N0))."""
    if sigma1_sq <= 0:
        raise ValueError(f"source-relay variance must be positive, got {sigma1_sq}")
    return math.sqrt(power.p1 / (power.p0 * sigma1_sq + power.noise_variance))


def snr_summary(spec: ChannelSpec, power: PowerSpec) -> SnrSummary:
    n0 = power.noise_variance
    rho0 = power.p0 * spec.sigma2[0] / n0
    rho1 = power.p0 * spec.sigma2[1] / n0
    a2 = amplification_factor(power, spec.sigma2[1]) ** 2

    def rho2(lam: float) -> float:
        if lam < 0:
            raise ValueError(f"lambda must be non-negative, got {lam}")
        return a2 * rho1 * lam / (1.0 + a2 * lam)

    return SnrSummary(rho0=rho0, rho1=rho1, rho2_of_lambda=rho2)


def differential_encode(bits_as_bpsk: Sequence[float]) -> np.ndarray:
    """s[0] = 1, s[k] = v[k] * s[k-1]; output is one longer than the input."""
    v = np.asarray(bits_as_bpsk, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError("input must be one-dimensional")
    if v.size and not np.all(np.abs(v) == 1.0):
        raise ValueError("input symbols must all be +1 or -1")
    s = np.empty(v.size + 1, dtype=np.float64)
    s[0] = 1.0
    if v.size:
        np.cumprod(v, out=s[1:])
    return s


def conditional_noise_variance(lam: float, amplification: float, n0: float) -> float:
    """Variance N0 * (1 + A^2 * lambda) of the equivalent cascaded-link noise."""
    if lam < 0:
        raise ValueError(f"lambda must be non-negative, got {lam}")
    return n0 * (1.0 + amplification * amplification * lam)


def _complex_noise(rng: np.random.Generator, n: int, variance: float) -> np.ndarray:
    draws = rng.standard_normal(2 * n) * math.sqrt(variance / 2.0)
    return draws[:n] + 1j * draws[n:]


def simulate_frame(
    spec: ChannelSpec,
    power: PowerSpec,
    bits_as_bpsk: Sequence[float],
    h0: np.ndarray,
    relay_channels: Sequence[tuple[np.ndarray, np.ndarray]],
    noise_seed: int,
    zero_noise: bool = False,
) -> FrameTrace:
    """Run one frame through the two-phase relay chain.

    Channel streams must provide at least m+1 samples (one per channel
    use); the leading sample carries the reference symbol.  Noise for the
    destination's first phase, each relay's reception and the
    destination's second phase is drawn from independent sub-streams of
    noise_seed, each complex Gaussian with variance N0.
    """
    v = np.asarray(bits_as_bpsk, dtype=np.float64)
    s = differential_encode(v)
    n_uses = s.size
    streams = [np.asarray(h0)] + [np.asarray(h) for pair in relay_channels for h in pair]
    for h in streams:
        if h.shape[0] < n_uses:
            raise ValueError(
                f"channel stream too short: need {n_uses} samples, got {h.shape[0]}"
            )
    n0 = power.noise_variance
    sqrt_p0 = math.sqrt(power.p0)
    n_relays = len(relay_channels)
    ss = np.random.SeedSequence((noise_seed, 0))
    rngs = [np.random.default_rng(c) for c in ss.spawn(1 + 2 * n_relays)]

    def noise(i: int) -> np.ndarray:
        if zero_noise:
            return np.zeros(n_uses, dtype=np.complex128)
        return _complex_noise(rngs[i], n_uses, n0)

    y0 = sqrt_p0 * np.asarray(h0)[:n_uses] * s + noise(0)
    y_relay = []
    for l, (h1, h2) in enumerate(relay_channels):
        a = amplification_factor(power, spec.sigma2[1])
        y1 = sqrt_p0 * np.asarray(h1)[:n_uses] * s + noise(1 + 2 * l)
        y2 = a * np.asarray(h2)[:n_uses] * y1 + noise(2 + 2 * l)
        y_relay.append(y2)
    return FrameTrace(symbols=v, encoded=s, y0=y0, y_relay=y_relay, frame_length=v.size)
