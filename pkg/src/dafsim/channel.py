"""Time-correlated Rayleigh fading generation and its AR(1) description.

The Source-Destination, Source-Relay and Relay-Destination channels are
flat Rayleigh processes whose lag-n autocorrelation follows the Jakes
model sigma^2 * J0(2*pi*f*n).  Two generators are provided:

  * a modified sum-of-sinusoids generator (default; stratified arrival
    angles with a common random offset, random phases per realization),
  * an AR(1) innovation-form generator, useful for checking consistency
    with the first-order time-series description used by the analysis.

The cascaded (double-Rayleigh) channel is the sample-wise product of two
independent processes; its normalized autocorrelation is the product of
the individual autocorrelations.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .specfun import bessel_j0

# Sub-seed keys for the two hops of the cascaded channel.
_CASCADE_KEYS = (1, 2)
DEFAULT_SINUSOIDS = 16
_CHUNK = 131072


@dataclass(frozen=True)
class ChannelSpec:
    """Variances, normalized Doppler rates and channel-use spacing.

    sigma2 and doppler are (direct, source-relay, relay-destination)
    triples; spacing_n is the number of symbol periods between the two
    channel uses seen by the differential detector (1 for frame-by-frame
    transmission, 2 for symbol-by-symbol).
    """

    sigma2: tuple[float, float, float] = (1.0, 1.0, 1.0)
    doppler: tuple[float, float, float] = (0.0, 0.0, 0.0)
    spacing_n: int = 1

    def __post_init__(self):
        object.__setattr__(self, "sigma2", tuple(float(v) for v in self.sigma2))
        object.__setattr__(self, "doppler", tuple(float(f) for f in self.doppler))
        if len(self.sigma2) != 3 or len(self.doppler) != 3:
            raise ValueError("sigma2 and doppler must have three entries")
        if any(not math.isfinite(v) or v <= 0 for v in self.sigma2):
            raise ValueError(f"variances must be positive, got {self.sigma2}")
        if any(not math.isfinite(f) or f < 0 or f > 0.5 for f in self.doppler):
            raise ValueError(f"doppler rates must lie in [0, 0.5], got {self.doppler}")
        if not isinstance(self.spacing_n, int) or self.spacing_n < 1:
            raise ValueError(f"spacing_n must be a positive integer, got {self.spacing_n}")

    def alpha(self, i: int) -> float:
        """Lag-spacing_n autocorrelation coefficient of channel i."""
        return ar1_alpha(self, i)


@dataclass(frozen=True)
class Ar1Params:
    """First-order autoregressive description of a fading process."""

    alpha: float
    innovation_variance: float

    def __post_init__(self):
        if not -1.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [-1, 1], got {self.alpha}")
        if self.innovation_variance < 0:
            raise ValueError("innovation variance must be non-negative")

    @classmethod
    def from_spec(cls, spec: ChannelSpec, channel_index: int) -> "Ar1Params":
        a = ar1_alpha(spec, channel_index)
        return cls(alpha=a, innovation_variance=spec.sigma2[channel_index])

    @classmethod
    def cascaded(cls, spec: ChannelSpec) -> "Ar1Params":
        a = cascaded_alpha(spec)
        return cls(alpha=a, innovation_variance=spec.sigma2[1] * spec.sigma2[2])


@dataclass
class FadingProcess:
    """A realization of a time-correlated complex fading process."""

    coefficients: np.ndarray
    target_variance: float
    target_doppler: float
    seed: int
    n_sinusoids: int = DEFAULT_SINUSOIDS
    generator: str = "sos"

    def empirical_power(self) -> float:
        return float(np.mean(np.abs(self.coefficients) ** 2))

    def empirical_autocorr(self, lag: int) -> float:
        """Normalized lag autocorrelation Re E{h*[k] h[k+lag]} / E{|h|^2}."""
        if lag < 0:
            raise ValueError("lag must be non-negative")
        h = self.coefficients
        if lag == 0:
            return 1.0
        num = np.mean(np.conj(h[:-lag]) * h[lag:]).real
        return float(num / np.mean(np.abs(h) ** 2))

    def export_csv(self, path) -> None:
        """Write the realization as rows of (index, re, im)."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "re", "im"])
            for i, c in enumerate(self.coefficients):
                writer.writerow([i, repr(float(c.real)), repr(float(c.imag))])


def jakes_autocorr(variance: float, doppler: float, lag: int) -> float:
    """Jakes autocorrelation sigma^2 * J0(2*pi*f*lag) at an integer lag."""
    if lag < 0:
        raise ValueError(f"lag must be non-negative, got {lag}")
    if variance <= 0:
        raise ValueError(f"variance must be positive, got {variance}")
    if doppler < 0:
        raise ValueError(f"doppler must be non-negative, got {doppler}")
    return variance * bessel_j0(2.0 * math.pi * doppler * lag)


def ar1_alpha(spec: ChannelSpec, channel_index: int) -> float:
    """AR(1) coefficient of channel i at the spec's channel-use spacing."""
    if channel_index not in (0, 1, 2):
        raise ValueError(f"channel index must be 0, 1 or 2, got {channel_index}")
    f = spec.doppler[channel_index]
    if f == 0.0:
        return 1.0
    return bessel_j0(2.0 * math.pi * f * spec.spacing_n)


def cascaded_alpha(spec: ChannelSpec) -> float:
    """Autocorrelation of the cascaded channel: the product of both hops'."""
    return ar1_alpha(spec, 1) * ar1_alpha(spec, 2)


def _sos_realization(
    rng: np.random.Generator, variance: float, doppler: float, length: int, n_sin: int
) -> np.ndarray:
    """One sum-of-sinusoids realization; constant channel when doppler = 0."""
    if doppler == 0.0:
        h0 = (rng.standard_normal() + 1j * rng.standard_normal()) * math.sqrt(variance / 2.0)
        return np.full(length, h0, dtype=np.complex128)
    theta = rng.uniform(-math.pi, math.pi)
    m = np.arange(1, n_sin + 1)
    angles = (2.0 * np.pi * m - np.pi + theta) / (4.0 * n_sin)
    w_i = 2.0 * np.pi * doppler * np.cos(angles)
    w_q = 2.0 * np.pi * doppler * np.sin(angles)
    phi_i = rng.uniform(-math.pi, math.pi, n_sin)
    phi_q = rng.uniform(-math.pi, math.pi, n_sin)
    scale = math.sqrt(variance / n_sin)
    coeff = np.empty(length, dtype=np.complex128)
    for start in range(0, length, _CHUNK):
        k = np.arange(start, min(start + _CHUNK, length), dtype=np.float64)[:, None]
        re = np.cos(w_i[None, :] * k + phi_i[None, :]).sum(axis=1)
        im = np.cos(w_q[None, :] * k + phi_q[None, :]).sum(axis=1)
        coeff[start : start + k.shape[0]] = (re + 1j * im) * scale
    return coeff


def generate_jakes(
    variance: float,
    doppler: float,
    length: int,
    seed: int,
    n_sinusoids: int = DEFAULT_SINUSOIDS,
) -> FadingProcess:
    """One realization of a Jakes-correlated Rayleigh-like process.

    Sum of n_sinusoids oscillators per quadrature branch, with stratified
    arrival angles sharing a random offset so the ensemble autocorrelation
    is exactly sigma^2 * J0(2*pi*f*lag).  Deterministic given the seed.
    A zero Doppler rate yields a channel that is constant in time within
    the realization.
    """
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    if variance <= 0:
        raise ValueError(f"variance must be positive, got {variance}")
    if doppler < 0 or doppler > 0.5:
        raise ValueError(f"doppler must lie in [0, 0.5], got {doppler}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    coeff = _sos_realization(rng, variance, doppler, length, n_sinusoids)
    return FadingProcess(coeff, variance, doppler, seed, n_sinusoids)


def generate_ar1(variance: float, alpha: float, length: int, seed: int) -> FadingProcess:
    """Innovation-form AR(1) alternative: h[k] = a h[k-1] + sqrt(1-a^2) e[k]."""
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    params = Ar1Params(alpha=alpha, innovation_variance=variance)
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    e = (rng.standard_normal(length) + 1j * rng.standard_normal(length)) * math.sqrt(variance / 2.0)
    if alpha == 1.0:
        coeff = np.full(length, e[0], dtype=np.complex128)
    else:
        b = math.sqrt(1.0 - alpha * alpha)
        # h[0] drawn from the stationary law, then filtered innovations
        coeff = np.empty(length, dtype=np.complex128)
        coeff[0] = e[0]
        if length > 1:
            tail, _ = lfilter([b], [1.0, -alpha], e[1:], zi=np.array([alpha * e[0]]))
            coeff[1:] = tail
    return FadingProcess(coeff, params.innovation_variance, float("nan"), seed, generator="ar1")


def generate_cascaded(
    spec: ChannelSpec,
    length: int,
    seed: int,
    n_sinusoids: int = DEFAULT_SINUSOIDS,
) -> FadingProcess:
    """Product process h1[k]*h2[k] of the two relay hops.

    The hops are independent realizations with sub-seeds derived from the
    master seed by fixed keys, so a single seed reproduces the pair.
    """
    if length < 1:
        raise ValueError(f"length must be >= 1, got {length}")
    parts = []
    for idx, key in zip((1, 2), _CASCADE_KEYS):
        rng = np.random.default_rng(np.random.SeedSequence((seed, key)))
        parts.append(
            _sos_realization(rng, spec.sigma2[idx], spec.doppler[idx], length, n_sinusoids)
        )
    coeff = parts[0] * parts[1]
    return FadingProcess(
        coeff,
        spec.sigma2[1] * spec.sigma2[2],
        float("nan"),
        seed,
        n_sinusoids,
        generator="cascaded-sos",
    )
