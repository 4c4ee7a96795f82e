"""Closed-form error analysis of the selection-combining detector.

For each link the decision variable has a two-sided exponential density
b*exp(c*beta) for beta <= 0 and b*exp(d*beta) for beta >= 0, with
constants driven by the link SNR and the channel autocorrelation.  The
conditional bit error rate given the squared relay-destination magnitude
lambda has three rational terms; averaging each against the exponential
density of lambda gives the average BER

    P_b = I1 + I2 + I3.

I1 averages to a single scaled-exponential-integral term.  I2 and I3 are
averages of rational functions with two distinct negative poles, so their
closed forms carry one scaled exponential integral per pole (an exact
partial-fraction evaluation; the poles never collide because their gap is
bounded below by a positive quantity for every admissible parameter set).
All exp(x)*E1(x) products go through the overflow-safe scaled form, which
also resolves the autocorrelation -> 1 limit via x*exp(x)*E1(x) -> 1.

The high-power limit of the BER (the error floor) depends only on the
channel autocorrelations, the variances and the power split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import ChannelSpec, ar1_alpha, cascaded_alpha
from .relaylink import PowerSpec, amplification_factor, conditional_noise_variance
from .specfun import exp_scaled_e1, exp_scaled_e1_deriv

_NORMALIZATION_TOL = 1e-9
_BOUND_EPS = 1e-9


@dataclass(frozen=True)
class DirectLinkConstants:
    """Density constants (b0, c0, d0) of the direct-link decision variable."""

    b0: float
    c0: float
    d0: float

    def __post_init__(self):
        if not (self.b0 > 0 and self.c0 > 0 and self.d0 < 0):
            raise ValueError("direct-link constants must satisfy b0,c0 > 0 and d0 < 0")
        norm = self.b0 / self.c0 - self.b0 / self.d0
        if abs(norm - 1.0) > _NORMALIZATION_TOL:
            raise ValueError(f"density does not normalize: {norm}")


@dataclass(frozen=True)
class CascadedLinkConstants:
    """Density constants (b2, c2, d2) of the cascaded link at one lambda."""

    b2: float
    c2: float
    d2: float

    def __post_init__(self):
        if not (self.b2 > 0 and self.c2 > 0 and self.d2 < 0):
            raise ValueError("cascaded-link constants must satisfy b2,c2 > 0 and d2 < 0")
        norm = self.b2 / self.c2 - self.b2 / self.d2
        if abs(norm - 1.0) > _NORMALIZATION_TOL:
            raise ValueError(f"density does not normalize: {norm}")


@dataclass(frozen=True)
class BerBreakdown:
    """Average BER split into its three closed-form terms."""

    i1: float
    i2: float
    i3: float
    total: float
    # companion constants of the closed form (b1/b2 for I1, tilde for I2,
    # breve for I3); b2_tilde and b2_breve equal the sums of the exact
    # pole positions of the I2 and I3 integrands
    b1: float
    b2: float
    b2_tilde: float
    b3_tilde: float
    b1_breve: float
    b2_breve: float
    b3_breve: float

    def __post_init__(self):
        if not (self.i1 > 0 and self.i2 > 0 and self.i3 > 0):
            raise ValueError("BER terms must be positive")
        if self.total > 0.5 + _BOUND_EPS or self.total < 0:
            raise ValueError(f"total BER out of range: {self.total}")


@dataclass(frozen=True)
class FloorBreakdown:
    """High-power BER limit and its three constituents."""

    i1: float
    i2: float
    i3: float
    total: float


def conditional_moments_direct(
    y0_mag_sq: float, rho0: float, alpha0: float, n0: float
) -> tuple[float, float]:
    """Conditional mean/variance of the direct decision variable given |y0|^2."""
    if y0_mag_sq < 0:
        raise ValueError(f"squared magnitude must be non-negative, got {y0_mag_sq}")
    mean = alpha0 * rho0 / (rho0 + 1.0) * y0_mag_sq
    var = (
        0.5
        * n0
        * (1.0 + alpha0 * alpha0 * rho0 / (rho0 + 1.0) + (1.0 - alpha0 * alpha0) * rho0)
        * y0_mag_sq
    )
    return mean, var


def conditional_moments_cascaded(
    y2_mag_sq: float, lam: float, rho1: float, alpha: float, amplification: float, n0: float
) -> tuple[float, float]:
    """Conditional mean/variance of the cascaded decision variable."""
    if y2_mag_sq < 0 or lam < 0:
        raise ValueError("squared magnitudes must be non-negative")
    a2 = amplification * amplification
    rho2 = a2 * rho1 * lam / (1.0 + a2 * lam)
    sw2 = conditional_noise_variance(lam, amplification, n0)
    mean = alpha * rho2 / (rho2 + 1.0) * y2_mag_sq
    var = (
        0.5
        * sw2
        * (1.0 + alpha * alpha * rho2 / (rho2 + 1.0) + (1.0 - alpha * alpha) * rho2)
        * y2_mag_sq
    )
    return mean, var


def direct_constants(rho0: float, alpha0: float, n0: float) -> DirectLinkConstants:
    if rho0 < 0 or not 0.0 <= alpha0 <= 1.0 or n0 <= 0:
        raise ValueError("need rho0 >= 0, alpha0 in [0, 1], n0 > 0")
    return DirectLinkConstants(
        b0=1.0 / (n0 * (1.0 + rho0)),
        c0=2.0 / (n0 * (1.0 + (1.0 - alpha0) * rho0)),
        d0=-2.0 / (n0 * (1.0 + (1.0 + alpha0) * rho0)),
    )


def cascaded_constants(
    lam: float, rho1: float, alpha: float, amplification: float, n0: float
) -> CascadedLinkConstants:
    if lam < 0 or rho1 < 0 or not 0.0 <= alpha <= 1.0 or n0 <= 0:
        raise ValueError("need lambda, rho1 >= 0, alpha in [0, 1], n0 > 0")
    a2 = amplification * amplification
    rho2 = a2 * rho1 * lam / (1.0 + a2 * lam)
    sw2 = conditional_noise_variance(lam, amplification, n0)
    return CascadedLinkConstants(
        b2=1.0 / (sw2 * (1.0 + rho2)),
        c2=2.0 / (sw2 * (1.0 + (1.0 - alpha) * rho2)),
        d2=-2.0 / (sw2 * (1.0 + (1.0 + alpha) * rho2)),
    )


def _two_sided_pdf(beta: float, b: float, c: float, d: float) -> float:
    return b * math.exp(c * beta) if beta <= 0 else b * math.exp(d * beta)


def _two_sided_cdf(beta: float, b: float, c: float, d: float) -> float:
    if beta <= 0:
        return (b / c) * math.exp(c * beta)
    return 1.0 + (b / d) * math.exp(d * beta)


def _abs_cdf(beta: float, b: float, c: float, d: float) -> float:
    if beta < 0:
        raise ValueError(f"cdf of a magnitude needs beta >= 0, got {beta}")
    return 1.0 + (b / d) * math.exp(d * beta) - (b / c) * math.exp(-c * beta)


def pdf_zeta0(beta: float, consts: DirectLinkConstants) -> float:
    return _two_sided_pdf(beta, consts.b0, consts.c0, consts.d0)


def cdf_zeta0(beta: float, consts: DirectLinkConstants) -> float:
    return _two_sided_cdf(beta, consts.b0, consts.c0, consts.d0)


def cdf_abs_zeta0(beta: float, consts: DirectLinkConstants) -> float:
    return _abs_cdf(beta, consts.b0, consts.c0, consts.d0)


def pdf_zeta2(beta: float, consts: CascadedLinkConstants) -> float:
    return _two_sided_pdf(beta, consts.b2, consts.c2, consts.d2)


def cdf_zeta2(beta: float, consts: CascadedLinkConstants) -> float:
    return _two_sided_cdf(beta, consts.b2, consts.c2, consts.d2)


def cdf_abs_zeta2(beta: float, consts: CascadedLinkConstants) -> float:
    return _abs_cdf(beta, consts.b2, consts.c2, consts.d2)


def conditional_ber(direct: DirectLinkConstants, cascaded: CascadedLinkConstants) -> float:
    """Error probability of the selection combiner at fixed lambda."""
    b0, c0, d0 = direct.b0, direct.c0, direct.d0
    b2, c2, d2 = cascaded.b2, cascaded.c2, cascaded.d2
    return (
        b0 * b2 / (c0 * c2)
        + b0 * b2 / (c0 * (c0 - d2))
        + b0 * b2 / (c2 * (c2 - d0))
    )


def _scaled_e1_divided_diff(x: float, y: float) -> float:
    """(E*(x) - E*(y)) / (x - y) for E*(x) = exp(x)*E1(x), cancellation-safe."""
    if x == y:
        return exp_scaled_e1_deriv(x)
    if abs(x - y) < 1e-4 * max(x, y):
        return exp_scaled_e1_deriv(0.5 * (x + y))
    return (exp_scaled_e1(x) - exp_scaled_e1(y)) / (x - y)


def link_parameters(spec: ChannelSpec, power: PowerSpec):
    """(rho0, rho1, A, alpha0, alpha) for a channel/power combination."""
    n0 = power.noise_variance
    rho0 = power.p0 * spec.sigma2[0] / n0
    rho1 = power.p0 * spec.sigma2[1] / n0
    amp = amplification_factor(power, spec.sigma2[1])
    return rho0, rho1, amp, ar1_alpha(spec, 0), cascaded_alpha(spec)


def ber_closed_form(spec: ChannelSpec, power: PowerSpec) -> BerBreakdown:
    """Exact average BER of selection combining with one relay.

    Each term is the analytic average of its conditional-BER term against
    the exponential density of lambda.  I2 and I3 use the two-pole partial
    fraction of their integrands; the companion single-argument constants
    are reported alongside (b2_tilde and b2_breve are the pole sums).
    """
    rho0, rho1, amp, alpha0, alpha = link_parameters(spec, power)
    n0 = power.noise_variance
    s = spec.sigma2[2]
    a2 = amp * amp

    b0 = 1.0 / (n0 * (1.0 + rho0))
    c0 = 2.0 / (n0 * (1.0 + (1.0 - alpha0) * rho0))
    g = a2 * (1.0 + rho1)
    h = a2 * (1.0 + (1.0 + alpha) * rho1)
    k = a2 * (1.0 + (1.0 - alpha) * rho1)
    u = (1.0 - alpha0) * rho0
    ub = (1.0 + alpha0) * rho0

    big_b1 = 1.0 / k
    big_b2 = 1.0 / g
    i1 = (b0 * big_b2 / (2.0 * c0 * big_b1)) * (
        1.0 + (big_b1 - big_b2) / s * exp_scaled_e1(big_b2 / s)
    )

    # I2: integrand  Bt3 * (lam + 1/h) / ((lam + 1/g) * (lam + (2+u)/h))
    bt3 = (1.0 + u) / (2.0 * g)
    pole_a = big_b2
    pole_b = (2.0 + u) / h
    root_c = 1.0 / h
    bt2 = pole_a + pole_b
    dd = _scaled_e1_divided_diff(pole_a / s, pole_b / s)
    i2 = (b0 / c0) * bt3 * (exp_scaled_e1(pole_b / s) - (root_c - pole_a) * dd / s) / s

    # I3: integrand  Bb3 * (lam + 1/k)^2 / ((lam + 1/g) * (lam + (2+ub)/k))
    bb1 = 2.0 / k
    bb3 = (1.0 + ub) * k / (4.0 * (1.0 + rho0) * g)
    pole_a3 = big_b2
    pole_b3 = (2.0 + ub) / k
    root_c3 = 1.0 / k
    bb2 = pole_a3 + pole_b3
    dd3 = _scaled_e1_divided_diff(pole_a3 / s, pole_b3 / s)
    bracket = (2.0 * root_c3 - pole_a3 - pole_b3) * exp_scaled_e1(pole_b3 / s) - (
        root_c3 - pole_a3
    ) ** 2 * dd3 / s
    i3 = bb3 * (1.0 + bracket / s)

    return BerBreakdown(
        i1=i1,
        i2=i2,
        i3=i3,
        total=i1 + i2 + i3,
        b1=big_b1,
        b2=big_b2,
        b2_tilde=bt2,
        b3_tilde=bt3,
        b1_breve=bb1,
        b2_breve=bb2,
        b3_breve=bb3,
    )


def _one_minus_x_scaled_e1(x: float) -> float:
    """1 - x*exp(x)*E1(x), accurate for large x where the product nears 1."""
    if x > 1e8:
        inv = 1.0 / x
        return inv * (1.0 - 2.0 * inv + 6.0 * inv * inv - 24.0 * inv**3)
    return 1.0 - x * exp_scaled_e1(x)


def error_floor(spec: ChannelSpec, q: float) -> FloorBreakdown:
    """High-power BER limit; zero exactly when both autocorrelations are one."""
    if not 0.0 < q < 1.0:
        raise ValueError(f"power allocation factor must lie in (0, 1), got {q}")
    alpha0 = ar1_alpha(spec, 0)
    alpha = cascaded_alpha(spec)
    s0 = spec.sigma2[0]
    s = spec.sigma2[2]

    i1 = 0.25 * (1.0 - alpha0) * (1.0 - alpha)
    if alpha0 == 1.0:
        i2 = 0.0
    else:
        bt2 = q * s0 * (1.0 - alpha0) / ((1.0 - q) * (1.0 + alpha))
        bt3 = q * (1.0 - alpha0) * s0 / (2.0 * (1.0 - q))
        i2 = (1.0 - alpha0) / (2.0 * s) * bt3 * exp_scaled_e1(bt2 / s)
    if alpha == 1.0:
        i3 = 0.0
    else:
        bb2 = q * s0 * (1.0 + alpha0) / ((1.0 - q) * (1.0 - alpha))
        bb3 = 0.25 * (1.0 - alpha) * (1.0 + alpha0)
        i3 = bb3 * _one_minus_x_scaled_e1(bb2 / s)
    return FloorBreakdown(i1=i1, i2=i2, i3=i3, total=i1 + i2 + i3)


_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def optimize_q(
    spec: ChannelSpec,
    p_over_n0: float,
    q_min: float = 0.01,
    q_max: float = 0.99,
    grid_step: float = 0.005,
    tol: float = 1e-4,
) -> tuple[float, float]:
    """Minimize the closed-form BER over the power allocation factor.

    A coarse grid scan guards against multimodality; golden-section search
    then refines the bracketing interval down to |dq| <= tol.
    """
    if p_over_n0 <= 0:
        raise ValueError(f"power over noise must be positive, got {p_over_n0}")

    def ber_at(q: float) -> float:
        return ber_closed_form(spec, PowerSpec(p_over_n0, q)).total

    n_grid = int(round((q_max - q_min) / grid_step)) + 1
    grid = [q_min + i * grid_step for i in range(n_grid)]
    values = [ber_at(q) for q in grid]
    best = min(range(n_grid), key=values.__getitem__)
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, n_grid - 1)]

    x1 = hi - _INV_GOLDEN * (hi - lo)
    x2 = lo + _INV_GOLDEN * (hi - lo)
    f1, f2 = ber_at(x1), ber_at(x2)
    while hi - lo > tol:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INV_GOLDEN * (hi - lo)
            f1 = ber_at(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INV_GOLDEN * (hi - lo)
            f2 = ber_at(x2)
    q_opt = 0.5 * (lo + hi)
    return q_opt, ber_at(q_opt)
