"""Closed-form mutual-information results for the ED-CD splitting receiver.

High-SNR MI approximation, its equivalent normalized (cone-normal)
form, the optimal splitting ratio, exact CD baseline, ED upper bound,
and the finite-power / asymptotic gains over the best traditional
receiver.  All MI values are bits per channel use; all functions are
pure double-precision evaluations of the printed formulas, with the
discriminant kept in factored form to avoid cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams, NoiseProfile, SplittingRatio, as_rho

__all__ = [
    "AsymptoticTerms",
    "QuadraticCoefficients",
    "GainBreakdown",
    "FiniteGain",
    "DegenerateNoiseError",
    "REGIME_SPLITTING",
    "REGIME_CD_ONLY",
    "mi_high_snr",
    "mi_cone_normal",
    "quadratic_coefficients",
    "roots_upsilon_phi",
    "optimal_rho",
    "mi_cd_exact",
    "mi_ed_upper_bound",
    "gain_finite",
    "gain_asymptotic",
]

REGIME_SPLITTING = "splitting"
REGIME_CD_ONLY = "cd_only"


class DegenerateNoiseError(ValueError):
    """The quadratic's leading factor vanishes (sigma_cov2 in {2, 4} * sigma_rec2).

    The derivative numerator degenerates to a linear function whose
    single admissible root is rho = 1; callers fall back to that branch.
    """


@dataclass(frozen=True)
class AsymptoticTerms:
    """Normalized quantities of the high-SNR analysis.

    k2     -- sigma_cov2 / (2 * sigma_rec2), the squared CD/ED noise scale ratio
    zeta2  -- 1 + sigma_a2 / (P*|h|^2), the antenna-noise inflation factor
    theta1 -- rho (CD power share); theta2 -- 1 - rho (ED power share)
    """

    k2: float
    zeta2: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if not self.k2 > 0:
            raise ValueError("k2 must be positive")
        if not self.zeta2 > 1:
            raise ValueError("zeta2 must exceed 1")
        if abs(self.theta1 + self.theta2 - 1.0) > 1e-12:
            raise ValueError("theta1 + theta2 must equal 1")

    @classmethod
    def from_params(cls, params: ChannelParams, rho) -> "AsymptoticTerms":
        r = as_rho(rho)
        noise = params.noise
        return cls(
            k2=noise.sigma_cov2 / (2.0 * noise.sigma_rec2),
            zeta2=1.0 + noise.sigma_a2 / params.signal_power,
            theta1=r,
            theta2=1.0 - r,
        )


@dataclass(frozen=True)
class QuadraticCoefficients:
    """Dominant (power-proportional) coefficients of the MI derivative numerator.

    The stationary points of the high-SNR MI in rho solve
    a*rho^2 + b*rho + c = 0 as the transmit power grows.
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError("c must be positive for valid parameters")

    def residual(self, rho: float) -> float:
        return self.a * rho**2 + self.b * rho + self.c


@dataclass(frozen=True)
class GainBreakdown:
    """Asymptotic-gain ingredients and the resulting gain in bits.

    upsilon/phi -- roots of the dominant quadratic (nan when degenerate)
    psi         -- discriminant product (2*psi under the square root)
    beta        -- asymptotic MI gain in bits (0 outside the splitting regime)
    k_big/m_big -- numerator/denominator products of the gain's log ratio;
                   individually they may be negative, their ratio is positive
    regime      -- 'splitting' when sigma_cov2 > 4*sigma_rec2, else 'cd_only'
    """

    upsilon: float
    phi: float
    psi: float
    beta: float
    k_big: float
    m_big: float
    regime: str

    def __post_init__(self):
        if self.regime == REGIME_SPLITTING:
            if not (0.0 < self.upsilon < 1.0):
                raise ValueError("splitting regime requires 0 < upsilon < 1")
            if not self.beta > 0.0:
                raise ValueError("splitting regime requires beta > 0")


@dataclass(frozen=True)
class FiniteGain:
    """Finite-power gain of the splitting receiver over the CD receiver."""

    g_mi: float
    g_mi_pct: float
    rho_star: float


def _vars(noise: NoiseProfile):
    return noise.sigma_a2, noise.sigma_cov2, noise.sigma_rec2


def mi_high_snr(params: ChannelParams, rho) -> float:
    """High-SNR approximation of I(X; Y1, Y2) in bits, for rho in (0, 1].

    Asymptotically tight as the transmit power grows; at rho = 1 it
    reduces exactly to log2((P|h|^2 + sigma_a2) / (sigma_a2 + sigma_cov2)).
    The rho = 0 endpoint is outside its domain and rejected.
    """
    r = as_rho(rho)
    if r == 0.0:
        raise ValueError("the high-SNR approximation excludes rho = 0")
    sa2, sc2, sr2 = _vars(params.noise)
    ph2 = params.signal_power
    first = 0.5 * np.log2(r * (ph2 + sa2) ** 2 / (ph2 * (r * sa2 + sc2)))
    num = sc2 * (1.0 - r) * (ph2 + sa2) + 2.0 * r * sr2 * ph2
    den = 2.0 * sr2 * sa2 * r + sc2 * sa2 * (1.0 - r) + 2.0 * sr2 * sc2
    return float(first + 0.5 * np.log2(num / den))


def mi_cone_normal(params: ChannelParams, rho) -> float:
    """The same high-SNR MI written in the normalized terms of
    :class:`AsymptoticTerms` (cone-normal coordinates).

    Algebraically identical to :func:`mi_high_snr`:

        log2(theta1 * zeta2 * sqrt(k2*theta2*zeta2/theta1 + 1))
        - 0.5*log2((theta1*sa2 + sc2) * ((theta1 + theta2*k2)*sa2 + sc2) / (P|h|^2)^2)

    The second log carries the product of the two noise factors, each
    normalized by the received signal power.
    """
    r = as_rho(rho)
    if r == 0.0:
        raise ValueError("the high-SNR approximation excludes rho = 0")
    t = AsymptoticTerms.from_params(params, r)
    sa2, sc2, _ = _vars(params.noise)
    ph2 = params.signal_power
    first = np.log2(t.theta1 * t.zeta2 * np.sqrt(t.k2 * t.theta2 * t.zeta2 / t.theta1 + 1.0))
    second = 0.5 * np.log2(
        (t.theta1 * sa2 + sc2) * ((t.theta1 + t.theta2 * t.k2) * sa2 + sc2) / ph2**2
    )
    return float(first - second)


def quadratic_coefficients(params: ChannelParams) -> QuadraticCoefficients:
    """Dominant-term coefficients of the MI derivative numerator in rho."""
    sa2, sc2, sr2 = _vars(params.noise)
    p = params.power
    a = p * sa2 * (sc2**3 - 6.0 * sc2**2 * sr2 + 8.0 * sc2 * sr2**2)
    b = p * (4.0 * sa2 * sc2**2 * sr2 - 2.0 * sa2 * sc2**3
             - 4.0 * sc2**3 * sr2 + 8.0 * sc2**2 * sr2**2)
    c = p * (sa2 * sc2**3 + 2.0 * sc2**3 * sr2)
    return QuadraticCoefficients(a=a, b=b, c=c)


def _psi(noise: NoiseProfile) -> float:
    sa2, sc2, sr2 = _vars(noise)
    return sc2**2 * (sc2 - 2.0 * sr2) * (sa2 + sc2 - 2.0 * sr2) * sr2 * (sa2 + 2.0 * sr2)


def roots_upsilon_phi(noise: NoiseProfile) -> tuple[float, float, float]:
    """Roots (upsilon, phi) of the dominant quadratic, plus the product psi.

    upsilon carries the -sqrt(2*psi) branch and is the optimal splitting
    ratio in the splitting regime (where psi > 0 always holds).  Raises
    :class:`DegenerateNoiseError` when sigma_cov2 equals 2*sigma_rec2 or
    4*sigma_rec2 exactly (single-root branch, rho* = 1); returns a NaN
    pair when psi < 0 (complex roots, MI monotone in rho).
    """
    sa2, sc2, sr2 = _vars(noise)
    f2 = sc2 - 2.0 * sr2
    f4 = sc2 - 4.0 * sr2
    if f2 * f4 == 0.0:
        raise DegenerateNoiseError(
            "sigma_cov2 equals 2 or 4 times sigma_rec2; single root rho* = 1"
        )
    psi = _psi(noise)
    if psi < 0.0:
        # complex root pair: no real stationary point (only possible when
        # sigma_cov2 < 2*sigma_rec2, where rho* = 1 regardless)
        return float("nan"), float("nan"), float(psi)
    root = np.sqrt(2.0 * psi)
    num = sc2 * f2 * (sa2 + 2.0 * sr2)
    den = sa2 * f2 * f4
    return float((num - root) / den), float((num + root) / den), float(psi)


def optimal_rho(noise: NoiseProfile) -> SplittingRatio:
    """Power-independent optimal splitting ratio.

    upsilon when sigma_cov2 > 4*sigma_rec2, else 1 (the receiver should
    put everything into the CD chain).  Depends only on the noise
    variances, not on the transmit power.
    """
    if noise.sigma_cov2 > 4.0 * noise.sigma_rec2:
        try:
            upsilon, _, _ = roots_upsilon_phi(noise)
        except DegenerateNoiseError:
            return SplittingRatio(1.0)
        return SplittingRatio(upsilon)
    return SplittingRatio(1.0)


def mi_cd_exact(params: ChannelParams) -> float:
    """Exact MI of the pure CD receiver (rho = 1) under Gaussian input."""
    sa2, sc2, _ = _vars(params.noise)
    return float(np.log2(1.0 + params.signal_power / (sa2 + sc2)))


def mi_ed_upper_bound(params: ChannelParams) -> float:
    """Upper bound on the MI of the pure ED receiver (rho = 0).

    0.5*log2(P|h|^2 / sigma_a2) + 0.5*log2(e / (2*pi)); grows with power
    at half the CD rate and can be negative at low SNR, where it is not
    informative.
    """
    sa2 = params.noise.sigma_a2
    return float(0.5 * np.log2(params.signal_power / sa2)
                 + 0.5 * np.log2(np.e / (2.0 * np.pi)))


def gain_finite(params: ChannelParams) -> FiniteGain:
    """Finite-power MI gain of optimally-split reception over the CD receiver.

    The baseline is the exact CD mutual information
    (:func:`mi_cd_exact`), the better of the two traditional receivers
    at high SNR; the split receiver's MI is the high-SNR form at the
    power-independent optimal ratio.  Zero when rho* = 1.
    """
    rho_star = optimal_rho(params.noise).rho
    if rho_star == 1.0:
        return FiniteGain(g_mi=0.0, g_mi_pct=0.0, rho_star=1.0)
    base = mi_cd_exact(params)
    g = mi_high_snr(params, rho_star) - base
    return FiniteGain(g_mi=float(g), g_mi_pct=float(g / base), rho_star=rho_star)


def gain_asymptotic(noise: NoiseProfile) -> GainBreakdown:
    """Infinite-power MI gain in bits, with its ingredients.

    In the splitting regime beta = log2(upsilon) + 0.5*log2(K/M); K and
    M share the -sqrt(2*psi) terms and may both be negative, with a
    positive ratio.  Outside the regime the gain is zero.  The relative
    gain tends to zero with power in both regimes.
    """
    sa2, sc2, sr2 = _vars(noise)
    psi = _psi(noise)
    try:
        upsilon, phi, _ = roots_upsilon_phi(noise)
    except DegenerateNoiseError:
        upsilon = phi = float("nan")
    if not sc2 > 4.0 * sr2:
        return GainBreakdown(upsilon=upsilon, phi=phi, psi=float(psi), beta=0.0,
                             k_big=float("nan"), m_big=float("nan"),
                             regime=REGIME_CD_ONLY)
    root = np.sqrt(2.0 * psi)
    k_big = ((sa2 + sc2) ** 2
             * (sc2**2 - 6.0 * sc2 * sr2 + 8.0 * sr2**2) ** 2
             * (2.0 * sa2 * sc2 * sr2 + 2.0 * sc2**2 * sr2 - 4.0 * sc2 * sr2**2 - root))
    m_big = ((sa2 * sc2 * (sc2 - 2.0 * sr2) + sc2**3 - 4.0 * sc2**2 * sr2
              + 4.0 * sc2 * sr2**2 - root)
             * (4.0 * sa2 * sr2 * (sc2 - 2.0 * sr2) + 2.0 * sc2**2 * sr2
                - 4.0 * sc2 * sr2**2 - root)
             * sc2**2 * (sa2 + 2.0 * sr2))
    beta = float(np.log2(upsilon) + 0.5 * np.log2(k_big / m_big))
    return GainBreakdown(upsilon=upsilon, phi=phi, psi=float(psi), beta=beta,
                         k_big=float(k_big), m_big=float(m_big),
                         regime=REGIME_SPLITTING)
