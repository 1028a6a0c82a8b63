"""Signal model of the ED-CD splitting receiver.

The receiver splits the received RF power between a coherent-detection
(CD) chain and an envelope-detection (ED) chain.  With splitting ratio
``rho``, unit-variance circularly symmetric Gaussian input ``x`` and
channel magnitude ``|h|``, the two baseband outputs are::

    y1 = sqrt(rho) * (sqrt(P) * |h| * x + w) + z        (complex, CD)
    y2 = sqrt(1 - rho) * |sqrt(P) * |h| * x + w| + n    (real, ED)

where ``w`` is the antenna noise (complex), ``z`` the CD conversion
noise (complex) and ``n`` the ED rectifier noise (real).  A complex
Gaussian of variance ``v`` has independent real/imaginary parts of
variance ``v/2`` each.

Any channel phase is removed up front by :func:`normalize_channel`: the
CD output is rotated by a fixed known angle and the ED output depends
only on the envelope, so mutual information is unchanged.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

import numpy as np

__all__ = [
    "NoiseProfile",
    "ChannelParams",
    "SplittingRatio",
    "SampleBatch",
    "normalize_channel",
    "sample_symbol",
    "sample_batch",
    "rng_for",
]


def rng_for(seed: int, *path: int) -> np.random.Generator:
    """Counter-based generator for a (seed, path...) address.

    Streams for distinct paths are statistically independent and do not
    depend on how many other streams exist, so batches may be generated
    in any order or in parallel with identical results.
    """
    ss = np.random.SeedSequence(entropy=(int(seed), *[int(p) for p in path]))
    return np.random.Generator(np.random.Philox(ss))


@dataclass(frozen=True)
class NoiseProfile:
    """The three noise variances of a receiver scenario (linear units).

    sigma_a2  -- variance of the antenna noise entering before the split
    sigma_cov2 -- variance of the CD conversion noise
    sigma_rec2 -- variance of the ED rectifier noise
    """

    sigma_a2: float
    sigma_cov2: float
    sigma_rec2: float

    def __post_init__(self):
        for name in ("sigma_a2", "sigma_cov2", "sigma_rec2"):
            v = getattr(self, name)
            if not (v > 0.0 and np.isfinite(v)):
                raise ValueError(f"{name} must be strictly positive and finite, got {v}")


@dataclass(frozen=True)
class ChannelParams:
    """Deterministic context of a scenario: transmit power, channel gain, noise."""

    power: float
    h_mag: float
    noise: NoiseProfile

    def __post_init__(self):
        if not (self.power > 0.0 and np.isfinite(self.power)):
            raise ValueError(f"power must be strictly positive, got {self.power}")
        if not (self.h_mag > 0.0 and np.isfinite(self.h_mag)):
            raise ValueError(f"h_mag must be strictly positive, got {self.h_mag}")

    @property
    def signal_power(self) -> float:
        """Received signal power P*|h|^2."""
        return self.power * self.h_mag**2


@dataclass(frozen=True)
class SplittingRatio:
    """Fraction of received power routed to the CD chain, in [0, 1]."""

    rho: float

    def __post_init__(self):
        if not (0.0 <= self.rho <= 1.0):
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")

    def __float__(self) -> float:
        return float(self.rho)


def as_rho(rho) -> float:
    """Coerce a SplittingRatio or bare float to a validated float."""
    return SplittingRatio(float(rho)).rho


@dataclass(frozen=True)
class SampleBatch:
    """Paired i.i.d. draws of (x, y1, y2); bit-reproducible from the seed."""

    x: np.ndarray
    y1: np.ndarray
    y2: np.ndarray
    seed: int
    n: int

    def __post_init__(self):
        if not (len(self.x) == len(self.y1) == len(self.y2) == self.n):
            raise ValueError("x, y1, y2 must all have length n")


def normalize_channel(h_complex: complex) -> tuple[float, float]:
    """Split a complex channel coefficient into (magnitude, phase).

    Downstream computation uses only the magnitude; the phase is
    reported for reference.  Rotating the CD stream by the known phase
    and the circular symmetry of the noise make mutual information
    independent of it.

    Raises
    ------
    ValueError
        If ``h_complex`` is zero (degenerate scenario).
    """
    h = complex(h_complex)
    if h == 0:
        raise ValueError("zero channel coefficient is degenerate")
    return abs(h), cmath.phase(h)


def _raw_draws(params: ChannelParams, n: int, rng: np.random.Generator):
    """Draw (x, w, z, n) for ``n`` symbols in one fixed-order pass."""
    g = rng.standard_normal((n, 7))
    noise = params.noise
    x = (g[:, 0] + 1j * g[:, 1]) * np.sqrt(0.5)
    w = (g[:, 2] + 1j * g[:, 3]) * np.sqrt(noise.sigma_a2 * 0.5)
    z = (g[:, 4] + 1j * g[:, 5]) * np.sqrt(noise.sigma_cov2 * 0.5)
    nn = g[:, 6] * np.sqrt(noise.sigma_rec2)
    return x, w, z, nn


def _combine(params: ChannelParams, rho: float, x, w, z, nn):
    s = np.sqrt(params.power) * params.h_mag * x + w
    y1 = np.sqrt(rho) * s + z
    y2 = np.sqrt(1.0 - rho) * np.abs(s) + nn
    return y1, y2


def sample_symbol(params: ChannelParams, rho, rng: np.random.Generator):
    """Draw one (x, y1, y2) triple from the receiver model."""
    r = as_rho(rho)
    x, w, z, nn = _raw_draws(params, 1, rng)
    y1, y2 = _combine(params, r, x, w, z, nn)
    return complex(x[0]), complex(y1[0]), float(y2[0])


def sample_batch(params: ChannelParams, rho, n: int, seed: int) -> SampleBatch:
    """Draw ``n`` i.i.d. (x, y1, y2) triples, deterministic in ``seed``."""
    if n < 1:
        raise ValueError(f"batch size must be >= 1, got {n}")
    r = as_rho(rho)
    x, w, z, nn = _raw_draws(params, n, rng_for(seed))
    y1, y2 = _combine(params, r, x, w, z, nn)
    return SampleBatch(x=x, y1=y1, y2=y2, seed=int(seed), n=int(n))


def sample_reference_mixture(params: ChannelParams, size: int, rng: np.random.Generator):
    """Draw (x_j, w_j) reference pairs from the input and antenna-noise priors.

    Used by the marginal-density estimators; independent of any
    evaluation point by construction.
    """
    if size < 1:
        raise ValueError(f"mixture size must be >= 1, got {size}")
    g = rng.standard_normal((size, 4))
    x = (g[:, 0] + 1j * g[:, 1]) * np.sqrt(0.5)
    w = (g[:, 2] + 1j * g[:, 3]) * np.sqrt(params.noise.sigma_a2 * 0.5)
    return x, w
