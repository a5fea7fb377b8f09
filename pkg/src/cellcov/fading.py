"""Channel power-gain models: density, characteristic function, sampling.

Every model describes the distribution of a non-negative power gain.
Fast-fading models (Rayleigh, Rician, the deterministic gain 1) are
normalized to unit mean; lognormal shadowing exp(sigma N) keeps its
natural mean exp(sigma^2 / 2).  ``Product`` composes an independent pair,
e.g. fast fading times shadowing.

A transmit power P0 combines with a gain model in :class:`PowerVariable`,
whose characteristic function is the building block of the interference
analysis.

Models are frozen (hashable, safe to share across threads); all
randomness flows through an explicitly passed numpy Generator.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import i0e, roots_hermite, roots_laguerre

__all__ = [
    "FadingModel",
    "Deterministic",
    "Rayleigh",
    "Rician",
    "LognormalShadow",
    "Product",
    "PowerVariable",
    "PointMassError",
]

_LN10_OVER_10 = np.log(10.0) / 10.0


class PointMassError(ValueError):
    """A density was requested for a distribution that has none."""


@dataclass(frozen=True)
class FadingModel:
    """Base interface; concrete models override everything below."""

    def pdf(self, x):
        raise NotImplementedError

    def cf(self, t):
        """E[exp(j t h)] for real t (scalar or ndarray)."""
        raise NotImplementedError

    def sample(self, rng: np.random.Generator, size=None):
        raise NotImplementedError

    def expectation_nodes(self, n: int):
        """(gains, weights) with sum_i w_i f(g_i) ~ E[f(h)] for smooth f."""
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    @property
    def is_point_mass(self) -> bool:
        return False

    @property
    def atom_gain(self) -> float:
        """Location of the point mass; only meaningful if is_point_mass."""
        raise PointMassError(f"{self} is not a point mass")

    def label(self) -> str:
        return type(self).__name__.lower()


def _check_nonnegative(x):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("gain argument must be >= 0")
    return x


def _check_node_count(n: int):
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError(f"node count must be a positive integer, got {n}")


@dataclass(frozen=True)
class Deterministic(FadingModel):
    """Gain identically 1 (no fading)."""

    def pdf(self, x):
        raise PointMassError("deterministic gain is a point mass at 1, not a density")

    def cf(self, t):
        return np.exp(1j * np.asarray(t, dtype=float))

    def sample(self, rng, size=None):
        return 1.0 if size is None else np.ones(size)

    def expectation_nodes(self, n):
        _check_node_count(n)
        return np.array([1.0]), np.array([1.0])

    def mean(self):
        return 1.0

    @property
    def is_point_mass(self):
        return True

    @property
    def atom_gain(self):
        return 1.0


@dataclass(frozen=True)
class Rayleigh(FadingModel):
    """Rayleigh envelope: unit-mean exponential power gain, f(x) = exp(-x)."""

    def pdf(self, x):
        return np.exp(-_check_nonnegative(x))

    def cf(self, t):
        return 1.0 / (1.0 - 1j * np.asarray(t, dtype=float))

    def sample(self, rng, size=None):
        return rng.exponential(1.0, size)

    def expectation_nodes(self, n):
        _check_node_count(n)
        if n > 256:
            raise ValueError("node count capped at 256")
        x, w = roots_laguerre(n)
        return x, w

    def mean(self):
        return 1.0


@dataclass(frozen=True)
class Rician(FadingModel):
    """Rician power gain with linear K factor, normalized to unit mean.

    f(x) = (K+1) exp(-x(K+1) - K) I0(2 sqrt(x K (K+1))); equivalently a
    noncentral chi-square with 2 degrees of freedom and noncentrality 2K,
    scaled by 1/(2(K+1)).  K = 0 reduces to Rayleigh.
    """

    k_factor: float

    def __post_init__(self):
        if self.k_factor < 0:
            raise ValueError("K factor must be >= 0")

    def pdf(self, x):
        x = _check_nonnegative(x)
        k = self.k_factor
        y = 2.0 * np.sqrt(x * k * (k + 1.0))
        # exp(-x(K+1) - K) I0(y) written overflow-free via the scaled Bessel:
        # the combined exponent is -(sqrt(x(K+1)) - sqrt(K))^2
        expo = -(np.sqrt(x * (k + 1.0)) - np.sqrt(k)) ** 2
        return (k + 1.0) * np.exp(expo) * i0e(y)

    def cf(self, t):
        # noncentral chi-square CF mapped through the unit-mean scaling
        t = np.asarray(t, dtype=float)
        k = self.k_factor
        denom = (k + 1.0) - 1j * t
        return (k + 1.0) / denom * np.exp(1j * t * k / denom)

    def sample(self, rng, size=None):
        k = self.k_factor
        sigma = np.sqrt(0.5 / (k + 1.0))
        los = np.sqrt(k / (k + 1.0))
        re = los + sigma * rng.standard_normal(size)
        im = sigma * rng.standard_normal(size)
        return re * re + im * im

    def expectation_nodes(self, n):
        _check_node_count(n)
        if n > 256:
            raise ValueError("node count capped at 256")
        k = self.k_factor
        x, w = roots_laguerre(n)
        nodes = x / (k + 1.0)
        # fold the Bessel factor of the density into the Laguerre weights;
        # log-space keeps large K x from overflowing
        y = 2.0 * np.sqrt(nodes * k * (k + 1.0))
        logw = np.log(w) + y - k + np.log(i0e(y))
        return nodes, np.exp(logw)

    def mean(self):
        return 1.0


@dataclass(frozen=True)
class LognormalShadow(FadingModel):
    """Lognormal shadowing exp(sigma N), sigma = ln(10)/10 * sigma_db."""

    sigma_db: float

    def __post_init__(self):
        if self.sigma_db <= 0:
            raise ValueError("sigma_db must be > 0")

    @property
    def sigma(self) -> float:
        return _LN10_OVER_10 * self.sigma_db

    def pdf(self, x):
        x = _check_nonnegative(x)
        out = np.zeros_like(x)
        pos = x > 0
        xp = x[pos] if x.ndim else (x if x > 0 else None)
        if x.ndim == 0:
            if x == 0:
                return 0.0
            return float(
                np.exp(-np.log(x) ** 2 / (2 * self.sigma**2))
                / (x * self.sigma * np.sqrt(2 * np.pi))
            )
        out[pos] = np.exp(-np.log(xp) ** 2 / (2 * self.sigma**2)) / (
            xp * self.sigma * np.sqrt(2 * np.pi)
        )
        return out

    def cf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        g, w = self.expectation_nodes(96)
        out = np.sum(w[None, :] * np.exp(1j * t[:, None] * g[None, :]), axis=1)
        return out if out.size > 1 else complex(out[0])

    def sample(self, rng, size=None):
        return np.exp(self.sigma * rng.standard_normal(size))

    def expectation_nodes(self, n):
        _check_node_count(n)
        if n > 256:
            raise ValueError("node count capped at 256")
        z, w = roots_hermite(n)
        return np.exp(self.sigma * np.sqrt(2.0) * z), w / np.sqrt(np.pi)

    def mean(self):
        return float(np.exp(0.5 * self.sigma**2))


@dataclass(frozen=True)
class Product(FadingModel):
    """Independent product of two gains, e.g. fast fading times shadowing."""

    first: FadingModel
    second: FadingModel

    def pdf(self, x):
        x = _check_nonnegative(x)
        if self.is_point_mass:
            raise PointMassError("product of point masses has no density")
        # condition on the factor with the fewer special cases
        if self.first.is_point_mass:
            a = self.first.atom_gain
            return self.second.pdf(x / a) / a
        if self.second.is_point_mass:
            a = self.second.atom_gain
            return self.first.pdf(x / a) / a
        g, w = self.first.expectation_nodes(96)
        xs = np.atleast_1d(x)
        vals = np.sum(
            w[None, :] * self.second.pdf(xs[:, None] / g[None, :]) / g[None, :],
            axis=1,
        )
        return vals if np.ndim(x) else float(vals[0])

    def cf(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if self.first.is_point_mass:
            out = self.second.cf(t * self.first.atom_gain)
        elif self.second.is_point_mass:
            out = self.first.cf(t * self.second.atom_gain)
        else:
            g, w = self.first.expectation_nodes(96)
            out = np.sum(
                w[None, :] * np.asarray(self.second.cf(np.outer(t, g))), axis=1
            )
        out = np.atleast_1d(out)
        return out if out.size > 1 else complex(out[0])

    def sample(self, rng, size=None):
        return self.first.sample(rng, size) * self.second.sample(rng, size)

    def expectation_nodes(self, n):
        _check_node_count(n)
        g1, w1 = self.first.expectation_nodes(n)
        g2, w2 = self.second.expectation_nodes(n)
        return np.outer(g1, g2).ravel(), np.outer(w1, w2).ravel()

    def mean(self):
        return self.first.mean() * self.second.mean()

    @property
    def is_point_mass(self):
        return self.first.is_point_mass and self.second.is_point_mass

    @property
    def atom_gain(self):
        if not self.is_point_mass:
            raise PointMassError(f"{self} is not a point mass")
        return self.first.atom_gain * self.second.atom_gain

    def label(self):
        return f"product({self.first.label()},{self.second.label()})"


@dataclass(frozen=True)
class PowerVariable:
    """P = P0 * h: common transmit power scaled by a fading gain."""

    base_power: float
    fading: FadingModel

    def __post_init__(self):
        if self.base_power <= 0:
            raise ValueError("base power must be > 0")

    def cf(self, t):
        """Characteristic function E[exp(j t P0 h)]."""
        return self.fading.cf(np.asarray(t, dtype=float) * self.base_power)

    def mean(self) -> float:
        return self.base_power * self.fading.mean()
