"""Spatially averaged downlink coverage probability.

The coverage probability at SINR threshold T is the expectation, over the
serving-channel gain h0 g0 and the contact distance R0, of the
conditional interference CDF:

    p_c = E_{h0 g0}[ integral_r F_I(P0 h0 g0 / (T r^alpha) - W | r)
                     f_R0(r) dr ],   f_R0(r) = 2 lambda pi r exp(-lambda pi r^2).

The radial integral is computed after the substitution s = lambda pi r^2,
which turns the contact density into exactly the Gauss-Laguerre weight
and removes the BS intensity from the quadrature conditioning.  The
serving-gain expectation uses the fading model's quadrature nodes.  For
whole curves, the interference CDF per radial node is evaluated through
one Chebyshev interpolant shared by every (gain node, threshold) pair.
"""
from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .fading import FadingModel
from .interference import (
    InterferenceContext,
    NetworkConfig,
    get_kernel,
    interference_cdf,
)
from .numerics import DEFAULT_SETTINGS, NonConvergenceError, QuadratureSettings, gauss_laguerre

__all__ = [
    "ChannelSpec",
    "CcdfCurve",
    "contact_distance_pdf",
    "link_success",
    "coverage_probability",
    "coverage_curve",
    "coverage_vs_reuse",
    "DEFAULT_GAIN_NODES",
    "DEFAULT_RADIAL_NODES",
]

logger = logging.getLogger(__name__)

DEFAULT_GAIN_NODES = 64
DEFAULT_RADIAL_NODES = 48

# direct CDF evaluation is cheaper than an interpolant below this many
# distinct arguments per radial node
_INTERP_MIN_QUERIES = 24
_MONOTONE_SLACK = 1e-4


@dataclass(frozen=True)
class ChannelSpec:
    """Fading models for the serving link and for the interferers."""

    serving: FadingModel
    interferers: FadingModel

    def label(self) -> str:
        return f"S:{self.serving.label()}/I:{self.interferers.label()}"


@dataclass(frozen=True)
class CcdfCurve:
    """Sampled SINR CCDF, i.e. coverage probability over a threshold grid."""

    thresholds: tuple
    probabilities: tuple
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        t = np.asarray(self.thresholds, dtype=float)
        p = np.asarray(self.probabilities, dtype=float)
        if t.shape != p.shape or t.ndim != 1 or t.size == 0:
            raise ValueError("thresholds and probabilities must be equal-length 1-D")
        if np.any(np.diff(t) <= 0):
            raise ValueError("thresholds must be strictly increasing")
        if np.any(p < -_MONOTONE_SLACK) or np.any(p > 1.0 + _MONOTONE_SLACK):
            raise ValueError("probabilities must lie in [0, 1]")
        if np.any(np.diff(p) > _MONOTONE_SLACK):
            raise ValueError("coverage must be non-increasing in the threshold")

    @property
    def thresholds_db(self) -> np.ndarray:
        return 10.0 * np.log10(np.asarray(self.thresholds))

    def as_arrays(self):
        return (
            np.asarray(self.thresholds, dtype=float),
            np.asarray(self.probabilities, dtype=float),
        )


def contact_distance_pdf(density: float, r) -> np.ndarray:
    """Density 2 lambda pi r exp(-lambda pi r^2) of the nearest-BS distance."""
    r = np.asarray(r, dtype=float)
    return 2.0 * density * np.pi * r * np.exp(-density * np.pi * r**2)


def link_success(
    cfg: NetworkConfig,
    spec: ChannelSpec,
    threshold: float,
    h0g0: float,
    r0: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """P[SINR >= T | h0 g0, R0 = r0] = F_I(P0 h0g0 / (T r0^alpha) - W | r0)."""
    if threshold <= 0:
        raise ValueError("threshold must be > 0")
    if h0g0 < 0:
        raise ValueError("serving gain must be >= 0")
    if r0 <= 0:
        raise ValueError("contact distance must be > 0")
    x = cfg.p0 * h0g0 / (threshold * r0**cfg.alpha)
    if not cfg.interference_limited:
        x -= cfg.noise_w
    if x <= 0:
        return 0.0
    return interference_cdf(InterferenceContext(cfg, spec.interferers, r0), x, settings)


def _radial_nodes(cfg: NetworkConfig, n: int):
    """Contact-distance quadrature: s = lambda pi r^2 maps f_R0 dr to e^-s ds."""
    s, w = gauss_laguerre(n)
    r = np.sqrt(s / (cfg.density * np.pi))
    return r, w


def _curve_radial_term(
    cfg: NetworkConfig,
    spec: ChannelSpec,
    kernel,
    r: float,
    gains: np.ndarray,
    gain_w: np.ndarray,
    thresholds: np.ndarray,
    interp_tol: float,
    settings: QuadratureSettings,
):
    """sum_g w_g F_I(x(g, T) | r) for every threshold; returns (vector, failures)."""
    dens = cfg.effective_density
    x = cfg.p0 * np.outer(gains, 1.0 / thresholds) / r**cfg.alpha
    if not cfg.interference_limited:
        x = x - cfg.noise_w
    pos = x > 0
    out = np.zeros(len(thresholds))
    failures = 0
    if not np.any(pos):
        return out, failures
    xp = x[pos]
    fvals = np.zeros_like(x)
    try:
        if xp.size < _INTERP_MIN_QUERIES or xp.max() / xp.min() < 1.0 + 1e-9:
            fvals[pos] = kernel.cdf_batch(xp, r, dens, cfg.p0, settings)
        else:
            mean_i = (
                2.0 * np.pi * dens * cfg.p0 * spec.interferers.mean()
                * r ** (2.0 - cfg.alpha) / (cfg.alpha - 2.0)
            )
            # Markov: 1 - F(x) <= E[I]/x, so the CDF is within 1e-7 of 1
            # beyond 1e7 E[I]; below 1e-4 E[I] the left tail is far under
            # any tolerance used here
            lo = max(xp.min(), mean_i * 1e-4)
            hi = min(xp.max(), mean_i * 1e7)
            if lo >= hi:
                fvals[pos] = kernel.cdf_batch(xp, r, dens, cfg.p0, settings)
            else:
                interp = kernel.cdf_interpolant(
                    r, dens, cfg.p0, lo, hi, interp_tol, settings
                )
                v = interp(xp)
                v = np.where(xp > hi, 1.0, v)
                fvals[pos] = np.clip(v, 0.0, 1.0)
    except NonConvergenceError as exc:
        logger.warning("radial node r=%g failed: %s", r, exc)
        return out, 1
    out = gain_w @ fvals
    return out, failures


def coverage_curve(
    cfg: NetworkConfig,
    spec: ChannelSpec,
    thresholds,
    gain_nodes: int = DEFAULT_GAIN_NODES,
    radial_nodes: int = DEFAULT_RADIAL_NODES,
    interp_tol: float = 1e-6,
    threads: int | None = None,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> CcdfCurve:
    """Coverage probability over a strictly increasing threshold grid."""
    thresholds = np.asarray(thresholds, dtype=float)
    if thresholds.ndim != 1 or thresholds.size == 0:
        raise ValueError("thresholds must be a non-empty 1-D sequence")
    if np.any(thresholds <= 0):
        raise ValueError("thresholds must be positive (linear SINR)")
    if np.any(np.diff(thresholds) <= 0):
        raise ValueError("thresholds must be strictly increasing")

    gains, gain_w = spec.serving.expectation_nodes(gain_nodes)
    radii, rad_w = _radial_nodes(cfg, radial_nodes)
    kernel = get_kernel(spec.interferers, cfg.alpha)

    def one(i: int):
        return _curve_radial_term(
            cfg, spec, kernel, radii[i], gains, gain_w, thresholds,
            interp_tol, settings,
        )

    n_threads = threads if threads is not None else _default_threads()
    if n_threads > 1 and len(radii) > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            results = list(pool.map(one, range(len(radii))))
    else:
        results = [one(i) for i in range(len(radii))]

    probs = np.zeros(len(thresholds))
    failures = 0
    for w, (term, fails) in zip(rad_w, results):
        probs += w * term
        failures += fails
    probs = np.clip(probs, 0.0, 1.0)
    if failures:
        logger.warning("coverage curve: %d radial-node failures", failures)

    meta = {
        "config": {
            "density": cfg.density, "p0": cfg.p0, "alpha": cfg.alpha,
            "noise_w": cfg.noise_w, "delta": cfg.delta,
        },
        "channel": spec.label(),
        "gain_nodes": int(gain_nodes),
        "radial_nodes": int(radial_nodes),
        "node_failures": int(failures),
    }
    return CcdfCurve(tuple(thresholds), tuple(probs), meta)


def coverage_probability(
    cfg: NetworkConfig,
    spec: ChannelSpec,
    threshold: float,
    gain_nodes: int = DEFAULT_GAIN_NODES,
    radial_nodes: int = DEFAULT_RADIAL_NODES,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Coverage probability at a single SINR threshold."""
    curve = coverage_curve(
        cfg, spec, np.array([float(threshold)]),
        gain_nodes=gain_nodes, radial_nodes=radial_nodes, settings=settings,
    )
    return curve.probabilities[0]


def coverage_vs_reuse(
    cfg: NetworkConfig,
    spec: ChannelSpec,
    threshold: float,
    deltas,
    gain_nodes: int = DEFAULT_GAIN_NODES,
    radial_nodes: int = DEFAULT_RADIAL_NODES,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> list:
    """Coverage at one threshold across reuse factors (thinned interferers)."""
    out = []
    for d in deltas:
        if int(d) != d or d < 1:
            raise ValueError(f"reuse factors must be integers >= 1, got {d}")
        out.append(
            coverage_probability(
                replace(cfg, delta=int(d)), spec, threshold,
                gain_nodes=gain_nodes, radial_nodes=radial_nodes, settings=settings,
            )
        )
    return out


def _default_threads() -> int:
    env = os.environ.get("CELLCOV_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            logger.warning("ignoring invalid CELLCOV_THREADS=%r", env)
    return 1
