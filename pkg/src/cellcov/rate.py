"""Expected network data rate per Hz under the SINR-gap model.

The per-user rate is rho = ln(1 + SINR/gamma_o) nats/s/Hz, zero below the
minimum usable SINR gamma_min.  Two routes compute its network average:

* :func:`rate_from_ccdf` integrates a sampled coverage curve
  (trapezoidal, the CCDF is the coverage probability);
* :func:`rate_direct` evaluates the double integral over the rate
  variable and the contact distance without sampling a curve first.

The two must agree; their mutual consistency is part of the test suite.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .coverage import (
    DEFAULT_GAIN_NODES,
    DEFAULT_RADIAL_NODES,
    CcdfCurve,
    ChannelSpec,
    _radial_nodes,
)
from .interference import NetworkConfig, get_kernel
from .numerics import DEFAULT_SETTINGS, QuadratureSettings, integrate_finite

__all__ = ["RateParams", "rate_from_ccdf", "rate_direct", "rate_vs_gamma_min"]

logger = logging.getLogger(__name__)

NATS_TO_BITS = 1.0 / np.log(2.0)

# truncation targets for the direct route
_CDF_FLOOR = 1e-4
_CCDF_COVERAGE_LIMIT = 0.01
_CONSISTENCY_TOL = 0.02


@dataclass(frozen=True)
class RateParams:
    """SINR-gap rate model parameters (linear scale).

    gamma_o    gap between Shannon capacity and the achievable rate
    gamma_min  SINR below which no useful communication takes place
    """

    gamma_o: float = 1.0
    gamma_min: float = 0.0

    def __post_init__(self):
        if self.gamma_o <= 0:
            raise ValueError("gamma_o must be > 0")
        if self.gamma_min < 0:
            raise ValueError("gamma_min must be >= 0")

    @property
    def rho_min(self) -> float:
        """Minimum achievable rate ln(1 + gamma_min/gamma_o)."""
        return float(np.log1p(self.gamma_min / self.gamma_o))


def rate_from_ccdf(curve: CcdfCurve, params: RateParams) -> float:
    """Expected rate from a sampled coverage curve (nats/s/Hz).

    The literal route differentiates the CCDF numerically and integrates
    ln(1 + v/gamma_o) against the density; the returned value comes from
    the integration-by-parts form

        rate = ln(1 + gamma_min/gamma_o) Fc(gamma_min)
               + integral Fc(v) / (gamma_o + v) dv
               - ln(1 + gamma_max/gamma_o) Fc(gamma_max),

    which avoids amplifying sampling noise.  The two must agree within
    2 percent; a larger gap means the curve is too coarse.
    """
    v, fc = curve.as_arrays()
    g0 = params.gamma_o
    gmin = params.gamma_min
    if gmin < v[0] - 1e-12 and gmin > 0:
        raise ValueError(
            f"curve starts at {v[0]:.4g}, above gamma_min={gmin:.4g}; extend the grid down"
        )
    if fc[-1] >= _CCDF_COVERAGE_LIMIT:
        raise ValueError(
            f"curve ends with coverage {fc[-1]:.3g} >= {_CCDF_COVERAGE_LIMIT}; "
            f"extend the threshold grid upward"
        )
    if np.all(fc == 0.0):
        return 0.0

    keep = v >= gmin if gmin > 0 else np.ones_like(v, dtype=bool)
    if gmin > 0 and gmin > v[0]:
        fc_min = float(np.interp(gmin, v, fc))
        vv = np.concatenate([[gmin], v[keep]])
        ff = np.concatenate([[fc_min], fc[keep]])
    else:
        vv, ff = v[keep], fc[keep]
        fc_min = ff[0]

    # literal route: density from central differences, then trapezoid
    dens = -np.gradient(ff, vv)
    literal = float(np.trapezoid(np.log1p(vv / g0) * dens, vv))

    by_parts = (
        float(np.log1p(vv[0] / g0)) * fc_min
        + float(np.trapezoid(ff / (g0 + vv), vv))
        - float(np.log1p(vv[-1] / g0)) * ff[-1]
    )

    scale = max(abs(by_parts), abs(literal), 1e-12)
    if abs(by_parts - literal) > _CONSISTENCY_TOL * scale:
        raise ValueError(
            f"differentiated ({literal:.5g}) and by-parts ({by_parts:.5g}) rate "
            f"integrals disagree by more than {_CONSISTENCY_TOL:.0%}; the curve "
            f"grid is too coarse"
        )
    return by_parts


def rate_direct(
    cfg: NetworkConfig,
    spec: ChannelSpec,
    params: RateParams,
    gain_nodes: int = DEFAULT_GAIN_NODES,
    radial_nodes: int = DEFAULT_RADIAL_NODES,
    interp_tol: float = 1e-6,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Expected rate by direct integration (nats/s/Hz).

    rate = E_{h0 g0}[ int_r int_{rho_min}^inf
           F_I(P0 h0 g0 / (gamma_o (e^v - 1) r^alpha) - W | r)
           f_R0(r) dv dr ]

    The v integral is truncated where the interference CDF falls below
    1e-4 at the largest serving-gain node (Markov bound on the argument).
    """
    gains, gain_w = spec.serving.expectation_nodes(gain_nodes)
    radii, rad_w = _radial_nodes(cfg, radial_nodes)
    kernel = get_kernel(spec.interferers, cfg.alpha)
    dens = cfg.effective_density
    rho_min = params.rho_min
    g0 = params.gamma_o
    failures = 0

    total = 0.0
    for r, w_r in zip(radii, rad_w):
        mean_i = (
            2.0 * np.pi * dens * cfg.p0 * spec.interferers.mean()
            * r ** (2.0 - cfg.alpha) / (cfg.alpha - 2.0)
        )
        # CDF argument below x_lo implies F_I < _CDF_FLOOR for every gain
        # node; beyond x_hi the CDF is within 1e-7 of 1 (Markov)
        x_lo = mean_i * _CDF_FLOOR * 0.3
        x_hi = mean_i * 1e7
        g_max = float(np.max(gains))
        # v where even the largest gain node's argument drops to x_lo
        arg = cfg.p0 * g_max / (g0 * x_lo * r**cfg.alpha)
        if not cfg.interference_limited:
            if cfg.p0 * g_max / (g0 * (x_lo + cfg.noise_w) * r**cfg.alpha) <= 0:
                continue
            arg = cfg.p0 * g_max / (g0 * (x_lo + cfg.noise_w) * r**cfg.alpha)
        v_max = float(np.log1p(arg))
        if v_max <= rho_min:
            continue
        interp = kernel.cdf_interpolant(
            r, dens, cfg.p0, x_lo, x_hi, interp_tol, settings
        )

        def integrand(v):
            v = np.atleast_1d(np.asarray(v, dtype=float))
            x = cfg.p0 * np.outer(gains, 1.0 / (g0 * np.expm1(v))) / r**cfg.alpha
            if not cfg.interference_limited:
                x = x - cfg.noise_w
            vals = np.where(
                x <= 0, 0.0,
                np.where(x > x_hi, 1.0, np.clip(interp(np.maximum(x, x_lo)), 0.0, 1.0)),
            )
            return gain_w @ vals

        res = integrate_finite(integrand, rho_min, v_max, settings)
        if not res.converged:
            failures += 1
            logger.warning("rate radial node r=%g did not converge", r)
        total += w_r * res.real
    if failures:
        logger.warning("rate_direct: %d radial-node failures", failures)
    return float(total)


def rate_vs_gamma_min(
    cfg: NetworkConfig,
    spec: ChannelSpec,
    gamma_o: float,
    gamma_min_grid,
    gain_nodes: int = DEFAULT_GAIN_NODES,
    radial_nodes: int = DEFAULT_RADIAL_NODES,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
):
    """Expected rate across a grid of minimum-SINR cutoffs."""
    grid = np.asarray(gamma_min_grid, dtype=float)
    if np.any(np.diff(grid) <= 0):
        raise ValueError("gamma_min grid must be strictly increasing")
    return [
        rate_direct(
            cfg, spec, RateParams(gamma_o=gamma_o, gamma_min=float(g)),
            gain_nodes=gain_nodes, radial_nodes=radial_nodes, settings=settings,
        )
        for g in grid
    ]
