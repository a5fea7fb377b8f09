"""Aggregate-interference characteristic function and its inversion.

For a PPP of co-channel base stations outside the contact distance r0,
the interference CF is exp(-2 pi (lambda/delta) beta(omega)) with

    beta(omega) = integral_{r0}^inf [1 - phi_P(omega r^-alpha)] r dr.

Substituting u = r^-alpha turns beta into a finite-domain integral

    beta(omega) = (1/alpha) integral_0^{r0^-alpha} [1 - phi_P(omega u)]
                  u^(-1 - 2/alpha) du,

and pulling omega out shows that everything reduces to one master
function of a single variable,

    G(y) = integral_0^y [1 - phi_P(v)] v^(-1 - 2/alpha) dv,
    beta(omega | r0) = (p0 omega)^(2/alpha) G(p0 omega r0^-alpha) / alpha,

with the fading CF evaluated at unit transmit power.  G depends only on
the interferer fading model and alpha, so one tabulation serves every
(omega, r0, lambda, delta, p0) combination.  :class:`InterferenceKernel`
builds G once on a log grid and serves interference CDF queries through
Gil-Pelaez inversion; :func:`beta` keeps the direct per-call adaptive
quadrature as an independently testable route, and the two closed forms
(path-loss-only incomplete-gamma form, Rayleigh csc/2F1 form) provide
third-party oracles for both.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import gamma as _gamma_real

from .fading import FadingModel, Rayleigh
from .numerics import (
    DEFAULT_SETTINGS,
    NonConvergenceError,
    QuadratureSettings,
    _GK_KRONROD_W,
    _GK_NODES,
    integrate_finite,
    integrate_semi_infinite_oscillatory,
)
from .special import hyp2f1, upper_incomplete_gamma

__all__ = [
    "NetworkConfig",
    "InterferenceContext",
    "beta",
    "beta_closed_pathloss",
    "beta_closed_rayleigh",
    "interference_cf",
    "interference_cdf",
    "InterferenceKernel",
    "get_kernel",
]

logger = logging.getLogger(__name__)

# CDF values may stray this far outside [0, 1] before we call it an error
CDF_CLAMP_TOL = 1e-4

# |phi_I| below exp(-_EXPONENT_CUTOFF) is treated as zero when truncating
# the inversion integral
_EXPONENT_CUTOFF = 30.0


@dataclass(frozen=True)
class NetworkConfig:
    """Scalar network parameters.

    density    base-station intensity lambda (BS per unit area)
    p0         common transmit power, watts (linear)
    alpha      path-loss exponent; must exceed 2 or the interference
               integral diverges
    noise_w    AWGN power W in watts; exactly 0.0 means the
               interference-limited regime (noise terms are skipped
               entirely, keeping scale-free invariants exact)
    delta      random frequency reuse factor; co-channel interferers are
               the independently thinned PPP of intensity density/delta
    """

    density: float
    p0: float
    alpha: float
    noise_w: float = 0.0
    delta: int = 1

    def __post_init__(self):
        if self.density <= 0:
            raise ValueError("density must be > 0")
        if self.p0 <= 0:
            raise ValueError("p0 must be > 0")
        if self.alpha <= 2:
            raise ValueError(
                f"alpha must be > 2 (interference diverges otherwise), got {self.alpha}"
            )
        if self.noise_w < 0:
            raise ValueError("noise_w must be >= 0")
        if int(self.delta) != self.delta or self.delta < 1:
            raise ValueError(f"delta must be an integer >= 1, got {self.delta}")

    @property
    def effective_density(self) -> float:
        return self.density / self.delta

    @property
    def interference_limited(self) -> bool:
        return self.noise_w == 0.0


@dataclass(frozen=True)
class InterferenceContext:
    """Everything the interference distribution depends on."""

    config: NetworkConfig
    interferer_fading: FadingModel
    r0: float

    def __post_init__(self):
        if self.r0 < 0:
            raise ValueError("contact distance r0 must be >= 0")

    def mean_interference(self) -> float:
        """E[I | r0], finite for alpha > 2 and r0 > 0."""
        cfg = self.config
        if self.r0 == 0:
            return np.inf
        return (
            2.0 * np.pi * cfg.effective_density * cfg.p0
            * self.interferer_fading.mean()
            * self.r0 ** (2.0 - cfg.alpha) / (cfg.alpha - 2.0)
        )


# ---------------------------------------------------------------------------
# direct quadrature route for beta
# ---------------------------------------------------------------------------


def beta(
    ctx: InterferenceContext,
    omega: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> complex:
    """beta(omega | r0) by direct adaptive quadrature of the defining integral.

    This is the reference route; bulk evaluation goes through
    :class:`InterferenceKernel`, which must agree with it (tested).
    Negative omega is served by conjugate symmetry.
    """
    if omega == 0.0:
        return 0.0 + 0.0j
    if omega < 0.0:
        return np.conj(beta(ctx, -omega, settings))
    cfg = ctx.config
    alpha = cfg.alpha
    s = 2.0 / alpha
    p = alpha / (alpha - 2.0)
    scale = omega * cfg.p0
    fading = ctx.interferer_fading

    def f(z):
        z = np.asarray(z, dtype=float)
        u = z**p
        # d(beta)/dz = [1 - cf(scale * u)] u^(-1-s) p z^(p-1) / alpha
        return (
            (1.0 - np.asarray(fading.cf(scale * u)))
            * np.power(z, p * (1.0 - s) - 1.0)
            * (p / alpha)
        )

    if ctx.r0 > 0:
        z_hi = ctx.r0 ** (-alpha / p)
        seeds = np.geomspace(z_hi * 1e-9, z_hi, 28)[:-1]
        res = integrate_finite(f, 0.0, z_hi, settings, seed_points=seeds)
        if not res.converged:
            raise NonConvergenceError(
                f"beta quadrature did not converge at omega={omega}",
                partial=res.value,
            )
        return complex(res.value)

    # r0 = 0: conditioning vanishes and beta becomes the full stable-law
    # constant (p0 omega)^s G(inf) / alpha; split off the analytic part of
    # the tail and integrate the CF part with the oscillatory machinery.
    v0 = 16.0
    z0 = v0 ** (1.0 / p)

    def f_unit(z):
        z = np.asarray(z, dtype=float)
        u = z**p
        return (
            (1.0 - np.asarray(fading.cf(u)))
            * np.power(z, p * (1.0 - s) - 1.0)
            * p
        )

    head = integrate_finite(
        f_unit, 0.0, z0, settings, seed_points=np.geomspace(z0 * 1e-9, z0, 28)[:-1]
    ).require()
    period = np.pi / (fading.atom_gain if fading.is_point_mass else fading.mean())

    def tail_re(v):
        v = np.asarray(v, dtype=float)
        return np.real(np.asarray(fading.cf(v))) * v ** (-1.0 - s)

    def tail_im(v):
        v = np.asarray(v, dtype=float)
        return np.imag(np.asarray(fading.cf(v))) * v ** (-1.0 - s)

    def shifted(g):
        return lambda v: g(np.asarray(v, dtype=float) + v0)

    tr = integrate_semi_infinite_oscillatory(
        shifted(tail_re), v0, settings, half_period=period
    ).value
    ti = integrate_semi_infinite_oscillatory(
        shifted(tail_im), v0, settings, half_period=period
    ).value
    g_inf = head + v0 ** (-s) / s - (tr + 1j * ti)
    return complex(scale**s * g_inf / alpha)


def beta_closed_pathloss(ctx: InterferenceContext, omega: float) -> complex:
    """Path-loss-only closed form via the complex upper incomplete gamma.

    Valid when the interferer gain is a point mass (no fading); the atom
    scales the transmit power.
    """
    if not ctx.interferer_fading.is_point_mass:
        raise ValueError("closed path-loss form requires deterministic interferers")
    if omega == 0.0:
        return 0.0 + 0.0j
    if omega < 0.0:
        return np.conj(beta_closed_pathloss(ctx, -omega))
    cfg = ctx.config
    alpha = cfg.alpha
    s = 2.0 / alpha
    power = cfg.p0 * ctx.interferer_fading.atom_gain
    gamma_s = complex(_gamma_real(-s))
    pref = np.power(-1j * power * omega, s) / alpha
    if ctx.r0 == 0.0:
        return complex(-pref * gamma_s)
    z = -1j * power * ctx.r0 ** (-alpha) * omega
    return complex(
        -ctx.r0**2 / 2.0 + pref * (upper_incomplete_gamma(-s, z) - gamma_s)
    )


def beta_closed_rayleigh(ctx: InterferenceContext, omega: float) -> complex:
    """Rayleigh-interferer closed form (cosecant plus hypergeometric term)."""
    if not isinstance(ctx.interferer_fading, Rayleigh):
        raise ValueError("closed Rayleigh form requires Rayleigh interferers")
    if omega == 0.0:
        return 0.0 + 0.0j
    if omega < 0.0:
        return np.conj(beta_closed_rayleigh(ctx, -omega))
    cfg = ctx.config
    alpha = cfg.alpha
    s = 2.0 / alpha
    csc_term = (
        np.pi / alpha * np.power(-1j * cfg.p0 * omega, s) / np.sin(2.0 * np.pi / alpha)
    )
    if ctx.r0 == 0.0:
        return complex(csc_term)
    z = -1j * ctx.r0**alpha / (cfg.p0 * omega)
    h = hyp2f1(1.0, (alpha + 2.0) / alpha, 2.0 / alpha + 2.0, z)
    return complex(
        -ctx.r0**2 / 2.0
        + csc_term
        + 1j * ctx.r0 ** (2.0 + alpha) / ((alpha + 2.0) * cfg.p0 * omega) * h
    )


def interference_cf(
    ctx: InterferenceContext,
    omega: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> complex:
    """phi_I(omega | r0) = exp(-2 pi (lambda / delta) beta(omega | r0))."""
    b = beta(ctx, omega, settings)
    return complex(np.exp(-2.0 * np.pi * ctx.config.effective_density * b))


# ---------------------------------------------------------------------------
# master-function kernel
# ---------------------------------------------------------------------------


class InterferenceKernel:
    """Tabulated master function G for one (interferer fading, alpha) pair.

    The table is built once at unit transmit power; every query rescales
    through beta(omega | r0) = (p0 omega)^s G(p0 omega r0^-alpha) / alpha.
    Instances are immutable after construction and safe to share across
    threads.
    """

    _Y_LO = 1e-10
    _PTS_PER_DECADE = 24
    _PANELS_PER_SEGMENT = 4
    _OSC_SPAN = 2.0e4  # tabulate atom CFs up to this many radians, then IBP
    _IBP_TERMS = 6

    def __init__(self, fading: FadingModel, alpha: float):
        if alpha <= 2:
            raise ValueError("alpha must be > 2")
        self.fading = fading
        self.alpha = float(alpha)
        self.s = 2.0 / alpha
        self._atom = fading.atom_gain if fading.is_point_mass else None
        self._build_table()

    # -- construction -------------------------------------------------

    def _cf(self, v):
        return np.asarray(self.fading.cf(v))

    def _head_value(self) -> complex:
        """integral_0^{y_lo} [1 - cf(v)] v^(-1-s) dv via u = z^p."""
        alpha, s = self.alpha, self.s
        p = alpha / (alpha - 2.0)
        z_hi = self._Y_LO ** (1.0 / p)

        def f(z):
            z = np.asarray(z, dtype=float)
            return (1.0 - self._cf(z**p)) * np.power(z, p * (1.0 - s) - 1.0) * p

        return complex(integrate_finite(f, 0.0, z_hi).require())

    def _segment_integral(self, a: float, b: float) -> complex:
        """Fixed-panel GK over [a, b]; panel count follows the oscillation."""
        n = self._PANELS_PER_SEGMENT
        if self._atom is not None:
            cycles = (b - a) * self._atom / (2.0 * np.pi)
            n = max(n, int(np.ceil(1.5 * cycles)))
        edges = np.geomspace(a, b, n + 1)
        lo = edges[:-1][:, None]
        hi = edges[1:][:, None]
        v = lo + (_GK_NODES[None, :] + 1.0) * 0.5 * (hi - lo)
        fv = (1.0 - self._cf(v)) * v ** (-1.0 - self.s)
        return complex(np.sum(fv * _GK_KRONROD_W[None, :] * 0.5 * (hi - lo)))

    def _choose_y_hi(self) -> float:
        if self._atom is not None:
            return self._OSC_SPAN / self._atom
        # extend until the dropped CF tail is negligible
        y = 1e6
        while y < 1e12:
            drop = abs(complex(self._cf(np.array([y]))[0])) * y ** (-self.s) / self.s
            if drop < 1e-12:
                return y
            y *= 100.0
        return 1e12

    def _build_table(self):
        y_hi = self._choose_y_hi()
        n_pts = int(np.ceil(np.log10(y_hi / self._Y_LO) * self._PTS_PER_DECADE)) + 1
        grid = np.geomspace(self._Y_LO, y_hi, n_pts)
        g = np.empty(n_pts, dtype=complex)
        g[0] = self._head_value()
        for i in range(n_pts - 1):
            g[i + 1] = g[i] + self._segment_integral(grid[i], grid[i + 1])
        self._grid_log = np.log(grid)
        self._spline_re = CubicSpline(self._grid_log, g.real)
        self._spline_im = CubicSpline(self._grid_log, g.imag)
        self._y_hi = y_hi
        self._g_at_hi = complex(g[-1])
        self._g_at_lo = complex(g[0])
        # far-field constant G(inf); for atom CFs the remaining oscillatory
        # tail integral has an exact asymptotic (integration by parts)
        self._g_inf = (
            self._g_at_hi + y_hi ** (-self.s) / self.s - self._cf_tail(np.array([y_hi]))[0]
        )

    def _cf_tail(self, y: np.ndarray) -> np.ndarray:
        """integral_y^inf cf(v) v^(-1-s) dv for y >= y_hi.

        For an atom CF exp(j a v) this is the integration-by-parts
        asymptotic series; the truncation error after M terms is below
        prod(s+1..s+M) (a y)^-M y^(-1-s), negligible at a y >= 2e4.
        """
        if self._atom is None:
            # dropped by construction of y_hi; bounded below 1e-12
            return np.zeros(len(y), dtype=complex)
        a = self._atom
        s = self.s
        ja = 1j * a
        acc = np.zeros(len(y), dtype=complex)
        term = y ** (-1.0 - s)
        for m in range(self._IBP_TERMS):
            acc += term
            term = term * (m + 1.0 + s) / (ja * y)
        return -np.exp(ja * y) / ja * acc

    # -- queries -------------------------------------------------------

    def master(self, y) -> np.ndarray:
        """G(y) for an array of positive arguments."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        out = np.empty(len(y), dtype=complex)
        lo = y < self._Y_LO
        hi = y > self._y_hi
        mid = ~(lo | hi)
        if np.any(mid):
            ly = np.log(y[mid])
            out[mid] = self._spline_re(ly) + 1j * self._spline_im(ly)
        if np.any(lo):
            # G(y) ~ c y^(1-s) near zero; scale the first table value
            out[lo] = self._g_at_lo * (y[lo] / self._Y_LO) ** (1.0 - self.s)
        if np.any(hi):
            yh = y[hi]
            out[hi] = self._g_inf - yh ** (-self.s) / self.s + self._cf_tail(yh)
        return out

    def beta_batch(self, omega, r0: float, p0: float) -> np.ndarray:
        """beta(omega | r0) for an array of positive omega."""
        omega = np.atleast_1d(np.asarray(omega, dtype=float))
        scaled = p0 * omega
        if r0 == 0.0:
            return scaled**self.s * self._g_inf / self.alpha
        return scaled**self.s * self.master(scaled * r0 ** (-self.alpha)) / self.alpha

    def real_exponent(self, omega, r0: float, p0: float, density_eff: float):
        """-ln |phi_I(omega)| = 2 pi lambda_eff Re beta(omega | r0)."""
        return 2.0 * np.pi * density_eff * np.real(self.beta_batch(omega, r0, p0))

    def cf_cutoff(self, r0: float, p0: float, density_eff: float) -> float:
        """Frequency beyond which |phi_I| < exp(-_EXPONENT_CUTOFF)."""
        lo, hi = 1e-12, 1e12
        f_hi = self.real_exponent(np.array([hi]), r0, p0, density_eff)[0]
        while f_hi < _EXPONENT_CUTOFF and hi < 1e28:
            hi *= 1e4
            f_hi = self.real_exponent(np.array([hi]), r0, p0, density_eff)[0]
        for _ in range(80):
            mid = np.sqrt(lo * hi)
            if self.real_exponent(np.array([mid]), r0, p0, density_eff)[0] < _EXPONENT_CUTOFF:
                lo = mid
            else:
                hi = mid
        return hi

    def cdf(
        self,
        x: float,
        r0: float,
        density_eff: float,
        p0: float,
        settings: QuadratureSettings = DEFAULT_SETTINGS,
        cutoff: float | None = None,
        mean_i: float | None = None,
    ) -> float:
        """F_I(x | r0) by Gil-Pelaez inversion of the tabulated CF."""
        if r0 < 0:
            raise ValueError("r0 must be >= 0")
        if cutoff is None:
            cutoff = self.cf_cutoff(r0, p0, density_eff)
        if mean_i is None and r0 > 0:
            mean_i = (
                2.0 * np.pi * density_eff * p0 * self.fading.mean()
                * r0 ** (2.0 - self.alpha) / (self.alpha - 2.0)
            )
        lam2pi = 2.0 * np.pi * density_eff

        def integrand(w):
            w = np.asarray(w, dtype=float)
            phi = np.exp(-lam2pi * self.beta_batch(w, r0, p0))
            return np.imag(phi * np.exp(-1j * w * x)) / w

        if x == 0.0:
            res = integrate_finite(
                integrand,
                0.0,
                cutoff,
                settings,
                seed_points=np.geomspace(cutoff * 1e-12, cutoff, 49)[:-1],
            )
            total = res.real
            converged = res.converged
        else:
            half = np.pi / abs(x)
            scale = min(half, 1.0 / mean_i) if mean_i and mean_i > 0 else half
            res = integrate_semi_infinite_oscillatory(
                integrand,
                omega_split=min(scale, cutoff),
                settings=settings,
                half_period=half,
                hard_cutoff=cutoff,
            )
            total = res.real
            converged = res.converged
        if not converged:
            raise NonConvergenceError(
                f"interference CDF inversion did not converge at x={x}, r0={r0}",
                partial=0.5 - total / np.pi,
            )
        value = 0.5 - total / np.pi
        if value < -CDF_CLAMP_TOL or value > 1.0 + CDF_CLAMP_TOL:
            raise NonConvergenceError(
                f"interference CDF excursion {value:.6g} outside [0,1] at x={x}, r0={r0}",
                partial=value,
            )
        return float(min(1.0, max(0.0, value)))

    def cdf_batch(
        self,
        xs,
        r0: float,
        density_eff: float,
        p0: float,
        settings: QuadratureSettings = DEFAULT_SETTINGS,
    ) -> np.ndarray:
        """CDF at many x for one contact distance, sharing the cutoff."""
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        cutoff = self.cf_cutoff(r0, p0, density_eff)
        mean_i = (
            2.0 * np.pi * density_eff * p0 * self.fading.mean()
            * r0 ** (2.0 - self.alpha) / (self.alpha - 2.0)
            if r0 > 0
            else None
        )
        return np.array(
            [
                self.cdf(float(x), r0, density_eff, p0, settings, cutoff, mean_i)
                for x in xs
            ]
        )

    def cdf_interpolant(
        self,
        r0: float,
        density_eff: float,
        p0: float,
        x_lo: float,
        x_hi: float,
        tol: float = 1e-6,
        settings: QuadratureSettings = DEFAULT_SETTINGS,
    ):
        """Chebyshev interpolant of x -> F_I(x | r0) on [x_lo, x_hi], log-x.

        Nodes are doubled (nested, Chebyshev-Lobatto) until the new nodes
        are predicted within ``tol``; queries outside the domain clamp to
        the endpoint values.  This is the memoized fast path used by the
        coverage and rate sweeps.
        """
        if not (0 < x_lo < x_hi):
            raise ValueError("need 0 < x_lo < x_hi")
        cutoff = self.cf_cutoff(r0, p0, density_eff)
        mean_i = (
            2.0 * np.pi * density_eff * p0 * self.fading.mean()
            * r0 ** (2.0 - self.alpha) / (self.alpha - 2.0)
            if r0 > 0
            else None
        )
        la, lb = np.log(x_lo), np.log(x_hi)

        def f(ln_x):
            return self.cdf(
                float(np.exp(ln_x)), r0, density_eff, p0, settings, cutoff, mean_i
            )

        n = 32
        pts = _lobatto_points(n, la, lb)
        vals = np.array([f(t) for t in pts])
        for _ in range(4):
            n2 = 2 * n
            pts2 = _lobatto_points(n2, la, lb)
            new = pts2[1::2]
            predicted = _barycentric_eval(pts, vals, new)
            actual = np.array([f(t) for t in new])
            err = float(np.max(np.abs(predicted - actual)))
            merged = np.empty(n2 + 1)
            merged[0::2] = vals
            merged[1::2] = actual
            pts, vals, n = pts2, merged, n2
            if err < tol:
                break
        else:
            logger.warning(
                "CDF interpolant at r0=%g stopped at %d nodes with error %.2e",
                r0, n, err,
            )

        def interp(x):
            x = np.asarray(x, dtype=float)
            lx = np.clip(np.log(np.maximum(x, x_lo)), la, lb)
            out = _barycentric_eval(pts, vals, np.atleast_1d(lx))
            return out if x.ndim else float(out[0])

        return interp


def _lobatto_points(n: int, a: float, b: float) -> np.ndarray:
    """n+1 Chebyshev-Lobatto points on [a, b], ascending."""
    k = np.arange(n + 1)
    t = -np.cos(np.pi * k / n)
    return a + (t + 1.0) * 0.5 * (b - a)


def _barycentric_eval(pts: np.ndarray, vals: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Barycentric interpolation on Chebyshev-Lobatto points."""
    n = len(pts) - 1
    w = np.ones(n + 1)
    w[1::2] = -1.0
    w[0] *= 0.5
    w[-1] *= 0.5
    diff = x[:, None] - pts[None, :]
    exact = np.isclose(diff, 0.0, atol=0.0)
    diff = np.where(exact, 1.0, diff)
    ratio = w[None, :] / diff
    out = (ratio @ vals) / np.sum(ratio, axis=1)
    hit_rows, hit_cols = np.nonzero(exact)
    out[hit_rows] = vals[hit_cols]
    return out


_KERNEL_CACHE: dict = {}
_KERNEL_LOCK = threading.Lock()


def get_kernel(fading: FadingModel, alpha: float) -> InterferenceKernel:
    """Shared kernel per (fading model, alpha), built once under a lock."""
    key = (fading, float(alpha))
    kernel = _KERNEL_CACHE.get(key)
    if kernel is not None:
        return kernel
    with _KERNEL_LOCK:
        kernel = _KERNEL_CACHE.get(key)
        if kernel is None:
            kernel = InterferenceKernel(fading, alpha)
            _KERNEL_CACHE[key] = kernel
    return kernel


def interference_cdf(
    ctx: InterferenceContext,
    x: float,
    settings: QuadratureSettings = DEFAULT_SETTINGS,
) -> float:
    """Conditional CDF F_I(x | r0): Gil-Pelaez inversion of Proposition 1's CF."""
    kernel = get_kernel(ctx.interferer_fading, ctx.config.alpha)
    return kernel.cdf(
        float(x),
        ctx.r0,
        ctx.config.effective_density,
        ctx.config.p0,
        settings,
    )
