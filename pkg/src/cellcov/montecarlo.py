"""Ground-truth network simulator.

Each run deploys a fresh PPP of base stations on a disc, drops users
uniformly inside a smaller observation disc (the guard ring suppresses
the interference deficit near the boundary), associates every user with
its nearest BS, draws independent fading per link, and records SINR.
Exceedance counts over a threshold grid give the empirical CCDF; error
bars come from the between-run spread, since users sharing a deployment
are correlated.

Randomness is Philox counter-based with one substream per run derived
from (seed, run index), so results are bit-identical no matter how runs
are scheduled across workers.
"""
from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .coverage import ChannelSpec
from .fading import FadingModel
from .interference import NetworkConfig

__all__ = ["SimulationPlan", "McEstimate", "deploy", "sample_sinr", "run",
           "sample_interference"]

logger = logging.getLogger(__name__)

_MIN_EXPECTED_BS = 200.0


@dataclass(frozen=True)
class SimulationPlan:
    """Full description of one Monte-Carlo experiment."""

    cfg: NetworkConfig
    spec: ChannelSpec
    sim_radius: float
    obs_radius: float
    users_per_run: int
    runs: int
    seed: int

    def __post_init__(self):
        if self.sim_radius <= 0 or self.obs_radius <= 0:
            raise ValueError("radii must be positive")
        if self.obs_radius > self.sim_radius / 2:
            raise ValueError(
                "obs_radius must be <= sim_radius / 2 to keep edge effects down"
            )
        expected = self.cfg.density * np.pi * self.sim_radius**2
        if expected < _MIN_EXPECTED_BS:
            raise ValueError(
                f"expected BS count {expected:.0f} < {_MIN_EXPECTED_BS:.0f}; "
                f"grow sim_radius or density"
            )
        if self.users_per_run < 1 or self.runs < 1:
            raise ValueError("users_per_run and runs must be >= 1")


@dataclass(frozen=True)
class McEstimate:
    """Empirical CCDF with between-run standard errors."""

    thresholds: tuple
    probabilities: tuple
    stderr: tuple
    total_links: int
    metadata: dict = field(default_factory=dict, compare=False)

    def as_arrays(self):
        return (
            np.asarray(self.thresholds, dtype=float),
            np.asarray(self.probabilities, dtype=float),
            np.asarray(self.stderr, dtype=float),
        )


def _run_rng(seed: int, run_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(run_index,))
    return np.random.Generator(np.random.Philox(ss))


def deploy(plan: SimulationPlan, run_index: int, rng: np.random.Generator | None = None):
    """One PPP realization on the simulation disc.

    Returns (points, colors): points is (n, 2); colors is (n,) in
    [0, delta) when the reuse factor exceeds 1, else None.
    """
    if rng is None:
        rng = _run_rng(plan.seed, run_index)
    area_mean = plan.cfg.density * np.pi * plan.sim_radius**2
    n = int(rng.poisson(area_mean))
    while n == 0:  # probability e^-area_mean, negligible under the plan invariant
        logger.warning("empty deployment resampled (run %d)", run_index)
        n = int(rng.poisson(area_mean))
    radius = plan.sim_radius * np.sqrt(rng.random(n))
    angle = 2.0 * np.pi * rng.random(n)
    points = np.column_stack([radius * np.cos(angle), radius * np.sin(angle)])
    colors = rng.integers(0, plan.cfg.delta, n) if plan.cfg.delta > 1 else None
    return points, colors


def sample_sinr(
    points: np.ndarray,
    colors,
    user_xy: np.ndarray,
    spec: ChannelSpec,
    cfg: NetworkConfig,
    rng: np.random.Generator,
    include_interference: bool = True,
) -> float:
    """SINR of one user: nearest-BS serving link over co-channel interference.

    Association is by distance (the contact-distance conditioning of the
    analysis); fading gains are drawn independently per link.
    """
    d = np.hypot(points[:, 0] - user_xy[0], points[:, 1] - user_xy[1])
    serving = int(np.argmin(d))
    h0 = float(spec.serving.sample(rng))
    signal = cfg.p0 * h0 * d[serving] ** (-cfg.alpha)

    interference = 0.0
    if include_interference:
        mask = np.ones(len(d), dtype=bool)
        mask[serving] = False
        if colors is not None:
            mask &= colors == colors[serving]
        di = d[mask]
        if di.size:
            h = np.asarray(spec.interferers.sample(rng, di.size))
            interference = float(np.sum(cfg.p0 * h * di ** (-cfg.alpha)))
    denom = interference + cfg.noise_w
    if denom == 0.0:
        return np.inf
    return signal / denom


def _single_run(plan: SimulationPlan, run_index: int, thresholds: np.ndarray,
                include_interference: bool = True) -> np.ndarray:
    """Per-threshold exceedance fractions for one deployment."""
    rng = _run_rng(plan.seed, run_index)
    points, colors = deploy(plan, run_index, rng)
    exceed = np.zeros(len(thresholds))
    for _ in range(plan.users_per_run):
        radius = plan.obs_radius * np.sqrt(rng.random())
        angle = 2.0 * np.pi * rng.random()
        user = np.array([radius * np.cos(angle), radius * np.sin(angle)])
        sinr = sample_sinr(points, colors, user, plan.spec, plan.cfg, rng,
                           include_interference)
        exceed += sinr >= thresholds
    return exceed / plan.users_per_run


def run(
    plan: SimulationPlan,
    thresholds,
    threads: int | None = None,
    include_interference: bool = True,
) -> McEstimate:
    """Full experiment: empirical CCDF with between-run standard errors."""
    thresholds = np.asarray(thresholds, dtype=float)
    if thresholds.ndim != 1 or np.any(np.diff(thresholds) <= 0):
        raise ValueError("thresholds must be strictly increasing 1-D")

    indices = range(plan.runs)
    if threads is not None and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_run = list(
                pool.map(
                    lambda i: _single_run(plan, i, thresholds, include_interference),
                    indices,
                )
            )
    else:
        per_run = [_single_run(plan, i, thresholds, include_interference)
                   for i in indices]

    stacked = np.vstack(per_run)
    mean = stacked.mean(axis=0)
    if plan.runs > 1:
        se = stacked.std(axis=0, ddof=1) / np.sqrt(plan.runs)
    else:
        se = np.full(len(thresholds), np.nan)
    return McEstimate(
        thresholds=tuple(thresholds),
        probabilities=tuple(mean),
        stderr=tuple(se),
        total_links=plan.runs * plan.users_per_run,
        metadata={"seed": plan.seed, "runs": plan.runs,
                  "users_per_run": plan.users_per_run,
                  "sim_radius": plan.sim_radius, "obs_radius": plan.obs_radius},
    )


def sample_interference(
    cfg: NetworkConfig,
    fading: FadingModel,
    r0: float,
    r_max: float,
    n_samples: int,
    rng: np.random.Generator,
    compensate_tail: bool = True,
) -> np.ndarray:
    """Draws of the aggregate interference from a PPP annulus [r0, r_max].

    Used as the simulation oracle for the analytic conditional CDF.  The
    mean power of the neglected field beyond r_max,
    2 pi lambda_eff E[P] r_max^(2-alpha) / (alpha - 2), is added back as
    a constant unless ``compensate_tail`` is false.
    """
    if not (0 < r0 < r_max):
        raise ValueError("need 0 < r0 < r_max")
    lam = cfg.effective_density
    area = np.pi * (r_max**2 - r0**2)
    out = np.empty(n_samples)
    tail = (
        2.0 * np.pi * lam * cfg.p0 * fading.mean()
        * r_max ** (2.0 - cfg.alpha) / (cfg.alpha - 2.0)
        if compensate_tail
        else 0.0
    )
    counts = rng.poisson(lam * area, n_samples)
    total = int(counts.sum())
    # uniform in the annulus by inverse-CDF on r^2
    u = rng.random(total)
    radii = np.sqrt(r0**2 + u * (r_max**2 - r0**2))
    gains = np.asarray(fading.sample(rng, total))
    powers = cfg.p0 * gains * radii ** (-cfg.alpha)
    edges = np.concatenate([[0], np.cumsum(counts)])
    sums = np.add.reduceat(
        np.concatenate([powers, [0.0]]), edges[:-1]
    )
    sums[counts == 0] = 0.0
    out[:] = sums + tail
    return out
