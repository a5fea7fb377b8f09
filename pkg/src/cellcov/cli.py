"""Command-line front end.

Subcommands:

* ``run <scenario.toml>`` -- execute a declarative scenario (analytic
  integration, Monte-Carlo simulation, or both) and write a CSV bundle,
  a resolved-config JSON, and a matplotlib plot script.
* ``compare <a.csv> <b.csv> --tol X`` -- regression-diff two result files.
* ``list-scenarios`` -- show the bundled paper-figure scenarios.

Scenario files are TOML.  Decibel quantities carry an explicit ``_db``
key suffix and are converted here, at the boundary; the library works in
linear units throughout.

Exit codes: 0 success, 1 validation error, 2 numerical non-convergence,
3 comparison failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import __version__
from .coverage import ChannelSpec, coverage_curve, coverage_vs_reuse
from .fading import Deterministic, FadingModel, LognormalShadow, Product, Rayleigh, Rician
from .interference import NetworkConfig
from .montecarlo import SimulationPlan, run as mc_run
from .numerics import NonConvergenceError
from .rate import NATS_TO_BITS, RateParams, rate_direct, rate_from_ccdf, rate_vs_gamma_min

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_COMPARISON = 3

_MODES = ("analytic", "mc", "both")
_KINDS = ("coverage", "reuse", "rate")


class ScenarioError(ValueError):
    """Scenario file failed to parse or validate."""


def db_to_linear(x_db: float) -> float:
    return float(10.0 ** (x_db / 10.0))


def linear_to_db(x: float) -> float:
    return float(10.0 * np.log10(x))


# ---------------------------------------------------------------------------
# scenario model
# ---------------------------------------------------------------------------


def _fading_from_dict(d: dict, where: str) -> FadingModel:
    kind = d.get("kind")
    if kind == "deterministic":
        model: FadingModel = Deterministic()
    elif kind == "rayleigh":
        model = Rayleigh()
    elif kind == "rician":
        model = Rician(k_factor=float(d["k_factor"]))
    elif kind == "lognormal":
        model = LognormalShadow(sigma_db=float(d["sigma_db"]))
    elif kind == "product":
        model = Product(
            _fading_from_dict(d["first"], where),
            _fading_from_dict(d["second"], where),
        )
    else:
        raise ScenarioError(f"{where}: unknown fading kind {kind!r}")
    return model


def _fading_to_dict(m: FadingModel) -> dict:
    if isinstance(m, Deterministic):
        return {"kind": "deterministic"}
    if isinstance(m, Rayleigh):
        return {"kind": "rayleigh"}
    if isinstance(m, Rician):
        return {"kind": "rician", "k_factor": m.k_factor}
    if isinstance(m, LognormalShadow):
        return {"kind": "lognormal", "sigma_db": m.sigma_db}
    if isinstance(m, Product):
        return {
            "kind": "product",
            "first": _fading_to_dict(m.first),
            "second": _fading_to_dict(m.second),
        }
    raise ScenarioError(f"cannot serialize fading model {m!r}")


def _parse_fading(side: str, channel: dict) -> FadingModel:
    kind = channel.get(side)
    if kind is None:
        raise ScenarioError(f"[channel] is missing the {side!r} key")
    if kind == "deterministic":
        model: FadingModel = Deterministic()
    elif kind == "rayleigh":
        model = Rayleigh()
    elif kind == "rician":
        k_db = channel.get(f"{side}_k_db")
        k_lin = channel.get(f"{side}_k")
        if (k_db is None) == (k_lin is None):
            raise ScenarioError(
                f"[channel] rician {side} needs exactly one of "
                f"{side}_k_db or {side}_k"
            )
        model = Rician(k_factor=db_to_linear(k_db) if k_db is not None else float(k_lin))
    elif kind == "lognormal":
        sigma = channel.get(f"{side}_sigma_db")
        if sigma is None:
            raise ScenarioError(f"[channel] lognormal {side} needs {side}_sigma_db")
        model = LognormalShadow(sigma_db=float(sigma))
    else:
        raise ScenarioError(f"[channel] unknown fading kind {kind!r} for {side}")
    shadow = channel.get(f"{side}_shadow_sigma_db")
    if shadow is not None:
        model = Product(model, LognormalShadow(sigma_db=float(shadow)))
    return model


@dataclass(frozen=True)
class Scenario:
    """Fully resolved scenario: every quantity linear, every default applied."""

    name: str
    kind: str
    mode: str
    config: NetworkConfig
    spec: ChannelSpec
    thresholds: tuple  # linear, strictly increasing
    alpha_sweep: tuple | None = None
    reuse_deltas: tuple | None = None
    reuse_threshold: float | None = None
    rate_gamma_o: float | None = None
    rate_gamma_min: float | None = None
    rate_gamma_min_grid: tuple | None = None
    rate_units: str = "nats"
    mc_sim_radius: float | None = None
    mc_obs_radius: float | None = None
    mc_users_per_run: int | None = None
    mc_runs: int | None = None
    seed: int = 0

    def plan(self) -> SimulationPlan:
        if self.mc_sim_radius is None:
            raise ScenarioError(
                f"scenario {self.name!r} has no [montecarlo] section but mode={self.mode}"
            )
        return SimulationPlan(
            cfg=self.config,
            spec=self.spec,
            sim_radius=self.mc_sim_radius,
            obs_radius=self.mc_obs_radius,
            users_per_run=self.mc_users_per_run,
            runs=self.mc_runs,
            seed=self.seed,
        )

    def resolved_dict(self) -> dict:
        d = {
            "name": self.name,
            "kind": self.kind,
            "mode": self.mode,
            "network": {
                "density": self.config.density,
                "p0": self.config.p0,
                "alpha": self.config.alpha,
                "noise_w": self.config.noise_w,
                "delta": self.config.delta,
            },
            "channel": {
                "serving": _fading_to_dict(self.spec.serving),
                "interferers": _fading_to_dict(self.spec.interferers),
            },
            "thresholds": list(self.thresholds),
            "seed": self.seed,
            "rate_units": self.rate_units,
        }
        if self.alpha_sweep is not None:
            d["alpha_sweep"] = list(self.alpha_sweep)
        if self.reuse_deltas is not None:
            d["reuse_deltas"] = list(self.reuse_deltas)
            d["reuse_threshold"] = self.reuse_threshold
        if self.rate_gamma_o is not None:
            d["rate_gamma_o"] = self.rate_gamma_o
            d["rate_gamma_min"] = self.rate_gamma_min
        if self.rate_gamma_min_grid is not None:
            d["rate_gamma_min_grid"] = list(self.rate_gamma_min_grid)
        if self.mc_sim_radius is not None:
            d["montecarlo"] = {
                "sim_radius": self.mc_sim_radius,
                "obs_radius": self.mc_obs_radius,
                "users_per_run": self.mc_users_per_run,
                "runs": self.mc_runs,
            }
        return d

    @classmethod
    def from_resolved_dict(cls, d: dict) -> "Scenario":
        net = d["network"]
        mc = d.get("montecarlo", {})
        return cls(
            name=d["name"],
            kind=d["kind"],
            mode=d["mode"],
            config=NetworkConfig(
                density=net["density"], p0=net["p0"], alpha=net["alpha"],
                noise_w=net["noise_w"], delta=net["delta"],
            ),
            spec=ChannelSpec(
                serving=_fading_from_dict(d["channel"]["serving"], "channel.serving"),
                interferers=_fading_from_dict(
                    d["channel"]["interferers"], "channel.interferers"
                ),
            ),
            thresholds=tuple(d["thresholds"]),
            alpha_sweep=tuple(d["alpha_sweep"]) if "alpha_sweep" in d else None,
            reuse_deltas=tuple(d["reuse_deltas"]) if "reuse_deltas" in d else None,
            reuse_threshold=d.get("reuse_threshold"),
            rate_gamma_o=d.get("rate_gamma_o"),
            rate_gamma_min=d.get("rate_gamma_min"),
            rate_gamma_min_grid=(
                tuple(d["rate_gamma_min_grid"]) if "rate_gamma_min_grid" in d else None
            ),
            rate_units=d.get("rate_units", "nats"),
            mc_sim_radius=mc.get("sim_radius"),
            mc_obs_radius=mc.get("obs_radius"),
            mc_users_per_run=mc.get("users_per_run"),
            mc_runs=mc.get("runs"),
            seed=d.get("seed", 0),
        )


def _threshold_grid(section: dict) -> tuple:
    if "values_db" in section:
        vals = [db_to_linear(v) for v in section["values_db"]]
    elif {"start_db", "stop_db", "points"} <= set(section):
        pts = int(section["points"])
        if pts < 1:
            raise ScenarioError("[thresholds] points must be >= 1")
        vals = [
            db_to_linear(v)
            for v in np.linspace(section["start_db"], section["stop_db"], pts)
        ]
    else:
        raise ScenarioError(
            "[thresholds] needs either values_db or start_db/stop_db/points"
        )
    arr = np.asarray(vals)
    if np.any(np.diff(arr) <= 0):
        raise ScenarioError("[thresholds] grid must be strictly increasing")
    return tuple(float(v) for v in arr)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text())
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{path}: TOML parse error: {exc}") from exc

    name = raw.get("name", path.stem)
    kind = raw.get("kind", "coverage")
    if kind not in _KINDS:
        raise ScenarioError(f"{path}: kind must be one of {_KINDS}, got {kind!r}")
    mode = raw.get("mode", "analytic")
    if mode not in _MODES:
        raise ScenarioError(f"{path}: mode must be one of {_MODES}, got {mode!r}")

    net = raw.get("network")
    if net is None:
        raise ScenarioError(f"{path}: missing [network] section")
    try:
        config = NetworkConfig(
            density=float(net.get("density", 1.0)),
            p0=float(net.get("p0", 1.0)),
            alpha=float(net["alpha"]),
            noise_w=float(net.get("noise_w", 0.0)),
            delta=int(net.get("delta", 1)),
        )
    except KeyError as exc:
        raise ScenarioError(f"{path}: [network] is missing {exc}") from exc
    except ValueError as exc:
        raise ScenarioError(f"{path}: [network] invalid: {exc}") from exc

    channel = raw.get("channel")
    if channel is None:
        raise ScenarioError(f"{path}: missing [channel] section")
    try:
        spec = ChannelSpec(
            serving=_parse_fading("serving", channel),
            interferers=_parse_fading("interferers", channel),
        )
    except ValueError as exc:
        raise ScenarioError(f"{path}: [channel] invalid: {exc}") from exc

    thresholds = _threshold_grid(raw.get("thresholds", {})) if kind != "rate" else ()
    if kind != "rate" and not thresholds:
        raise ScenarioError(f"{path}: missing [thresholds] section")

    alpha_sweep = None
    if "alpha_sweep" in net:
        alpha_sweep = tuple(float(a) for a in net["alpha_sweep"])
        if any(a <= 2 for a in alpha_sweep):
            raise ScenarioError(f"{path}: alpha_sweep values must be > 2")
        if mode != "analytic":
            raise ScenarioError(f"{path}: alpha_sweep supports mode='analytic' only")
        if kind != "coverage":
            raise ScenarioError(f"{path}: alpha_sweep requires kind='coverage'")

    reuse_deltas = None
    reuse_threshold = None
    if kind == "reuse":
        sect = raw.get("reuse")
        if sect is None:
            raise ScenarioError(f"{path}: kind='reuse' needs a [reuse] section")
        reuse_deltas = tuple(int(d) for d in sect["deltas"])
        if any(d < 1 for d in reuse_deltas):
            raise ScenarioError(f"{path}: [reuse] deltas must be integers >= 1")
        reuse_threshold = db_to_linear(float(sect["t_db"]))

    gamma_o = gamma_min = None
    gamma_min_grid = None
    units = "nats"
    if "rate" in raw:
        sect = raw["rate"]
        gamma_o = float(sect.get("gamma_o", 1.0))
        gamma_min = float(sect.get("gamma_min", 0.0))
        units = sect.get("units", "nats")
        if units not in ("nats", "bits"):
            raise ScenarioError(f"{path}: [rate] units must be 'nats' or 'bits'")
        if "gamma_min_values" in sect:
            gamma_min_grid = tuple(float(v) for v in sect["gamma_min_values"])
            if any(np.diff(gamma_min_grid) <= 0):
                raise ScenarioError(f"{path}: [rate] gamma_min_values must increase")
    elif kind == "rate":
        raise ScenarioError(f"{path}: kind='rate' needs a [rate] section")
    if kind == "rate" and gamma_min_grid is None:
        raise ScenarioError(f"{path}: kind='rate' needs [rate] gamma_min_values")

    mc = raw.get("montecarlo", {})
    if mode in ("mc", "both") and not mc:
        raise ScenarioError(f"{path}: mode={mode!r} needs a [montecarlo] section")

    return Scenario(
        name=name,
        kind=kind,
        mode=mode,
        config=config,
        spec=spec,
        thresholds=thresholds,
        alpha_sweep=alpha_sweep,
        reuse_deltas=reuse_deltas,
        reuse_threshold=reuse_threshold,
        rate_gamma_o=gamma_o,
        rate_gamma_min=gamma_min,
        rate_gamma_min_grid=gamma_min_grid,
        rate_units=units,
        mc_sim_radius=float(mc["sim_radius"]) if mc else None,
        mc_obs_radius=float(mc["obs_radius"]) if mc else None,
        mc_users_per_run=int(mc["users_per_run"]) if mc else None,
        mc_runs=int(mc["runs"]) if mc else None,
        seed=int(raw.get("seed", mc.get("seed", 0)) if mc else raw.get("seed", 0)),
    )


# ---------------------------------------------------------------------------
# artifacts
# ---------------------------------------------------------------------------


def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and not np.isfinite(x)):
        return ""
    return f"{x:.9g}"


def _write_csv(path: Path, header: list, rows: list):
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) if not isinstance(v, str) else v for v in row])


_PLOT_TEMPLATE = """#!/usr/bin/env python3
\"\"\"Render {name} results; auto-generated, reads the CSVs next to it.\"\"\"
import csv
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = Path(__file__).parent


def load(name):
    with open(HERE / name, newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


for csv_name, xlabel in {plots!r}:
    rows = load(csv_name)
    if not rows:
        continue
    cols = [c for c in rows[0] if c not in (xlabel, "status") and not c.endswith("stderr")]
    x = [float(r[xlabel]) for r in rows]
    fig, ax = plt.subplots()
    for col in cols:
        y = [float(r[col]) if r[col] else float("nan") for r in rows]
        if col == "p_c_mc" and "mc_stderr" in rows[0]:
            err = [3 * float(r["mc_stderr"]) if r["mc_stderr"] else 0.0 for r in rows]
            ax.errorbar(x, y, yerr=err, fmt="o", ms=3, label=col + " (3 SE)")
        else:
            ax.plot(x, y, label=col)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("value")
    ax.set_title(csv_name)
    ax.grid(True, alpha=0.3)
    ax.legend()
    out = HERE / (csv_name.rsplit(".", 1)[0] + ".png")
    fig.savefig(out, dpi=150, bbox_inches="tight")
    print("wrote", out)
"""


def run_scenario(
    path: str | Path,
    mode: str | None = None,
    seed: int | None = None,
    out_dir: str | Path = ".",
    threads: int | None = None,
) -> dict:
    """Execute a scenario file; returns {artifact kind: Path}."""
    scenario = load_scenario(path)
    if mode is not None:
        if mode not in _MODES:
            raise ScenarioError(f"mode must be one of {_MODES}, got {mode!r}")
        scenario = replace(scenario, mode=mode)
    if seed is not None:
        scenario = replace(scenario, seed=int(seed))
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    name = scenario.name
    artifacts: dict = {}
    status = "ok"
    plots = []

    analytic = scenario.mode in ("analytic", "both")
    monte = scenario.mode in ("mc", "both")

    if scenario.kind == "coverage":
        t = np.asarray(scenario.thresholds)
        t_db = 10.0 * np.log10(t)
        header = ["T_dB"]
        columns = [t_db]
        if analytic and scenario.alpha_sweep:
            for a in scenario.alpha_sweep:
                cfg_a = replace(scenario.config, alpha=a)
                curve = coverage_curve(cfg_a, scenario.spec, t, threads=threads)
                header.append(f"p_c_analytic_a{a:g}")
                columns.append(np.asarray(curve.probabilities))
                if curve.metadata.get("node_failures"):
                    status = f"degraded({curve.metadata['node_failures']} node failures)"
        elif analytic:
            curve = coverage_curve(scenario.config, scenario.spec, t, threads=threads)
            header.append("p_c_analytic")
            columns.append(np.asarray(curve.probabilities))
            if curve.metadata.get("node_failures"):
                status = f"degraded({curve.metadata['node_failures']} node failures)"
        if monte:
            est = mc_run(scenario.plan(), t, threads=threads)
            header += ["p_c_mc", "mc_stderr"]
            columns += [np.asarray(est.probabilities), np.asarray(est.stderr)]
        header.append("status")
        rows = [[*vals, status] for vals in zip(*columns)]
        cov_path = out / f"{name}_coverage.csv"
        _write_csv(cov_path, header, rows)
        artifacts["coverage"] = cov_path
        plots.append((cov_path.name, "T_dB"))

        if analytic and scenario.rate_gamma_o is not None and not scenario.alpha_sweep:
            params = RateParams(scenario.rate_gamma_o, scenario.rate_gamma_min)
            unit_scale = NATS_TO_BITS if scenario.rate_units == "bits" else 1.0
            direct = rate_direct(scenario.config, scenario.spec, params) * unit_scale
            row = [params.gamma_min, direct]
            rate_header = ["gamma_min", f"rate_direct_{scenario.rate_units}"]
            try:
                ccdf_val = rate_from_ccdf(curve, params) * unit_scale
                rate_header.append(f"rate_ccdf_{scenario.rate_units}")
                row.append(ccdf_val)
            except ValueError:
                pass  # grid too coarse for the curve route; direct value stands
            rate_header.append("status")
            rate_path = out / f"{name}_rate.csv"
            _write_csv(rate_path, rate_header, [row + [status]])
            artifacts["rate"] = rate_path
            plots.append((rate_path.name, "gamma_min"))

    elif scenario.kind == "reuse":
        deltas = np.asarray(scenario.reuse_deltas, dtype=int)
        header = ["delta"]
        columns = [deltas]
        if analytic:
            vals = coverage_vs_reuse(
                scenario.config, scenario.spec, scenario.reuse_threshold, deltas
            )
            header.append("p_c_analytic")
            columns.append(np.asarray(vals))
        if monte:
            mc_vals, mc_err = [], []
            for d in deltas:
                plan = replace(
                    scenario.plan(), cfg=replace(scenario.config, delta=int(d))
                )
                est = mc_run(plan, np.array([scenario.reuse_threshold]), threads=threads)
                mc_vals.append(est.probabilities[0])
                mc_err.append(est.stderr[0])
            header += ["p_c_mc", "mc_stderr"]
            columns += [np.asarray(mc_vals), np.asarray(mc_err)]
        header.append("status")
        rows = [[*vals, status] for vals in zip(*columns)]
        cov_path = out / f"{name}_coverage.csv"
        _write_csv(cov_path, header, rows)
        artifacts["coverage"] = cov_path
        plots.append((cov_path.name, "delta"))

    else:  # rate curve
        params_grid = scenario.rate_gamma_min_grid
        unit_scale = NATS_TO_BITS if scenario.rate_units == "bits" else 1.0
        vals = rate_vs_gamma_min(
            scenario.config, scenario.spec, scenario.rate_gamma_o, params_grid
        )
        rate_path = out / f"{name}_rate.csv"
        _write_csv(
            rate_path,
            ["gamma_min", f"rate_{scenario.rate_units}", "status"],
            [[g, v * unit_scale, status] for g, v in zip(params_grid, vals)],
        )
        artifacts["rate"] = rate_path
        plots.append((rate_path.name, "gamma_min"))

    meta = {
        "tool": "cellcov",
        "version": __version__,
        "scenario": scenario.resolved_dict(),
        "mode": scenario.mode,
        "seed": scenario.seed,
    }
    meta_path = out / f"{name}.meta.json"
    meta_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    artifacts["meta"] = meta_path

    plot_path = out / f"{name}_plot.py"
    plot_path.write_text(_PLOT_TEMPLATE.format(name=name, plots=plots))
    artifacts["plot"] = plot_path
    return artifacts


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def compare_csv(path_a: str | Path, path_b: str | Path, tol: float) -> tuple:
    """Compare shared numeric columns row-by-row; returns (ok, report)."""
    rows_a = list(csv.DictReader(open(path_a, newline="")))
    rows_b = list(csv.DictReader(open(path_b, newline="")))
    if not rows_a or not rows_b:
        raise ScenarioError("empty CSV input")
    key_a = list(rows_a[0])[0]
    key_b = list(rows_b[0])[0]
    if key_a != key_b:
        raise ScenarioError(f"abscissa columns differ: {key_a!r} vs {key_b!r}")
    grid_a = [r[key_a] for r in rows_a]
    grid_b = [r[key_b] for r in rows_b]
    if grid_a != grid_b:
        missing = sorted(set(grid_a).symmetric_difference(grid_b))
        raise ScenarioError(
            f"threshold grids do not match; unmatched rows: {missing[:10]}"
        )
    shared = [
        c
        for c in rows_a[0]
        if c in rows_b[0] and c not in (key_a, "status") and not c.endswith("stderr")
    ]
    if not shared:
        raise ScenarioError("no shared value columns to compare")
    report = []
    max_diff = 0.0
    for ra, rb in zip(rows_a, rows_b):
        for col in shared:
            if ra[col] == "" or rb[col] == "":
                continue
            diff = abs(float(ra[col]) - float(rb[col]))
            max_diff = max(max_diff, diff)
            if diff > tol:
                report.append(
                    f"  {key_a}={ra[key_a]} {col}: |{ra[col]} - {rb[col]}| = {diff:.3e}"
                )
    ok = not report
    summary = (
        f"compared {len(rows_a)} rows x {len(shared)} columns; "
        f"max |diff| = {max_diff:.3e}; tolerance = {tol:g}: "
        + ("PASS" if ok else f"FAIL ({len(report)} cells)")
    )
    return ok, "\n".join([summary, *report])


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def bundled_scenarios() -> dict:
    """Name -> Path of the scenario files shipped with the package."""
    from importlib.resources import files

    root = files("cellcov") / "scenarios"
    return {p.name[: -len(".toml")]: p for p in sorted(root.iterdir())
            if p.name.endswith(".toml")}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cellcov",
        description="Coverage and rate of random cellular networks under generic fading",
    )
    parser.add_argument("--version", action="version", version=f"cellcov {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a scenario file")
    p_run.add_argument("scenario", help="path to a scenario TOML (or a bundled name)")
    p_run.add_argument("--mode", choices=_MODES, default=None)
    p_run.add_argument("--seed", type=int, default=None)
    p_run.add_argument("--out", default=".", help="output directory")
    p_run.add_argument(
        "--threads", type=int,
        default=int(os.environ.get("CELLCOV_THREADS", "1")),
        help="worker threads (default: CELLCOV_THREADS or 1)",
    )

    p_cmp = sub.add_parser("compare", help="diff two result CSVs")
    p_cmp.add_argument("csv_a")
    p_cmp.add_argument("csv_b")
    p_cmp.add_argument("--tol", type=float, required=True)

    sub.add_parser("list-scenarios", help="show bundled scenarios")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "list-scenarios":
        for name, path in bundled_scenarios().items():
            print(f"{name}\t{path}")
        return EXIT_OK

    if args.command == "compare":
        try:
            ok, report = compare_csv(args.csv_a, args.csv_b, args.tol)
        except (ScenarioError, OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        print(report)
        return EXIT_OK if ok else EXIT_COMPARISON

    # run
    scenario_path = Path(args.scenario)
    if not scenario_path.exists():
        bundle = bundled_scenarios()
        if args.scenario in bundle:
            scenario_path = bundle[args.scenario]
        else:
            print(f"error: no such scenario file {args.scenario!r}", file=sys.stderr)
            return EXIT_VALIDATION
    try:
        artifacts = run_scenario(
            scenario_path,
            mode=args.mode,
            seed=args.seed,
            out_dir=args.out,
            threads=args.threads,
        )
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NonConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    for kind, path in artifacts.items():
        print(f"{kind}: {path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
