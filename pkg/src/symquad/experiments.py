"""Experiment harness: INI-style configs drive regression and dynamics sweeps
that land as deterministic CSV tables plus optional SVG plots."""

from __future__ import annotations

import configparser
import hashlib
import math
import os
import sys
from dataclasses import dataclass, field, fields, replace

import numpy as np

from .coupling import enumerate_basis, sym_coeffs
from .dynamics import default_potential, hitting_time, simulate_batch, write_trajectory_csv, Trajectory
from .geometry import so2_quadrature, so3_quadrature_euler
from .regression import (AugmentationScheme, RegressionSolution, augmented_lsq, full_lsq,
                         invariant_lsq, l2_test_error, schur_diagnostics)
from .sampling import (AlgebraicDecay, DistributionSpec, ExponentialDecay, export_dataset,
                       make_target, sample_dataset)

VERSION = "0.1.0"

RATIO_CAP = 1e16  # reported when the quadrature column is exactly symmetric


class ConfigError(ValueError):
    """Configuration file is missing or malformed; message names the field."""


class NumericalAbort(RuntimeError):
    """An experiment hit a numerical failure (blow-up or solver breakdown)."""


# ---------------------------------------------------------------------------
# Config
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    name: str
    outdir: str = "results"
    seed: int = 0
    trials: int = 1
    d: int = 0                      # required for regression experiments
    distribution: str = "UUU"
    degrees: tuple = ()
    quad_degrees: tuple = ()
    t_list: tuple = ()
    train_size: int = 0
    test_size: int = 0
    cutoff: str = "auto"            # "auto", or a float literal
    target_degree: int = 0
    alpha: float = 2.0
    powers: tuple = ()
    kappa: float = 100.0
    sigma: float = 0.1
    dt: float = 0.05
    steps: int = 1_000_000
    record_every: int = 100
    eps_list: tuple = ()
    hit_targets: tuple = (1e-6, 1e-4, 1e-3, 1e-2, 1e-1)
    preview_size: int = 2000


_INT_TUPLE = ("degrees", "quad_degrees", "t_list")
_FLOAT_TUPLE = ("powers", "eps_list", "hit_targets")
_INTS = ("seed", "trials", "d", "train_size", "test_size", "target_degree",
         "steps", "record_every", "preview_size")
_FLOATS = ("alpha", "kappa", "sigma", "dt")

# frozen defaults per experiment; keys override the dataclass defaults
_DEFAULTS = {
    "approx-rates": {"trials": 1, "degrees": tuple(range(1, 8))},
    "quad-sweep": {"train_size": 800, "test_size": 200, "trials": 1,
                   "degrees": (6,), "quad_degrees": tuple(range(10))},
    "random-sweep": {"train_size": 100, "test_size": 100, "trials": 10,
                     "degrees": (6,), "t_list": (4, 8, 16, 32, 64, 128, 256)},
    "compare": {"train_size": 100, "test_size": 100, "trials": 10,
                "degrees": (6,), "quad_degrees": tuple(range(10))},
    "drift": {"trials": 5},
    "regularity-sweep": {"train_size": 100, "test_size": 100, "trials": 10,
                         "degrees": (2, 8), "t_list": (16, 64, 256),
                         "powers": (0.5, 1.0, 2.0, 3.0), "target_degree": 30},
    "distributions-preview": {},
}

_SIZE_DEFAULTS = {  # (train, test) per (experiment, d)
    ("approx-rates", 1): (8000, 2000),
    ("approx-rates", 2): (10000, 2500),
}

_DESCRIPTIONS = {
    "approx-rates": "test error vs model degree for full, invariant and sym-projected fits",
    "quad-sweep": "symmetrization error vs quadrature degree of the augmentation rule",
    "random-sweep": "symmetrization error vs number of random augmentation rotations",
    "compare": "quadrature vs random augmentation on a common rotation budget",
    "drift": "angular-momentum drift and hitting times under perturbed potentials",
    "regularity-sweep": "random-augmentation error across target smoothness classes",
    "distributions-preview": "raw samples from each named data distribution",
}

_REQUIRED = {
    "approx-rates": ("d",),
    "quad-sweep": ("d",),
    "random-sweep": ("d",),
    "compare": ("d",),
    "drift": ("eps_list",),
    "regularity-sweep": ("d",),
    "distributions-preview": ("d",),
}


def _parse_tuple(text, conv):
    parts = text.replace(",", " ").split()
    return tuple(conv(p) for p in parts)


def config_from_items(experiment: str, name: str, items: dict) -> ExperimentConfig:
    """Build and validate a config from raw string key/value pairs."""
    if experiment not in _DEFAULTS:
        raise ConfigError(f"unknown experiment {experiment!r}; choose from "
                          + ", ".join(sorted(_DEFAULTS)))
    known = {f.name for f in fields(ExperimentConfig)} - {"experiment", "name"}
    values = dict(_DEFAULTS[experiment])
    for key, raw in items.items():
        if key not in known:
            raise ConfigError(f"[{name}] unknown field {key!r}")
        try:
            if key in _INT_TUPLE:
                values[key] = _parse_tuple(raw, int)
            elif key in _FLOAT_TUPLE:
                values[key] = _parse_tuple(raw, float)
            elif key in _INTS:
                values[key] = int(raw)
            elif key in _FLOATS:
                values[key] = float(raw)
            else:
                values[key] = raw
        except ValueError as exc:
            raise ConfigError(f"[{name}] field {key!r}: cannot parse {raw!r}") from exc
    cfg = _apply_size_defaults(ExperimentConfig(experiment=experiment, name=name, **values))
    _validate(cfg)
    return cfg


def _validate(cfg: ExperimentConfig):
    for key in _REQUIRED[cfg.experiment]:
        if not getattr(cfg, key):
            raise ConfigError(f"[{cfg.name}] missing required field {key!r}")
    exp = cfg.experiment
    if exp != "drift":
        if cfg.d not in (1, 2):
            raise ConfigError(f"[{cfg.name}] field 'd' must be 1 or 2")
    if cfg.trials < 1:
        raise ConfigError(f"[{cfg.name}] field 'trials' must be >= 1")
    if exp in ("approx-rates", "quad-sweep", "random-sweep", "compare", "regularity-sweep"):
        if not cfg.degrees:
            raise ConfigError(f"[{cfg.name}] field 'degrees' must be non-empty")
        if cfg.train_size < 1:
            raise ConfigError(f"[{cfg.name}] field 'train_size' must be >= 1")
        if cfg.test_size < 1:
            raise ConfigError(f"[{cfg.name}] field 'test_size' must be >= 1")
        DistributionSpec(cfg.d, cfg.distribution, cfg.kappa, cfg.sigma)
    if exp in ("random-sweep", "regularity-sweep") and not cfg.t_list:
        raise ConfigError(f"[{cfg.name}] field 't_list' must be non-empty")
    if exp in ("quad-sweep", "compare") and not cfg.quad_degrees:
        raise ConfigError(f"[{cfg.name}] field 'quad_degrees' must be non-empty")
    if exp == "regularity-sweep" and not cfg.powers:
        raise ConfigError(f"[{cfg.name}] field 'powers' must be non-empty")
    if exp == "drift":
        if cfg.steps < 1:
            raise ConfigError(f"[{cfg.name}] field 'steps' must be >= 1")
        if cfg.dt <= 0:
            raise ConfigError(f"[{cfg.name}] field 'dt' must be > 0")
    if cfg.cutoff != "auto":
        try:
            float(cfg.cutoff)
        except ValueError:
            raise ConfigError(f"[{cfg.name}] field 'cutoff' must be 'auto' or a number")


def _apply_size_defaults(cfg: ExperimentConfig) -> ExperimentConfig:
    train, test = cfg.train_size, cfg.test_size
    if (train, test) == (0, 0) and (cfg.experiment, cfg.d) in _SIZE_DEFAULTS:
        train, test = _SIZE_DEFAULTS[(cfg.experiment, cfg.d)]
    return replace(cfg, train_size=train, test_size=test)


def load_configs(path) -> list[ExperimentConfig]:
    """Parse an INI file: one section per experiment, `[id]` or `[id.variant]`."""
    if not os.path.isfile(path):
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    if not parser.sections():
        raise ConfigError(f"{path}: no experiment sections")
    out = []
    for section in parser.sections():
        experiment = section.split(".", 1)[0]
        out.append(config_from_items(experiment, section, dict(parser.items(section))))
    return out


def list_experiments() -> list[tuple[str, str]]:
    """(id, description) pairs for every available experiment."""
    return [(key, _DESCRIPTIONS[key]) for key in sorted(_DEFAULTS)]


# ---------------------------------------------------------------------------
# Result tables
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return repr(float(value))


@dataclass
class ResultTable:
    """Aggregated metric rows keyed by the sweep variable."""

    experiment: str
    name: str
    provenance: dict
    rows: list = field(default_factory=list)

    def add(self, sweep, metric: str, values) -> None:
        vals = np.asarray(values, dtype=float)
        std = 0.0 if vals.size == 1 else float(vals.std())
        self.rows.append((sweep, metric, float(vals.mean()), std, int(vals.size)))

    def sorted_rows(self) -> list:
        return sorted(self.rows, key=lambda r: (r[0], r[1]))

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(f"# experiment={self.experiment}\n")
            fh.write(f"# name={self.name}\n")
            for key in sorted(self.provenance):
                fh.write(f"# {key}={self.provenance[key]}\n")
            fh.write("sweep,metric,mean,std,trials\n")
            for sweep, metric, mean, std, trials in self.sorted_rows():
                fh.write(f"{_fmt(sweep)},{metric},{_fmt(mean)},{_fmt(std)},{trials}\n")

    def metric(self, name: str) -> dict:
        """sweep -> mean for one metric."""
        return {r[0]: r[2] for r in self.rows if r[1] == name}


def read_result_csv(path) -> ResultTable:
    provenance, rows = {}, []
    experiment = name = ""
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                if key == "experiment":
                    experiment = value
                elif key == "name":
                    name = value
                else:
                    provenance[key] = value
            elif line and not line.startswith("sweep,"):
                sweep, metric, mean, std, trials = line.split(",")
                rows.append((float(sweep), metric, float(mean), float(std), int(trials)))
    return ResultTable(experiment, name, provenance, rows)


def _config_hash(cfg: ExperimentConfig) -> str:
    text = "\n".join(f"{f.name}={getattr(cfg, f.name)!r}" for f in fields(ExperimentConfig))
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _new_table(cfg: ExperimentConfig) -> ResultTable:
    return ResultTable(cfg.experiment, cfg.name,
                       {"config_hash": _config_hash(cfg), "seed": cfg.seed,
                        "version": VERSION})


def _rng(seed: int, *path: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence((seed,) + path))


def _int_seed(seed: int, *path: int) -> int:
    return int(np.random.SeedSequence((seed,) + path).generate_state(1)[0])


_AUTO_CUTOFF = {(1, "dsUU"): 10.0 ** -4.5, (2, "dsUU"): 10.0 ** -3.4,
                (2, "dsH1sU"): 1e-5}


def _resolve_cutoff(cfg: ExperimentConfig) -> float:
    if cfg.cutoff == "auto":
        return _AUTO_CUTOFF.get((cfg.d, cfg.distribution), 0.0)
    return float(cfg.cutoff)


def _target_degree(cfg: ExperimentConfig) -> int:
    if cfg.target_degree > 0:
        return cfg.target_degree
    return 30 if cfg.d == 1 else 11


def _make_rule(d: int, degree: int):
    return so2_quadrature(degree + 1) if d == 1 else so3_quadrature_euler(degree)


# ---------------------------------------------------------------------------
# Runners
# ---------------------------------------------------------------------------

def run_approx_rates(cfg: ExperimentConfig) -> ResultTable:
    """Full / invariant / sym-projected test errors per model degree."""
    cfg = _apply_size_defaults(cfg)
    cutoff = _resolve_cutoff(cfg)
    dist = DistributionSpec(cfg.d, cfg.distribution, cfg.kappa, cfg.sigma)
    uniform = DistributionSpec(cfg.d, "UUU")
    target = make_target(cfg.d, ExponentialDecay(cfg.alpha), _target_degree(cfg),
                         _int_seed(cfg.seed, 1))
    table = _new_table(cfg)
    bases = {}
    results = {k: {name: [] for name in ("full", "invariant", "projected", "full_eps_sym")}
               for k in cfg.degrees}
    for trial in range(cfg.trials):
        train = sample_dataset(dist, cfg.train_size, _rng(cfg.seed, 2, trial), target)
        test = sample_dataset(uniform, cfg.test_size, _rng(cfg.seed, 3, trial), target)
        for k in cfg.degrees:
            basis = bases.setdefault(k, enumerate_basis(cfg.d, 3, k))
            sol_full = full_lsq(basis, train, cutoff)
            sol_inv = invariant_lsq(basis, train, cutoff)
            sol_proj = RegressionSolution(basis, sym_coeffs(sol_full.beta, basis),
                                          cutoff, sol_full.train_residual)
            results[k]["full"].append(l2_test_error(sol_full, target, test))
            results[k]["invariant"].append(l2_test_error(sol_inv, target, test))
            results[k]["projected"].append(l2_test_error(sol_proj, target, test))
            results[k]["full_eps_sym"].append(sol_full.eps_sym)
    for k in cfg.degrees:
        table.add(k, "full_error", results[k]["full"])
        table.add(k, "invariant_error", results[k]["invariant"])
        table.add(k, "projected_error", results[k]["projected"])
        table.add(k, "full_eps_sym", results[k]["full_eps_sym"])
        table.add(k, "target_tail", [target.tail_norm(k)])
    return table


def run_quad_sweep(cfg: ExperimentConfig) -> ResultTable:
    """eps_sym and test error vs quadrature degree, per model degree."""
    cfg = _apply_size_defaults(cfg)
    cutoff = _resolve_cutoff(cfg)
    dist = DistributionSpec(cfg.d, cfg.distribution, cfg.kappa, cfg.sigma)
    uniform = DistributionSpec(cfg.d, "UUU")
    target = make_target(cfg.d, ExponentialDecay(cfg.alpha), _target_degree(cfg),
                         _int_seed(cfg.seed, 1))
    table = _new_table(cfg)
    rules = {q: _make_rule(cfg.d, q) for q in cfg.quad_degrees}
    for k in cfg.degrees:
        basis = enumerate_basis(cfg.d, 3, k)
        eps = {q: [] for q in cfg.quad_degrees}
        err = {q: [] for q in cfg.quad_degrees}
        for trial in range(cfg.trials):
            train = sample_dataset(dist, cfg.train_size, _rng(cfg.seed, 2, trial), target)
            test = sample_dataset(uniform, cfg.test_size, _rng(cfg.seed, 3, trial), target)
            for q in cfg.quad_degrees:
                scheme = AugmentationScheme("quadrature", rule=rules[q])
                sol = augmented_lsq(basis, train, scheme, cutoff)
                eps[q].append(sol.eps_sym)
                err[q].append(l2_test_error(sol, target, test))
        for q in cfg.quad_degrees:
            table.add(q, f"eps_sym[K={k}]", eps[q])
            table.add(q, f"test_error[K={k}]", err[q])
            table.add(q, f"past_threshold[K={k}]", [1.0 if q >= k else 0.0])
    return table


def run_random_sweep(cfg: ExperimentConfig) -> ResultTable:
    """eps_sym (with Schur bound) vs number of random rotations."""
    cfg = _apply_size_defaults(cfg)
    cutoff = _resolve_cutoff(cfg)
    dist = DistributionSpec(cfg.d, cfg.distribution, cfg.kappa, cfg.sigma)
    uniform = DistributionSpec(cfg.d, "UUU")
    target = make_target(cfg.d, ExponentialDecay(cfg.alpha), _target_degree(cfg),
                         _int_seed(cfg.seed, 1))
    table = _new_table(cfg)
    for k in cfg.degrees:
        basis = enumerate_basis(cfg.d, 3, k)
        for ti, t in enumerate(cfg.t_list):
            eps, errs, bounds = [], [], []
            for trial in range(cfg.trials):
                train = sample_dataset(dist, cfg.train_size, _rng(cfg.seed, 2, trial), target)
                test = sample_dataset(uniform, cfg.test_size, _rng(cfg.seed, 3, trial), target)
                scheme = AugmentationScheme("random", t=t,
                                            seed=_int_seed(cfg.seed, 4, ti, trial))
                sol = augmented_lsq(basis, train, scheme, cutoff)
                eps.append(sol.eps_sym)
                errs.append(l2_test_error(sol, target, test))
                diag = schur_diagnostics(basis, train, scheme, sol)
                bounds.append(diag.bound if diag.available else math.nan)
            table.add(t, f"eps_sym[K={k}]", eps)
            table.add(t, f"test_error[K={k}]", errs)
            table.add(t, f"schur_bound[K={k}]", bounds)
    return table


def run_compare(cfg: ExperimentConfig) -> ResultTable:
    """Quadrature vs random augmentation on a shared rotation-count axis."""
    cfg = _apply_size_defaults(cfg)
    cutoff = _resolve_cutoff(cfg)
    dist = DistributionSpec(cfg.d, cfg.distribution, cfg.kappa, cfg.sigma)
    target = make_target(cfg.d, ExponentialDecay(cfg.alpha), _target_degree(cfg),
                         _int_seed(cfg.seed, 1))
    table = _new_table(cfg)
    for k in cfg.degrees:
        basis = enumerate_basis(cfg.d, 3, k)
        for qi, q in enumerate(cfg.quad_degrees):
            rule = _make_rule(cfg.d, q)
            budget = len(rule)
            quad_eps, rand_eps = [], []
            for trial in range(cfg.trials):
                train = sample_dataset(dist, cfg.train_size, _rng(cfg.seed, 2, trial), target)
                sol_q = augmented_lsq(basis, train,
                                      AugmentationScheme("quadrature", rule=rule), cutoff)
                sol_r = augmented_lsq(basis, train,
                                      AugmentationScheme("random", t=budget,
                                                         seed=_int_seed(cfg.seed, 5, qi, trial)),
                                      cutoff)
                quad_eps.append(sol_q.eps_sym)
                rand_eps.append(sol_r.eps_sym)
            q_mean = float(np.mean(quad_eps))
            r_mean = float(np.mean(rand_eps))
            ratio = RATIO_CAP if q_mean < 1e-10 else min(r_mean / q_mean, RATIO_CAP)
            table.add(budget, f"quad_eps_sym[K={k}]", quad_eps)
            table.add(budget, f"random_eps_sym[K={k}]", rand_eps)
            table.add(budget, f"ratio[K={k}]", [ratio])
    return table


def run_drift(cfg: ExperimentConfig, write_trajectories: bool = True) -> ResultTable:
    """Angular-momentum drift per perturbation strength; emits trajectory CSVs."""
    table = _new_table(cfg)
    theta0 = np.array([0.1, 2.2, 4.0])
    p0 = np.array([0.3, -0.1, -0.2])  # sums to zero
    inits = [(theta0, p0)]
    for trial in range(1, cfg.trials):
        rng = _rng(cfg.seed, 6, trial)
        th = rng.uniform(0.0, 2.0 * math.pi, 3)
        mo = rng.normal(size=3)
        mo -= mo.mean()  # vanishing initial total angular momentum
        inits.append((th, mo))
    outdir = None
    if write_trajectories:
        outdir = os.path.join(cfg.outdir, cfg.experiment)
        os.makedirs(outdir, exist_ok=True)
    for eps in cfg.eps_list:
        pot = default_potential(eps)
        traj = simulate_batch(pot, np.stack([i[0] for i in inits]),
                              np.stack([i[1] for i in inits]),
                              cfg.dt, cfg.steps, cfg.record_every)
        if traj.aborted:
            raise NumericalAbort(f"drift run eps={eps:g} became non-finite")
        if outdir is not None:
            for trial in range(cfg.trials):
                single = Trajectory(traj.steps, traj.times,
                                    traj.angular_momentum[trial], traj.energy[trial])
                write_trajectory_csv(single, os.path.join(
                    outdir, f"{cfg.name}_eps{eps:g}_trial{trial}.csv"))
        for target in cfg.hit_targets:
            hits = []
            for trial in range(cfg.trials):
                idx = hitting_time(traj.angular_momentum[trial], target)
                hits.append(math.nan if idx is None else float(traj.steps[idx]))
            table.add(eps, f"hit_step[target={target:g}]", hits)
        table.add(eps, "max_abs_J", np.abs(traj.angular_momentum).max(axis=1))
    return table


def regularity_target(d: int, power: float, degree: int, seed: int):
    """Target of smoothness class p: truncation tail decaying like K^-p.

    On the two-parameter invariant index lattice the shell at total degree s
    carries O(s) coefficients, so the coefficient envelope needs one extra
    power for the l2 tail to scale as K^-p.
    """
    return make_target(d, AlgebraicDecay(power + 1.0), degree, seed)


def run_regularity_sweep(cfg: ExperimentConfig) -> ResultTable:
    """Random-augmentation eps_sym across algebraic smoothness classes."""
    cfg = _apply_size_defaults(cfg)
    cutoff = _resolve_cutoff(cfg)
    dist = DistributionSpec(cfg.d, cfg.distribution, cfg.kappa, cfg.sigma)
    table = _new_table(cfg)
    for pi, power in enumerate(cfg.powers):
        target = regularity_target(cfg.d, power, _target_degree(cfg),
                                   _int_seed(cfg.seed, 1, pi))
        for k in cfg.degrees:
            basis = enumerate_basis(cfg.d, 3, k)
            for ti, t in enumerate(cfg.t_list):
                eps = []
                for trial in range(cfg.trials):
                    train = sample_dataset(dist, cfg.train_size,
                                           _rng(cfg.seed, 2, trial), target)
                    scheme = AugmentationScheme("random", t=t,
                                                seed=_int_seed(cfg.seed, 7, pi, ti, trial))
                    eps.append(augmented_lsq(basis, train, scheme, cutoff).eps_sym)
                table.add(t, f"eps_sym[K={k},p={power:g}]", eps)
    return table


def run_distributions_preview(cfg: ExperimentConfig) -> ResultTable:
    """Dump raw samples of every distribution defined for this d."""
    table = _new_table(cfg)
    names = ("UUU", "dUU", "dsUU") if cfg.d == 1 else ("UUU", "dUU", "dsUU", "dH1U", "dsH1sU")
    outdir = os.path.join(cfg.outdir, cfg.experiment)
    os.makedirs(outdir, exist_ok=True)
    for i, name in enumerate(names):
        spec = DistributionSpec(cfg.d, name, cfg.kappa, cfg.sigma)
        data = sample_dataset(spec, cfg.preview_size, _rng(cfg.seed, 8, i))
        export_dataset(data, os.path.join(outdir, f"{cfg.name}_{name}.csv"))
        table.add(i, f"n_samples[{name}]", [float(data.n)])
    return table


_RUNNERS = {
    "approx-rates": run_approx_rates,
    "quad-sweep": run_quad_sweep,
    "random-sweep": run_random_sweep,
    "compare": run_compare,
    "drift": run_drift,
    "regularity-sweep": run_regularity_sweep,
    "distributions-preview": run_distributions_preview,
}

_PLOT_KIND = {
    "approx-rates": "semilogy",
    "quad-sweep": "semilogy",
    "random-sweep": "loglog",
    "compare": "loglog",
    "drift": "loglog",
    "regularity-sweep": "loglog",
    "distributions-preview": "semilogy",
}


def run_experiment(cfg: ExperimentConfig) -> ResultTable:
    return _RUNNERS[cfg.experiment](cfg)


def run_config_file(path, outdir_override=None) -> list[str]:
    """Run every section of a config file; returns the paths written."""
    written = []
    for cfg in load_configs(path):
        if outdir_override:
            cfg = replace(cfg, outdir=outdir_override)
        table = run_experiment(cfg)
        exp_dir = os.path.join(cfg.outdir, cfg.experiment)
        os.makedirs(exp_dir, exist_ok=True)
        csv_path = os.path.join(exp_dir, f"{cfg.name}.csv")
        table.to_csv(csv_path)
        written.append(csv_path)
        svg_path = os.path.join(exp_dir, f"{cfg.name}.svg")
        if emit_plot(table, _PLOT_KIND[cfg.experiment], svg_path) is not None:
            written.append(svg_path)
    return written


# ---------------------------------------------------------------------------
# SVG plots
# ---------------------------------------------------------------------------

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")
_FLOOR = 1e-16
_W, _H = 720, 480
_ML, _MR, _MT, _MB = 80, 180, 24, 56


def _svg_coord(v: float) -> str:
    return f"{v:.3f}"


def emit_plot(table: ResultTable, kind: str = "semilogy", path=None):
    """Log-scale line plot of a result table, one polyline per metric.

    Values at or below zero are clamped to a 1e-16 floor and flagged with a
    square marker.  Output bytes depend only on the table contents; an empty
    table produces a warning and no file.
    """
    metrics = {}
    for sweep, metric, mean, std, _ in table.sorted_rows():
        metrics.setdefault(metric, []).append((float(sweep), mean, std))
    metrics = {k: v for k, v in metrics.items() if v}
    if not metrics:
        print(f"emit_plot: table {table.name!r} is empty, no plot written", file=sys.stderr)
        return None

    xs = sorted({x for pts in metrics.values() for (x, _, _) in pts})
    logx = kind == "loglog" and min(xs) > 0.0

    def tx(x):
        lo, hi = (math.log10(xs[0]), math.log10(xs[-1])) if logx else (xs[0], xs[-1])
        span = (hi - lo) or 1.0
        v = math.log10(x) if logx else x
        return _ML + (_W - _ML - _MR) * (v - lo) / span

    clamped = []
    ys = []
    for pts in metrics.values():
        for (_, mean, std) in pts:
            ys.append(max(mean, _FLOOR))
            ys.append(max(mean + std, _FLOOR))
            ys.append(max(mean - std, _FLOOR))
    ylo = math.floor(math.log10(min(ys)))
    yhi = math.ceil(math.log10(max(ys))) or ylo + 1
    if yhi == ylo:
        yhi = ylo + 1

    def ty(y):
        v = math.log10(max(y, _FLOOR))
        return _H - _MB - (_H - _MB - _MT) * (v - ylo) / (yhi - ylo)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
             f'viewBox="0 0 {_W} {_H}">',
             f'<rect width="{_W}" height="{_H}" fill="white"/>']
    # axes
    parts.append(f'<line x1="{_ML}" y1="{_H - _MB}" x2="{_W - _MR}" y2="{_H - _MB}" '
                 'stroke="black" stroke-width="1"/>')
    parts.append(f'<line x1="{_ML}" y1="{_MT}" x2="{_ML}" y2="{_H - _MB}" '
                 'stroke="black" stroke-width="1"/>')
    for dec in range(ylo, yhi + 1):
        y = ty(10.0 ** dec)
        parts.append(f'<line x1="{_ML - 4}" y1="{_svg_coord(y)}" x2="{_ML}" '
                     f'y2="{_svg_coord(y)}" stroke="black" stroke-width="1"/>')
        parts.append(f'<text x="{_ML - 8}" y="{_svg_coord(y + 4)}" text-anchor="end" '
                     f'font-size="11">1e{dec}</text>')
    for x in xs:
        px = tx(x)
        parts.append(f'<line x1="{_svg_coord(px)}" y1="{_H - _MB}" x2="{_svg_coord(px)}" '
                     f'y2="{_H - _MB + 4}" stroke="black" stroke-width="1"/>')
        label = f"{x:g}"
        parts.append(f'<text x="{_svg_coord(px)}" y="{_H - _MB + 18}" text-anchor="middle" '
                     f'font-size="11">{label}</text>')

    for i, (metric, pts) in enumerate(sorted(metrics.items())):
        color = _PALETTE[i % len(_PALETTE)]
        coords = []
        for (x, mean, std) in pts:
            px, py = tx(x), ty(max(mean, _FLOOR))
            coords.append(f"{_svg_coord(px)},{_svg_coord(py)}")
            if mean <= _FLOOR:
                clamped.append((px, py, color))
            if std > 0.0:
                y1 = ty(max(mean - std, _FLOOR))
                y2 = ty(max(mean + std, _FLOOR))
                parts.append(f'<line x1="{_svg_coord(px)}" y1="{_svg_coord(y1)}" '
                             f'x2="{_svg_coord(px)}" y2="{_svg_coord(y2)}" '
                             f'stroke="{color}" stroke-width="1"/>')
        parts.append(f'<polyline points="{" ".join(coords)}" fill="none" '
                     f'stroke="{color}" stroke-width="1.5"/>')
        ly = _MT + 14 * (i + 1)
        parts.append(f'<line x1="{_W - _MR + 8}" y1="{ly - 4}" x2="{_W - _MR + 28}" '
                     f'y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{_W - _MR + 32}" y="{ly}" font-size="11">{metric}</text>')
    for (px, py, color) in clamped:
        parts.append(f'<rect x="{_svg_coord(px - 3)}" y="{_svg_coord(py - 3)}" width="6" '
                     f'height="6" fill="none" stroke="{color}" stroke-width="1"/>')
    parts.append("</svg>")
    payload = "\n".join(parts) + "\n"
    if path is None:
        return payload
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(payload)
    return path
