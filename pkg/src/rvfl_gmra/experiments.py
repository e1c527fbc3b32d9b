"""Experiment configuration and drivers that write CSV, SVG and a run manifest."""

from __future__ import annotations

import csv
import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Callable

import numpy as np

from . import __version__
from .activation import available_activations, get_activation
from .domain import CompactDomain, EmbeddedSphere, test_function_exp_sum
from .gmra import gmra_build
from .manifold import MODES, relative_error_suite, train_manifold
from .montecarlo import loglog_slope, verify_mse_law
from .quadrature import gl_panels, parameter_integral_1d
from .rvfl import analytic_weights
from .sampler import ParamConfig, sample_nodes
from .svg import loglog_plot


def bump(x) -> np.ndarray:
    """exp(-1/(1 - t^2)) for |t| < 1 and 0 elsewhere, applied to the first coordinate."""
    t = np.asarray(x, dtype=float)[..., 0]
    out = np.zeros_like(t)
    inside = np.abs(t) < 1.0
    out[inside] = np.exp(-1.0 / (1.0 - t[inside] ** 2))
    return out


def identity(x) -> np.ndarray:
    """First coordinate of each point."""
    return np.asarray(x, dtype=float)[..., 0]


TARGETS: dict[str, Callable] = {
    "exp-sum": test_function_exp_sum,
    "bump": bump,
    "identity": identity,
    "zero": lambda x: np.zeros(np.asarray(x).shape[:-1]),
    "one": lambda x: np.ones(np.asarray(x).shape[:-1]),
}


def get_target(name: str) -> Callable:
    try:
        return TARGETS[name]
    except KeyError:
        raise ValueError(f"unknown target {name!r}; choose from {sorted(TARGETS)}") from None


def _strictly_increasing(xs) -> bool:
    return all(a < b for a, b in zip(xs[:-1], xs[1:]))


@dataclass(frozen=True)
class ExperimentConfig:
    """All knobs of the experiment drivers.

    The TOML layout groups keys into tables; see :meth:`from_dict`.
    """

    seed: int = 0
    threads: int = 1
    out_dir: str = "out"
    # sphere and GMRA
    ambient_dim: int = 20
    sphere_seed: int = 20_000
    n_points: int = 5_000
    d: int = 2
    j_max: int = 10
    levels: tuple[int, ...] = (6, 8, 10)
    # chart networks
    n_grid: tuple[int, ...] = (16, 32, 64, 128, 256, 512, 1024, 2048)
    alpha: float = 2.0
    omegas: tuple[float, ...] = (10.0, 15.0)
    activation: str = "sech"
    mode: str = "lsq"
    n_chart_train: int = 100
    ridge: float = 0.0
    n_test: int = 200
    n_seeds: int = 1
    # Monte-Carlo law
    mc_target: str = "identity"
    mc_bounds: tuple[tuple[float, float], ...] = ((0.0, 1.0),)
    mc_n_grid: tuple[int, ...] = (100, 1_000, 10_000)
    mc_trials: int = 10_000
    # one-dimensional analytic construction
    r1_target: str = "bump"
    r1_bounds: tuple[float, float] = (-1.0, 1.0)
    r1_alpha: float = 2.0
    r1_omega: float = 4.0
    r1_n_grid: tuple[int, ...] = (100, 1_000, 10_000)
    r1_n_seeds: int = 10

    def __post_init__(self):
        counts = {
            "threads": self.threads,
            "n_points": self.n_points,
            "d": self.d,
            "ambient_dim": self.ambient_dim,
            "n_chart_train": self.n_chart_train,
            "n_test": self.n_test,
            "n_seeds": self.n_seeds,
            "mc_trials": self.mc_trials,
            "r1_n_seeds": self.r1_n_seeds,
        }
        for k, v in counts.items():
            if int(v) != v or v < 1:
                raise ValueError(f"{k} must be a positive integer, got {v!r}")
        if self.j_max < 0:
            raise ValueError("j_max must be nonnegative")
        if not self.d < 3 <= self.ambient_dim:
            raise ValueError("need d < 3 <= ambient_dim for the embedded sphere")
        for name in ("n_grid", "mc_n_grid", "r1_n_grid"):
            g = getattr(self, name)
            if not g or any(int(n) != n or n < 1 for n in g):
                raise ValueError(f"{name} must list positive integers")
            if not _strictly_increasing(g):
                raise ValueError(f"{name} must be strictly increasing")
        if not self.levels or any(not 0 <= j <= self.j_max for j in self.levels):
            raise ValueError(f"levels must lie in 0..j_max={self.j_max}")
        if self.alpha <= 0 or self.r1_alpha <= 0:
            raise ValueError("alpha must be positive")
        if not self.omegas or any(o <= 0 for o in self.omegas) or self.r1_omega <= 0:
            raise ValueError("omega values must be positive")
        if self.activation not in available_activations():
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.ridge < 0:
            raise ValueError("ridge must be nonnegative")
        if self.mc_trials < 2:
            raise ValueError("mc_trials must be at least 2")
        get_target(self.mc_target)
        get_target(self.r1_target)
        if not self.r1_bounds[0] < self.r1_bounds[1]:
            raise ValueError("r1_bounds must be an increasing pair")
        CompactDomain.box(self.mc_bounds)

    # TOML table -> field prefix
    _TABLES = {
        "sphere": {"ambient_dim": "ambient_dim", "seed": "sphere_seed", "n_points": "n_points"},
        "gmra": {"d": "d", "j_max": "j_max", "levels": "levels"},
        "rvfl": {
            "n_grid": "n_grid",
            "alpha": "alpha",
            "omegas": "omegas",
            "activation": "activation",
            "mode": "mode",
            "n_chart_train": "n_chart_train",
            "ridge": "ridge",
        },
        "test": {"count": "n_test"},
        "figure1": {"n_seeds": "n_seeds"},
        "mc": {"target": "mc_target", "bounds": "mc_bounds", "n_grid": "mc_n_grid", "trials": "mc_trials"},
        "rvfl1d": {
            "target": "r1_target",
            "bounds": "r1_bounds",
            "alpha": "r1_alpha",
            "omega": "r1_omega",
            "n_grid": "r1_n_grid",
            "n_seeds": "r1_n_seeds",
        },
    }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        """Build from a nested mapping (the parsed TOML document).

        Top-level keys ``seed``, ``threads`` and ``out_dir`` plus the tables
        ``sphere``, ``gmra``, ``rvfl``, ``test``, ``figure1``, ``mc`` and
        ``rvfl1d``.  Unknown keys are rejected.
        """
        kw = {}
        for key, val in d.items():
            if key in cls._TABLES:
                if not isinstance(val, dict):
                    raise ValueError(f"[{key}] must be a table")
                for sub, v in val.items():
                    if sub not in cls._TABLES[key]:
                        raise ValueError(f"unknown key {key}.{sub}")
                    kw[cls._TABLES[key][sub]] = v
            elif key in ("seed", "threads", "out_dir"):
                kw[key] = val
            else:
                raise ValueError(f"unknown config key {key!r}")
        return cls(**_tupled(kw))

    @classmethod
    def from_toml(cls, path) -> "ExperimentConfig":
        try:
            import tomllib
        except ModuleNotFoundError:  # Python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            return cls.from_dict(tomllib.load(fh))

    def replace(self, **kw) -> "ExperimentConfig":
        return type(self)(**{**asdict(self), **_tupled(kw)})

    def digest(self) -> str:
        """SHA-256 of the canonical JSON form."""
        blob = json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()


def _tupled(kw: dict) -> dict:
    out = {}
    names = {f.name for f in fields(ExperimentConfig)}
    for k, v in kw.items():
        if k not in names:
            raise ValueError(f"unknown config field {k!r}")
        if isinstance(v, list):
            v = tuple(tuple(x) if isinstance(x, list) else x for x in v)
        out[k] = v
    return out


def write_manifest(out_dir: Path, cfg: ExperimentConfig, command: str, outputs: list[str]) -> Path:
    path = out_dir / f"{command}.manifest.json"
    doc = {
        "command": command,
        "config_sha256": cfg.digest(),
        "seed": cfg.seed,
        "version": __version__,
        "config": asdict(cfg),
        "outputs": outputs,
    }
    path.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    return path


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])


def _ordered_map(fn, jobs, threads: int) -> list:
    """Map preserving job order, so the output never depends on scheduling."""
    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            return list(ex.map(fn, jobs))
    return [fn(j) for j in jobs]


def count_inversions(ys) -> int:
    """Number of consecutive increases in a sequence."""
    return int(sum(b > a for a, b in zip(ys[:-1], ys[1:])))


@dataclass
class Figure1Result:
    rows: list[tuple]  # (j, omega, n, seed, mean_rel_error, std_error)
    median: dict[tuple[int, float], list[float]] = field(default_factory=dict)
    n_grid: tuple[int, ...] = ()

    def plateau(self, j: int, omega: float) -> float:
        """Median error at the largest n."""
        return self.median[(j, omega)][-1]


def run_figure1(cfg: ExperimentConfig, out_dir=None) -> Figure1Result:
    """Sphere experiment: mean relative error against nodes per chart.

    Seeds ``cfg.seed .. cfg.seed + n_seeds - 1`` each draw their own training
    cloud, GMRA tree and test set.
    """
    sphere = EmbeddedSphere(cfg.ambient_dim, cfg.sphere_seed)
    f = test_function_exp_sum
    act = get_activation(cfg.activation, normalized=(cfg.mode == "analytic"))
    seeds = [cfg.seed + s for s in range(cfg.n_seeds)]
    depth = cfg.j_max
    prepared = {}
    for s in seeds:
        x = sphere.sample(cfg.n_points, s)
        tree = gmra_build(x, cfg.d, cfg.j_max, s)
        depth = min(depth, tree.depth)
        test = sphere.sample(cfg.n_test, s, stream=("sphere-test",))
        prepared[s] = (tree, test)
    # scale requested levels to the depth actually reached
    levels = sorted({min(j, depth) for j in cfg.levels})
    jobs = [(j, om, n, s) for j in levels for om in cfg.omegas for n in cfg.n_grid for s in seeds]

    def job(key):
        j, om, n, s = key
        tree, test = prepared[s]
        pc = ParamConfig(cfg.alpha, om, n, cfg.d)
        model = train_manifold(
            f, tree, j, pc, cfg.mode, s, act, cfg.ridge, n_train=cfg.n_chart_train
        )
        mu, rel = relative_error_suite(model, f, test)
        return (j, float(om), n, s, mu, float(rel.std(ddof=1) / math.sqrt(rel.size)) if rel.size > 1 else 0.0)

    rows = _ordered_map(job, jobs, cfg.threads)
    res = Figure1Result(rows, n_grid=tuple(cfg.n_grid))
    for j in levels:
        for om in cfg.omegas:
            res.median[(j, float(om))] = [
                float(np.median([r[4] for r in rows if r[0] == j and r[1] == om and r[2] == n])) for n in cfg.n_grid
            ]
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "figure1.csv", ["j", "omega", "n", "seed", "mean_rel_error", "std_error"], rows)
        _write_csv(
            out / "figure1_median.csv",
            ["j", "omega", "n", "median_rel_error"],
            [(j, om, n, m) for (j, om), ms in res.median.items() for n, m in zip(cfg.n_grid, ms)],
        )
        series = {f"j={j}, Omega={om:g}": (list(cfg.n_grid), ms) for (j, om), ms in res.median.items()}
        svg = loglog_plot(series, "nodes per chart n", "mean relative error", "sphere experiment (median over seeds)")
        (out / "figure1.svg").write_text(svg)
        write_manifest(out, cfg, "figure1", ["figure1.csv", "figure1_median.csv", "figure1.svg"])
    return res


def _mc_reference(name: str, K: CompactDomain):
    """Exact integral and variance where they are known in closed form, else ``None``."""
    if K.kind != "box":
        return None, None
    if name == "identity":
        a, b = float(K.lower[0]), float(K.upper[0])
        return K.volume * 0.5 * (a + b), (b - a) ** 2 / 12.0
    if name in ("zero", "one"):
        return K.volume * (name == "one"), 0.0
    return None, None


@dataclass
class MCVerifyResult:
    rows: list
    slope: float


def run_mc_verify(cfg: ExperimentConfig, out_dir=None) -> MCVerifyResult:
    f = get_target(cfg.mc_target)
    K = CompactDomain.box(cfg.mc_bounds)
    exact, var = _mc_reference(cfg.mc_target, K)
    rows = verify_mse_law(f, K, cfg.mc_n_grid, cfg.mc_trials, cfg.seed, exact=exact, sigma_sq=var)
    good = [r for r in rows if r.mse_emp > 0]
    slope = loglog_slope([r.n for r in good], [r.mse_emp for r in good]) if len(good) >= 2 else math.nan
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "mc_verify.csv", ["n", "mse_emp", "mse_pred", "ratio"], rows)
        ns = [r.n for r in rows]
        svg = loglog_plot(
            {"empirical": (ns, [r.mse_emp for r in rows]), "vol^2 sigma^2 / n": (ns, [r.mse_pred for r in rows])},
            "samples n",
            "mean-square error",
            f"Monte-Carlo error law, target {cfg.mc_target}",
            note=f"fitted slope {slope:.3f}",
        )
        (out / "mc_verify.svg").write_text(svg)
        write_manifest(out, cfg, "mc-verify", ["mc_verify.csv", "mc_verify.svg"])
    return MCVerifyResult(rows, slope)


@dataclass
class RVFL1DResult:
    rows: list[tuple]  # (n, seed, l2_sq)
    median: list[float]
    slope: float


def run_rvfl_1d(cfg: ExperimentConfig, out_dir=None) -> RVFL1DResult:
    """Squared L2 distance between the analytic network and its limit, in 1-D.

    The limit ``I(x;1)`` comes from deterministic quadrature; the L2 norm is a
    Gauss-Legendre sum over the same nodes.
    """
    f = get_target(cfg.r1_target)
    a, b = cfg.r1_bounds
    K = CompactDomain.box([[a, b]])
    act = get_activation(cfg.activation, normalized=True)
    base = ParamConfig(cfg.r1_alpha, cfg.r1_omega, 1, 1)
    xq, wq = gl_panels(a, b, (b - a) / 24, order=16)
    ref = parameter_integral_1d(f, base, K, act, xq)
    jobs = [(n, cfg.seed + s) for n in cfg.r1_n_grid for s in range(cfg.r1_n_seeds)]

    def job(key):
        n, s = key
        pc = ParamConfig(cfg.r1_alpha, cfg.r1_omega, n, 1)
        net = analytic_weights(f, pc, K, sample_nodes(pc, K, s), act)
        return (n, s, float(wq @ (ref - net(xq[:, None])) ** 2))

    rows = _ordered_map(job, jobs, cfg.threads)
    med = [float(np.median([r[2] for r in rows if r[0] == n])) for n in cfg.r1_n_grid]
    slope = loglog_slope(cfg.r1_n_grid, med) if len(med) >= 2 else math.nan
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_csv(out / "rvfl_1d.csv", ["n", "seed", "l2_sq_error"], rows)
        _write_csv(out / "rvfl_1d_median.csv", ["n", "median_l2_sq_error"], zip(cfg.r1_n_grid, med))
        svg = loglog_plot(
            {"median over seeds": (list(cfg.r1_n_grid), med)},
            "nodes n",
            "squared L2 error",
            f"analytic RVFL, target {cfg.r1_target}",
            note=f"fitted slope {slope:.3f}",
        )
        (out / "rvfl_1d.svg").write_text(svg)
        write_manifest(out, cfg, "rvfl-1d", ["rvfl_1d.csv", "rvfl_1d_median.csv", "rvfl_1d.svg"])
    return RVFL1DResult(rows, med, slope)
