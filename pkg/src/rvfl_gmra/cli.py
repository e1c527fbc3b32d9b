"""Command-line entry point: ``rvfl-gmra <subcommand> [options]``."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .activation import available_activations, get_activation
from .domain import CompactDomain, sample_uniform
from .experiments import TARGETS, ExperimentConfig, get_target, run_figure1, run_mc_verify, run_rvfl_1d
from .gmra import accuracy_profile, cell_residual_profile, gmra_build
from .manifold import MODES, train_manifold
from .rvfl import RVFLNetwork, analytic_weights, l2_error, lsq_train
from .sampler import U_RANGES, ParamConfig, sample_nodes


def _parse_bounds(text: str) -> CompactDomain:
    """``"a:b,c:d"`` -> the box [a,b] x [c,d]."""
    try:
        pairs = [tuple(float(v) for v in part.split(":")) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad bounds {text!r}; expected a:b[,c:d...]") from None
    if any(len(p) != 2 for p in pairs):
        raise argparse.ArgumentTypeError(f"bad bounds {text!r}; expected a:b[,c:d...]")
    return CompactDomain.box(pairs)


def _read_points(path) -> np.ndarray:
    x = np.loadtxt(path, delimiter=",", ndmin=2)
    return x


def _write_values(path, x: np.ndarray, y: np.ndarray) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"x{i}" for i in range(x.shape[1])] + ["y"])
        for xi, yi in zip(x, y):
            w.writerow([repr(float(v)) for v in xi] + [repr(float(yi))])


def _out(args, name: str) -> Path:
    d = Path(args.out_dir)
    d.mkdir(parents=True, exist_ok=True)
    return d / name


def _config(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_toml(args.config) if args.config else ExperimentConfig()
    over = {}
    if args.seed is not None:
        over["seed"] = args.seed
    if args.threads is not None:
        over["threads"] = args.threads
    over["out_dir"] = args.out_dir
    return cfg.replace(**over)


def _rvfl_cfg(args, K: CompactDomain) -> ParamConfig:
    return ParamConfig(args.alpha, args.omega, args.n_nodes, K.dim, args.u_range)


def cmd_train_analytic(args) -> int:
    K = args.bounds
    cfg = _rvfl_cfg(args, K)
    seed = _config(args).seed
    act = get_activation(args.activation, normalized=True)
    net = analytic_weights(get_target(args.target), cfg, K, sample_nodes(cfg, K, seed), act)
    path = _out(args, args.output)
    io.save(net, path, alpha=cfg.alpha, omega=cfg.omega, L=cfg.L(K), seed=seed, mode="analytic")
    print(f"wrote {path}")
    return 0


def cmd_train_lsq(args) -> int:
    K = args.bounds
    cfg = _rvfl_cfg(args, K)
    seed = _config(args).seed
    act = get_activation(args.activation, normalized=False)
    nodes = sample_nodes(cfg, K, seed)
    x = sample_uniform(K, args.n_train, seed, stream=("lsq-train",))
    net = lsq_train(x, get_target(args.target)(x), nodes.w, nodes.b, act, args.ridge)
    path = _out(args, args.output)
    io.save(net, path, alpha=cfg.alpha, omega=cfg.omega, L=cfg.L(K), seed=seed, mode="lsq")
    print(f"wrote {path}")
    return 0


def _load_network(path) -> RVFLNetwork:
    obj = io.load(path)
    if not isinstance(obj, RVFLNetwork):
        raise SystemExit(f"{path} does not hold an RVFL network")
    return obj


def cmd_eval(args) -> int:
    net = _load_network(args.model)
    x = _read_points(args.points)
    y = np.atleast_1d(net(x))
    path = _out(args, args.output)
    _write_values(path, x, y)
    print(f"wrote {path}")
    return 0


def cmd_l2err(args) -> int:
    net = _load_network(args.model)
    est, se = l2_error(get_target(args.target), net, args.bounds, args.n_mc, _config(args).seed)
    print(json.dumps({"l2_sq_error": est, "std_error": se}))
    return 0


def cmd_mc_verify(args) -> int:
    cfg = _config(args)
    res = run_mc_verify(cfg, cfg.out_dir)
    for r in res.rows:
        print(f"n={r.n:>7d}  mse_emp={r.mse_emp:.4e}  mse_pred={r.mse_pred:.4e}  ratio={r.ratio:.4f}")
    print(f"slope {res.slope:.4f}")
    return 0


def cmd_gmra_build(args) -> int:
    x = _read_points(args.points)
    seed = _config(args).seed
    tree = gmra_build(x, args.d, args.jmax, seed)
    path = _out(args, args.output)
    io.save(tree, path)
    with open(_out(args, "gmra_profile.csv"), "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["j", "max_residual", "mean_residual"])
        for row in cell_residual_profile(tree):
            w.writerow([row[0], repr(row[1]), repr(row[2])])
    print(f"wrote {path} ({tree.depth + 1} levels)")
    return 0


def cmd_train_manifold(args) -> int:
    x = _read_points(args.points)
    tree = io.tree_from_dict(json.loads(Path(args.tree).read_text()), points=x)
    cfg = _config(args)
    pc = ParamConfig(args.alpha, args.omega, args.n_nodes, tree.intrinsic_dim)
    act = get_activation(args.activation, normalized=(args.mode == "analytic"))
    model = train_manifold(
        get_target(args.target), tree, args.level, pc, args.mode, cfg.seed, act, args.ridge,
        threads=cfg.threads, n_train=args.n_chart_train,
    )
    path = _out(args, args.output)
    io.save(model, path, alpha=pc.alpha, omega=pc.omega, n_nodes=pc.n_nodes, seed=cfg.seed, mode=args.mode)
    print(f"wrote {path}")
    return 0


def cmd_predict(args) -> int:
    model = io.load(args.model)
    x = _read_points(args.points)
    y = np.atleast_1d(model(x))
    path = _out(args, args.output)
    _write_values(path, x, y)
    print(f"wrote {path}")
    return 0


def cmd_figure1(args) -> int:
    cfg = _config(args)
    res = run_figure1(cfg, cfg.out_dir)
    for (j, om), med in res.median.items():
        print(f"j={j:>2d} Omega={om:g}: " + " ".join(f"{m:.3e}" for m in med))
    return 0


def cmd_rvfl_1d(args) -> int:
    cfg = _config(args)
    res = run_rvfl_1d(cfg, cfg.out_dir)
    for n, m in zip(cfg.r1_n_grid, res.median):
        print(f"n={n:>7d}  median_l2_sq={m:.4e}")
    print(f"slope {res.slope:.4f}")
    return 0


def _net_options(p: argparse.ArgumentParser, lsq: bool) -> None:
    p.add_argument("--target", choices=sorted(TARGETS), default="bump")
    p.add_argument("--bounds", type=_parse_bounds, default=_parse_bounds("-1:1"), help="box a:b[,c:d...]")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--omega", type=float, default=4.0)
    p.add_argument("--n-nodes", type=int, default=1000)
    p.add_argument("--u-range", choices=U_RANGES, default="full")
    p.add_argument("--activation", choices=available_activations(), default="sech")
    p.add_argument("--output", default="model.json")
    if lsq:
        p.add_argument("--n-train", type=int, default=2000)
        p.add_argument("--ridge", type=float, default=0.0)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML experiment configuration")
    common.add_argument("--seed", type=int, default=None, help="master seed (overrides the config)")
    common.add_argument("--out-dir", default="out", help="directory for every output file")
    common.add_argument("--threads", type=int, default=None, help="worker threads (results do not depend on it)")

    parser = argparse.ArgumentParser(prog="rvfl-gmra", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-analytic", parents=[common], help="closed-form output weights")
    _net_options(p, lsq=False)
    p.set_defaults(func=cmd_train_analytic)

    p = sub.add_parser("train-lsq", parents=[common], help="least-squares output weights")
    _net_options(p, lsq=True)
    p.set_defaults(func=cmd_train_lsq)

    p = sub.add_parser("eval", parents=[common], help="evaluate a saved network on CSV points")
    p.add_argument("--model", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--output", default="eval.csv")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("l2err", parents=[common], help="Monte-Carlo squared L2 error of a saved network")
    p.add_argument("--model", required=True)
    p.add_argument("--target", choices=sorted(TARGETS), default="bump")
    p.add_argument("--bounds", type=_parse_bounds, default=_parse_bounds("-1:1"))
    p.add_argument("--n-mc", type=int, default=100_000)
    p.set_defaults(func=cmd_l2err)

    p = sub.add_parser("mc-verify", parents=[common], help="Monte-Carlo mean-square-error law")
    p.set_defaults(func=cmd_mc_verify)

    p = sub.add_parser("gmra-build", parents=[common], help="build a GMRA tree from a CSV point cloud")
    p.add_argument("--points", required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--jmax", type=int, required=True)
    p.add_argument("--output", default="tree.json")
    p.set_defaults(func=cmd_gmra_build)

    p = sub.add_parser("train-manifold", parents=[common], help="one RVFL network per GMRA cell")
    p.add_argument("--tree", required=True)
    p.add_argument("--points", required=True, help="the CSV cloud the tree was built from")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--target", choices=sorted(TARGETS), default="exp-sum")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--omega", type=float, default=10.0)
    p.add_argument("--n-nodes", type=int, default=256)
    p.add_argument("--mode", choices=MODES, default="lsq")
    p.add_argument("--activation", choices=available_activations(), default="sech")
    p.add_argument("--ridge", type=float, default=0.0)
    p.add_argument("--n-chart-train", type=int, default=100)
    p.add_argument("--output", default="manifold.json")
    p.set_defaults(func=cmd_train_manifold)

    p = sub.add_parser("predict", parents=[common], help="evaluate a saved manifold model on CSV points")
    p.add_argument("--model", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--output", default="predict.csv")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("figure1", parents=[common], help="sphere error-versus-nodes experiment")
    p.set_defaults(func=cmd_figure1)

    p = sub.add_parser("rvfl-1d", parents=[common], help="1-D analytic construction, error versus nodes")
    p.set_defaults(func=cmd_rvfl_1d)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, io.FormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
