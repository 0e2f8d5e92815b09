"""Command-line surface: distances, Gram matrices, generators, studies.

Exit codes: 0 success, 1 usage error, 2 input validation error, 3 internal
refusal (oracle size guards).  All numeric output uses round-half-even
formatting at 12 significant digits; CSVs use comma separators and LF line
endings, so repeated runs with the same flags are byte-identical.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .errors import SizeLimitError, ValidationError
from .fg2d import fg2d
from .kernel import GramMatrix, distance_power_matrix, kernel_matrix_from_powers, suggest_sigmas
from .measures import PersistenceMeasure, load_measure, pers_infty, save_measure
from .sliced import (
    SfgConfig,
    _approx_pow_at_nodes,
    _event_pool,
    _exact_pow_cont,
    _exact_pow_orth,
    _support_range,
    quadrature_nodes,
    sfg,
    sfg_approx,
    sfg_exact,
)
from .synth import OrbitParams, gen_dirac_family, gen_grid_family, gen_orbit, gen_uniform, save_orbit
from .rng import Xoshiro256StarStar


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


class _Parser(argparse.ArgumentParser):
    """ArgumentParser that exits with code 1 on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _order(text: str) -> float:
    value = float(text)
    if value < 1:
        raise argparse.ArgumentTypeError("p must be >= 1")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _nonneg_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok]


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok]


def _add_distance_flags(parser, include_k=True):
    parser.add_argument("--p", type=_order, default=1.0, help="distance order (>= 1)")
    parser.add_argument("--variant", choices=("orth", "cont"), default="orth")
    parser.add_argument("--mode", choices=("exact", "approx"), default="exact")
    if include_k:
        parser.add_argument("--k", type=_positive_int, default=100, help="sample count (approx mode)")
    parser.add_argument(
        "--sampling",
        choices=("uniform-midpoint", "uniform-random", "kde"),
        default="uniform-midpoint",
    )
    parser.add_argument("--seed", type=int, default=0)


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in row) + "\n")


def _write_matrix(path, values: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in values:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


# ---------------------------------------------------------------------------
# parallel pairwise work


def _pair_power_task(task):
    a, b, cfg, nodes = task
    if nodes is None:
        if cfg.variant == "orth":
            return _exact_pow_orth(a, b, cfg.p)
        return _exact_pow_cont(a, b, cfg.p)
    ts, ws = nodes
    return _approx_pow_at_nodes(a, b, cfg, ts, ws)


def _power_matrix(ms, cfg: SfgConfig, threads: int):
    """Pairwise power matrix with the shared-grid contract, optionally parallel."""
    n = len(ms)
    nodes = None
    grid = None
    if cfg.mode == "approx":
        t_range = cfg.t_range or _support_range(ms)
        if t_range is None:
            return np.zeros((n, n)), np.empty(0)
        ts, ws = quadrature_nodes(cfg, t_range[0], t_range[1], _event_pool(ms))
        nodes = (ts, ws)
        grid = np.asarray(ts)
    index_pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    tasks = [(ms[i], ms[j], cfg, nodes) for i, j in index_pairs]
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            powers = list(pool.map(_pair_power_task, tasks, chunksize=8))
    else:
        powers = [_pair_power_task(task) for task in tasks]
    out = np.zeros((n, n))
    for (i, j), value in zip(index_pairs, powers):
        out[i, j] = out[j, i] = value
    return out, grid


# ---------------------------------------------------------------------------
# commands


def cmd_dist(args) -> int:
    a = load_measure(args.file_a)
    b = load_measure(args.file_b)
    cfg = SfgConfig(
        p=args.p,
        variant=args.variant,
        mode=args.mode,
        k=args.k,
        sampling=args.sampling,
        seed=args.seed,
    )
    print(_fmt(sfg(a, b, cfg)))
    return 0


def _collect_inputs(inputs) -> list[Path]:
    paths: list[Path] = []
    for item in inputs:
        p = Path(item)
        if p.is_dir():
            paths.extend(sorted(p.glob("*.csv")))
        else:
            paths.append(p)
    if not paths:
        raise ValidationError("no diagram files found")
    return paths


def cmd_gram(args) -> int:
    paths = _collect_inputs(args.inputs)
    ms = [load_measure(p) for p in paths]
    cfg = SfgConfig(
        p=args.p,
        variant=args.variant,
        mode=args.mode,
        k=args.k,
        sampling=args.sampling,
        seed=args.seed,
    )
    power, grid = _power_matrix(ms, cfg, args.threads)
    power_gram = GramMatrix(
        values=power, kind="distance-power", p=args.p, variant=args.variant,
        mode=args.mode, grid=grid,
    )
    out = Path(args.out)
    if args.distances:
        _write_matrix(out, power_gram.values)
        return 0
    if not 1 <= args.p <= 2:
        raise ValidationError("kernel matrices require 1 <= p <= 2; use --distances for larger p")
    if args.sigma == "auto":
        candidates = suggest_sigmas(power_gram)
        manifest_rows = []
        for idx, sigma in enumerate(candidates):
            target = out.with_name(f"{out.stem}_s{idx:02d}{out.suffix or '.csv'}")
            _write_matrix(target, kernel_matrix_from_powers(power_gram, sigma).values)
            manifest_rows.append((idx, float(sigma), str(target)))
        manifest = out.with_name(f"{out.stem}_manifest.csv")
        _write_csv(manifest, ("index", "sigma", "path"), manifest_rows)
    else:
        try:
            sigma = float(args.sigma)
        except ValueError:
            raise ValidationError(f"--sigma must be a positive number or 'auto', got {args.sigma!r}")
        if sigma <= 0:
            raise ValidationError("--sigma must be positive")
        _write_matrix(out, kernel_matrix_from_powers(power_gram, sigma).values)
    return 0


def _stability_bound(a, b, p, fg_value, matching) -> float:
    if p == 1.0:
        return 3.0 * fg_value
    transport = matching.offdiagonal_transport_cost(a, b)
    m_inf = max(pers_infty(a), pers_infty(b))
    return (fg_value**p + 2.0 * m_inf ** (p - 1.0) * transport) ** (1.0 / p)


def _bounds_pairs(args):
    if args.generator == "uniform":
        rng = Xoshiro256StarStar(args.seed)
        for idx in range(args.n_pairs):
            sa = rng.next_u64()
            sb = rng.next_u64()
            yield idx, gen_uniform(args.points, sa), gen_uniform(args.points, sb)
    elif args.generator == "grid":
        for idx in range(args.n_pairs):
            a, b = gen_grid_family(idx + 2, max(args.p_list))
            yield idx, a, b
    else:  # dirac
        for idx in range(args.n_pairs):
            a, b = gen_dirac_family(idx + 2)
            yield idx, a, b


def cmd_study_bounds(args) -> int:
    rows = []
    pairs = list(_bounds_pairs(args))
    for p in args.p_list:
        for idx, a, b in pairs:
            sliced_value = sfg_exact(a, b, p, "orth")
            fg_value, matching = fg2d(a, b, p)
            bound = _stability_bound(a, b, p, fg_value, matching)
            ratio = sliced_value / bound if bound > 0 else 0.0
            rows.append(
                {
                    "p": p, "pair": idx, "n_a": len(a), "n_b": len(b),
                    "sfg": sliced_value, "fg": fg_value, "bound": bound, "ratio": ratio,
                }
            )
    header = ("p", "pair", "n_a", "n_b", "sfg", "fg", "bound", "ratio")
    _write_csv(args.out, header, [tuple(row[h] for h in header) for row in rows])
    if not args.no_fig:
        from .figures import render_bounds_figure

        render_bounds_figure(rows, Path(args.out).with_suffix(".png"))
    return 0


def cmd_study_convergence(args) -> int:
    rng = Xoshiro256StarStar(args.seed)
    rows = []
    for trial in range(args.n_trials):
        a = gen_uniform(args.points, rng.next_u64())
        b = gen_uniform(args.points, rng.next_u64())
        node_seed = rng.next_u64()
        exact = sfg_exact(a, b, args.p, "orth")
        for sampling in args.sampling_list:
            for k in args.k_list:
                cfg = SfgConfig(
                    p=args.p, variant="orth", mode="approx",
                    k=k, sampling=sampling, seed=node_seed,
                )
                approx = sfg_approx(a, b, cfg)
                ratio = approx / exact if exact > 0 else 0.0
                rows.append(
                    {
                        "sampling": sampling, "k": k, "trial": trial,
                        "approx": approx, "exact": exact, "ratio": ratio,
                    }
                )
    header = ("sampling", "k", "trial", "approx", "exact", "ratio")
    _write_csv(args.out, header, [tuple(row[h] for h in header) for row in rows])
    if not args.no_fig:
        from .figures import render_convergence_figure

        render_convergence_figure(rows, Path(args.out).with_suffix(".png"))
    return 0


def cmd_gen(args) -> int:
    if args.what == "uniform":
        m = gen_uniform(args.n, args.seed, tuple(args.box))
        save_measure(m, args.out)
    elif args.what == "grid":
        a, b = gen_grid_family(args.n, args.p)
        save_measure(a, _family_path(args.out, "a"))
        save_measure(b, _family_path(args.out, "b"))
    elif args.what == "dirac":
        a, b = gen_dirac_family(args.n)
        save_measure(a, _family_path(args.out, "a"))
        save_measure(b, _family_path(args.out, "b"))
    else:  # orbit
        points = gen_orbit(OrbitParams(r=args.r, n_points=args.n, seed=args.seed))
        save_orbit(points, args.out)
    return 0


def _family_path(prefix: str, tag: str) -> Path:
    p = Path(prefix)
    if p.suffix == ".csv":
        return p.with_name(f"{p.stem}_{tag}.csv")
    return Path(f"{prefix}_{tag}.csv")


def build_parser() -> _Parser:
    parser = _Parser(prog="slicedfg", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="distance between two diagram files")
    p_dist.add_argument("file_a")
    p_dist.add_argument("file_b")
    _add_distance_flags(p_dist)
    p_dist.set_defaults(func=cmd_dist)

    p_gram = sub.add_parser("gram", help="kernel or distance-power matrix for a corpus")
    p_gram.add_argument("inputs", nargs="+", help="diagram files or a directory of .csv files")
    _add_distance_flags(p_gram)
    p_gram.add_argument("--sigma", default="auto", help="bandwidth, or 'auto' for the quantile grid")
    p_gram.add_argument("--out", required=True)
    p_gram.add_argument("--distances", action="store_true", help="write the raw p-th-power distance matrix")
    p_gram.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1)
    p_gram.set_defaults(func=cmd_gram)

    p_bounds = sub.add_parser("study-bounds", help="ratio of the sliced distance to its stability bound")
    p_bounds.add_argument("--p-list", dest="p_list", type=_float_list, default=[1.0])
    p_bounds.add_argument("--n-pairs", dest="n_pairs", type=_positive_int, default=100)
    p_bounds.add_argument("--generator", choices=("uniform", "grid", "dirac"), default="uniform")
    p_bounds.add_argument("--points", type=_positive_int, default=100, help="points per uniform diagram")
    p_bounds.add_argument("--seed", type=int, default=0)
    p_bounds.add_argument("--out", required=True)
    p_bounds.add_argument("--no-fig", dest="no_fig", action="store_true")
    p_bounds.set_defaults(func=cmd_study_bounds)

    p_conv = sub.add_parser("study-convergence", help="approx/exact ratio against sample count")
    p_conv.add_argument("--k-list", dest="k_list", type=_int_list, default=[10, 100, 1000])
    p_conv.add_argument(
        "--sampling-list", dest="sampling_list",
        type=lambda s: [tok for tok in s.split(",") if tok],
        default=["uniform-midpoint", "kde"],
    )
    p_conv.add_argument("--n-trials", dest="n_trials", type=_positive_int, default=50)
    p_conv.add_argument("--points", type=_positive_int, default=100)
    p_conv.add_argument("--p", type=_order, default=1.0)
    p_conv.add_argument("--seed", type=int, default=0)
    p_conv.add_argument("--out", required=True)
    p_conv.add_argument("--no-fig", dest="no_fig", action="store_true")
    p_conv.set_defaults(func=cmd_study_convergence)

    p_gen = sub.add_parser("gen", help="synthetic diagram and orbit generators")
    gen_sub = p_gen.add_subparsers(dest="what", required=True)

    g_uniform = gen_sub.add_parser("uniform")
    g_uniform.add_argument("--n", type=_nonneg_int, required=True)
    g_uniform.add_argument("--seed", type=int, default=0)
    g_uniform.add_argument("--box", type=float, nargs=2, default=[0.0, 1.0], metavar=("LO", "HI"))
    g_uniform.add_argument("--out", required=True)
    g_uniform.set_defaults(func=cmd_gen)

    g_grid = gen_sub.add_parser("grid")
    g_grid.add_argument("--n", type=_positive_int, required=True)
    g_grid.add_argument("--p", type=_order, default=1.0)
    g_grid.add_argument("--out", required=True, help="prefix; writes <prefix>_a.csv and <prefix>_b.csv")
    g_grid.set_defaults(func=cmd_gen)

    g_dirac = gen_sub.add_parser("dirac")
    g_dirac.add_argument("--n", type=_positive_int, required=True)
    g_dirac.add_argument("--out", required=True, help="prefix; writes <prefix>_a.csv and <prefix>_b.csv")
    g_dirac.set_defaults(func=cmd_gen)

    g_orbit = gen_sub.add_parser("orbit")
    g_orbit.add_argument("--r", type=float, required=True)
    g_orbit.add_argument("--n", type=_positive_int, required=True)
    g_orbit.add_argument("--seed", type=int, default=0)
    g_orbit.add_argument("--out", required=True)
    g_orbit.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SizeLimitError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
