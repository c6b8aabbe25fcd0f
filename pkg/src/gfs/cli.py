"""Experiment runner: every library operation as a reproducible subcommand.

Each run writes <out>.csv and <out>.meta.json (parameters echoed in full,
defaults included); --json adds the report as <out>.json and --plot renders
<out>.png.  Identical invocations produce byte-identical files: numbers are
written in 17-significant-digit round-trip form and no timestamps or host
details appear anywhere.

Exit codes: 0 success, 2 usage error, 3 numerical precondition failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .bv import BVFunction, catalog, plateau
from .coeffs import coefficient_vector, fourier_coefficient
from .multipliers import (
    L2Sequence,
    MultiplierSeq,
    convergence_probe,
    decompose_inner_product,
    element_combo,
    max_prefix_integral,
    pairing_functional,
    plateau_pairing_experiment,
    poly_combo,
    ratio_sweep,
    weighted_coeff_norm,
    weighted_log_sum,
)
from .report import DiagnosticsReport, jsonable
from .subseq import (
    DEFAULT_SCAN_CAP,
    decay_series,
    parseval_prefix_series,
    select_subsequence,
    sqrtlog_admissible,
)
from .systems import parse_system


def _threads() -> int:
    raw = os.environ.get("GFS_THREADS", "1")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"GFS_THREADS must be an integer, got {raw!r}") from None
    if value < 1:
        raise ValueError(f"GFS_THREADS must be >= 1, got {value}")
    return value


def _pool_map(fn, items, threads: int):
    """Deterministic map: results in input order regardless of thread count."""
    if threads <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _load_json_arg(spec: str):
    if spec.startswith("@"):
        return json.loads(Path(spec[1:]).read_text(encoding="utf-8"))
    return json.loads(spec)


def _parse_function(spec: str) -> BVFunction:
    """Catalog name, inline JSON, or @file.json."""
    cat = catalog()
    if spec in cat:
        return cat[spec]
    if spec.startswith("{") or spec.startswith("@"):
        data = _load_json_arg(spec)
        name = Path(spec[1:]).stem if spec.startswith("@") else "inline"
        return BVFunction.from_json_dict(data, name=name)
    raise ValueError(f"unknown function {spec!r}; catalog names: {sorted(cat)}")


def _parse_multiplier(spec: str) -> MultiplierSeq:
    if spec.startswith("table:"):
        values = _load_json_arg(spec.split(":", 1)[1])
        return MultiplierSeq.from_table(values)
    return MultiplierSeq.parse(spec)


def _parse_sequence(spec: str, N: int, seed: int, alpha: float) -> L2Sequence:
    if spec.startswith("unit:"):
        return L2Sequence.unit_basis(int(spec.split(":", 1)[1]), N)
    if spec == "random":
        return L2Sequence.seeded_random(seed, N, alpha)
    if spec.startswith("table:"):
        values = _load_json_arg(spec.split(":", 1)[1])
        if len(values) < N:
            raise ValueError(f"sequence table has {len(values)} entries, {N} needed")
        return L2Sequence.from_values(values[:N])
    raise ValueError(f"cannot parse sequence spec {spec!r} (use unit:<k>, random, or table:@file)")


def _parse_n_list(spec: str) -> list[int]:
    try:
        values = [int(tok) for tok in spec.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"cannot parse size list {spec!r}") from None
    if not values:
        raise ValueError("size list is empty")
    return values


def _emit(args, columns, rows, results: dict, warning: str | None = None) -> int:
    out = Path(args.out)
    if str(out.parent) not in ("", "."):
        out.parent.mkdir(parents=True, exist_ok=True)
    params = {
        k: jsonable(v)
        for k, v in sorted(vars(args).items())
        if k not in ("func", "command")
    }
    params["gfs_threads"] = _threads()
    meta = {
        "command": args.command,
        "params": params,
        "results": jsonable(results),
        "version": __version__,
    }
    if warning is not None:
        meta["warning"] = warning
    report = DiagnosticsReport(columns=tuple(columns), rows=rows, metadata=meta, warning=warning)
    report.write_csv(f"{out}.csv")
    Path(f"{out}.meta.json").write_text(
        json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    if args.json:
        report.write_json(f"{out}.json")
    if args.plot:
        from . import plots

        plots.render(args.command, tuple(columns), rows, meta, f"{out}.png")
    return 0


# ---------------------------------------------------------------------------
# subcommand handlers
# ---------------------------------------------------------------------------


def _cmd_coeffs(args) -> int:
    system = parse_system(args.system)
    f = _parse_function(args.function)
    if args.out is None:
        args.out = f"{f.name}__{system.name}__N{args.N}"
    threads = _threads()
    if threads > 1:
        values = _pool_map(lambda n: fourier_coefficient(f, system, n), range(1, args.N + 1), threads)
        values = np.asarray(values)
        method = "closed-form-trig" if system.kind == "trig" else "exact-piecewise"
    else:
        vec = coefficient_vector(f, system, args.N)
        values, method = vec.values, vec.method
    rows = [(n + 1, float(c)) for n, c in enumerate(values)]
    bessel = float(np.sum(values * values))
    results = {
        "method": method,
        "bessel_sum": bessel,
        "square_integral": f.square_integral(),
        "total_variation": f.total_variation(),
    }
    return _emit(args, ("n", "coefficient"), rows, results)


def _cmd_gram(args) -> int:
    system = parse_system(args.system)
    N = args.N
    threads = _threads()

    def row(i):
        return [system.pair_integral(i, j) for j in range(1, N + 1)]

    matrix = np.array(_pool_map(row, range(1, N + 1), threads))
    rows = [(i + 1, j + 1, float(matrix[i, j])) for i in range(N) for j in range(N)]
    deviation = float(np.max(np.abs(matrix - np.eye(N))))
    return _emit(args, ("i", "j", "value"), rows, {"max_abs_deviation": deviation})


def _cmd_decay(args) -> int:
    system = parse_system(args.system)
    series = decay_series(system, args.N)
    rows = [(n + 1, float(v)) for n, v in enumerate(series)]
    results = {"max": float(np.max(series)), "argmax": int(np.argmax(series)) + 1}
    return _emit(args, ("n", "n_times_sup"), rows, results)


def _cmd_ratio(args) -> int:
    system = parse_system(args.system)
    d = _parse_multiplier(args.multiplier)
    n_list = _parse_n_list(args.n_list)
    a = _parse_sequence(args.sequence, max(n_list), args.seed, args.alpha)
    report = ratio_sweep(system, d, a, n_list, args.weight_mode)
    ratios = [r[3] for r in report.rows if r[3] is not None]
    results = {"max_ratio": max(ratios) if ratios else None}
    return _emit(args, report.columns, report.rows, results, warning=report.warning)


def _cmd_logsum(args) -> int:
    system = parse_system(args.system)
    f = _parse_function(args.function)
    d = _parse_multiplier(args.multiplier)
    S = weighted_log_sum(f, system, d, args.N, args.weight_mode)
    rows = [(n + 1, None, None, None, float(s), None) for n, s in enumerate(S)]
    results = {"S_final": float(S[-1])}
    return _emit(args, DiagnosticsReport.STANDARD_COLUMNS, rows, results)


def _cmd_converge(args) -> int:
    system = parse_system(args.system)
    f = _parse_function(args.function)
    d = _parse_multiplier(args.multiplier)
    n_list = _parse_n_list(args.n_list)
    report = convergence_probe(f, system, d, n_list, args.grid_size, args.weight_mode)
    gaps = [r[5] for r in report.rows]
    results = {
        "consistent_with_convergence": report.metadata["consistent_with_convergence"],
        "gaps": gaps,
        "S_final": report.rows[-1][4] if report.rows else None,
    }
    return _emit(args, report.columns, report.rows, results)


def _cmd_lemma(args) -> int:
    d1 = MultiplierSeq.constant(1.0)
    rows = []
    worst = 0.0
    for sys_name in ("trig", "walsh", "haar"):
        system = parse_system(sys_name)
        for fname, f in sorted(catalog().items()):
            combos = [element_combo(system, k) for k in range(1, args.elements + 1)]
            coeffs = coefficient_vector(f, system, args.elements)
            combos.append(
                poly_combo(system, d1, L2Sequence.from_values(coeffs.values, "coeffs"), args.elements)
            )
            for g in combos:
                dec = decompose_inner_product(f, g, args.n)
                worst = max(worst, abs(dec.residual))
                rows.append(
                    (fname, g.label, args.n, dec.lhs, dec.term1, dec.term2, dec.term3, dec.residual)
                )
    columns = ("function", "g", "n", "lhs", "term1", "term2", "term3", "residual")
    return _emit(args, columns, rows, {"max_abs_residual": worst, "cases": len(rows)})


def _cmd_plateau(args) -> int:
    f = plateau(args.n, args.i)
    rows = []
    m = len(f.nodes) - 1
    for idx, x in enumerate(f.nodes):
        left = f.left_vals[idx - 1] if idx >= 1 else None
        right = f.right_vals[idx] if idx < m else None
        rows.append((x, left, right))
    results = {
        "norm_A": f.norm_a(),
        "total_variation": f.total_variation(),
        "nodes": list(f.nodes),
        "function": f.to_json_dict(),
    }
    return _emit(args, ("node", "left", "right"), rows, results)


def _cmd_subseq(args) -> int:
    system = parse_system(args.system)
    selection = select_subsequence(system, args.K, args.scan_cap)
    rows = [
        (k + 1, selection.indices[k], selection.witnesses[k])
        for k in range(selection.K)
    ]
    return _emit(args, ("k", "n", "witness"), rows, {"selection": selection.to_json_dict()})


def _cmd_parseval(args) -> int:
    system = parse_system(args.system)
    series = parseval_prefix_series(system, args.x, args.N)
    rows = [(n + 1, float(v)) for n, v in enumerate(series)]
    results = {"final": float(series[-1]), "target": args.x, "gap": args.x - float(series[-1])}
    return _emit(args, ("n", "prefix"), rows, results)


def _cmd_un(args) -> int:
    system = parse_system(args.system)
    d = _parse_multiplier(args.multiplier)
    n_list = _parse_n_list(args.n_list)
    fixed = _parse_function(args.function) if args.function else None
    rows = []
    for n in n_list:
        b = _parse_sequence(args.sequence, n, args.seed, args.alpha)
        if fixed is None:
            r = plateau_pairing_experiment(system, d, b, n, args.weight_mode)
            rows.append((n, r["i"], r["U"], r["G"], r["T"]))
        else:
            U = pairing_functional(fixed, system, d, b, n, args.weight_mode)
            G = max_prefix_integral(system, d, b, n, args.weight_mode)
            T = weighted_coeff_norm(d, b, n, args.weight_mode)
            rows.append((n, None, U, G, T))
    us = [abs(r[2]) for r in rows]
    return _emit(args, ("n", "i", "U", "G", "T"), rows, {"max_abs_U": max(us)})


def _cmd_admissible(args) -> int:
    h = _parse_multiplier(args.multiplier)
    rep = sqrtlog_admissible(h, args.N)
    rows = [
        (n + 1, float(rep.ratios[n]), float(rep.margins[n]))
        for n in range(args.N)
    ]
    results = {
        "admissible": rep.admissible,
        "constant": rep.constant,
        "argmax": rep.argmax,
    }
    return _emit(args, ("n", "ratio", "margin"), rows, results)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfs",
        description="Orthonormal-system experiments with reproducible CSV/JSON output.",
    )
    parser.add_argument("--version", action="version", version=f"gfs {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, help_, system=True, out_required=True):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=handler)
        if system:
            p.add_argument("--system", required=True,
                           help="trig | walsh | haar, with optional +const suffix")
        p.add_argument("--out", required=out_required, default=None,
                       help="output path prefix (writes <out>.csv and <out>.meta.json)")
        p.add_argument("--weight-mode", dest="weight_mode", choices=("paper", "shifted"),
                       default="paper", help="log2(k) weights, or log2(k+1)")
        p.add_argument("--json", action="store_true", help="also write <out>.json")
        p.add_argument("--plot", action="store_true", help="also render <out>.png")
        return p

    p = add("coeffs", _cmd_coeffs, "Fourier coefficients of a function", out_required=False)
    p.add_argument("--function", required=True, help="catalog name, inline JSON, or @file.json")
    p.add_argument("--N", type=int, required=True)

    p = add("gram", _cmd_gram, "Gram matrix and its deviation from the identity")
    p.add_argument("--N", type=int, required=True)

    p = add("decay", _cmd_decay, "n * sup |prefix integral| series")
    p.add_argument("--N", type=int, required=True)

    p = add("ratio", _cmd_ratio, "max prefix integral vs weighted norm sweep")
    p.add_argument("--multiplier", default="const:1")
    p.add_argument("--sequence", default="random", help="unit:<k> | random | table:@file")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--n-list", dest="n_list", required=True, help="comma-separated sizes")

    p = add("logsum", _cmd_logsum, "running weighted coefficient sums")
    p.add_argument("--function", required=True)
    p.add_argument("--multiplier", default="const:1")
    p.add_argument("--N", type=int, required=True)

    p = add("converge", _cmd_converge, "Cauchy-gap trend of partial sums")
    p.add_argument("--function", required=True)
    p.add_argument("--multiplier", default="const:1")
    p.add_argument("--n-list", dest="n_list", required=True)
    p.add_argument("--grid-size", dest="grid_size", type=int, default=64)

    p = add("lemma", _cmd_lemma, "decomposition-identity residuals over the catalog", system=False)
    p.add_argument("--n", type=int, required=True, help="grid size of the decomposition")
    p.add_argument("--elements", type=int, default=8, help="elements 1..E used as g, plus their polynomial")

    p = add("plateau", _cmd_plateau, "ramp function with unit variation and norm 2", system=False)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--i", type=int, required=True)

    p = add("subseq", _cmd_subseq, "greedy subsequence with sup |prefix integral| < 1/k^2")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--scan-cap", dest="scan_cap", type=int, default=DEFAULT_SCAN_CAP)

    p = add("parseval", _cmd_parseval, "prefix sums of squared antiderivatives")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--N", type=int, required=True)

    p = add("un", _cmd_un, "pairing-functional sweep (ramp at the prefix argmax by default)")
    p.add_argument("--multiplier", default="const:1")
    p.add_argument("--sequence", default="random")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.75)
    p.add_argument("--n-list", dest="n_list", required=True)
    p.add_argument("--function", default=None, help="fix f instead of the ramp construction")

    p = add("admissible", _cmd_admissible, "growth-envelope check of a multiplier sequence", system=False)
    p.add_argument("--multiplier", required=True)
    p.add_argument("--N", type=int, required=True)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
