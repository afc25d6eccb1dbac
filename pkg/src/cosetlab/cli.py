"""``cosetlab`` command line: analyze, eta, geometry, mic."""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .geometry import CONVENTIONS, build_geometry, contextual_lines, contextual_triangles, describe_kinds, recognize
from .lowindex import DEFAULT_NODE_BUDGET, SearchBudgetExceeded, eta_sequence, low_index_subgroups
from .mic import mic_scan
from .permgroup import image_group, structure_describe
from .presentations import PresentationSyntaxError, catalog_lookup, catalog_names
from .report import MAX_INDEX, RunConfig, emit, format_table, load_group, run


def _index_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        a = int(lo)
        b = int(hi) if sep else a
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected D or A..B, got {text!r}") from None
    if not 1 <= a <= b <= MAX_INDEX:
        raise argparse.ArgumentTypeError(f"index range must lie within 1..{MAX_INDEX}")
    return a, b


def _pick(group: str, d: int, k: int):
    name, pres = load_group(group)
    records = low_index_subgroups(pres, d)
    if not 1 <= k <= len(records):
        raise KeyError(f"index {d} has {len(records)} classes; class {k} does not exist")
    return name, records[k - 1]


def cmd_analyze(args) -> int:
    lo, hi = args.index
    cfg = RunConfig(
        group=args.group,
        index_lo=lo,
        index_hi=hi,
        convention=args.convention,
        tol=args.tol,
        element_cap=args.element_cap,
        exhaustive=args.exhaustive,
        seed=args.seed,
        node_budget=args.node_budget,
        out=args.out,
        tsv=args.tsv,
    )
    rep = run(cfg)
    emit(rep.rows, "json", args.out, cfg, rep.errors)
    if args.tsv:
        emit(rep.rows, "tsv", args.tsv)
    print(format_table(rep.rows))
    for err in rep.errors:
        print(f"error at d={err['d']} class={err['class']} ({err['stage']}): {err['error']}", file=sys.stderr)
    return 2 if rep.errors else 0


def cmd_eta(args) -> int:
    name, pres = load_group(args.group)
    try:
        seq = eta_sequence(pres, args.max)
    except SearchBudgetExceeded as exc:
        print(str(exc), file=sys.stderr)
        return 2
    print(",".join(map(str, seq)))
    if name in catalog_names():
        oracle = catalog_lookup(name).eta_oracle
        if oracle is not None:
            n = min(len(oracle), len(seq))
            status = "matches" if tuple(seq[:n]) == oracle[:n] else "DIFFERS FROM"
            print(f"{status} the stored sequence for {name} (first {n} terms)")
    return 0


def cmd_geometry(args) -> int:
    _, rec = _pick(args.group, args.index, args.class_)
    P = image_group(rec)
    geom = build_geometry(P, args.convention)
    labels = rec.table.rep_labels()
    ctx = {ln.points for ln in contextual_lines(geom, rec.table)}
    print(f"d={rec.index} class={rec.ordinal} |P|={P.order()} {structure_describe(P)}")
    print(f"convention={args.convention} recognized={recognize(geom)}")
    for k in describe_kinds(geom):
        print(f"  kind {k['kind']}: {k['lines']} lines of {k['line_size']}, stabilizer order {k['stabilizer_order']}, {k['name'] or '-'}")
    for ln in geom.long_lines():
        flag = " contextual" if ln.points in ctx else ""
        print(f"  line {{{', '.join(labels[p] for p in ln.points)}}} |stab|={ln.stabilizer_order}{flag}")
    tris = contextual_triangles(geom, rec.table)
    if tris:
        print(f"  contextual triangles: {len(tris)}")
    return 0


def cmd_mic(args) -> int:
    _, rec = _pick(args.group, args.index, args.class_)
    rep = mic_scan(rec, element_cap=args.element_cap, seed=args.seed, exhaustive=args.exhaustive, tol=args.tol)
    print(f"d={rec.index} class={rec.ordinal} candidates={rep.candidates_tested} exhaustive={rep.exhaustive}")
    if rep.is_mic:
        print(f"MIC: yes  pp={rep.pp}  values={', '.join(f'{v:.10g}' for v in rep.pp_values)}")
        print(f"fiducial ({rep.stabilizer_verdict}): {np.array2string(rep.fiducial, precision=6)}")
    else:
        tag = " (not found under budget)" if rep.not_found_under_budget else ""
        print(f"MIC: no{tag}  best Gram rank {rep.gram_rank} of {rec.index ** 2}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cosetlab", description="Coset geometries and MIC states from finite-index subgroups.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--group", required=True, help="catalog name or presentation file")
        return sp

    a = common(sub.add_parser("analyze", help="table rows for a range of indices"))
    a.add_argument("--index", required=True, type=_index_range, help="D or A..B")
    a.add_argument("--convention", choices=CONVENTIONS, default="excl")
    a.add_argument("--tol", type=float, default=1e-8)
    a.add_argument("--element-cap", type=int, default=20000)
    a.add_argument("--exhaustive", action="store_true")
    a.add_argument("--seed", type=int, default=0)
    a.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET, help="backtrack nodes per index")
    a.add_argument("--out", required=True)
    a.add_argument("--tsv")
    a.set_defaults(func=cmd_analyze)

    e = common(sub.add_parser("eta", help="number of subgroup classes of each index"))
    e.add_argument("--max", required=True, type=int)
    e.set_defaults(func=cmd_eta)

    g = common(sub.add_parser("geometry", help="coset geometry of one class"))
    g.add_argument("--index", required=True, type=int)
    g.add_argument("--class", dest="class_", required=True, type=int)
    g.add_argument("--convention", choices=CONVENTIONS, default="excl")
    g.set_defaults(func=cmd_geometry)

    m = common(sub.add_parser("mic", help="MIC search for one class"))
    m.add_argument("--index", required=True, type=int)
    m.add_argument("--class", dest="class_", required=True, type=int)
    m.add_argument("--element-cap", type=int, default=20000)
    m.add_argument("--exhaustive", action="store_true")
    m.add_argument("--seed", type=int, default=0)
    m.add_argument("--tol", type=float, default=1e-8)
    m.set_defaults(func=cmd_mic)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (KeyError, ValueError, PresentationSyntaxError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"cosetlab: {msg}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
