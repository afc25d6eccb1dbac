"""Pipeline driver: presentation -> subgroup classes -> axioms -> geometry -> MIC.

``run`` produces one :class:`AnalysisRow` per conjugacy class and index, plus
error records for stages that failed; ``emit`` writes them
deterministically (floats at 17 significant digits).
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import asdict, dataclass, field, fields
from typing import Any, Iterable

from .cosets import CosetOverflow
from .geometry import (
    CONVENTIONS,
    IncidenceGeometry,
    axiom_ii,
    build_geometry,
    contextual_lines,
    contextual_triangles,
    kind_names,
    recognize,
)
from .lowindex import DEFAULT_NODE_BUDGET, SearchBudgetExceeded, SubgroupRecord, low_index_subgroups
from .mic import DEFAULT_ELEMENT_CAP, OVERLAP_TOL, RANK_TOL, MicReport, mic_scan
from .permgroup import axiom_i, covering_type, image_group, rank, structure_describe
from .presentations import Presentation, catalog_lookup, catalog_names, parse_presentation

MAX_INDEX = 24
VERDICTS = ("consistent", "exception-contextual", "false-detection", "unexplained")
TSV_HEADER = ("d", "class", "P_order", "axiom_i", "axiom_ii", "geometry", "contextual", "mic", "pp", "verdict")


@dataclass(frozen=True)
class RunConfig:
    group: str
    index_lo: int
    index_hi: int
    convention: str = "excl"
    tol: float = RANK_TOL
    overlap_tol: float = OVERLAP_TOL
    element_cap: int = DEFAULT_ELEMENT_CAP
    exhaustive: bool = False
    seed: int = 0
    node_budget: int = DEFAULT_NODE_BUDGET
    out: str | None = None
    tsv: str | None = None

    def __post_init__(self):
        if not 1 <= self.index_lo <= self.index_hi <= MAX_INDEX:
            raise ValueError(f"index range must lie within 1..{MAX_INDEX}, got {self.index_lo}..{self.index_hi}")
        if self.convention not in CONVENTIONS:
            raise ValueError(f"convention must be one of {CONVENTIONS}")

    def to_dict(self) -> dict:
        return asdict(self)


def load_group(selector: str) -> tuple[str, Presentation]:
    """A catalog name, or a path to a file holding one presentation."""
    if selector in catalog_names():
        return selector, catalog_lookup(selector).presentation
    if os.path.isfile(selector):
        with open(selector, encoding="utf-8") as fh:
            text = fh.read()
        return os.path.splitext(os.path.basename(selector))[0], parse_presentation(text)
    raise KeyError(f"{selector!r} is neither a catalog group ({', '.join(catalog_names())}) nor a file")


@dataclass
class AnalysisRow:
    group: str
    d: int
    ordinal: int
    multiplicity: int
    covering_type: str
    P_order: int
    structure: str
    abelian_invariants: list[int]
    rank: int
    axiom_i: bool
    axiom_ii_trivial_excluded: bool
    axiom_ii_trivial_included: bool
    convention: str
    axiom_ii: bool
    geometry: str
    geometry_kinds: list[str]
    lines: list[dict]
    contextual: bool
    contextual_triangles: list[list[str]]
    is_mic: bool
    mic_exhaustive: bool
    mic_not_found_under_budget: bool
    candidates_tested: int
    gram_rank: int
    pp: int | None
    pp_values: list[float]
    fiducial: list[list[float]] | None
    stabilizer_verdict: str
    rule_verdict: str
    subgroup_generators: list[str]
    coset_reps: list[str]
    coset_table: list[list[int]]

    def to_dict(self) -> dict:
        out = {}
        for f in fields(self):
            out["class" if f.name == "ordinal" else f.name] = getattr(self, f.name)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "AnalysisRow":
        kw = {("ordinal" if k == "class" else k): v for k, v in data.items()}
        return cls(**kw)

    def tsv_fields(self) -> list[str]:
        yn = {True: "yes", False: "no"}
        return [
            str(self.d),
            str(self.ordinal),
            str(self.P_order),
            yn[self.axiom_i],
            yn[self.axiom_ii],
            self.geometry,
            yn[self.contextual],
            yn[self.is_mic],
            "" if self.pp is None else str(self.pp),
            self.rule_verdict,
        ]


def rule_verdict(is_mic: bool, ax_i: bool, ax_ii: bool, contextual: bool) -> str:
    """Classify a row against the rule "MIC iff (i) and (ii) agree"."""
    if is_mic == (ax_i == ax_ii):
        return "consistent"
    if is_mic and ax_i and not ax_ii and contextual:
        return "exception-contextual"
    if not is_mic and ax_i and ax_ii:
        return "false-detection"
    return "unexplained"


def _line_entries(geom: IncidenceGeometry, table, labels: list[str]) -> tuple[list[dict], bool]:
    ctx = {ln.points for ln in contextual_lines(geom, table)}
    entries = []
    for ln in geom.long_lines():
        entries.append(
            {
                "points": list(ln.points),
                "labels": [labels[p] for p in ln.points],
                "stabilizer_order": ln.stabilizer_order,
                "kind": ln.kind,
                "contextual": ln.points in ctx,
            }
        )
    return entries, any(e["contextual"] for e in entries)


def analyze_record(group: str, rec: SubgroupRecord, config: RunConfig) -> AnalysisRow:
    table = rec.table
    P = image_group(rec)
    note = structure_describe(P)
    geoms = {c: build_geometry(P, c) for c in CONVENTIONS}
    active = geoms[config.convention]
    labels = table.rep_labels()
    lines, contextual = _line_entries(active, table, labels)
    ax_i = axiom_i(P)
    ax_ii = axiom_ii(active)
    name = recognize(active)
    mic: MicReport = mic_scan(
        P,
        element_cap=config.element_cap,
        seed=config.seed,
        exhaustive=config.exhaustive,
        tol=config.tol,
        overlap_tol=config.overlap_tol,
    )
    fid = None
    if mic.fiducial is not None:
        fid = [[float(z.real), float(z.imag)] for z in mic.fiducial]
    names = table.presentation.generator_names
    return AnalysisRow(
        group=group,
        d=rec.index,
        ordinal=rec.ordinal,
        multiplicity=rec.multiplicity,
        covering_type=covering_type(P),
        P_order=P.order(),
        structure=note.name,
        abelian_invariants=list(note.abelian_invariants),
        rank=rank(P),
        axiom_i=ax_i,
        axiom_ii_trivial_excluded=axiom_ii(geoms["excl"]),
        axiom_ii_trivial_included=axiom_ii(geoms["incl"]),
        convention=config.convention,
        axiom_ii=ax_ii,
        geometry=str(name),
        geometry_kinds=kind_names(active),
        lines=lines,
        contextual=contextual,
        contextual_triangles=[[labels[p] for p in tri] for tri in contextual_triangles(active, table)],
        is_mic=mic.is_mic,
        mic_exhaustive=mic.exhaustive,
        mic_not_found_under_budget=mic.not_found_under_budget,
        candidates_tested=mic.candidates_tested,
        gram_rank=mic.gram_rank,
        pp=mic.pp,
        pp_values=[float(v) for v in mic.pp_values],
        fiducial=fid,
        stabilizer_verdict=mic.stabilizer_verdict,
        rule_verdict=rule_verdict(mic.is_mic, ax_i, ax_ii, contextual),
        subgroup_generators=[w.format(names) for w in rec.generators.generators],
        coset_reps=labels,
        coset_table=[list(r) for r in table.rows],
    )


@dataclass
class Report:
    config: RunConfig
    rows: list[AnalysisRow] = field(default_factory=list)
    errors: list[dict] = field(default_factory=list)


def run(config: RunConfig) -> Report:
    group, pres = load_group(config.group)
    report = Report(config)
    for d in range(config.index_lo, config.index_hi + 1):
        try:
            records = low_index_subgroups(pres, d, config.node_budget)
        except (SearchBudgetExceeded, CosetOverflow) as exc:
            report.errors.append({"d": d, "class": None, "stage": "low-index", "error": str(exc)})
            continue
        for rec in records:
            try:
                report.rows.append(analyze_record(group, rec, config))
            except Exception as exc:  # keep going; the row is reported as an error record
                report.errors.append({"d": d, "class": rec.ordinal, "stage": "analysis", "error": f"{type(exc).__name__}: {exc}"})
    return report


def analyze(config: RunConfig) -> list[AnalysisRow]:
    return run(config).rows


# -- output --------------------------------------------------------------------------


def _dump(obj: Any, level: int = 0) -> str:
    """JSON text with 17-significant-digit floats and a fixed layout."""
    pad = "  " * (level + 1)
    end = "  " * level
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        text = format(obj, ".17g")
        return text if any(c in text for c in ".en") else text + ".0"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dump(v, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(x, (int, float, bool, str)) or x is None for x in obj):
            return "[" + ", ".join(_dump(x, level + 1) for x in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(x, level + 1) for x in obj) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def report_json(rows: Iterable[AnalysisRow], config: RunConfig | dict | None = None, errors: Iterable[dict] = ()) -> str:
    cfg = config.to_dict() if isinstance(config, RunConfig) else (config or {})
    doc = {"config": cfg, "rows": [r.to_dict() for r in rows], "errors": list(errors)}
    return _dump(doc) + "\n"


def parse_report(text: str) -> tuple[dict, list[AnalysisRow], list[dict]]:
    doc = json.loads(text)
    return doc.get("config", {}), [AnalysisRow.from_dict(r) for r in doc.get("rows", [])], doc.get("errors", [])


def report_tsv(rows: Iterable[AnalysisRow]) -> str:
    lines = ["\t".join(TSV_HEADER)]
    lines += ["\t".join(r.tsv_fields()) for r in rows]
    return "\n".join(lines) + "\n"


def emit(rows: Iterable[AnalysisRow], fmt: str, path: str, config=None, errors: Iterable[dict] = ()) -> None:
    rows = list(rows)
    if fmt == "json":
        text = report_json(rows, config, errors)
    elif fmt == "tsv":
        text = report_tsv(rows)
    else:
        raise ValueError("format must be 'json' or 'tsv'")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# -- table view ----------------------------------------------------------------------

_SIGNATURE = (
    "d",
    "covering_type",
    "P_order",
    "structure",
    "axiom_i",
    "axiom_ii_trivial_excluded",
    "axiom_ii_trivial_included",
    "geometry",
    "contextual",
    "is_mic",
    "pp",
    "rule_verdict",
)


def group_rows(rows: Iterable[AnalysisRow]) -> list[AnalysisRow]:
    """Merge classes at the same index with identical table columns; multiplicities add up."""
    merged: dict[tuple, AnalysisRow] = {}
    for r in rows:
        key = tuple(getattr(r, k) for k in _SIGNATURE)
        if key in merged:
            m = merged[key]
            merged[key] = AnalysisRow(**{**m.__dict__, "multiplicity": m.multiplicity + r.multiplicity})
        else:
            merged[key] = r
    return list(merged.values())


def format_table(rows: Iterable[AnalysisRow]) -> str:
    """Human-readable table in the style d | ty | P | (i) | (ii) | pp | geometry."""
    out = [f"{'d':>3}  {'ty':<8} {'P':<16} {'(i)':<4} {'(ii)':<5} {'MIC':<4} {'pp':>3}  {'geometry':<22} verdict"]
    for r in group_rows(rows):
        ty = r.covering_type + (f" (x{r.multiplicity})" if r.multiplicity > 1 else "")
        yn = {True: "yes", False: "no"}
        geom = ("" if r.axiom_ii else "D: ") + r.geometry
        pp = "" if r.pp is None else str(r.pp)
        out.append(
            f"{r.d:>3}  {ty:<8} {r.structure:<16} {yn[r.axiom_i]:<4} {yn[r.axiom_ii]:<5} "
            f"{yn[r.is_mic]:<4} {pp:>3}  {geom:<22} {r.rule_verdict}"
        )
    return "\n".join(out)
