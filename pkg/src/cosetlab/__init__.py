"""Finite-index subgroups of finitely presented groups, their coset geometries and MIC states."""

from .cosets import CosetTable, todd_coxeter
from .geometry import axiom_ii, build_geometry, contextual_lines, recognize
from .lowindex import SubgroupRecord, eta_sequence, low_index_subgroups
from .mic import PauliSystem, gram_rank, mic_scan, pp_value
from .permgroup import Permutation, PermGroup, axiom_i, covering_type, normal_closure, rank
from .presentations import Presentation, Word, catalog_lookup, catalog_names, parse_presentation
from .report import AnalysisRow, RunConfig, analyze, emit

__all__ = [
    "AnalysisRow",
    "CosetTable",
    "PauliSystem",
    "PermGroup",
    "Permutation",
    "Presentation",
    "RunConfig",
    "SubgroupRecord",
    "Word",
    "analyze",
    "axiom_i",
    "axiom_ii",
    "build_geometry",
    "catalog_lookup",
    "catalog_names",
    "contextual_lines",
    "covering_type",
    "emit",
    "eta_sequence",
    "gram_rank",
    "low_index_subgroups",
    "mic_scan",
    "normal_closure",
    "parse_presentation",
    "pp_value",
    "rank",
    "recognize",
    "todd_coxeter",
]
