"""Discourse dependency treebank toolkit.

Loading and validation of SciDTB-style dependency treebanks, corpus
statistics, inter-annotator agreement metrics, and three baseline
discourse dependency parsers (one-pass transition, two-stage
transition, graph-based).
"""

from .analysis import (
    DistanceHistogram,
    dependency_distance,
    distance_histogram,
    is_projective,
    long_range_relation_profile,
)
from .corpus import (
    CorpusSplit,
    DiscourseTree,
    EduNode,
    InvariantError,
    ParseError,
    SchemaError,
    count_relations,
    load_all_annotations,
    load_document,
    load_split,
    map_to_coarse,
    save_document,
)
from .metrics import EvalReport, agreement_report, evaluate, kappa, las, uas
from .relations import ARC_LABELS, COARSE_LABELS, FINE_LABELS, coarse_of

__version__ = "0.1.0"

__all__ = [
    "ARC_LABELS",
    "COARSE_LABELS",
    "CorpusSplit",
    "DiscourseTree",
    "DistanceHistogram",
    "EduNode",
    "EvalReport",
    "FINE_LABELS",
    "InvariantError",
    "ParseError",
    "SchemaError",
    "agreement_report",
    "coarse_of",
    "count_relations",
    "dependency_distance",
    "distance_histogram",
    "evaluate",
    "is_projective",
    "kappa",
    "las",
    "load_all_annotations",
    "load_document",
    "load_split",
    "long_range_relation_profile",
    "map_to_coarse",
    "save_document",
    "uas",
    "__version__",
]
