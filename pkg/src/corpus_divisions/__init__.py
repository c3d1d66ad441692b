"""Deterministic 10-80-10 corpus divisions and division compatibility analysis."""

from .compat import (
    IntervalDivision,
    OverlapReport,
    compare_assignments,
    contamination_check,
    overlap_intervals,
    test_superset_check,
)
from .errors import CorpusError
from .ingest import (
    TreeToken,
    build_manifest,
    count_words_raw,
    count_words_tree,
    load_manifest,
    parse_trees,
    write_manifest,
)
from .model import (
    CorpusManifest,
    DivisionAssignment,
    DocumentRecord,
    normalize_label,
    sort_documents,
    validate_manifest,
)
from .registry import (
    ReferenceDivision,
    TreebankMeta,
    list_reference,
    registry_selfcheck,
    resolve_assignment,
    to_intervals,
)
from .splitter import SplitPolicy, carve_extra, split, split_stratified

__version__ = "0.1.0"
