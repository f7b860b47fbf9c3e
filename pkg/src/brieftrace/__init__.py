"""brieftrace: trace shared language from briefs into opinions and later cases."""

from .corpus import (
    Corpus,
    CorpusError,
    Document,
    DocketGroup,
    LoadReport,
    Role,
    TokenStream,
    load_manifest,
    normalize_text,
    tokenize,
)
from .matcher import (
    MatchPair,
    MatchParams,
    TooManyMatchesError,
    brute_force_matches,
    find_matches,
    required_matches,
)
from .pipeline import (
    BriefsHistogram,
    ReviewSet,
    SnippetRecord,
    briefs_histogram,
    estimate_total_asp,
    export_report,
    extract_candidates,
    select_review_set,
)
from .provenance import (
    Occurrence,
    Snippet,
    SnippetIndex,
    TemporalSlice,
    build_index,
    load_index,
    occurrences,
    query_after,
    query_before,
)
from .review import LabelStore, ReviewLabel, export_labels, submit_label

__version__ = "0.1.0"

__all__ = [
    "BriefsHistogram",
    "Corpus",
    "CorpusError",
    "Document",
    "DocketGroup",
    "LabelStore",
    "LoadReport",
    "MatchPair",
    "MatchParams",
    "Occurrence",
    "ReviewLabel",
    "ReviewSet",
    "Role",
    "Snippet",
    "SnippetIndex",
    "SnippetRecord",
    "TemporalSlice",
    "TokenStream",
    "TooManyMatchesError",
    "briefs_histogram",
    "brute_force_matches",
    "build_index",
    "estimate_total_asp",
    "export_labels",
    "export_report",
    "extract_candidates",
    "find_matches",
    "load_index",
    "load_manifest",
    "normalize_text",
    "occurrences",
    "query_after",
    "query_before",
    "required_matches",
    "select_review_set",
    "submit_label",
    "tokenize",
    "__version__",
]
