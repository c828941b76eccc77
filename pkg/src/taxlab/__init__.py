"""taxlab: collaborative research taxonomies with matching and analysis."""

from .analysis import (
    CorrelationMatrix,
    CoverageReport,
    Filter,
    SurfacePoint,
    build_matrix,
    build_surface,
    coverage_report,
    effective_paper_sets,
    effective_papers,
    matrix_to_csv,
)
from .auth import AuthService
from .benchmark import BenchRow, generate_benchmark_taxonomy, run_matrix_benchmark
from .biblio import Paper, Tag, Vote
from .canonical import canonical_dumps, taxonomy_from_document, taxonomy_to_document
from .circles import Circle, CirclesLayout, layout_circles
from .config import ServeConfig, load_config
from .errors import (
    AuthRequiredError,
    ConfigError,
    CredentialError,
    HierarchyCycleError,
    MergeRejectedError,
    NameConflictError,
    NotFoundError,
    StorageError,
    TaxlabError,
    UndefinedBaselineError,
    ValidationError,
    VersionConflictError,
)
from .importer import (
    MatchConfig,
    MappingSuggestion,
    conformity,
    count_occurrences,
    run_conformity_experiment,
    suggest_mappings,
)
from .model import (
    Concept,
    Dimension,
    Hierarchy,
    Mapping,
    MergeReport,
    Relation,
    Synonym,
    Taxonomy,
)
from .platform import Platform
from .review import ReviewBoard, parse_bibtex
from .similarity import (
    dice_similarity,
    fuzzy_score,
    levenshtein_distance,
    levenshtein_within,
    normalize,
    normalize_term,
)
from .store import DocumentStore, ViewCache
from .synthcorpus import SyntheticCorpus, build_synthetic_corpus
from .webapi import create_app

__version__ = "0.1.0"

__all__ = [
    "AuthRequiredError",
    "AuthService",
    "BenchRow",
    "Circle",
    "CirclesLayout",
    "Concept",
    "ConfigError",
    "CorrelationMatrix",
    "CoverageReport",
    "CredentialError",
    "Dimension",
    "DocumentStore",
    "Filter",
    "Hierarchy",
    "HierarchyCycleError",
    "Mapping",
    "MappingSuggestion",
    "MatchConfig",
    "MergeRejectedError",
    "MergeReport",
    "NameConflictError",
    "NotFoundError",
    "Paper",
    "Platform",
    "Relation",
    "ReviewBoard",
    "ServeConfig",
    "StorageError",
    "SurfacePoint",
    "Synonym",
    "SyntheticCorpus",
    "Tag",
    "TaxlabError",
    "Taxonomy",
    "UndefinedBaselineError",
    "ValidationError",
    "VersionConflictError",
    "ViewCache",
    "Vote",
    "build_matrix",
    "build_surface",
    "build_synthetic_corpus",
    "canonical_dumps",
    "conformity",
    "count_occurrences",
    "coverage_report",
    "create_app",
    "dice_similarity",
    "effective_paper_sets",
    "effective_papers",
    "fuzzy_score",
    "generate_benchmark_taxonomy",
    "layout_circles",
    "levenshtein_distance",
    "levenshtein_within",
    "load_config",
    "matrix_to_csv",
    "normalize",
    "normalize_term",
    "parse_bibtex",
    "run_conformity_experiment",
    "run_matrix_benchmark",
    "suggest_mappings",
    "taxonomy_from_document",
    "taxonomy_to_document",
]
