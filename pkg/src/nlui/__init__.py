"""Natural-language control engine for annotated UI component trees.

An utterance is classified to an application by embedding similarity over
a two-level annotation tree, its parameters are extracted by pluggable
backends, and the resulting state patch is applied through a reducer-based
session store that streams updates to frontends.

The submodules carry the verbs (``nlui.classify.classify``,
``nlui.tokenize.tokenize``); the names here are the shared nouns plus the
high-level helpers.
"""

from .apps import (
    bundled_manifest_bytes,
    bundled_vocabulary,
    eval_expression,
    load_bundled_tree,
    validate_value,
)
from .classify import ClassificationResult, classify_exhaustive
from .embed import DeterministicEncoder, RemoteEncoder, cosine_similarity
from .evaluate import (
    CorpusExample,
    EvalReport,
    parse_corpus_line,
    read_corpus,
    run_pipeline_eval,
    score,
)
from .extract import (
    ExtractionAnswer,
    ExtractionRequest,
    ExtractorConfig,
    RemoteExtractor,
    StatePatch,
    extract_all,
    extract_arithmetic,
    extract_span,
    route,
)
from .gateway import Engine, GatewayServer
from .store import Action, ActionKind, SessionState, Store, store_schema
from .tokenize import Vocabulary, normalize_text
from .tree import AnnotationNode, AnnotationTree, ambiguity_report, children_of, load_manifest

# Submodule imports come last so ``nlui.classify``/``nlui.tokenize`` name the
# modules, not same-named functions pulled from them.
from . import apps, calc, classify, embed, errors, evaluate, extract, gateway, store
from . import tokenize, tree

__version__ = "0.1.0"

__all__ = [
    "Action",
    "ActionKind",
    "AnnotationNode",
    "AnnotationTree",
    "ClassificationResult",
    "CorpusExample",
    "DeterministicEncoder",
    "Engine",
    "EvalReport",
    "ExtractionAnswer",
    "ExtractionRequest",
    "ExtractorConfig",
    "GatewayServer",
    "RemoteEncoder",
    "RemoteExtractor",
    "SessionState",
    "StatePatch",
    "Store",
    "Vocabulary",
    "ambiguity_report",
    "apps",
    "bundled_manifest_bytes",
    "bundled_vocabulary",
    "calc",
    "children_of",
    "classify",
    "classify_exhaustive",
    "cosine_similarity",
    "embed",
    "errors",
    "eval_expression",
    "evaluate",
    "extract",
    "extract_all",
    "extract_arithmetic",
    "extract_span",
    "gateway",
    "load_bundled_tree",
    "load_manifest",
    "normalize_text",
    "parse_corpus_line",
    "read_corpus",
    "route",
    "run_pipeline_eval",
    "score",
    "store",
    "store_schema",
    "tokenize",
    "tree",
    "validate_value",
]
