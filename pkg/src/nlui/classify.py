"""Utterance-to-application routing over the annotation tree.

classify() encodes the utterance once and compares it against application
nodes only; the leaves of non-winning applications are never scored. The
exhaustive variant scores every node and exists as the slow oracle the
fast path is checked against.
"""
from __future__ import annotations

from dataclasses import dataclass

from .embed import cosine_similarity, is_zero_vector
from .errors import EmptyUtterance, ZeroVector
from .tokenize import normalize_text
from .tree import AnnotationTree

DEFAULT_CONFIDENCE_THRESHOLD = 0.15


@dataclass(frozen=True)
class ClassificationResult:
    app_id: str
    score: float
    ranking: tuple[tuple[str, float], ...]
    confident: bool
    comparisons: int


def _encode_utterance(tree: AnnotationTree, utterance: str):
    if not normalize_text(utterance):
        raise EmptyUtterance("utterance is empty after normalization")
    vec = tree.encoder.encode(utterance)
    if is_zero_vector(vec):
        raise ZeroVector("utterance has no in-vocabulary content")
    return vec


def _result(scores: list[tuple[str, float]], threshold: float, comparisons: int) -> ClassificationResult:
    # Stable sort keeps manifest order as the tie-break on equal scores.
    ranking = tuple(sorted(scores, key=lambda item: -item[1]))
    app_id, score = ranking[0]
    return ClassificationResult(
        app_id=app_id,
        score=score,
        ranking=ranking,
        confident=score >= threshold,
        comparisons=comparisons,
    )


def classify(
    tree: AnnotationTree,
    utterance: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> ClassificationResult:
    vec = _encode_utterance(tree, utterance)
    scores = [
        (app.id, cosine_similarity(vec, tree.node_embeddings[app.id]))
        for app in tree.applications
    ]
    return _result(scores, threshold, comparisons=len(scores))


def classify_exhaustive(
    tree: AnnotationTree,
    utterance: str,
    threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
) -> ClassificationResult:
    """Linear scan over every node; the application owning the best-scoring
    node wins. Kept as the testing oracle for classify()."""
    vec = _encode_utterance(tree, utterance)
    comparisons = 0
    scores: list[tuple[str, float]] = []
    for app in tree.applications:
        best = cosine_similarity(vec, tree.node_embeddings[app.id])
        comparisons += 1
        for param in app.children:
            sim = cosine_similarity(vec, tree.node_embeddings[param.id])
            comparisons += 1
            if sim > best:
                best = sim
        scores.append((app.id, best))
    return _result(scores, threshold, comparisons=comparisons)
