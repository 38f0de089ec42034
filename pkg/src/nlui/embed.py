"""Deterministic sentence embeddings built from per-token vector sums.

Each token embedding is the elementwise sum of a word vector (seeded hash
lookup), a segment vector (two-entry table) and a sinusoidal position
vector. Sentence vectors mean-pool the totals over content tokens and are
L2-normalized. The same interface accepts a remote sentence-encoder
service for callers that want real model vectors.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import requests

from .errors import RemoteEncoderUnavailable, ZeroVector
from .tokenize import SPECIAL_TOKENS, TokenSequence, Vocabulary, tokenize

DEFAULT_DIM = 256
DEFAULT_SEED = 42

# Word vectors are unit norm; the additive tables are kept small so that
# pooled sentence vectors are dominated by content rather than by the
# position/segment components every sentence shares.
SEGMENT_SCALE = 0.05
POSITION_SCALE = 0.05


def _seeded_unit_vector(label: str, dim: int, seed: int) -> np.ndarray:
    digest = hashlib.blake2b(f"{seed}:{label}".encode("utf-8"), digest_size=8).digest()
    rng = np.random.default_rng(int.from_bytes(digest, "big"))
    vec = rng.standard_normal(dim)
    return vec / np.linalg.norm(vec)


def _frozen(vec: np.ndarray) -> np.ndarray:
    # Cached vectors are shared; freeze them so callers cannot corrupt the cache.
    vec.flags.writeable = False
    return vec


@lru_cache(maxsize=65536)
def word_vector(token: str, dim: int = DEFAULT_DIM, seed: int = DEFAULT_SEED) -> np.ndarray:
    return _frozen(_seeded_unit_vector(f"word:{token}", dim, seed))


@lru_cache(maxsize=8)
def segment_vector(index: int, dim: int = DEFAULT_DIM, seed: int = DEFAULT_SEED) -> np.ndarray:
    if index not in (0, 1):
        raise ValueError("segment index must be 0 or 1")
    return _frozen(SEGMENT_SCALE * _seeded_unit_vector(f"segment:{index}", dim, seed))


@lru_cache(maxsize=4096)
def position_vector(position: int, dim: int = DEFAULT_DIM) -> np.ndarray:
    """Interleaved sin/cos of the position index, scaled to a fixed norm."""
    half = dim // 2
    angles = position / np.power(10000.0, 2.0 * np.arange(half) / dim)
    vec = np.empty(dim)
    vec[0::2] = np.sin(angles)
    vec[1::2] = np.cos(angles)
    return _frozen((POSITION_SCALE / math.sqrt(half)) * vec)


@dataclass
class TokenEmbedding:
    token: str
    word: np.ndarray
    segment: np.ndarray
    position: np.ndarray
    total: np.ndarray


def embed_tokens(
    seq: TokenSequence,
    segment_index: int = 0,
    dim: int = DEFAULT_DIM,
    seed: int = DEFAULT_SEED,
) -> list[TokenEmbedding]:
    out = []
    for pos, token in enumerate(seq.tokens):
        word = word_vector(token, dim, seed)
        segment = segment_vector(segment_index, dim, seed)
        position = position_vector(pos, dim)
        out.append(
            TokenEmbedding(
                token=token,
                word=word,
                segment=segment,
                position=position,
                total=word + segment + position,
            )
        )
    return out


def cosine_similarity(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    norm_a = np.linalg.norm(a)
    norm_b = np.linalg.norm(b)
    if norm_a == 0.0 or norm_b == 0.0:
        raise ZeroVector("cosine similarity is undefined for the zero vector")
    return float(np.dot(a, b) / (norm_a * norm_b))


def is_zero_vector(v: np.ndarray) -> bool:
    return not np.any(v)


class DeterministicEncoder:
    """Built-in sentence encoder: tokenize, sum the per-token parts,
    mean-pool over content tokens, L2-normalize.

    Fully deterministic for a fixed vocabulary, dimension and seed; text
    with no in-vocabulary content encodes to the zero vector.
    """

    def __init__(self, vocab: Vocabulary, dim: int = DEFAULT_DIM, seed: int = DEFAULT_SEED):
        self.vocab = vocab
        self.dim = dim
        self.seed = seed

    def encode(self, text: str) -> np.ndarray:
        seq = tokenize(text, self.vocab)
        embeddings = embed_tokens(seq, segment_index=0, dim=self.dim, seed=self.seed)
        totals = [e.total for e in embeddings if e.token not in SPECIAL_TOKENS]
        if not totals:
            return np.zeros(self.dim)
        pooled = np.mean(totals, axis=0)
        norm = np.linalg.norm(pooled)
        if norm == 0.0:
            return np.zeros(self.dim)
        return pooled / norm

    def encode_many(self, texts: list[str]) -> list[np.ndarray]:
        return [self.encode(t) for t in texts]


class RemoteEncoder:
    """Client for an HTTP sentence-encoder service.

    Protocol: GET /info -> {"dim": int}; POST /encode with
    {"texts": [...]} -> {"vectors": [[...], ...]}. Returned vectors are
    L2-normalized before use.
    """

    def __init__(self, base_url: str, timeout: float = 5.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout
        try:
            info = requests.get(f"{self.base_url}/info", timeout=self.timeout).json()
            self.dim = int(info["dim"])
        except (requests.RequestException, ValueError, KeyError, TypeError) as exc:
            raise RemoteEncoderUnavailable(f"encoder handshake failed: {exc}") from exc

    def encode_many(self, texts: list[str]) -> list[np.ndarray]:
        try:
            resp = requests.post(
                f"{self.base_url}/encode", json={"texts": texts}, timeout=self.timeout
            )
            vectors = resp.json()["vectors"]
        except (requests.RequestException, ValueError, KeyError, TypeError) as exc:
            raise RemoteEncoderUnavailable(f"encoder request failed: {exc}") from exc
        out = []
        for raw in vectors:
            vec = np.asarray(raw, dtype=float)
            norm = np.linalg.norm(vec)
            out.append(vec / norm if norm else np.zeros(self.dim))
        return out

    def encode(self, text: str) -> np.ndarray:
        return self.encode_many([text])[0]
