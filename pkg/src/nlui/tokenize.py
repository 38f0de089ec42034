"""WordPiece-style tokenization over a line-per-token vocabulary.

The tokenizer feeds the embedding pipeline only; extraction backends work
on the raw utterance and never see these tokens.
"""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from pathlib import Path

CLS = "[CLS]"
SEP = "[SEP]"
UNK = "[UNK]"
SPECIAL_TOKENS = (CLS, SEP, UNK)

CONTINUATION_PREFIX = "##"


def normalize_text(text: str) -> list[str]:
    """Lowercase and split into word units.

    Letter runs and digit runs become units of their own; every other
    non-space character is isolated as a single-character unit so that
    currency signs and operators survive as standalone tokens.
    """
    words: list[str] = []
    current: list[str] = []
    current_kind = ""

    def flush() -> None:
        if current:
            words.append("".join(current))
            current.clear()

    for ch in unicodedata.normalize("NFC", text.lower()):
        if ch.isspace():
            flush()
            current_kind = ""
        elif ch.isalpha():
            if current_kind != "alpha":
                flush()
                current_kind = "alpha"
            current.append(ch)
        elif ch.isdigit():
            if current_kind != "digit":
                flush()
                current_kind = "digit"
            current.append(ch)
        else:
            flush()
            current_kind = ""
            words.append(ch)
    flush()
    return words


class Vocabulary:
    """Ordered token list; the id of a token is its line number."""

    def __init__(self, entries: list[str]):
        if len(set(entries)) != len(entries):
            raise ValueError("vocabulary entries must be unique")
        for special in SPECIAL_TOKENS:
            if special not in entries:
                raise ValueError(f"vocabulary is missing {special}")
        self.entries = list(entries)
        self.lookup = {token: i for i, token in enumerate(entries)}
        self.cls_id = self.lookup[CLS]
        self.sep_id = self.lookup[SEP]
        self.unk_id = self.lookup[UNK]

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, token: str) -> bool:
        return token in self.lookup

    def id_of(self, token: str) -> int:
        return self.lookup.get(token, self.unk_id)

    @classmethod
    def from_file(cls, path: str | Path) -> "Vocabulary":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        return cls([line for line in lines if line])

    @classmethod
    def build(cls, texts: list[str], extra_words: list[str] | None = None) -> "Vocabulary":
        """Assemble a vocabulary covering ``texts`` plus character fallbacks.

        Single characters (and their continuation forms) guarantee that any
        ASCII-ish word segments instead of collapsing to [UNK].
        """
        chars: set[str] = set("abcdefghijklmnopqrstuvwxyz0123456789")
        chars.update("$+-*/=.,!?;:'\"()@#%&_")
        words: set[str] = set()
        for text in list(texts) + list(extra_words or []):
            for word in normalize_text(text):
                words.add(word)
                chars.update(c for c in word if not c.isspace())

        entries = list(SPECIAL_TOKENS)
        entries.extend(sorted(chars))
        entries.extend(CONTINUATION_PREFIX + c for c in sorted(chars))
        seen = set(entries)
        for word in sorted(words):
            for piece in (word, CONTINUATION_PREFIX + word):
                if piece not in seen:
                    entries.append(piece)
                    seen.add(piece)
        return cls(entries)

    def save(self, path: str | Path) -> None:
        Path(path).write_text("\n".join(self.entries) + "\n", encoding="utf-8")


@dataclass
class TokenSequence:
    tokens: list[str]
    ids: list[int]

    def __len__(self) -> int:
        return len(self.tokens)

    def content_tokens(self) -> list[str]:
        """Tokens that carry meaning: everything except [CLS], [SEP], [UNK]."""
        return [t for t in self.tokens if t not in SPECIAL_TOKENS]


def _segment_word(word: str, vocab: Vocabulary) -> list[str] | None:
    """Greedy longest-match segmentation; None when the word cannot be covered."""
    pieces: list[str] = []
    start = 0
    while start < len(word):
        end = len(word)
        match = None
        while start < end:
            piece = word[start:end]
            if start > 0:
                piece = CONTINUATION_PREFIX + piece
            if piece in vocab:
                match = piece
                break
            end -= 1
        if match is None:
            return None
        pieces.append(match)
        start = end
    return pieces


def tokenize(text: str, vocab: Vocabulary) -> TokenSequence:
    """Normalize, segment into subwords, and wrap with [CLS]/[SEP]."""
    tokens = [CLS]
    for word in normalize_text(text):
        pieces = _segment_word(word, vocab)
        tokens.extend(pieces if pieces is not None else [UNK])
    tokens.append(SEP)
    return TokenSequence(tokens=tokens, ids=[vocab.id_of(t) for t in tokens])


def detokenize(seq: TokenSequence) -> list[str]:
    """Rebuild word units from a token sequence (inverse of tokenize for
    fully-covered input)."""
    words: list[str] = []
    for token in seq.tokens:
        if token in SPECIAL_TOKENS:
            continue
        if token.startswith(CONTINUATION_PREFIX) and words:
            words[-1] += token[len(CONTINUATION_PREFIX):]
        else:
            words.append(token)
    return words
