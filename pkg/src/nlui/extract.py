"""Parameter extraction: route each parameter node to a backend, run it,
and assemble the canonical state patch.

The built-in backends are deterministic rule lexicons (pattern classes for
spans, cue phrases for arithmetic); a remote model service can replace
either backend per extractor kind. Values are omitted when nothing
matches; absence is an answer, not an error.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path

import requests

from .classify import ClassificationResult
from .errors import (
    NoParametersExtracted,
    RemoteBackendMalformedResponse,
    RemoteBackendUnavailable,
)
from .tree import ARITHMETIC, AnnotationNode, AnnotationTree

RULE_SPAN = "RuleSpan"
RULE_ARITHMETIC = "RuleArithmetic"
REMOTE_MODEL = "RemoteModel"

CONFIDENCE_EXACT = 0.9
CONFIDENCE_CUE = 0.6


@dataclass(frozen=True)
class ExtractionRequest:
    utterance: str
    node: AnnotationNode
    prompt: str


@dataclass(frozen=True)
class ExtractionAnswer:
    value: str | None
    confidence: float
    backend: str

    @classmethod
    def absent(cls, backend: str) -> "ExtractionAnswer":
        return cls(value=None, confidence=0.0, backend=backend)


@dataclass(frozen=True)
class StatePatch:
    """The engine's sole output contract: current app plus extracted values."""

    current_app: str
    config: dict[str, str]

    def to_json(self) -> dict:
        return {"CurrentApp": self.current_app, "Config": dict(self.config)}

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"), ensure_ascii=False)

    @classmethod
    def from_json(cls, doc: dict) -> "StatePatch":
        if set(doc.keys()) != {"CurrentApp", "Config"}:
            raise ValueError("patch object must have exactly 'CurrentApp' and 'Config'")
        if not isinstance(doc["CurrentApp"], str) or not isinstance(doc["Config"], dict):
            raise ValueError("patch field types are wrong")
        for key, value in doc["Config"].items():
            if not isinstance(key, str) or not isinstance(value, str):
                raise ValueError("config entries must map strings to strings")
        return cls(current_app=doc["CurrentApp"], config=dict(doc["Config"]))

    @classmethod
    def from_json_str(cls, text: str) -> "StatePatch":
        return cls.from_json(json.loads(text))


# -- lexicon ------------------------------------------------------------------

@dataclass(frozen=True)
class LexiconClass:
    cues: tuple[str, ...]
    regexes: tuple[str, ...]


class Lexicon:
    """Pattern classes loaded from a JSON map class -> {cues, regexes}."""

    def __init__(self, classes: dict[str, LexiconClass]):
        self.classes = classes

    @classmethod
    def from_json(cls, doc: dict) -> "Lexicon":
        classes = {}
        for name, raw in doc.items():
            classes[name] = LexiconClass(
                cues=tuple(raw.get("cues", [])),
                regexes=tuple(raw.get("regexes", [])),
            )
        return cls(classes)

    @classmethod
    def from_file(cls, path: str | Path) -> "Lexicon":
        return cls.from_json(json.loads(Path(path).read_text(encoding="utf-8")))


@lru_cache(maxsize=1)
def default_lexicon() -> Lexicon:
    data = resources.files("nlui").joinpath("data", "lexicon.json").read_text(encoding="utf-8")
    return Lexicon.from_json(json.loads(data))


# Words that tie a parameter's name/prompt/description to a pattern class.
CLASS_TRIGGERS = {
    "email": {"email", "e-mail", "mail"},
    "person_name": {"name"},
    "street_address": {"address", "street", "residence"},
    "location": {"location", "city", "place", "town", "country"},
}

_WORD_RE = re.compile(r"[a-z][a-z'-]*")


def _parameter_words(node: AnnotationNode) -> set[str]:
    text = f"{node.name} {node.prompt} {node.description}".lower()
    return set(_WORD_RE.findall(text))


def select_pattern_class(node: AnnotationNode, lexicon: Lexicon) -> str | None:
    """First class (in lexicon order) whose trigger words appear in the
    parameter's name, prompt, or description."""
    words = _parameter_words(node)
    for name in lexicon.classes:
        if name.startswith("arithmetic"):
            continue
        triggers = CLASS_TRIGGERS.get(name, set(name.split("_")))
        if triggers & words:
            return name
    return None


# -- span backend -------------------------------------------------------------

def normalize_utterance(text: str) -> str:
    """Collapse whitespace runs; extraction spans are substrings of this."""
    return " ".join(text.split())


_TRAILING_PUNCT = ".,;:!?'\""


def _clean_span(span: str) -> str:
    return span.strip().strip(_TRAILING_PUNCT).strip()


def _regex_candidates(text: str, shapes: tuple[str, ...]) -> list[str]:
    found = []
    for shape in shapes:
        found.extend(m.group(0) for m in re.finditer(shape, text))
    return found


def _cue_adjacent_candidates(text: str, cues: tuple[str, ...], shapes: tuple[str, ...]) -> list[str]:
    found = []
    for shape in shapes:
        for cue in cues:
            pattern = rf"(?i:\b{re.escape(cue)})[,:]?\s+({shape})"
            found.extend(m.group(1) for m in re.finditer(pattern, text))
    return found


def _cue_gated_candidates(text: str, cues: tuple[str, ...], shapes: tuple[str, ...]) -> list[str]:
    lowered = text.lower()
    if not any(re.search(rf"\b{re.escape(cue)}\b", lowered) for cue in cues):
        return []
    return _regex_candidates(text, shapes)


def extract_span(req: ExtractionRequest, lexicon: Lexicon | None = None) -> ExtractionAnswer:
    """Rule-based span extraction via the parameter's pattern class.

    Among all candidate spans, the shortest wins (earliest on ties); with
    no candidates the answer is absent.
    """
    lexicon = lexicon or default_lexicon()
    class_name = select_pattern_class(req.node, lexicon)
    if class_name is None:
        return ExtractionAnswer.absent(RULE_SPAN)
    cls = lexicon.classes[class_name]
    text = normalize_utterance(req.utterance)

    if not cls.cues:
        candidates = _regex_candidates(text, cls.regexes)
        confidence = CONFIDENCE_EXACT
    elif class_name == "street_address":
        candidates = _cue_gated_candidates(text, cls.cues, cls.regexes)
        confidence = CONFIDENCE_CUE
    else:
        candidates = _cue_adjacent_candidates(text, cls.cues, cls.regexes)
        confidence = CONFIDENCE_CUE

    candidates = [c for c in (_clean_span(c) for c in candidates) if c]
    if not candidates:
        return ExtractionAnswer.absent(RULE_SPAN)
    best = min(candidates, key=lambda c: (len(c), text.find(c)))
    return ExtractionAnswer(value=best, confidence=confidence, backend=RULE_SPAN)


# -- arithmetic backend ---------------------------------------------------------

_NUMBER_WORDS = {
    "zero": 0, "one": 1, "two": 2, "three": 3, "four": 4, "five": 5,
    "six": 6, "seven": 7, "eight": 8, "nine": 9, "ten": 10, "eleven": 11,
    "twelve": 12, "thirteen": 13, "fourteen": 14, "fifteen": 15, "sixteen": 16,
    "seventeen": 17, "eighteen": 18, "nineteen": 19, "twenty": 20,
}

_DIGIT_OPERAND_RE = re.compile(r"\$?\d+(?:\.\d+)?")
_NUMBER_WORD_RE = re.compile(r"\b(" + "|".join(_NUMBER_WORDS) + r")\b", re.IGNORECASE)
_EXPLICIT_OP_RE = re.compile(r"\d\s*([+*/])\s*\$?\d|\d\s+(-)\s+\$?\d|\d(-)\$?\d")

_OPERATOR_SYMBOLS = {
    "arithmetic_add": "+",
    "arithmetic_subtract": "-",
    "arithmetic_multiply": "*",
    "arithmetic_divide": "/",
}


def _operands(text: str) -> list[str]:
    found: list[tuple[int, str]] = []
    for m in _DIGIT_OPERAND_RE.finditer(text):
        found.append((m.start(), m.group(0)))
    for m in _NUMBER_WORD_RE.finditer(text):
        found.append((m.start(), str(_NUMBER_WORDS[m.group(1).lower()])))
    found.sort(key=lambda item: item[0])
    return [lexeme for _, lexeme in found]


def _operator(text: str, lexicon: Lexicon) -> tuple[str, float] | None:
    explicit = _EXPLICIT_OP_RE.search(text)
    if explicit:
        symbol = next(g for g in explicit.groups() if g)
        return symbol, CONFIDENCE_EXACT
    lowered = text.lower()
    best: tuple[int, str] | None = None
    for class_name, symbol in _OPERATOR_SYMBOLS.items():
        cls = lexicon.classes.get(class_name)
        if cls is None:
            continue
        for cue in cls.cues:
            m = re.search(rf"\b{re.escape(cue)}\b", lowered)
            if m and (best is None or m.start() < best[0]):
                best = (m.start(), symbol)
    if best is None:
        return None
    return best[1], CONFIDENCE_CUE


def extract_arithmetic(req: ExtractionRequest, lexicon: Lexicon | None = None) -> ExtractionAnswer:
    """Pick two operands in utterance order and an operator from cue
    phrases (or an explicit symbol); render as a binary infix expression."""
    lexicon = lexicon or default_lexicon()
    text = normalize_utterance(req.utterance)
    operands = _operands(text)
    if len(operands) < 2:
        return ExtractionAnswer.absent(RULE_ARITHMETIC)
    left, right = operands[0], operands[1]
    operator = _operator(text, lexicon)
    if operator is None:
        return ExtractionAnswer.absent(RULE_ARITHMETIC)
    symbol, confidence = operator
    if not (left.startswith("$") and right.startswith("$")):
        left, right = left.lstrip("$"), right.lstrip("$")
    return ExtractionAnswer(
        value=f"{left} {symbol} {right}", confidence=confidence, backend=RULE_ARITHMETIC
    )


# -- remote backend -------------------------------------------------------------

class RemoteExtractor:
    """Client for an HTTP extraction service.

    Protocol: POST /extract with {"prompt": str, "text": str} ->
    {"answer": str | null, "confidence": float}.
    """

    def __init__(self, base_url: str, timeout: float = 5.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def extract(self, req: ExtractionRequest) -> ExtractionAnswer:
        try:
            resp = requests.post(
                f"{self.base_url}/extract",
                json={"prompt": req.prompt, "text": req.utterance},
                timeout=self.timeout,
            )
        except requests.RequestException as exc:
            raise RemoteBackendUnavailable(f"extraction backend unreachable: {exc}") from exc
        try:
            doc = resp.json()
            answer = doc["answer"]
        except (ValueError, KeyError, TypeError) as exc:
            raise RemoteBackendMalformedResponse(
                f"extraction backend returned an invalid body: {exc}"
            ) from exc
        if answer is None:
            return ExtractionAnswer.absent(REMOTE_MODEL)
        if not isinstance(answer, str):
            raise RemoteBackendMalformedResponse("'answer' must be a string or null")
        raw_confidence = doc.get("confidence", 0.5)
        try:
            confidence = min(max(float(raw_confidence), 0.0), 1.0)
        except (TypeError, ValueError) as exc:
            raise RemoteBackendMalformedResponse("'confidence' must be a number") from exc
        if confidence == 0.0:
            confidence = 0.5
        return ExtractionAnswer(value=answer, confidence=confidence, backend=REMOTE_MODEL)


# -- routing and assembly ---------------------------------------------------------

@dataclass
class ExtractorConfig:
    lexicon: Lexicon = field(default_factory=default_lexicon)
    remote_span: RemoteExtractor | None = None
    remote_arithmetic: RemoteExtractor | None = None


def route(node: AnnotationNode, config: ExtractorConfig | None = None) -> str:
    """Backend choice for one parameter node: its extractor kind decides,
    with a configured remote backend taking precedence for that kind."""
    config = config or ExtractorConfig()
    if node.extractor_kind == ARITHMETIC:
        return REMOTE_MODEL if config.remote_arithmetic else RULE_ARITHMETIC
    return REMOTE_MODEL if config.remote_span else RULE_SPAN


def run_backend(req: ExtractionRequest, config: ExtractorConfig | None = None) -> ExtractionAnswer:
    config = config or ExtractorConfig()
    backend = route(req.node, config)
    if backend == RULE_SPAN:
        return extract_span(req, config.lexicon)
    if backend == RULE_ARITHMETIC:
        return extract_arithmetic(req, config.lexicon)
    remote = config.remote_arithmetic if req.node.extractor_kind == ARITHMETIC else config.remote_span
    return remote.extract(req)


def extract_all(
    tree: AnnotationTree,
    result: ClassificationResult,
    utterance: str,
    config: ExtractorConfig | None = None,
) -> StatePatch:
    """Run extraction for every parameter of the classified application in
    manifest order; parameters that came back absent are omitted."""
    config = config or ExtractorConfig()
    app = tree.node(result.app_id)
    values: dict[str, str] = {}
    for param in app.children:
        req = ExtractionRequest(utterance=utterance, node=param, prompt=param.prompt)
        answer = run_backend(req, config)
        if answer.value is not None:
            values[param.name] = answer.value
    if not values:
        raise NoParametersExtracted(app.id, result.score, result.confident)
    return StatePatch(current_app=app.name, config=values)
