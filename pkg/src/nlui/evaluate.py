"""Corpus parsing, scoring, and end-to-end pipeline evaluation.

Corpus files hold one labeled example per line:

    <task prompt>: "<input text>" || <expected>

with optional ``#task=<label>`` directive lines assigning a task label to
the examples that follow. Scoring is exact string match after trimming;
arithmetic tasks compare whitespace-insensitively.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .classify import classify
from .errors import EngineError, LengthMismatch, MalformedLine
from .extract import ExtractionRequest, ExtractorConfig, run_backend
from .tree import AnnotationNode, AnnotationTree

DEFAULT_TASK_LABEL = "default"

_INPUT_OPEN = ': "'
_EXPECTED_SEP = " || "


@dataclass(frozen=True)
class CorpusExample:
    task_prompt: str
    input_text: str
    expected: str
    task_label: str = DEFAULT_TASK_LABEL


def parse_corpus_line(line: str, task_label: str = DEFAULT_TASK_LABEL) -> CorpusExample:
    if _EXPECTED_SEP not in line:
        raise MalformedLine(f"missing {_EXPECTED_SEP!r} delimiter: {line!r}")
    left, expected = line.split(_EXPECTED_SEP, 1)
    if _INPUT_OPEN not in left:
        raise MalformedLine(f"missing ': \"' before the input text: {line!r}")
    task_prompt, rest = left.split(_INPUT_OPEN, 1)
    if not rest.endswith('"'):
        raise MalformedLine(f"input text is not quote-terminated: {line!r}")
    input_text = rest[:-1]
    if not task_prompt or not input_text or not expected:
        raise MalformedLine(f"task prompt, input, and expected must be non-empty: {line!r}")
    return CorpusExample(
        task_prompt=task_prompt, input_text=input_text, expected=expected, task_label=task_label
    )


def serialize_corpus_line(example: CorpusExample) -> str:
    return f'{example.task_prompt}{_INPUT_OPEN}{example.input_text}"{_EXPECTED_SEP}{example.expected}'


def read_corpus(text: str) -> list[CorpusExample]:
    examples = []
    label = DEFAULT_TASK_LABEL
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#task="):
            label = line[len("#task="):].strip()
            continue
        if line.startswith("#"):
            continue
        examples.append(parse_corpus_line(line, task_label=label))
    return examples


def read_corpus_file(path: str | Path) -> list[CorpusExample]:
    return read_corpus(Path(path).read_text(encoding="utf-8"))


# -- scoring ------------------------------------------------------------------

def is_arithmetic_task(example: CorpusExample) -> bool:
    return (
        "arithmetic" in example.task_prompt.lower()
        or "calculator" in example.task_label.lower()
    )


def _strip_outer_quotes(value: str) -> str:
    if len(value) >= 2 and value.startswith('"') and value.endswith('"'):
        interior = value[1:-1]
        if '"' not in interior:
            return interior
    return value


def normalize_answer(value: str, arithmetic: bool) -> str:
    value = _strip_outer_quotes(value.strip())
    if arithmetic:
        value = "".join(value.split())
    return value


@dataclass(frozen=True)
class Verdict:
    example: CorpusExample
    produced: str
    passed: bool
    classified_app: str | None = None
    classification_ok: bool | None = None


@dataclass
class EvalReport:
    verdicts: list[Verdict] = field(default_factory=list)

    @property
    def total_examples(self) -> int:
        return len(self.verdicts)

    @property
    def total_passes(self) -> int:
        return sum(1 for v in self.verdicts if v.passed)

    @property
    def overall_accuracy(self) -> float:
        return self.total_passes / self.total_examples if self.verdicts else 0.0

    @property
    def per_task(self) -> dict[str, float]:
        counts: dict[str, list[int]] = {}
        for v in self.verdicts:
            bucket = counts.setdefault(v.example.task_label, [0, 0])
            bucket[0] += int(v.passed)
            bucket[1] += 1
        return {label: passes / total for label, (passes, total) in counts.items()}

    @property
    def classification_accuracy(self) -> float | None:
        judged = [v for v in self.verdicts if v.classification_ok is not None]
        if not judged:
            return None
        return sum(1 for v in judged if v.classification_ok) / len(judged)

    def to_json(self) -> dict:
        tasks: dict[str, dict] = {}
        for v in self.verdicts:
            bucket = tasks.setdefault(
                v.example.task_label, {"examples": 0, "passes": 0, "accuracy": 0.0}
            )
            bucket["examples"] += 1
            bucket["passes"] += int(v.passed)
        for bucket in tasks.values():
            bucket["accuracy"] = bucket["passes"] / bucket["examples"]
        doc = {
            "tasks": tasks,
            "overall": {
                "examples": self.total_examples,
                "passes": self.total_passes,
                "accuracy": self.overall_accuracy,
            },
            "verdicts": [
                {
                    "task": v.example.task_label,
                    "prompt": v.example.task_prompt,
                    "input": v.example.input_text,
                    "expected": v.example.expected,
                    "produced": v.produced,
                    "passed": v.passed,
                    "classified_app": v.classified_app,
                }
                for v in self.verdicts
            ],
        }
        if self.classification_accuracy is not None:
            judged = [v for v in self.verdicts if v.classification_ok is not None]
            doc["classification"] = {
                "examples": len(judged),
                "passes": sum(1 for v in judged if v.classification_ok),
                "accuracy": self.classification_accuracy,
            }
        return doc

    def format_table(self) -> str:
        lines = [f"{'task':<24} {'pass':>4} {'total':>5} {'accuracy':>8}"]
        tasks = self.to_json()["tasks"]
        for label, bucket in tasks.items():
            lines.append(
                f"{label:<24} {bucket['passes']:>4} {bucket['examples']:>5} "
                f"{bucket['accuracy']:>8.3f}"
            )
        lines.append(
            f"{'overall':<24} {self.total_passes:>4} {self.total_examples:>5} "
            f"{self.overall_accuracy:>8.3f}"
        )
        if self.classification_accuracy is not None:
            lines.append(f"classification accuracy: {self.classification_accuracy:.3f}")
        return "\n".join(lines)


def score(examples: list[CorpusExample], produced: list[str]) -> EvalReport:
    if len(examples) != len(produced):
        raise LengthMismatch(f"{len(examples)} examples but {len(produced)} predictions")
    report = EvalReport()
    for example, output in zip(examples, produced):
        arithmetic = is_arithmetic_task(example)
        passed = normalize_answer(output, arithmetic) == normalize_answer(
            example.expected, arithmetic
        )
        report.verdicts.append(Verdict(example=example, produced=output, passed=passed))
    return report


# -- pipeline evaluation ---------------------------------------------------------

_PROMPT_STOPWORDS = {"what", "is", "the", "a", "an", "extract", "of", "please"}


def expected_app_name(tree: AnnotationTree, task_label: str) -> str | None:
    """Map a task label onto an application name: exact match first, then
    the longest application name the label ends with."""
    best: str | None = None
    for app in tree.applications:
        if task_label == app.name:
            return app.name
        if task_label.endswith(app.name) and (best is None or len(app.name) > len(best)):
            best = app.name
    return best


def select_parameter(app: AnnotationNode, task_prompt: str) -> AnnotationNode:
    """Parameter whose name, prompt, and description overlap the task
    prompt the most; falls back to the first parameter."""
    prompt_words = {
        w for w in task_prompt.lower().replace("?", " ").split() if w not in _PROMPT_STOPWORDS
    }
    best = app.children[0]
    best_overlap = 0
    for param in app.children:
        words = set(f"{param.name} {param.prompt} {param.description}".lower().split())
        overlap = len(prompt_words & words)
        if overlap > best_overlap:
            best, best_overlap = param, overlap
    return best


def run_pipeline_eval(
    tree: AnnotationTree,
    examples: list[CorpusExample],
    config: ExtractorConfig | None = None,
) -> EvalReport:
    """Classify each example's input, extract the one parameter its task
    prompt selects, and score against the expected answer."""
    config = config or ExtractorConfig()
    report = EvalReport()
    for example in examples:
        classified: str | None = None
        produced = ""
        try:
            result = classify(tree, example.input_text)
            app = tree.node(result.app_id)
            classified = app.name
            param = select_parameter(app, example.task_prompt)
            answer = run_backend(
                ExtractionRequest(
                    utterance=example.input_text, node=param, prompt=param.prompt
                ),
                config,
            )
            produced = answer.value or ""
        except EngineError:
            pass
        arithmetic = is_arithmetic_task(example)
        passed = normalize_answer(produced, arithmetic) == normalize_answer(
            example.expected, arithmetic
        )
        expected_app = expected_app_name(tree, example.task_label)
        report.verdicts.append(
            Verdict(
                example=example,
                produced=produced,
                passed=passed,
                classified_app=classified,
                classification_ok=(classified == expected_app and classified is not None),
            )
        )
    return report
