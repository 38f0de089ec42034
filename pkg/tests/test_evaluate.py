from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from nlui.apps import bundled_corpus_text
from nlui.errors import LengthMismatch, MalformedLine
from nlui.evaluate import (
    CorpusExample,
    expected_app_name,
    normalize_answer,
    parse_corpus_line,
    read_corpus,
    run_pipeline_eval,
    score,
    select_parameter,
    serialize_corpus_line,
)

ADDRESS_LINE = (
    'Extract the location: "I am Brian O\'Connor residing at Apartment 5A, '
    "654 Peachtree Street in New Town and my email address is "
    'brian.oconnor@mailservice.net." || "Address": "Apartment 5A, 654 '
    'Peachtree Street in New Town"'
)
ARITHMETIC_LINE = (
    'Extract the arithmetic expression: "If you have $50 and spend $25, '
    'how much money do you have left?" || "$50 - $25"'
)
WEATHER_LINE = (
    'Extract the location: "Can you provide me with the current weather '
    'conditions in Zurich, Switzerland?" || "Zurich:B-CITY,Switzerland:B-COUNTRY"'
)


def test_weather_line_fields():
    example = parse_corpus_line(WEATHER_LINE)
    assert example.task_prompt == "Extract the location"
    assert example.input_text.startswith("Can you provide me")
    assert normalize_answer(example.expected, arithmetic=False) == (
        "Zurich:B-CITY,Switzerland:B-COUNTRY"
    )


def test_arithmetic_line_expected_value():
    example = parse_corpus_line(ARITHMETIC_LINE)
    assert normalize_answer(example.expected, arithmetic=True) == "$50-$25"


def test_structured_expected_kept_whole():
    # A key-value expected contains inner quotes, so nothing is stripped.
    example = parse_corpus_line(ADDRESS_LINE)
    assert example.expected == '"Address": "Apartment 5A, 654 Peachtree Street in New Town"'


@pytest.mark.parametrize("line", [ADDRESS_LINE, ARITHMETIC_LINE, WEATHER_LINE])
def test_round_trip_is_byte_exact(line):
    assert serialize_corpus_line(parse_corpus_line(line)) == line


@pytest.mark.parametrize(
    "bad",
    [
        "no delimiter here",
        'Extract the location: "missing separator"',
        "Extract: unquoted || expected",
        'Extract: "unterminated || expected',
        ' || "empty left"',
    ],
)
def test_malformed_lines_rejected(bad):
    with pytest.raises(MalformedLine):
        parse_corpus_line(bad)


@given(
    task=st.text(alphabet="abcdefgh XYZ", min_size=1).filter(lambda s: s.strip()),
    text=st.text(alphabet="abcdefgh XYZ0123,.$", min_size=1).filter(lambda s: s.strip()),
    expected=st.text(alphabet="abcdefgh XYZ0123,.$:-", min_size=1).filter(lambda s: s.strip()),
)
def test_round_trip_property(task, text, expected):
    line = f'{task}: "{text}" || {expected}'
    assert serialize_corpus_line(parse_corpus_line(line)) == line


def test_directives_assign_task_labels():
    corpus = "\n".join(
        [
            "#task=Weather",
            'Extract the location: "weather in Oslo?" || Oslo',
            "# a plain comment line",
            "#task=SimpleCalculator",
            'Extract the arithmetic expression: "what is 1 + 2" || 1 + 2',
            "",
        ]
    )
    examples = read_corpus(corpus)
    assert [e.task_label for e in examples] == ["Weather", "SimpleCalculator"]


def test_bundled_demo_corpus_has_seven_rows():
    examples = read_corpus(bundled_corpus_text("demo.txt"))
    assert len(examples) == 7
    assert [e.task_label for e in examples].count("Weather") == 4


# -- scoring -------------------------------------------------------------------

def example(task="t", label="default", expected="x", text="input"):
    return CorpusExample(task_prompt=task, input_text=text, expected=expected, task_label=label)


def test_perfect_predictions_score_one():
    examples = [example(expected="a"), example(expected="b")]
    report = score(examples, ["a", "b"])
    assert report.overall_accuracy == 1.0
    assert report.per_task == {"default": 1.0}


def test_arithmetic_comparison_is_whitespace_insensitive():
    examples = [
        example(task="Extract the arithmetic expression", label="SimpleCalculator", expected="24/6")
    ]
    assert score(examples, ["24 / 6"]).overall_accuracy == 1.0
    assert score(examples, ["24/ 6"]).overall_accuracy == 1.0
    assert score(examples, ["24 / 7"]).overall_accuracy == 0.0


def test_plain_tasks_compare_exactly_after_trim():
    examples = [example(expected="Cape Town")]
    assert score(examples, ["  Cape Town  "]).overall_accuracy == 1.0
    assert score(examples, ["Cape  Town"]).overall_accuracy == 0.0


def test_length_mismatch():
    with pytest.raises(LengthMismatch):
        score([example()], [])


def test_score_is_permutation_symmetric():
    examples = [
        example(label="A", expected="x"),
        example(label="A", expected="y"),
        example(label="B", expected="z"),
    ]
    produced = ["x", "wrong", "z"]
    forward = score(examples, produced).per_task
    backward = score(list(reversed(examples)), list(reversed(produced))).per_task
    assert forward == backward


def test_empty_corpus_scores_without_dividing():
    report = score([], [])
    assert report.total_examples == 0
    assert report.overall_accuracy == 0.0
    assert report.per_task == {}


def test_one_matching_example_scores_one():
    report = score([example(expected="ok")], ["ok"])
    assert report.overall_accuracy == 1.0


# -- pipeline evaluation ------------------------------------------------------------

def test_expected_app_name_mapping(tree):
    assert expected_app_name(tree, "Weather") == "Weather"
    assert expected_app_name(tree, "SimpleCalculator") == "Calculator"
    assert expected_app_name(tree, "AdvancedCalculator") == "Calculator"
    assert expected_app_name(tree, "Mystery") is None


def test_select_parameter_by_prompt_overlap(tree):
    account = tree.node("AccountForm")
    assert select_parameter(account, "Extract the name").name == "Name"
    assert select_parameter(account, "Extract the email").name == "Email"
    assert select_parameter(account, "Extract the location").name == "Address"
    weather = tree.node("Weather")
    assert select_parameter(weather, "Extract the location").name == "City"


def test_pipeline_eval_on_simple_calculator_corpus(tree):
    examples = read_corpus(bundled_corpus_text("calculator_simple.txt"))
    report = run_pipeline_eval(tree, examples)
    assert report.classification_accuracy == 1.0
    assert report.overall_accuracy == 1.0
    assert set(report.per_task) == {"SimpleCalculator"}


def test_pipeline_eval_empty_corpus(tree):
    report = run_pipeline_eval(tree, [])
    assert report.total_examples == 0
    assert report.classification_accuracy is None
    assert report.to_json()["overall"]["accuracy"] == 0.0


def test_report_json_and_table_shapes(tree):
    examples = read_corpus(bundled_corpus_text("calculator_advanced.txt"))
    report = run_pipeline_eval(tree, examples)
    doc = report.to_json()
    assert doc["tasks"]["AdvancedCalculator"]["examples"] == 5
    assert doc["classification"]["accuracy"] == 1.0
    table = report.format_table()
    assert "AdvancedCalculator" in table
    assert "overall" in table
