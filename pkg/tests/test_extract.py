from __future__ import annotations

import json
import random
import string

import pytest

from nlui.classify import classify
from nlui.errors import NoParametersExtracted
from nlui.extract import (
    RULE_ARITHMETIC,
    RULE_SPAN,
    ExtractionRequest,
    ExtractorConfig,
    StatePatch,
    extract_all,
    extract_arithmetic,
    extract_span,
    normalize_utterance,
    route,
    select_pattern_class,
)

ROW2 = (
    "I'm registered under the name Alex J. Turner, but everyone sends their "
    "regards to my place at 768 Rolling Rock Street, and for a quicker "
    "response, they hit me up at alex.turns@rocknmail.com."
)


def param(tree, node_id):
    return tree.node(node_id)


def request(tree, node_id, utterance) -> ExtractionRequest:
    node = param(tree, node_id)
    return ExtractionRequest(utterance=utterance, node=node, prompt=node.prompt)


# -- routing ----------------------------------------------------------------

def test_route_arithmetic_to_rule_backend(tree):
    assert route(param(tree, "Calculator.promptSequence")) == RULE_ARITHMETIC


def test_route_span_to_rule_backend(tree):
    assert route(param(tree, "Weather.City")) == RULE_SPAN


def test_route_prefers_configured_remote(tree):
    config = ExtractorConfig(remote_span=object(), remote_arithmetic=None)
    assert route(param(tree, "Weather.City"), config) == "RemoteModel"
    assert route(param(tree, "Calculator.promptSequence"), config) == RULE_ARITHMETIC


# -- pattern class selection ---------------------------------------------------

def test_pattern_classes_for_bundled_parameters(tree, lexicon):
    assert select_pattern_class(param(tree, "AccountForm.Email"), lexicon) == "email"
    assert select_pattern_class(param(tree, "AccountForm.Name"), lexicon) == "person_name"
    assert select_pattern_class(param(tree, "AccountForm.Address"), lexicon) == "street_address"
    assert select_pattern_class(param(tree, "Weather.City"), lexicon) == "location"


# -- span extraction --------------------------------------------------------------

def test_email_span(tree):
    answer = extract_span(request(tree, "AccountForm.Email", ROW2))
    assert answer.value == "alex.turns@rocknmail.com"
    assert answer.confidence == 0.9
    assert answer.backend == RULE_SPAN


def test_city_span_with_country(tree):
    answer = extract_span(
        request(
            tree,
            "Weather.City",
            "Could you tell me if I need an umbrella for my walk today around "
            "the canals of Amsterdam, Netherlands?",
        )
    )
    assert answer.value == "Amsterdam, Netherlands"
    assert answer.confidence == 0.6


def test_absent_address_is_not_an_error(tree):
    answer = extract_span(request(tree, "AccountForm.Address", "no address mentioned here"))
    assert answer.value is None
    assert answer.confidence == 0.0


def test_name_span_from_cue(tree):
    answer = extract_span(request(tree, "AccountForm.Name", ROW2))
    assert answer.value == "Alex J. Turner"


def test_street_address_span(tree):
    answer = extract_span(request(tree, "AccountForm.Address", ROW2))
    assert answer.value == "768 Rolling Rock Street"


def test_apartment_address_span(tree):
    utterance = (
        "I am Brian O'Connor residing at Apartment 5A, 654 Peachtree Street "
        "in New Town and my email address is brian.oconnor@mailservice.net."
    )
    answer = extract_span(request(tree, "AccountForm.Address", utterance))
    assert answer.value == "Apartment 5A, 654 Peachtree Street in New Town"
    name = extract_span(request(tree, "AccountForm.Name", utterance))
    assert name.value == "Brian O'Connor"


def test_span_values_are_substrings_of_normalized_utterance(tree, lexicon):
    rng = random.Random(99)
    vocabulary = (
        "please set the weather for me in around near at of Amsterdam Paris "
        "London Cape Town South Africa my name is Alex J. Turner email "
        "alex@example.com 768 Rolling Rock Street residing Apartment 5A "
        "sunny cold , . ? !"
    ).split()
    params = [
        "AccountForm.Name",
        "AccountForm.Address",
        "AccountForm.Email",
        "Weather.City",
    ]
    for _ in range(300):
        utterance = " ".join(rng.choices(vocabulary, k=rng.randint(3, 18)))
        node_id = rng.choice(params)
        answer = extract_span(request(tree, node_id, utterance), lexicon)
        if answer.value is not None:
            assert answer.value in normalize_utterance(utterance)


def test_span_extraction_is_deterministic(tree):
    req = request(tree, "Weather.City", "thinking of Venice, Italy for the trip")
    assert extract_span(req) == extract_span(req)


# -- arithmetic extraction ----------------------------------------------------------

def test_currency_subtraction(tree):
    answer = extract_arithmetic(
        request(
            tree,
            "Calculator.promptSequence",
            "If you have $50 and spend $25, how much money do you have left?",
        )
    )
    assert answer.value == "$50 - $25"
    assert answer.backend == RULE_ARITHMETIC


def test_cupcake_division(tree):
    answer = extract_arithmetic(
        request(
            tree,
            "Calculator.promptSequence",
            "I've got 24 cupcakes, and I need to divide them evenly among my 6 friends.",
        )
    )
    assert answer.value == "24 / 6"


def test_no_operands_is_absent(tree):
    answer = extract_arithmetic(request(tree, "Calculator.promptSequence", "what a lovely day"))
    assert answer.value is None
    assert answer.confidence == 0.0


def test_single_operand_is_absent(tree):
    answer = extract_arithmetic(request(tree, "Calculator.promptSequence", "I have 12 apples"))
    assert answer.value is None


def test_number_words_convert_to_digits(tree):
    answer = extract_arithmetic(
        request(tree, "Calculator.promptSequence", "split twelve sweets among four kids")
    )
    assert answer.value == "12 / 4"


def test_mixed_currency_strips_dollar(tree):
    answer = extract_arithmetic(
        request(tree, "Calculator.promptSequence", "the $96 bill is shared among 4 people")
    )
    assert answer.value == "96 / 4"


def test_explicit_operator_wins(tree):
    answer = extract_arithmetic(request(tree, "Calculator.promptSequence", "what is 7 * 8?"))
    assert answer.value == "7 * 8"
    assert answer.confidence == 0.9


def test_earliest_cue_selects_operator(tree):
    answer = extract_arithmetic(
        request(
            tree,
            "Calculator.promptSequence",
            "I baked twelve muffins and gave four away, how many are left to divide up?",
        )
    )
    assert answer.value == "12 - 4"


# -- patch assembly -----------------------------------------------------------------

def test_extract_all_full_account_row(tree):
    result = classify(tree, ROW2)
    patch = extract_all(tree, result, ROW2)
    assert patch.to_json() == {
        "CurrentApp": "AccountForm",
        "Config": {
            "Name": "Alex J. Turner",
            "Address": "768 Rolling Rock Street",
            "Email": "alex.turns@rocknmail.com",
        },
    }


def test_extract_all_orders_config_by_manifest(tree):
    result = classify(tree, ROW2)
    patch = extract_all(tree, result, ROW2)
    assert list(patch.config.keys()) == ["Name", "Address", "Email"]


def test_extract_all_raises_when_everything_absent(tree):
    utterance = "is it going to be sunny out there this weekend?"
    result = classify(tree, utterance)
    assert result.app_id == "Weather"
    with pytest.raises(NoParametersExtracted):
        extract_all(tree, result, utterance)


def test_extract_all_partial_patch_keeps_only_found_keys(tree):
    utterance = "sign up this new account with the email address casey@example.net please"
    result = classify(tree, utterance)
    assert result.app_id == "AccountForm"
    patch = extract_all(tree, result, utterance)
    assert set(patch.config) == {"Email"}
    assert patch.config["Email"] == "casey@example.net"


def test_extract_all_never_emits_foreign_keys(tree):
    rng = random.Random(5)
    words = (
        "weather in Paris name is Kim Lee email kim@x.io at 12 Oak Street "
        "divide 8 by 2 among friends total spend $5 $10 sunny what how"
    ).split()
    allowed = {
        app.name: {p.name for p in app.children} for app in tree.applications
    }
    for _ in range(200):
        utterance = " ".join(rng.choices(words, k=rng.randint(4, 16)))
        try:
            result = classify(tree, utterance)
            patch = extract_all(tree, result, utterance)
        except NoParametersExtracted:
            continue
        assert set(patch.config) <= allowed[patch.current_app]


# -- lexicon file ----------------------------------------------------------------------

def test_lexicon_loads_from_file(tmp_path, tree):
    path = tmp_path / "lexicon.json"
    path.write_text(
        json.dumps(
            {
                "email": {"cues": [], "regexes": [r"[\w.]+@[\w.]+\.[A-Za-z]{2,}"]},
                "arithmetic_divide": {"cues": ["among"], "regexes": []},
            }
        )
    )
    from nlui.extract import Lexicon

    lexicon = Lexicon.from_file(path)
    assert lexicon.classes["email"].regexes
    answer = extract_span(
        request(tree, "AccountForm.Email", "write to kim@example.org today"), lexicon
    )
    assert answer.value == "kim@example.org"


# -- patch serialization ---------------------------------------------------------------

def test_patch_serializes_with_exact_key_tokens():
    patch = StatePatch(current_app="AccountForm", config={"Name": "Connor Syle"})
    text = patch.to_json_str()
    assert text.startswith('{"CurrentApp":"AccountForm","Config":{')
    assert '"CurrentApp"' in text and '"Config"' in text


def test_patch_round_trip_exact():
    patch = StatePatch(
        current_app="Calculator", config={"promptSequence": "24 / 6"}
    )
    assert StatePatch.from_json_str(patch.to_json_str()) == patch


def test_patch_round_trip_fuzzed():
    rng = random.Random(31337)
    pool = string.ascii_letters + string.digits + ' {}":,\\é中'
    for _ in range(1000):
        config = {}
        for _ in range(rng.randint(0, 5)):
            key = "".join(rng.choices(pool, k=rng.randint(1, 10)))
            value = "".join(rng.choices(pool, k=rng.randint(0, 14)))
            config[key] = value
        patch = StatePatch(
            current_app="".join(rng.choices(pool, k=rng.randint(1, 8))), config=config
        )
        assert StatePatch.from_json_str(patch.to_json_str()) == patch


def test_patch_rejects_wrong_shapes():
    with pytest.raises(ValueError):
        StatePatch.from_json_str('{"CurrentApp":"A"}')
    with pytest.raises(ValueError):
        StatePatch.from_json_str('{"CurrentApp":"A","Config":{},"Extra":1}')
    with pytest.raises(ValueError):
        StatePatch.from_json_str('{"CurrentApp":"A","Config":{"k":1}}')
    with pytest.raises(json.JSONDecodeError):
        StatePatch.from_json_str("not json")
