"""Conformance of the remote-backend clients against a scripted fake
model server: echo, malformed-response, and timeout behavior."""
from __future__ import annotations

import json

import pytest

from nlui.errors import (
    RemoteBackendMalformedResponse,
    RemoteBackendUnavailable,
)
from nlui.extract import (
    REMOTE_MODEL,
    ExtractionRequest,
    ExtractorConfig,
    RemoteExtractor,
    run_backend,
)
from nlui.gateway import Engine
from nlui.apps import load_bundled_tree


@pytest.fixture(scope="module")
def tree_module():
    return load_bundled_tree()


def request_for(tree, node_id, text):
    node = tree.node(node_id)
    return ExtractionRequest(utterance=text, node=node, prompt=node.prompt)


def test_echo_answer_passes_through(tree_module, scripted_service):
    service = scripted_service(
        {("POST", "/extract"): (200, {"answer": "Zurich", "confidence": 0.83})}
    )
    client = RemoteExtractor(service.url)
    answer = client.extract(request_for(tree_module, "Weather.City", "weather in Zurich?"))
    assert answer.value == "Zurich"
    assert answer.confidence == 0.83
    assert answer.backend == REMOTE_MODEL


def test_prompt_and_text_are_forwarded(tree_module, scripted_service):
    seen = {}

    def handler(body):
        seen.update(body)
        return 200, {"answer": body["text"].upper(), "confidence": 1.0}

    service = scripted_service({("POST", "/extract"): handler})
    client = RemoteExtractor(service.url)
    answer = client.extract(request_for(tree_module, "Weather.City", "hello"))
    assert seen == {"prompt": "What is the location?", "text": "hello"}
    assert answer.value == "HELLO"


def test_null_answer_is_absent_with_zero_confidence(tree_module, scripted_service):
    service = scripted_service({("POST", "/extract"): (200, {"answer": None})})
    client = RemoteExtractor(service.url)
    answer = client.extract(request_for(tree_module, "Weather.City", "no city here"))
    assert answer.value is None
    assert answer.confidence == 0.0


def test_missing_confidence_defaults(tree_module, scripted_service):
    service = scripted_service({("POST", "/extract"): (200, {"answer": "Oslo"})})
    client = RemoteExtractor(service.url)
    answer = client.extract(request_for(tree_module, "Weather.City", "x"))
    assert answer.confidence == 0.5


def test_non_json_body_is_malformed(tree_module, scripted_service):
    service = scripted_service({("POST", "/extract"): (200, b"<html>oops</html>")})
    client = RemoteExtractor(service.url)
    with pytest.raises(RemoteBackendMalformedResponse):
        client.extract(request_for(tree_module, "Weather.City", "x"))


def test_missing_answer_key_is_malformed(tree_module, scripted_service):
    service = scripted_service({("POST", "/extract"): (200, {"result": "Zurich"})})
    client = RemoteExtractor(service.url)
    with pytest.raises(RemoteBackendMalformedResponse):
        client.extract(request_for(tree_module, "Weather.City", "x"))


def test_non_string_answer_is_malformed(tree_module, scripted_service):
    service = scripted_service({("POST", "/extract"): (200, {"answer": 42})})
    client = RemoteExtractor(service.url)
    with pytest.raises(RemoteBackendMalformedResponse):
        client.extract(request_for(tree_module, "Weather.City", "x"))


def test_timeout_is_unavailable(tree_module, scripted_service):
    service = scripted_service({("POST", "/extract"): (200, "sleep:2")})
    client = RemoteExtractor(service.url, timeout=0.3)
    with pytest.raises(RemoteBackendUnavailable):
        client.extract(request_for(tree_module, "Weather.City", "x"))


def test_unreachable_host_is_unavailable(tree_module):
    client = RemoteExtractor("http://127.0.0.1:9", timeout=0.3)
    with pytest.raises(RemoteBackendUnavailable):
        client.extract(request_for(tree_module, "Weather.City", "x"))


def test_run_backend_routes_span_to_remote(tree_module, scripted_service):
    service = scripted_service(
        {("POST", "/extract"): (200, {"answer": "Zurich", "confidence": 0.9})}
    )
    config = ExtractorConfig(remote_span=RemoteExtractor(service.url))
    answer = run_backend(
        request_for(tree_module, "Weather.City", "conditions in Zurich?"), config
    )
    assert answer.backend == REMOTE_MODEL
    assert answer.value == "Zurich"
    # Arithmetic nodes keep the rule backend when only span is remote.
    arithmetic = run_backend(
        request_for(tree_module, "Calculator.promptSequence", "divide 24 among 6"), config
    )
    assert arithmetic.backend == "RuleArithmetic"


def test_gateway_returns_503_when_remote_backend_is_down(tree_module):
    config = ExtractorConfig(
        remote_span=RemoteExtractor("http://127.0.0.1:9", timeout=0.2)
    )
    engine = Engine(tree_module, extractor_config=config)
    from nlui.gateway import GatewayServer
    import requests

    with GatewayServer(engine, port=0) as gateway:
        resp = requests.post(
            f"http://127.0.0.1:{gateway.port}/v1/parse",
            json={"text": "what is the weather in Paris?"},
            timeout=10,
        )
        assert resp.status_code == 503


def test_remote_ignores_trailing_slash_in_base_url(tree_module, scripted_service):
    service = scripted_service({("POST", "/extract"): (200, {"answer": "ok"})})
    client = RemoteExtractor(service.url + "/")
    answer = client.extract(request_for(tree_module, "Weather.City", "x"))
    assert answer.value == "ok"
