from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from nlui.apps import bundled_corpus_text, load_bundled_tree
from nlui.evaluate import read_corpus
from nlui.extract import default_lexicon


@pytest.fixture(scope="session")
def tree():
    return load_bundled_tree()


@pytest.fixture(scope="session")
def encoder(tree):
    return tree.encoder


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture(scope="session")
def demo_examples():
    return read_corpus(bundled_corpus_text("demo.txt"))


class ScriptedHttpService:
    """Tiny scripted HTTP server for exercising the remote-backend clients.

    ``script`` maps (method, path) to either a callable(body_dict) -> response
    or a static response. A response is (status, payload); payload may be a
    dict (sent as JSON), bytes (sent raw), or "sleep:<seconds>" to stall.
    """

    def __init__(self, script):
        service = self

        class Handler(BaseHTTPRequestHandler):
            protocol_version = "HTTP/1.1"

            def log_message(self, *args):
                pass

            def _respond(self, key, body):
                entry = service.script.get(key)
                if entry is None:
                    self.send_response(404)
                    self.send_header("Content-Length", "0")
                    self.end_headers()
                    return
                status, payload = entry(body) if callable(entry) else entry
                if isinstance(payload, str) and payload.startswith("sleep:"):
                    import time

                    time.sleep(float(payload.split(":", 1)[1]))
                    payload = {}
                raw = (
                    payload
                    if isinstance(payload, bytes)
                    else json.dumps(payload).encode("utf-8")
                )
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(raw)))
                self.end_headers()
                self.wfile.write(raw)

            def do_GET(self):
                try:
                    self._respond(("GET", self.path.split("?")[0]), None)
                except (BrokenPipeError, ConnectionResetError):
                    pass  # client gave up (timeout tests)

            def do_POST(self):
                length = int(self.headers.get("Content-Length", "0"))
                raw = self.rfile.read(length)
                try:
                    body = json.loads(raw.decode("utf-8"))
                except ValueError:
                    body = None
                try:
                    self._respond(("POST", self.path), body)
                except (BrokenPipeError, ConnectionResetError):
                    pass  # client gave up (timeout tests)

        self.script = script
        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._httpd.daemon_threads = True
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        return f"http://127.0.0.1:{self._httpd.server_address[1]}"

    def __enter__(self):
        self._thread.start()
        return self

    def __exit__(self, *exc):
        self._httpd.shutdown()
        self._httpd.server_close()


@pytest.fixture
def scripted_service():
    started = []

    def factory(script):
        service = ScriptedHttpService(script).__enter__()
        started.append(service)
        return service

    yield factory
    for service in started:
        service.__exit__()
