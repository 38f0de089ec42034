"""HTTP front door: wires utterances through classify, extract, and
dispatch, and streams session state to clients.

Endpoints:
    POST /v1/parse         {"text": str}  (+ X-Session header)
    GET  /v1/state         session snapshot
    GET  /v1/state/stream  server-sent events, one JSON state per dispatch
    GET  /v1/apps          manifest echo for UI rendering
    GET  /v1/health        {"ok": true}

The server is a threading HTTP server; the tree and encoder are shared
immutably and the store serializes dispatches per session.
"""
from __future__ import annotations

import json
import queue
import threading
import time
from dataclasses import dataclass
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

from .classify import DEFAULT_CONFIDENCE_THRESHOLD, ClassificationResult, classify
from .errors import (
    EmptyUtterance,
    EngineError,
    NoParametersExtracted,
    RemoteBackendUnavailable,
    RemoteEncoderUnavailable,
    ZeroVector,
)
from .extract import ExtractorConfig, StatePatch, extract_all
from .store import Action, ActionKind, SessionState, Store, store_schema
from .tree import AnnotationTree

DEFAULT_SESSION = "default"
SESSION_HEADER = "X-Session"
SSE_KEEPALIVE_SECONDS = 15.0


@dataclass
class ParseOutcome:
    patch: StatePatch
    classification: ClassificationResult
    state: SessionState
    latency_ms: float

    def to_json(self) -> dict:
        return {
            "patch": self.patch.to_json(),
            "classification": classification_summary(self.classification),
            "state": self.state.to_json(),
            "latency_ms": self.latency_ms,
        }


def classification_summary(result: ClassificationResult) -> dict:
    return {"app": result.app_id, "score": result.score, "confident": result.confident}


class Engine:
    """The full pipeline behind one loaded manifest."""

    def __init__(
        self,
        tree: AnnotationTree,
        manifest_doc: dict | None = None,
        extractor_config: ExtractorConfig | None = None,
        confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
        log_path: str | Path | None = None,
    ):
        self.tree = tree
        self.manifest_doc = manifest_doc or {}
        self.extractor_config = extractor_config or ExtractorConfig()
        self.confidence_threshold = confidence_threshold
        self.store = Store(store_schema(tree), log_path=log_path)

    def classify_and_extract(self, text: str) -> tuple[ClassificationResult, StatePatch]:
        result = classify(self.tree, text, threshold=self.confidence_threshold)
        patch = extract_all(self.tree, result, text, self.extractor_config)
        return result, patch

    def parse(self, session_id: str, text: str) -> ParseOutcome:
        started = time.perf_counter()
        result, patch = self.classify_and_extract(text)
        state = self.store.dispatch(
            session_id, Action(kind=ActionKind.APPLY_PATCH, payload=patch)
        )
        return ParseOutcome(
            patch=patch,
            classification=result,
            state=state,
            latency_ms=(time.perf_counter() - started) * 1000.0,
        )


class _Handler(BaseHTTPRequestHandler):
    engine: Engine = None  # set on the subclass by GatewayServer
    ui_dir: Path | None = None
    protocol_version = "HTTP/1.1"
    # Headers and body go out as separate small writes; without this, Nagle
    # plus delayed ACK stalls keep-alive clients for ~40 ms per request.
    disable_nagle_algorithm = True

    # -- plumbing ------------------------------------------------------------

    def log_message(self, format, *args):  # noqa: A002 - stdlib signature
        pass

    def _session_id(self) -> str:
        return self.headers.get(SESSION_HEADER) or DEFAULT_SESSION

    def _send_json(self, status: int, doc: dict) -> None:
        body = json.dumps(doc, ensure_ascii=False).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Headers", f"Content-Type, {SESSION_HEADER}")
        self.end_headers()
        self.wfile.write(body)

    def _read_json_body(self) -> dict | None:
        try:
            length = int(self.headers.get("Content-Length", "0"))
            doc = json.loads(self.rfile.read(length).decode("utf-8"))
        except (ValueError, UnicodeDecodeError):
            return None
        return doc if isinstance(doc, dict) else None

    # -- routes ---------------------------------------------------------------

    def do_OPTIONS(self):
        self.send_response(204)
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", f"Content-Type, {SESSION_HEADER}")
        self.send_header("Content-Length", "0")
        self.end_headers()

    def do_GET(self):
        if self.path == "/v1/health":
            self._send_json(200, {"ok": True})
        elif self.path == "/v1/apps":
            self._send_json(200, self.engine.manifest_doc)
        elif self.path == "/v1/state":
            state = self.engine.store.snapshot(self._session_id())
            self._send_json(200, state.to_json())
        elif self.path == "/v1/state/stream":
            self._stream_state()
        else:
            self._serve_static()

    def do_POST(self):
        if self.path != "/v1/parse":
            self._send_json(404, {"error": "not_found"})
            return
        doc = self._read_json_body()
        if doc is None or not isinstance(doc.get("text"), str):
            self._send_json(400, {"error": "body must be JSON with a string 'text' field"})
            return
        try:
            outcome = self.engine.parse(self._session_id(), doc["text"])
        except (EmptyUtterance, ZeroVector) as exc:
            self._send_json(400, {"error": str(exc)})
        except NoParametersExtracted as exc:
            self._send_json(
                422,
                {
                    "error": "clarification_needed",
                    "detail": str(exc),
                    "classification": {
                        "app": exc.app_id,
                        "score": exc.score,
                        "confident": exc.confident,
                    },
                },
            )
        except (RemoteBackendUnavailable, RemoteEncoderUnavailable) as exc:
            self._send_json(503, {"error": str(exc)})
        except EngineError as exc:
            self._send_json(500, {"error": str(exc)})
        else:
            self._send_json(200, outcome.to_json())

    # -- server-sent events ------------------------------------------------------

    def _stream_state(self) -> None:
        subscription = self.engine.store.subscribe(self._session_id())
        try:
            self.send_response(200)
            self.send_header("Content-Type", "text/event-stream")
            self.send_header("Cache-Control", "no-cache")
            self.send_header("Access-Control-Allow-Origin", "*")
            # Unbounded body: the stream ends when either side disconnects.
            self.send_header("Connection", "close")
            self.end_headers()
            while True:
                try:
                    event = subscription.get(timeout=SSE_KEEPALIVE_SECONDS)
                except queue.Empty:
                    self.wfile.write(b": keep-alive\n\n")
                    self.wfile.flush()
                    continue
                if event is None:
                    return
                _, state = event
                payload = json.dumps(state.to_json(), ensure_ascii=False)
                self.wfile.write(f"data: {payload}\n\n".encode("utf-8"))
                self.wfile.flush()
        except (BrokenPipeError, ConnectionResetError):
            pass
        finally:
            subscription.close()

    # -- optional static frontend -------------------------------------------------

    _CONTENT_TYPES = {
        ".html": "text/html; charset=utf-8",
        ".js": "text/javascript; charset=utf-8",
        ".css": "text/css; charset=utf-8",
        ".svg": "image/svg+xml",
        ".png": "image/png",
        ".ico": "image/x-icon",
        ".map": "application/json",
    }

    def _serve_static(self) -> None:
        if self.ui_dir is None:
            self._send_json(404, {"error": "not_found"})
            return
        rel = self.path.split("?", 1)[0].lstrip("/") or "index.html"
        target = (self.ui_dir / rel).resolve()
        if not str(target).startswith(str(self.ui_dir.resolve())) or not target.is_file():
            self._send_json(404, {"error": "not_found"})
            return
        body = target.read_bytes()
        self.send_response(200)
        self.send_header(
            "Content-Type", self._CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        )
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)


class _Server(ThreadingHTTPServer):
    daemon_threads = True
    request_queue_size = 128


class GatewayServer:
    """Owns the HTTP server lifecycle; use start()/shutdown() directly or
    as a context manager."""

    def __init__(
        self,
        engine: Engine,
        host: str = "127.0.0.1",
        port: int = 8080,
        ui_dir: str | Path | None = None,
    ):
        handler = type(
            "BoundHandler",
            (_Handler,),
            {"engine": engine, "ui_dir": Path(ui_dir) if ui_dir else None},
        )
        self.engine = engine
        self._httpd = _Server((host, port), handler)
        self._thread: threading.Thread | None = None

    @property
    def host(self) -> str:
        return self._httpd.server_address[0]

    @property
    def port(self) -> int:
        return self._httpd.server_address[1]

    def start(self) -> "GatewayServer":
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def serve_forever(self) -> None:
        self._httpd.serve_forever()

    def shutdown(self) -> None:
        self._httpd.shutdown()
        self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self) -> "GatewayServer":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.shutdown()
