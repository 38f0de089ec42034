"""Central session store: pure reducers over per-session application state.

All mutation flows through dispatch; reducers never touch the incoming
state. Snapshots and subscriber events carry copies, so nothing a caller
holds can change behind its back.
"""
from __future__ import annotations

import json
import queue
import threading
import time
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterator, Mapping

from .errors import StaleSequence, UnknownApp, UnknownParameter, UnknownSession
from .extract import StatePatch
from .tree import AnnotationTree


class ActionKind(Enum):
    APPLY_PATCH = "ApplyPatch"
    RESET_APP = "ResetApp"
    SWITCH_APP = "SwitchApp"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    payload: StatePatch | str
    sequence: int | None = None


@dataclass(frozen=True)
class SessionState:
    session_id: str
    current_app: str | None
    app_states: dict[str, dict[str, str]]
    version: int

    def to_json(self) -> dict:
        return {
            "session_id": self.session_id,
            "current_app": self.current_app,
            "app_states": {app: dict(vals) for app, vals in self.app_states.items()},
            "version": self.version,
        }


Schema = Mapping[str, tuple[str, ...]]


def store_schema(tree: AnnotationTree) -> dict[str, tuple[str, ...]]:
    return {app.name: tuple(p.name for p in app.children) for app in tree.applications}


def initial_state(session_id: str) -> SessionState:
    return SessionState(session_id=session_id, current_app=None, app_states={}, version=0)


def _copy_states(app_states: dict[str, dict[str, str]]) -> dict[str, dict[str, str]]:
    return {app: dict(vals) for app, vals in app_states.items()}


def _check_app(app: str, schema: Schema) -> None:
    if app not in schema:
        raise UnknownApp(f"no application named {app!r}")


def reduce(state: SessionState, action: Action, schema: Schema) -> SessionState:
    """Pure transition: returns the next state, never mutates the input."""
    app_states = _copy_states(state.app_states)
    current_app = state.current_app

    if action.kind is ActionKind.APPLY_PATCH:
        patch = action.payload
        _check_app(patch.current_app, schema)
        allowed = schema[patch.current_app]
        for key in patch.config:
            if key not in allowed:
                raise UnknownParameter(
                    f"{patch.current_app!r} has no parameter named {key!r}"
                )
        merged = app_states.get(patch.current_app, {})
        merged.update(patch.config)
        app_states[patch.current_app] = merged
        current_app = patch.current_app
    elif action.kind is ActionKind.RESET_APP:
        _check_app(action.payload, schema)
        app_states.pop(action.payload, None)
    elif action.kind is ActionKind.SWITCH_APP:
        _check_app(action.payload, schema)
        current_app = action.payload

    return SessionState(
        session_id=state.session_id,
        current_app=current_app,
        app_states=app_states,
        version=state.version + 1,
    )


class Subscription:
    """One subscriber's ordered feed of (version, state) events."""

    _CLOSED = object()

    def __init__(self, on_close):
        self._queue: queue.SimpleQueue = queue.SimpleQueue()
        self._on_close = on_close
        self._closed = False

    def _push(self, version: int, state: SessionState) -> None:
        self._queue.put((version, state))

    def get(self, timeout: float | None = None) -> tuple[int, SessionState] | None:
        """Next event, or None if the subscription is closed. Raises
        queue.Empty on timeout."""
        if self._closed:
            return None
        item = self._queue.get(timeout=timeout)
        if item is Subscription._CLOSED:
            self._closed = True
            return None
        return item

    def close(self) -> None:
        if not self._closed:
            self._on_close(self)
            self._queue.put(Subscription._CLOSED)

    def __iter__(self) -> Iterator[tuple[int, SessionState]]:
        while True:
            item = self._queue.get()
            if item is Subscription._CLOSED:
                self._closed = True
                return
            yield item


class _Session:
    def __init__(self, session_id: str):
        self.lock = threading.Lock()
        self.state = initial_state(session_id)
        self.last_sequence = 0
        self.subscribers: list[Subscription] = []


class Store:
    """Holds every session's state; dispatches serialize per session."""

    def __init__(
        self,
        schema: Schema,
        auto_create: bool = True,
        log_path: str | Path | None = None,
    ):
        self._schema = dict(schema)
        self._auto_create = auto_create
        self._sessions: dict[str, _Session] = {}
        self._registry_lock = threading.Lock()
        self._log_lock = threading.Lock()
        self._log = open(log_path, "a", encoding="utf-8") if log_path else None

    def _session(self, session_id: str, create: bool | None = None) -> _Session:
        create = self._auto_create if create is None else create
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                if not create:
                    raise UnknownSession(f"no session {session_id!r}")
                session = _Session(session_id)
                self._sessions[session_id] = session
            return session

    def dispatch(self, session_id: str, action: Action) -> SessionState:
        session = self._session(session_id)
        with session.lock:
            sequence = action.sequence
            if sequence is None:
                sequence = session.last_sequence + 1
            elif sequence <= session.last_sequence:
                raise StaleSequence(
                    f"sequence {sequence} already applied (last was {session.last_sequence})"
                )
            new_state = reduce(session.state, action, self._schema)
            session.state = new_state
            session.last_sequence = sequence
            self._append_log(session_id, sequence, action)
            snapshot = self._copy(new_state)
            for sub in session.subscribers:
                sub._push(new_state.version, snapshot)
            return snapshot

    def snapshot(self, session_id: str) -> SessionState:
        session = self._session(session_id)
        with session.lock:
            return self._copy(session.state)

    def subscribe(self, session_id: str) -> Subscription:
        session = self._session(session_id)

        def unsubscribe(sub: Subscription) -> None:
            with session.lock:
                if sub in session.subscribers:
                    session.subscribers.remove(sub)

        sub = Subscription(on_close=unsubscribe)
        with session.lock:
            session.subscribers.append(sub)
        return sub

    def session_ids(self) -> list[str]:
        with self._registry_lock:
            return list(self._sessions)

    @staticmethod
    def _copy(state: SessionState) -> SessionState:
        return SessionState(
            session_id=state.session_id,
            current_app=state.current_app,
            app_states=_copy_states(state.app_states),
            version=state.version,
        )

    def _append_log(self, session_id: str, sequence: int, action: Action) -> None:
        if self._log is None:
            return
        payload = (
            action.payload.to_json()
            if isinstance(action.payload, StatePatch)
            else action.payload
        )
        record = {
            "session": session_id,
            "sequence": sequence,
            "action": {"kind": action.kind.value, "payload": payload},
            "timestamp": time.time(),
        }
        with self._log_lock:
            self._log.write(json.dumps(record, ensure_ascii=False) + "\n")
            self._log.flush()

    def close(self) -> None:
        if self._log is not None:
            self._log.close()
            self._log = None
