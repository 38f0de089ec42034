"""Bundled demonstration applications: account form, weather, calculator.

Ships the manifest data plus per-parameter value validators, widget hints
for frontends, and the calculator's expression evaluator. Weather data
comes from an offline lookup table; a live HTTP source can stand in behind
the same record shape.
"""
from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path

import requests

from . import calc
from .embed import DeterministicEncoder
from .errors import EngineError, ParseError, UnknownApp, UnknownParameter
from .tokenize import Vocabulary
from .tree import AnnotationTree, load_manifest

ACCOUNT_FORM = "AccountForm"
WEATHER = "Weather"
CALCULATOR = "Calculator"

TEXT_FIELD = "text_field"
RESULT_DISPLAY = "result_display"

WIDGET_HINTS: dict[str, dict[str, str]] = {
    ACCOUNT_FORM: {"Name": TEXT_FIELD, "Address": TEXT_FIELD, "Email": TEXT_FIELD},
    WEATHER: {"City": TEXT_FIELD},
    CALCULATOR: {"promptSequence": RESULT_DISPLAY},
}

_EMAIL_OK = re.compile(r"[^@\s]+@[^@\s]+\.[A-Za-z]{2,}$")


def _data_text(name: str) -> str:
    return resources.files("nlui").joinpath("data", name).read_text(encoding="utf-8")


def bundled_manifest_bytes() -> bytes:
    return _data_text("manifest.json").encode("utf-8")


def bundled_vocabulary() -> Vocabulary:
    return Vocabulary([line for line in _data_text("vocab.txt").splitlines() if line])


def load_bundled_tree(encoder=None) -> AnnotationTree:
    if encoder is None:
        encoder = DeterministicEncoder(bundled_vocabulary())
    return load_manifest(bundled_manifest_bytes(), encoder)


def bundled_corpus_text(name: str) -> str:
    return _data_text(f"corpus/{name}")


# -- value validation -------------------------------------------------------

def _validate_email(value: str) -> str | None:
    if _EMAIL_OK.fullmatch(value.strip()):
        return None
    return "must contain '@' and a dot-bearing domain"


def _validate_non_empty(value: str) -> str | None:
    return None if value.strip() else "must be non-empty"


def _validate_expression(value: str) -> str | None:
    try:
        calc.eval_to_fraction(value)
    except ParseError as exc:
        return f"not a valid expression: {exc}"
    except EngineError:
        pass  # evaluation errors (division by zero) are still valid syntax
    return None


_VALIDATORS = {
    (ACCOUNT_FORM, "Name"): _validate_non_empty,
    (ACCOUNT_FORM, "Address"): _validate_non_empty,
    (ACCOUNT_FORM, "Email"): _validate_email,
    (WEATHER, "City"): _validate_non_empty,
    (CALCULATOR, "promptSequence"): _validate_expression,
}


def validate_value(app: str, param: str, value: str) -> str | None:
    """None when the value is acceptable, else a human-readable violation."""
    if app not in WIDGET_HINTS:
        raise UnknownApp(f"no application named {app!r}")
    if param not in WIDGET_HINTS[app]:
        raise UnknownParameter(f"{app!r} has no parameter named {param!r}")
    return _VALIDATORS[(app, param)](value)


def widget_hint(app: str, param: str) -> str:
    if app not in WIDGET_HINTS:
        raise UnknownApp(f"no application named {app!r}")
    if param not in WIDGET_HINTS[app]:
        raise UnknownParameter(f"{app!r} has no parameter named {param!r}")
    return WIDGET_HINTS[app][param]


# -- calculator -----------------------------------------------------------------

eval_expression = calc.eval_expression


# -- weather -----------------------------------------------------------------

def load_weather_table(path: str | Path | None = None) -> dict[str, dict]:
    if path is None:
        return json.loads(_data_text("weather.json"))
    return json.loads(Path(path).read_text(encoding="utf-8"))


def lookup_weather(city: str, table: dict[str, dict] | None = None) -> dict | None:
    """Offline lookup; tries the full string, then the part before a comma."""
    table = table if table is not None else load_weather_table()
    key = city.strip().lower()
    if key in table:
        return table[key]
    head = key.split(",")[0].strip()
    return table.get(head)


class HttpWeatherClient:
    """GET /weather?city=... -> {"city": str, "summary": str, "temp_c": float}."""

    def __init__(self, base_url: str, timeout: float = 5.0):
        self.base_url = base_url.rstrip("/")
        self.timeout = timeout

    def lookup(self, city: str) -> dict | None:
        resp = requests.get(
            f"{self.base_url}/weather", params={"city": city}, timeout=self.timeout
        )
        if resp.status_code == 404:
            return None
        resp.raise_for_status()
        return resp.json()
