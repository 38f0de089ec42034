"""Command-line entry points: serve, parse, validate, eval.

Configuration comes from flags first, then the LMUI_* environment
variables. Exit codes follow sysexits where it matters: 64 for usage
errors, 66 for unreadable input files, 2 for a parse that needs
clarification, 1 for failed validation.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .apps import bundled_manifest_bytes, bundled_vocabulary
from .embed import DeterministicEncoder, RemoteEncoder
from .errors import (
    EmptyUtterance,
    EngineError,
    ManifestError,
    NoParametersExtracted,
    ZeroVector,
)
from .evaluate import read_corpus_file, run_pipeline_eval, score
from .extract import ExtractorConfig, RemoteExtractor
from .gateway import DEFAULT_SESSION, Engine, GatewayServer
from .tokenize import Vocabulary
from .tree import ambiguity_report, load_manifest

EX_USAGE = 64
EX_NOINPUT = 66
EX_CLARIFY = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EX_USAGE)


def _env(name: str, default: str | None = None) -> str | None:
    return os.environ.get(f"LMUI_{name}", default)


def build_parser() -> _Parser:
    parser = _Parser(prog="nlui", description="Natural-language UI control engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument(
            "--manifest",
            default=_env("MANIFEST"),
            help="manifest JSON path (default: bundled three-app manifest)",
        )
        p.add_argument("--vocab", default=_env("VOCAB"), help="vocabulary file path")
        p.add_argument(
            "--remote-encoder",
            default=_env("REMOTE_ENCODER"),
            help="base URL of a remote sentence-encoder service",
        )
        p.add_argument(
            "--remote-extractor",
            default=_env("REMOTE_EXTRACTOR"),
            help="base URL of a remote extraction service (used for both kinds)",
        )

    serve = sub.add_parser("serve", help="run the HTTP gateway")
    add_common(serve)
    serve.add_argument("--host", default=_env("HOST", "127.0.0.1"))
    serve.add_argument("--port", type=int, default=int(_env("PORT", "8080")))
    serve.add_argument("--log", default=_env("LOG"), help="append-only action log file")
    serve.add_argument("--ui-dir", default=_env("UI_DIR"), help="static frontend directory")

    parse = sub.add_parser("parse", help="parse one utterance and print the state patch")
    add_common(parse)
    parse.add_argument("--text", required=True, help="the utterance to parse")

    validate = sub.add_parser("validate", help="check a manifest and report ambiguities")
    add_common(validate)
    validate.add_argument(
        "--ambiguity-threshold", type=float, default=0.85,
        help="sibling description similarity above this is reported",
    )

    evaluate = sub.add_parser("eval", help="run a corpus through the pipeline and score it")
    add_common(evaluate)
    evaluate.add_argument("--corpus", required=True, help="corpus file path")
    evaluate.add_argument(
        "--predictions", help="score this predictions file (one answer per line) instead"
    )
    evaluate.add_argument("--format", choices=("json", "table"), default="json")

    return parser


def _read_file(path: str, kind: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        print(f"error: cannot read {kind} {path!r}: {exc}", file=sys.stderr)
        raise SystemExit(EX_NOINPUT)


def _build_encoder(args):
    if args.remote_encoder:
        return RemoteEncoder(args.remote_encoder)
    if args.vocab:
        vocab = Vocabulary.from_file(args.vocab)
    else:
        vocab = bundled_vocabulary()
    return DeterministicEncoder(vocab)


def _build_tree_and_doc(args):
    if args.manifest:
        raw = _read_file(args.manifest, "manifest")
    else:
        raw = bundled_manifest_bytes()
    tree = load_manifest(raw, _build_encoder(args))
    return tree, json.loads(raw.decode("utf-8"))


def _build_extractor_config(args) -> ExtractorConfig:
    config = ExtractorConfig()
    if args.remote_extractor:
        remote = RemoteExtractor(args.remote_extractor)
        config.remote_span = remote
        config.remote_arithmetic = remote
    return config


def _cmd_serve(args) -> int:
    tree, doc = _build_tree_and_doc(args)
    engine = Engine(
        tree,
        manifest_doc=doc,
        extractor_config=_build_extractor_config(args),
        log_path=args.log,
    )
    server = GatewayServer(engine, host=args.host, port=args.port, ui_dir=args.ui_dir)
    print(f"listening on http://{server.host}:{server.port}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def _cmd_parse(args) -> int:
    if not args.text.strip():
        print("error: --text must be a non-empty utterance", file=sys.stderr)
        return EX_USAGE
    tree, doc = _build_tree_and_doc(args)
    engine = Engine(tree, manifest_doc=doc, extractor_config=_build_extractor_config(args))
    try:
        outcome = engine.parse(DEFAULT_SESSION, args.text)
    except (EmptyUtterance, ZeroVector) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_USAGE
    except NoParametersExtracted as exc:
        print(
            json.dumps(
                {
                    "error": "clarification_needed",
                    "classification": {
                        "app": exc.app_id,
                        "score": exc.score,
                        "confident": exc.confident,
                    },
                },
                ensure_ascii=False,
            ),
            file=sys.stderr,
        )
        return EX_CLARIFY
    print(outcome.patch.to_json_str())
    return 0


def _cmd_validate(args) -> int:
    raw = _read_file(args.manifest, "manifest") if args.manifest else bundled_manifest_bytes()
    try:
        tree = load_manifest(raw, _build_encoder(args))
    except ManifestError as exc:
        print(f"invalid manifest: {exc}", file=sys.stderr)
        return 1
    pairs = ambiguity_report(tree, threshold=args.ambiguity_threshold)
    for first, second, sim in pairs:
        print(f"warning: {first} and {second} have similar descriptions ({sim:.3f})")
    apps = len(tree.applications)
    params = sum(len(a.children) for a in tree.applications)
    print(f"ok: {apps} applications, {params} parameters, {len(pairs)} ambiguity warnings")
    return 0


def _cmd_eval(args) -> int:
    try:
        examples = read_corpus_file(args.corpus)
    except OSError as exc:
        print(f"error: cannot read corpus {args.corpus!r}: {exc}", file=sys.stderr)
        return EX_NOINPUT
    except EngineError as exc:
        print(f"error: corpus is malformed: {exc}", file=sys.stderr)
        return 1
    if args.predictions:
        produced = (
            _read_file(args.predictions, "predictions").decode("utf-8").splitlines()
        )
        report = score(examples, produced)
    else:
        tree, _ = _build_tree_and_doc(args)
        report = run_pipeline_eval(tree, examples, _build_extractor_config(args))
    if args.format == "table":
        print(report.format_table())
    else:
        print(json.dumps(report.to_json(), indent=2, ensure_ascii=False))
    return 0


_COMMANDS = {
    "serve": _cmd_serve,
    "parse": _cmd_parse,
    "validate": _cmd_validate,
    "eval": _cmd_eval,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ManifestError as exc:
        print(f"invalid manifest: {exc}", file=sys.stderr)
        return 1
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
