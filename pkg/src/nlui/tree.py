"""Annotated application tree: load, validate, and serve meta-descriptions.

A manifest declares applications and their parameters as prose-annotated
nodes. The tree is immutable after load and carries one precomputed
embedding per node (name + description + examples, space-joined), which is
what the classifier compares utterances against.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .embed import cosine_similarity, is_zero_vector
from .errors import (
    DuplicateId,
    EmptyDescription,
    MalformedManifest,
    ParameterWithoutPrompt,
    UnknownNode,
)

ROOT_ID = ""

SPAN = "span"
ARITHMETIC = "arithmetic"
EXTRACTOR_KINDS = (SPAN, ARITHMETIC)


class NodeKind(Enum):
    APPLICATION = "application"
    PARAMETER = "parameter"


@dataclass(frozen=True)
class AnnotationNode:
    id: str
    kind: NodeKind
    name: str
    description: str
    prompt: str = ""
    extractor_kind: str = ""
    examples: tuple[str, ...] = ()
    children: tuple["AnnotationNode", ...] = ()


def embedding_text(node: AnnotationNode) -> str:
    return " ".join([node.name, node.description, *node.examples])


@dataclass(frozen=True)
class AnnotationTree:
    root: AnnotationNode
    nodes: dict[str, AnnotationNode]
    parents: dict[str, str]
    node_embeddings: dict[str, np.ndarray]
    encoder: object = field(repr=False, default=None)

    @property
    def applications(self) -> tuple[AnnotationNode, ...]:
        return self.root.children

    def node(self, node_id: str) -> AnnotationNode:
        if node_id == ROOT_ID:
            return self.root
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownNode(f"no node with id {node_id!r}") from None

    def application_by_name(self, name: str) -> AnnotationNode | None:
        for app in self.applications:
            if app.name == name:
                return app
        return None

    def iter_nodes(self):
        """All real nodes in depth-first manifest order."""
        for app in self.root.children:
            yield app
            yield from app.children


def _require(condition: bool, message: str, path: str, error=MalformedManifest) -> None:
    if not condition:
        raise error(message, path)


def _string_field(obj: dict, key: str, path: str, default: str | None = None) -> str:
    value = obj.get(key, default)
    _require(isinstance(value, str), f"field {key!r} must be a string", path)
    return value


def _examples_field(obj: dict, path: str) -> tuple[str, ...]:
    raw = obj.get("examples", [])
    _require(
        isinstance(raw, list) and all(isinstance(e, str) for e in raw),
        "field 'examples' must be a list of strings",
        path,
    )
    return tuple(raw)


def _parse_parameter(raw: dict, app_id: str, path: str) -> AnnotationNode:
    _require(isinstance(raw, dict), "parameter entry must be an object", path)
    for nested in ("parameters", "children"):
        _require(nested not in raw, "parameter nodes cannot have children", path)
    name = _string_field(raw, "name", path)
    _require(bool(name), "parameter name must be non-empty", path)
    description = _string_field(raw, "description", path)
    if not description.strip():
        raise EmptyDescription("parameter description must be non-empty prose", path)
    prompt = _string_field(raw, "prompt", path, default="")
    if not prompt.strip():
        raise ParameterWithoutPrompt("parameter needs an extraction prompt", path)
    extractor = _string_field(raw, "extractor", path, default=SPAN)
    _require(extractor in EXTRACTOR_KINDS, f"extractor must be one of {EXTRACTOR_KINDS}", path)
    node_id = _string_field(raw, "id", path, default=f"{app_id}.{name}")
    _require(bool(node_id), "parameter id must be non-empty", path)
    return AnnotationNode(
        id=node_id,
        kind=NodeKind.PARAMETER,
        name=name,
        description=description,
        prompt=prompt,
        extractor_kind=extractor,
        examples=_examples_field(raw, path),
    )


def _parse_application(raw: dict, path: str) -> AnnotationNode:
    _require(isinstance(raw, dict), "application entry must be an object", path)
    name = _string_field(raw, "name", path)
    _require(bool(name), "application name must be non-empty", path)
    description = _string_field(raw, "description", path)
    if not description.strip():
        raise EmptyDescription("application description must be non-empty prose", path)
    app_id = _string_field(raw, "id", path, default=name)
    _require(bool(app_id), "application id must be non-empty", path)
    params_raw = raw.get("parameters")
    _require(
        isinstance(params_raw, list) and len(params_raw) > 0,
        "application must declare at least one parameter",
        path,
    )
    children = tuple(
        _parse_parameter(p, app_id, f"{path}.parameters[{i}]") for i, p in enumerate(params_raw)
    )
    return AnnotationNode(
        id=app_id,
        kind=NodeKind.APPLICATION,
        name=name,
        description=description,
        examples=_examples_field(raw, path),
        children=children,
    )


def _check_uniqueness(apps: tuple[AnnotationNode, ...]) -> None:
    seen_ids: dict[str, str] = {}

    def claim(node_id: str, path: str) -> None:
        if node_id in seen_ids:
            raise DuplicateId(
                f"id {node_id!r} used by both {seen_ids[node_id]} and {path}", path
            )
        seen_ids[node_id] = path

    def check_sibling_names(nodes, parent_path: str) -> None:
        names: dict[str, str] = {}
        for i, node in enumerate(nodes):
            path = f"{parent_path}[{i}]"
            if node.name in names:
                raise DuplicateId(
                    f"name {node.name!r} used by both {names[node.name]} and {path}", path
                )
            names[node.name] = path

    check_sibling_names(apps, "apps")
    for i, app in enumerate(apps):
        claim(app.id, f"apps[{i}]")
        check_sibling_names(app.children, f"apps[{i}].parameters")
        for j, param in enumerate(app.children):
            claim(param.id, f"apps[{i}].parameters[{j}]")


def load_manifest(data: bytes | str, encoder) -> AnnotationTree:
    """Parse, validate, and embed a manifest.

    ``encoder`` must expose encode(text) -> vector; every node gets one
    embedding computed from its name, description, and examples.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise MalformedManifest(f"manifest is not valid JSON: {exc}") from exc
    _require(isinstance(doc, dict), "manifest root must be an object", "")
    apps_raw = doc.get("apps")
    _require(
        isinstance(apps_raw, list) and len(apps_raw) > 0,
        "manifest must declare at least one application under 'apps'",
        "apps",
    )
    apps = tuple(_parse_application(a, f"apps[{i}]") for i, a in enumerate(apps_raw))
    _check_uniqueness(apps)

    root = AnnotationNode(
        id=ROOT_ID, kind=NodeKind.APPLICATION, name="", description="", children=apps
    )
    nodes: dict[str, AnnotationNode] = {}
    parents: dict[str, str] = {}
    embeddings: dict[str, np.ndarray] = {}
    for app in apps:
        nodes[app.id] = app
        parents[app.id] = ROOT_ID
        embeddings[app.id] = encoder.encode(embedding_text(app))
        for param in app.children:
            nodes[param.id] = param
            parents[param.id] = app.id
            embeddings[param.id] = encoder.encode(embedding_text(param))
    return AnnotationTree(
        root=root, nodes=nodes, parents=parents, node_embeddings=embeddings, encoder=encoder
    )


def children_of(tree: AnnotationTree, node_id: str) -> list[AnnotationNode]:
    return list(tree.node(node_id).children)


def ambiguity_report(
    tree: AnnotationTree, threshold: float = 0.85
) -> list[tuple[str, str, float]]:
    """Sibling pairs whose description embeddings are close enough to risk
    misrouting, sorted most-similar first. Developer lint, not a runtime check."""
    encoder = tree.encoder
    pairs: list[tuple[str, str, float]] = []
    sibling_groups = [tree.applications] + [app.children for app in tree.applications]
    for group in sibling_groups:
        vectors = [encoder.encode(node.description) for node in group]
        for i in range(len(group)):
            for j in range(i + 1, len(group)):
                if is_zero_vector(vectors[i]) or is_zero_vector(vectors[j]):
                    continue
                sim = cosine_similarity(vectors[i], vectors[j])
                if sim > threshold:
                    pairs.append((group[i].id, group[j].id, sim))
    pairs.sort(key=lambda item: -item[2])
    return pairs
