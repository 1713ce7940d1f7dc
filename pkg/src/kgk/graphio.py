"""Strict JSON reading and writing of graphs, weights and fibre tables."""

from __future__ import annotations

import json
from typing import Any

from .skeleton import GraphError, KGraph, validate_graph
from .skew import FiberPermutation, Weights

TOP_FIELDS = {"rank", "vertices", "edges", "flips", "weights"}
REQUIRED_TOP = {"rank", "vertices", "edges"}
EDGE_FIELDS = {"color", "id", "src", "rng"}
FLIP_FIELDS = {"i", "j", "pairs"}


class SchemaError(ValueError):
    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _fields(obj: Any, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, dict):
        raise SchemaError(f"{where} must be an object", where)
    for key in sorted(obj):
        if key not in allowed:
            raise SchemaError(f"unknown field {key!r} in {where}", key)
    for key in sorted(required):
        if key not in obj:
            raise SchemaError(f"missing field {key!r} in {where}", key)


def _string(x: Any, where: str) -> None:
    if not isinstance(x, str):
        raise SchemaError(f"{where} must be a string, got {x!r}", where)


def check_schema(data: Any) -> None:
    """Reject anything outside the graph file format before validation proper."""
    _fields(data, TOP_FIELDS, REQUIRED_TOP, "graph")
    if not _is_int(data["rank"]):
        raise SchemaError("rank must be an integer", "rank")
    if not isinstance(data["vertices"], list) or not data["vertices"]:
        raise SchemaError("vertices must be a non-empty list", "vertices")
    for v in data["vertices"]:
        _string(v, "vertices[]")
    if not isinstance(data["edges"], list):
        raise SchemaError("edges must be a list", "edges")
    for t, rec in enumerate(data["edges"]):
        _fields(rec, EDGE_FIELDS, EDGE_FIELDS, f"edges[{t}]")
        if not _is_int(rec["color"]):
            raise SchemaError(f"edges[{t}].color must be an integer", "color")
        for key in ("id", "src", "rng"):
            _string(rec[key], f"edges[{t}].{key}")
    flips = data.get("flips", [])
    if not isinstance(flips, list):
        raise SchemaError("flips must be a list", "flips")
    for t, rec in enumerate(flips):
        _fields(rec, FLIP_FIELDS, FLIP_FIELDS, f"flips[{t}]")
        if not (_is_int(rec["i"]) and _is_int(rec["j"])):
            raise SchemaError(f"flips[{t}] colours must be integers", "i")
        if not isinstance(rec["pairs"], list):
            raise SchemaError(f"flips[{t}].pairs must be a list", "pairs")
        for row in rec["pairs"]:
            if not (isinstance(row, list) and len(row) == 4 and all(isinstance(x, str) for x in row)):
                raise SchemaError(f"flips[{t}].pairs rows must be [a, b, b2, a2] strings", "pairs")
    if "weights" in data:
        _fields(data["weights"], {"m", "n"}, {"m", "n"}, "weights")
        for key in ("m", "n"):
            table = data["weights"][key]
            if not isinstance(table, dict) or not all(_is_int(x) for x in table.values()):
                raise SchemaError(f"weights.{key} must map edge ids to integers", key)


def parse_kgraph(text: str) -> tuple[KGraph, Weights | None]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"not valid JSON: {exc}") from exc
    check_schema(data)
    g = validate_graph(data)
    w = None
    if "weights" in data:
        w = Weights(dict(data["weights"]["m"]), dict(data["weights"]["n"]))
        extra = (set(w.m) | set(w.n)) - set(g.color)
        if extra:
            raise GraphError(f"weights name unknown edge {sorted(extra)[0]!r}")
        w.check_domain(g)
    return g, w


def graph_to_dict(g: KGraph, w: Weights | None = None) -> dict:
    out = g.to_dict()
    if w is not None:
        out["weights"] = w.to_dict()
    return out


def serialize_kgraph(g: KGraph, w: Weights | None = None) -> str:
    return json.dumps(graph_to_dict(g, w), indent=2, sort_keys=True) + "\n"


def load_kgraph(path: str) -> tuple[KGraph, Weights | None]:
    with open(path, encoding="utf-8") as fh:
        return parse_kgraph(fh.read())


def fiber_perm_json(perm: FiberPermutation) -> str:
    return json.dumps(perm.to_dict(), sort_keys=True)
