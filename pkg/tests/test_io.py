import json

import pytest

from kgk.catalog import generate_example
from kgk.graphio import SchemaError, fiber_perm_json, parse_kgraph, serialize_kgraph
from kgk.graphs import two_vertex_example
from kgk.skeleton import GraphError
from kgk.skew import solve_fiber_congruence


def test_round_trip_with_weights():
    g, w = generate_example("qn", [2])
    text = serialize_kgraph(g, w)
    g2, w2 = parse_kgraph(text)
    assert serialize_kgraph(g2, w2) == text
    assert dict(w2.n) == {"l1": 2, "l2": 3}


def test_round_trip_without_weights():
    g = two_vertex_example()
    g2, w2 = parse_kgraph(serialize_kgraph(g))
    assert w2 is None and g2.to_dict() == g.to_dict()


def _data():
    return json.loads(serialize_kgraph(two_vertex_example()))


def test_unknown_field_named():
    data = _data()
    data["edges"][0]["colour"] = data["edges"][0].pop("color")
    with pytest.raises(SchemaError) as err:
        parse_kgraph(json.dumps(data))
    assert err.value.field == "colour"


def test_empty_vertices():
    data = _data()
    data["vertices"] = []
    with pytest.raises(SchemaError):
        parse_kgraph(json.dumps(data))


def test_bool_rank_rejected():
    data = _data()
    data["rank"] = True
    with pytest.raises(SchemaError, match="rank"):
        parse_kgraph(json.dumps(data))


def test_not_json():
    with pytest.raises(SchemaError, match="JSON"):
        parse_kgraph("{rank: 2")


def test_weights_on_unknown_edge():
    g, w = generate_example("qn", [1])
    data = json.loads(serialize_kgraph(g, w))
    data["weights"]["m"]["ghost"] = 1
    with pytest.raises(GraphError, match="ghost"):
        parse_kgraph(json.dumps(data))


def test_fiber_json():
    g, w = generate_example("ex53", [2, 5, 3, 7])
    out = json.loads(fiber_perm_json(solve_fiber_congruence(g, w, ("l1", "l2"))))
    assert out["pair"] == ["l1", "l2"] and out["colors"] == [1, 2]
    assert [0, 1, 1, 1] in out["table"] and len(out["table"]) == 6
