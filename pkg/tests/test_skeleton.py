import random
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from kgk.degree import Degree
from kgk.graphs import cartesian_product, chain_graph, free_loops, omega, two_vertex_example
from kgk.randgraphs import random_corpus, random_kgraph
from kgk.skeleton import (
    GraphError,
    PathError,
    check_hexagon,
    check_row_finite_no_source,
    compose,
    count_paths,
    enumerate_paths,
    factor,
    make_path,
    normalize,
    segment,
    validate_graph,
)

from oracles import brute_count, check_unique_factorization, hexagon_failures, mutate_flip

D = Degree.of


def _loops_data(flip_row):
    return {
        "rank": 2,
        "vertices": ["v0"],
        "edges": [
            {"color": 1, "id": "l1", "src": "v0", "rng": "v0"},
            {"color": 2, "id": "l2", "src": "v0", "rng": "v0"},
        ],
        "flips": [{"i": 1, "j": 2, "pairs": [flip_row]}],
    }


class TestValidate:
    def test_one_loop_per_colour(self):
        g = validate_graph(_loops_data(["l1", "l2", "l2", "l1"]))
        assert g.flip("l1", "l2") == ("l2", "l1")

    def test_image_with_wrong_colours_names_the_pair(self):
        with pytest.raises(GraphError) as err:
            validate_graph(_loops_data(["l1", "l2", "l1", "l2"]))
        assert err.value.pair == ("l1", "l2")

    def test_two_vertex_example(self):
        g = two_vertex_example()
        assert g.flip("lam1", "mu1") == ("mu1", "lam2")
        assert g.flip("mu2", "lam1") == ("lam2", "mu2")

    def test_missing_pair(self):
        data = _loops_data(["l1", "l2", "l2", "l1"])
        data["flips"] = []
        with pytest.raises(GraphError, match="misses"):
            validate_graph(data)

    def test_not_injective(self):
        g = free_loops(2, [2, 1])
        data = g.to_dict()
        data["flips"][0]["pairs"] = [["l1_0", "l2", "l2", "l1_0"], ["l1_1", "l2", "l2", "l1_0"]]
        with pytest.raises(GraphError, match="injective"):
            validate_graph(data)

    def test_moves_source(self):
        g = two_vertex_example()
        data = g.to_dict()
        data["flips"][0]["pairs"] = [["lam1", "mu1", "mu1", "lam1"], ["lam2", "mu2", "mu2", "lam2"]]
        with pytest.raises(GraphError):
            validate_graph(data)

    def test_empty_vertices(self):
        with pytest.raises(GraphError):
            validate_graph({"rank": 1, "vertices": [], "edges": []})


class TestHexagon:
    def test_swap_loops(self):
        assert check_hexagon(free_loops(3)).ok

    def test_omega3(self):
        rep = check_hexagon(omega(3, 1))
        assert rep.ok and rep.triples_checked == 1

    def test_rank_two_vacuous(self):
        assert check_hexagon(two_vertex_example()).ok

    def test_mutation_detected(self):
        pool = [g for g in random_corpus(0, 100) if g.rank == 3]
        assert all(check_hexagon(g).ok for g in pool)
        rnd = random.Random(3)
        for _ in range(2000):
            h = mutate_flip(rnd.choice(pool), rnd)
            if h is not None and hexagon_failures(h):
                break
        else:
            pytest.fail("no hexagon-breaking mutation found")
        rep = check_hexagon(h)
        assert not rep.ok
        assert tuple(rep.witness) in set(hexagon_failures(h))
        assert rep.left != rep.right

    def test_all_orders_agree_when_hexagonal(self):
        g = cartesian_product(free_loops(1, 2), free_loops(2, 2))
        for lam in enumerate_paths(g, g.vertices[0], D(1, 1, 1)):
            forms = {normalize(g, list(p)) for p in permutations(lam.edges)
                     if all(g.src[p[t]] == g.rng[p[t + 1]] for t in range(2))}
            assert forms == {lam}


class TestPaths:
    def test_single_edge(self):
        g = two_vertex_example()
        p = normalize(g, ["lam1"])
        assert p.blocks(g) == [("lam1",), ()]

    def test_flip_back_to_normal_form(self):
        g = two_vertex_example()
        p = normalize(g, ["mu1", "lam2"])
        assert p.edges == ("lam1", "mu1")
        assert (p.rng, p.src) == ("L", "R")

    def test_idempotent(self):
        g = two_vertex_example()
        p = normalize(g, ["lam1", "mu1"])
        assert normalize(g, list(p.edges)) == p

    def test_not_composable(self):
        g = two_vertex_example()
        with pytest.raises(PathError) as err:
            normalize(g, ["lam1", "lam2"])
        assert err.value.position == 0

    def test_compose(self):
        g = two_vertex_example()
        lam = compose(g, g.edge_path("lam1"), g.edge_path("mu1"))
        assert lam.degree == D(1, 1) and (lam.rng, lam.src) == ("L", "R")
        assert compose(g, lam, g.identity("R")) == lam
        with pytest.raises(PathError):
            compose(g, g.edge_path("lam1"), g.edge_path("lam2"))

    def test_segments(self):
        g = two_vertex_example()
        lam = make_path(g, ["lam1", "mu1"])
        assert segment(g, lam, D(0, 0), D(1, 0)).edges == ("lam1",)
        assert segment(g, lam, D(0, 1), D(1, 1)).edges == ("lam2",)
        assert segment(g, lam, D(0, 0), D(1, 1)) == lam
        assert segment(g, lam, D(1, 0), D(1, 0)) == g.identity("L")
        with pytest.raises(PathError):
            segment(g, lam, D(0, 0), D(2, 0))

    def test_enumerate(self):
        assert len(enumerate_paths(free_loops(2), "v0", D(2, 1))) == 1
        assert len(enumerate_paths(free_loops(1, 2), "v0", D(3))) == 8
        g = two_vertex_example()
        assert [p.edges for p in enumerate_paths(g, "L", D(1, 1))] == [("lam1", "mu1")]

    def test_associativity_on_qn(self):
        g = free_loops(3)
        e = [g.edge_path(x) for x in ("l1", "l2", "l3")]
        rnd = random.Random(5)
        for _ in range(20):
            a, b, c = (compose(g, rnd.choice(e), rnd.choice(e)) for _ in range(3))
            assert compose(g, compose(g, a, b), c) == compose(g, a, compose(g, b, c))


class TestFactorization:
    @pytest.mark.parametrize("seed", [0, 1])
    def test_against_word_classes(self, seed):
        for g in random_corpus(seed, 15):
            assert check_unique_factorization(g, Degree.ones(g.rank) * 2) == []

    def test_factor_recomposes(self):
        for g in random_corpus(7, 12):
            top = Degree.ones(g.rank) * 2
            for v in g.vertices:
                for lam in enumerate_paths(g, v, top):
                    for m in top.below():
                        mu, nu = factor(g, lam, m)
                        assert mu.degree == m and compose(g, mu, nu) == lam

    def test_segment_coherence(self):
        g = cartesian_product(free_loops(1, 2), two_vertex_example())
        top = D(1, 1, 1)
        for lam in enumerate_paths(g, g.vertices[0], top):
            for n in top.below():
                for m in n.below():
                    assert segment(g, lam, m, n) == segment(g, segment(g, lam, m, top), Degree.zero(3), n - m)


class TestRowFinite:
    def test_qn_no_source(self):
        res = check_row_finite_no_source(free_loops(3), D(2, 0, 1))
        assert res["no_source"] and res["per_vertex"]["v0"]["count"] == 1

    def test_chain_has_source(self):
        res = check_row_finite_no_source(chain_graph(), D(1))
        assert res["per_vertex"]["v"] == {"count": 0, "row_finite": True, "no_source": False}
        assert res["per_vertex"]["w"]["no_source"]

    def test_closure_by_brute_count(self):
        rnd = random.Random(11)
        g = random_kgraph(rnd, 2, max_vertices=5, no_source=True)
        while not check_row_finite_no_source(g, D(1, 1))["generators_pass"]:
            g = random_kgraph(rnd, 2, max_vertices=5, no_source=True)
        for v in g.vertices:
            assert brute_count(g, v, D(2, 3)) > 0
            assert brute_count(g, v, D(2, 3)) == count_paths(g, v, D(2, 3)) == len(enumerate_paths(g, v, D(2, 3)))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3))
def test_normalize_idempotent_random(seed, k):
    g = random_kgraph(random.Random(seed), k)
    for v in g.vertices:
        for lam in enumerate_paths(g, v, Degree.ones(k)):
            assert normalize(g, list(lam.edges)) == lam
