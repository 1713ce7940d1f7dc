import random
from itertools import product

import pytest

from kgk.degree import Degree
from kgk.dynamics import (
    DynamicsError,
    InfPath,
    LazyPath,
    check_certificate,
    check_condition_a,
    check_contracting,
    check_invariant,
    check_minimal,
    eventually_periodic_paths,
    infpath,
    infpaths_equal,
    is_aperiodic,
    minimal_by_sampling,
    orbit,
    orbit_density_minimal,
    paths_equal_to_depth,
    pitchfork,
    positive_orbit,
    rotation_rule,
    shift,
    window,
)
from kgk.graphs import chain_graph, disjoint_union, free_loops, two_vertex_example
from kgk.randgraphs import random_corpus
from kgk.skeleton import enumerate_paths, has_no_source, make_path, segment

D = Degree.of
E, F = "l1_0", "l1_1"


@pytest.fixture
def ef():
    return free_loops(1, 2)


def word_of(g, alpha, n):
    return "".join("e" if x == E else "f" for x in window(g, alpha, D(n)).edges)


class TestShift:
    def test_zero(self, ef):
        a = infpath(ef, [F], [E])
        assert shift(ef, a, D(0)) is a

    def test_single_loop_fixed(self):
        g = free_loops(1)
        a = infpath(g, "v0", ["l1"])
        assert infpaths_equal(g, shift(g, a, D(1)), a)

    def test_prefix_consumed(self, ef):
        a = infpath(ef, [F], [E])
        b = shift(ef, a, D(1))
        assert b.prefix.is_vertex
        assert paths_equal_to_depth(ef, b, infpath(ef, "v0", [E]), D(10))

    def test_semigroup_law(self):
        g = two_vertex_example()
        a = infpath(g, ["lam1"], ["mu1", "lam2", "mu2", "lam1"])
        for p, q in product(D(2, 2).below(), repeat=2):
            assert paths_equal_to_depth(g, shift(g, shift(g, a, p), q), shift(g, a, p + q), D(6, 6))

    def test_cycle_must_be_positive(self):
        g = two_vertex_example()
        with pytest.raises(DynamicsError):
            infpath(g, "L", ["lam1"])


class TestEquality:
    def test_self(self, ef):
        a = infpath(ef, [E, F], [F, E])
        assert paths_equal_to_depth(ef, a, a, D(7))

    def test_first_edge_differs(self, ef):
        assert not paths_equal_to_depth(ef, infpath(ef, "v0", [E]), infpath(ef, [F], [E]), D(1))

    def test_rotations_against_strings(self, ef):
        letters = {"e": E, "f": F}
        for n in range(1, 5):
            for cyc in product("ef", repeat=n):
                c = "".join(cyc)
                for r in range(1, n):
                    rot = c[r:] + c[:r]
                    a = infpath(ef, "v0", [letters[x] for x in c])
                    b = infpath(ef, "v0", [letters[x] for x in rot])
                    expected = (c * 12)[:24] == (rot * 12)[:24]
                    assert infpaths_equal(ef, a, b) == expected
                    assert paths_equal_to_depth(ef, a, b, D(3 * n)) == expected
                    power = any(n % t == 0 and c == c[:t] * (n // t) for t in range(1, n))
                    if expected:
                        assert power


class TestAperiodic:
    def test_single_loop(self):
        g = free_loops(1)
        rep = is_aperiodic(g, infpath(g, "v0", ["l1"]), D(3))
        assert rep.status == "periodic" and rep.witness == (D(0), D(1))

    def test_period_two(self, ef):
        rep = is_aperiodic(ef, infpath(ef, "v0", [E, F]), D(4))
        assert rep.witness == (D(0), D(2))

    def test_non_power_cycle_still_periodic(self, ef):
        rep = is_aperiodic(ef, infpath(ef, "v0", [E, F, F]), D(4))
        assert rep.status == "periodic" and rep.witness == (D(0), D(3))

    def test_matches_string_brute_force(self, ef):
        letters = {"e": E, "f": F}
        for pre in ["", "f", "ef"]:
            for cyc in ["e", "ef", "eff", "efef"]:
                a = infpath(ef, [letters[x] for x in pre] or "v0", [letters[x] for x in cyc])
                L = len(pre) + 3 * len(cyc)
                s = pre + cyc * 200
                brute = None
                for q in range(L + 1):
                    for p in range(q):
                        if s[p:p + 60] == s[q:q + 60]:
                            brute = (p, q)
                            break
                    if brute:
                        break
                rep = is_aperiodic(ef, a, D(L))
                assert rep.witness == (D(brute[0]), D(brute[1]))

    def test_rank_two_matches_windows(self):
        g = two_vertex_example()
        a = infpath(g, ["lam1"], ["mu1", "lam2", "mu2", "lam1"])
        rep = is_aperiodic(g, a, D(3, 3))
        p, q = rep.witness
        assert paths_equal_to_depth(g, shift(g, a, p), shift(g, a, q), D(8, 8))
        for pp, qq in product(D(3, 3).below(), repeat=2):
            if (pp.key(), qq.key()) < (p.key(), q.key()) and pp.key() < qq.key() and qq.key() <= q.key():
                if qq == q and pp.key() >= p.key():
                    continue
                assert not paths_equal_to_depth(g, shift(g, a, pp), shift(g, a, qq), D(8, 8))


class TestConditionA:
    def test_one_loop_per_colour_fails(self):
        rep = check_condition_a(free_loops(2), D(2, 2), D(3, 3))
        assert not rep.ok and rep.per_vertex == {"v0": None}

    def test_two_loops_distinct_windows(self, ef):
        rep = check_condition_a(ef, D(8), D(24))
        assert rep.ok
        s = word_of(ef, rep.per_vertex["v0"], 40)
        windows = [s[p:p + 24] for p in range(9)]
        assert len(set(windows)) == 9

    def test_source_rejected(self):
        with pytest.raises(DynamicsError):
            check_condition_a(chain_graph(), D(2), D(2))

    def test_rotation_word_has_no_short_period(self):
        for a in (2, 3, 5, 7):
            rule = rotation_rule(a)
            w = [rule(t, 2) for t in range(2400)]
            for p in range(1, 80):
                assert any(w[i] != w[i + p] for i in range(200, 2200))
        with pytest.raises(ValueError):
            rotation_rule(4)

    def test_lazy_shift(self, ef):
        a = LazyPath(ef, "v0", rotation_rule(3))
        whole = window(ef, a, D(10))
        assert window(ef, shift(ef, a, D(3)), D(5)) == segment(ef, whole, D(3), D(8))


class TestOrbit:
    def test_one_vertex(self):
        g = free_loops(2)
        rep = orbit(g, "v0", infpath(g, "v0", ["l1", "l2"]))
        assert rep.orb_plus == rep.orb_minus == rep.orb == {"v0"}

    def test_two_vertex_positive_orbit(self):
        assert positive_orbit(two_vertex_example(), "L") == {"L", "R"}

    def test_range_mismatch(self):
        g = two_vertex_example()
        with pytest.raises(DynamicsError):
            orbit(g, "R", infpath(g, "L", ["lam1", "mu1", "lam2", "mu2"]))

    def test_negative_orbit_against_box(self):
        for g in random_corpus(21, 30):
            if not has_no_source(g):
                continue
            for v in g.vertices:
                for a in eventually_periodic_paths(g, v, 2, 1)[:2]:
                    top = Degree.ones(g.rank) * 9
                    whole = window(g, a, top)
                    box = {segment(g, whole, m, m).rng for m in top.below()}
                    assert orbit(g, v, a).orb_minus == box


class TestInvariant:
    def test_trivial_sets(self):
        g = two_vertex_example()
        for omega in (set(), {"L", "R"}):
            rep = check_invariant(g, omega)
            assert rep.positive and rep.negative

    def test_left_not_positive(self):
        rep = check_invariant(two_vertex_example(), {"L"})
        assert not rep.positive and rep.witnesses["positive"] == "mu2"

    def test_chain(self):
        g = chain_graph()
        assert check_invariant(g, {"w"}).positive
        assert not check_invariant(g, {"v"}).positive


class TestMinimal:
    def test_one_vertex(self):
        assert check_minimal(free_loops(3)).minimal

    def test_two_vertex(self):
        assert check_minimal(two_vertex_example()).minimal

    def test_union(self):
        rep = check_minimal(disjoint_union(free_loops(1), free_loops(1)))
        assert not rep.minimal and rep.witness == {"g0:v0"}

    def test_cap(self):
        g = disjoint_union(*[free_loops(1)] * 21)
        with pytest.raises(DynamicsError, match="sampling"):
            check_minimal(g)
        assert minimal_by_sampling(g).minimal is False

    def test_agrees_with_orbit_density(self):
        for g in random_corpus(2, 60, max_vertices=6):
            assert check_minimal(g).minimal == orbit_density_minimal(g)


class TestPitchfork:
    def test_distinct_loops(self, ef):
        assert pitchfork(ef, [ef.edge_path(E)], [ef.edge_path(F)]) == set()

    def test_initial_segment(self):
        g = two_vertex_example()
        lam = make_path(g, ["lam1", "mu1"])
        assert pitchfork(g, [lam], [g.edge_path("lam1")]) == {g.edge_path("lam1")}

    def test_self(self):
        g = two_vertex_example()
        us = enumerate_paths(g, "L", D(1, 1))
        assert pitchfork(g, us, us) == set(us)

    def test_mixed_degrees(self):
        g = two_vertex_example()
        with pytest.raises(DynamicsError):
            pitchfork(g, [g.edge_path("lam1"), g.edge_path("mu1")], [g.edge_path("lam1")])


class TestContracting:
    def test_two_loops(self, ef):
        cert = check_contracting(ef, "v0", 3, D(3))
        assert cert.to_dict() == {
            "v0": "v0",
            "V": ["v0"],
            "sets": [{"degree": [1], "paths": [[E]]}, {"degree": [1], "paths": [[F]]}],
        }
        assert check_certificate(ef, cert)

    def test_single_loop(self):
        assert check_contracting(free_loops(1), "v0", 3, D(3)) is None

    def test_orbit_precondition(self):
        assert check_contracting(chain_graph(), "w", 3, D(2)) is None

    def test_certificates_revalidate(self):
        rnd = random.Random(4)
        for g in random_corpus(6, 24):
            v0 = rnd.choice(g.vertices)
            cert = check_contracting(g, v0, 2, Degree.ones(g.rank))
            if cert is not None:
                assert check_certificate(g, cert)
