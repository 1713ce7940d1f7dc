"""Finite paths in the continuous skew product and a bounded Condition (A) sampler.

A skew edge is a pair (e, z) with z in Q/Z; it has range (r(e), m(e) z) and
source (s(e), n(e) z).  Paths are words of skew edges and are reordered with
the lifted flips T x S, so vertices alpha(n) of an infinite path are computed
exactly.  If the vertices alpha(n), n <= P, are pairwise distinct then so are
the shifts tau^n alpha, which is the certificate used here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Callable

from .degree import Degree, as_degree
from .dynamics import SEARCH_RULES
from .skeleton import KGraph, sort_by_flips
from .skew import QmodZ, Weights, _skew_flip, all_fiber_perms, root_preimages

SkewEdge = tuple[str, QmodZ]
SkewVertex = tuple[str, QmodZ]


def range_preimages(w: Weights, e: str, x: QmodZ) -> list[QmodZ]:
    """All z with m(e) z = x."""
    m = w.m[e]
    return root_preimages(x if m > 0 else -x, abs(m))


def diagonal_steps(g: KGraph, w: Weights, at: SkewVertex) -> list[tuple[SkewEdge, ...]]:
    """Every skew path of degree (1,...,1) in colour order 1..k with range ``at``."""
    out: list[tuple[SkewEdge, ...]] = []

    def walk(v: str, x: QmodZ, i: int, prefix: list[SkewEdge]) -> None:
        if i > g.rank:
            out.append(tuple(prefix))
            return
        for e in g.into(v, i):
            for z in range_preimages(w, e, x):
                prefix.append((e, z))
                walk(g.src[e], z * w.n[e], i + 1, prefix)
                prefix.pop()

    walk(at[0], at[1], 1, [])
    out.sort(key=lambda path: [(e, z.num, z.den) for e, z in path])
    return out


@dataclass
class SkewDiagonalPath:
    g: KGraph
    w: Weights
    start: SkewVertex
    rule: Callable[[int, int], int]
    label: str = ""
    perms: dict = field(default_factory=dict, repr=False)
    word: list[SkewEdge] = field(default_factory=list, repr=False)

    def extend(self, steps: int) -> None:
        k = self.g.rank
        while len(self.word) < steps * k:
            if self.word:
                e, z = self.word[-1]
                at = (self.g.src[e], z * self.w.n[e])
            else:
                at = self.start
            options = diagonal_steps(self.g, self.w, at)
            if not options:
                raise ValueError(f"skew vertex {at} receives no diagonal path")
            t = len(self.word) // k
            self.word.extend(options[self.rule(t, len(options)) % len(options)])

    def vertex(self, n: Degree) -> SkewVertex:
        """alpha(n), exactly."""
        if n.is_zero():
            return self.start
        steps = max(n.coords)
        self.extend(steps)
        word = self.word[: steps * self.g.rank]
        rest = Degree.ones(self.g.rank) * steps - n
        if not self.perms:
            self.perms.update(all_fiber_perms(self.g, self.w))
        sorted_word = sort_by_flips(
            word,
            n.colors() + rest.colors(),
            lambda x: self.g.color[x[0]],
            lambda x, y: _skew_flip(self.g, self.w, self.perms, x, y),
        )
        e, z = sorted_word[n.total() - 1]
        return (self.g.src[e], z * self.w.n[e])


def _prime_at_least(lo: int, avoid: list[int]) -> int:
    d = max(lo, 2)
    while True:
        if all(d % p for p in range(2, int(d ** 0.5) + 1)) and all(gcd(d, a) == 1 for a in avoid):
            return d
        d += 1


@dataclass(frozen=True)
class SkewConditionAReport:
    ok: bool
    samples: list[dict]
    bound: Degree
    denominator: int
    status: str = "bounded"


def skew_condition_a(
    g: KGraph, w: Weights, bound: Degree | int, grid: int = 6, min_den: int = 1009
) -> SkewConditionAReport:
    """Search each sampled base point for a path whose vertices alpha(n), n <= bound, all differ.

    Base points are (v, c/grid + 1/d) for every vertex v and 0 <= c < grid,
    with d the least prime >= ``min_den`` coprime to every weight; they meet
    every arc of length 1/grid.  Witness paths follow the rules of
    :data:`kgk.dynamics.SEARCH_RULES`.  A failure is exact (the listed paths
    repeat a vertex) but says nothing about other paths; success is bounded.
    """
    bound = as_degree(bound, g.rank)
    w.check_domain(g)
    weights = [abs(w.m[e]) for e in g.all_edges()] + [w.n[e] for e in g.all_edges()]
    d = _prime_at_least(min_den, weights)
    perms = all_fiber_perms(g, w)
    samples = []
    for v in g.vertices:
        for c in range(grid):
            x0 = QmodZ(c, grid) + QmodZ(1, d)
            found = None
            for label, rule in SEARCH_RULES:
                alpha = SkewDiagonalPath(g, w, (v, x0), rule, label, dict(perms))
                seen = {}
                clash = None
                for n in bound.below():
                    u = alpha.vertex(n)
                    if u in seen:
                        clash = (seen[u], n)
                        break
                    seen[u] = n
                if clash is None:
                    found = label
                    break
            samples.append({"vertex": v, "point": str(x0), "witness": found})
    return SkewConditionAReport(all(s["witness"] for s in samples), samples, bound, d)
