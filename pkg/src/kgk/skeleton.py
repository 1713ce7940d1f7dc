"""Finite k-graphs presented by their coloured 1-skeleton and flip tables.

A k-graph is stored as vertices, edges of each colour with range/source, and
for every pair of colours i < j a bijection

    T[i, j] : {(a, b) : a colour i, b colour j, s(a) = r(b)}
           -> {(b', a') : b' colour j, a' colour i, s(b') = r(a')}

preserving the outer range and source.  Paths are kept in the normal form
where the edges are sorted by colour (all colour-1 edges nearest the range).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .degree import Degree, as_degree


class GraphError(ValueError):
    """Malformed presentation; ``pair`` names the offending edge pair if any."""

    def __init__(self, message: str, pair: tuple[str, ...] | None = None):
        super().__init__(message)
        self.pair = pair


class PathError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Path:
    rng: str
    src: str
    degree: Degree
    edges: tuple[str, ...] = ()

    @property
    def is_vertex(self) -> bool:
        return not self.edges

    def blocks(self, g: KGraph) -> list[tuple[str, ...]]:
        out: list[list[str]] = [[] for _ in range(g.rank)]
        for e in self.edges:
            out[g.color[e] - 1].append(e)
        return [tuple(b) for b in out]

    def key(self) -> tuple:
        return (self.degree.key(), self.rng, self.edges, self.src)

    def __str__(self) -> str:
        if not self.edges:
            return f"<{self.rng}>"
        return ".".join(self.edges)


@dataclass(frozen=True, eq=False)
class KGraph:
    rank: int
    vertices: tuple[str, ...]
    edges: Mapping[int, tuple[str, ...]]
    src: Mapping[str, str]
    rng: Mapping[str, str]
    flips: Mapping[tuple[int, int], Mapping[tuple[str, str], tuple[str, str]]]
    color: dict[str, int] = field(init=False)
    _inverse: dict = field(init=False, repr=False)
    _into: dict = field(init=False, repr=False)
    _outof: dict = field(init=False, repr=False)
    _vertex_set: frozenset = field(init=False, repr=False)

    def __post_init__(self) -> None:
        color = {e: i for i, es in self.edges.items() for e in es}
        inverse = {ij: {v: k for k, v in table.items()} for ij, table in self.flips.items()}
        into: dict[tuple[str, int], list[str]] = defaultdict(list)
        outof: dict[tuple[str, int], list[str]] = defaultdict(list)
        for i in range(1, self.rank + 1):
            for e in self.edges.get(i, ()):
                into[self.rng[e], i].append(e)
                outof[self.src[e], i].append(e)
        object.__setattr__(self, "_vertex_set", frozenset(self.vertices))
        object.__setattr__(self, "color", color)
        object.__setattr__(self, "_inverse", inverse)
        object.__setattr__(self, "_into", {k: tuple(sorted(v)) for k, v in into.items()})
        object.__setattr__(self, "_outof", {k: tuple(sorted(v)) for k, v in outof.items()})

    def edges_of(self, i: int) -> tuple[str, ...]:
        return self.edges.get(i, ())

    def all_edges(self) -> list[str]:
        return [e for i in range(1, self.rank + 1) for e in self.edges_of(i)]

    def into(self, v: str, i: int) -> tuple[str, ...]:
        """Colour-i edges with range v."""
        return self._into.get((v, i), ())

    def outof(self, v: str, i: int) -> tuple[str, ...]:
        """Colour-i edges with source v."""
        return self._outof.get((v, i), ())

    def flip(self, a: str, b: str) -> tuple[str, str]:
        """Swap the colours of the composable pair ab, using T or its inverse."""
        i, j = self.color[a], self.color[b]
        if i == j:
            raise GraphError(f"cannot flip same-colour pair ({a}, {b})", (a, b))
        if i < j:
            return self.flips[i, j][a, b]
        return self._inverse[j, i][a, b]

    def identity(self, v: str) -> Path:
        if v not in self._vertex_set:
            raise GraphError(f"unknown vertex {v!r}")
        return Path(v, v, Degree.zero(self.rank))

    def edge_path(self, e: str) -> Path:
        return Path(self.rng[e], self.src[e], Degree.unit(self.rank, self.color[e]), (e,))

    def degree_of(self, edges: Iterable[str]) -> Degree:
        counts = [0] * self.rank
        for e in edges:
            counts[self.color[e] - 1] += 1
        return Degree(tuple(counts))

    def to_dict(self) -> dict:
        edges = [
            {"color": i, "id": e, "src": self.src[e], "rng": self.rng[e]}
            for i in range(1, self.rank + 1)
            for e in self.edges_of(i)
        ]
        flips = [
            {"i": i, "j": j, "pairs": [[a, b, b2, a2] for (a, b), (b2, a2) in sorted(self.flips[i, j].items())]}
            for (i, j) in sorted(self.flips)
        ]
        return {"rank": self.rank, "vertices": list(self.vertices), "edges": edges, "flips": flips}


def composable_pairs(g: KGraph, i: int, j: int) -> list[tuple[str, str]]:
    """All (a, b) with a of colour i, b of colour j and s(a) = r(b)."""
    return [(a, b) for a in g.edges_of(i) for b in g.into(g.src[a], j)]


def build_graph(
    rank: int,
    vertices: Iterable[str],
    edges: Iterable[tuple[int, str, str, str]],
    flips: Mapping[tuple[int, int], Mapping[tuple[str, str], tuple[str, str]]] | None = None,
) -> KGraph:
    """Assemble and validate a graph from ``(color, id, src, rng)`` edge tuples."""
    data = {
        "rank": rank,
        "vertices": list(vertices),
        "edges": [{"color": c, "id": e, "src": s, "rng": r} for c, e, s, r in edges],
        "flips": [
            {"i": i, "j": j, "pairs": [[a, b, b2, a2] for (a, b), (b2, a2) in table.items()]}
            for (i, j), table in (flips or {}).items()
        ],
    }
    return validate_graph(data)


def validate_graph(data: Mapping) -> KGraph:
    """Check a raw presentation and return the KGraph it defines.

    Every flip table must be total on composable pairs, land in composable
    pairs of the swapped colours, preserve outer range and source, and be a
    bijection.  Hexagonality is checked separately by :func:`check_hexagon`.
    """
    rank = data.get("rank")
    if not isinstance(rank, int) or isinstance(rank, bool) or rank < 1:
        raise GraphError(f"rank must be a positive integer, got {rank!r}")
    vertices = list(data.get("vertices", []))
    if not vertices:
        raise GraphError("graph has no vertices")
    if len(set(vertices)) != len(vertices):
        raise GraphError("duplicate vertex ids")
    vset = set(vertices)

    edges: dict[int, list[str]] = {i: [] for i in range(1, rank + 1)}
    src: dict[str, str] = {}
    rng: dict[str, str] = {}
    for rec in data.get("edges", []):
        c, e, s, r = rec["color"], rec["id"], rec["src"], rec["rng"]
        if not isinstance(c, int) or not 1 <= c <= rank:
            raise GraphError(f"edge {e!r} has colour {c!r} outside 1..{rank}")
        if e in src:
            raise GraphError(f"duplicate edge id {e!r}")
        if s not in vset or r not in vset:
            raise GraphError(f"edge {e!r} has unknown endpoint")
        edges[c].append(e)
        src[e], rng[e] = s, r

    tables: dict[tuple[int, int], dict[tuple[str, str], tuple[str, str]]] = {}
    for rec in data.get("flips", []):
        i, j = rec["i"], rec["j"]
        if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= rank):
            raise GraphError(f"flip table colours ({i}, {j}) must satisfy 1 <= i < j <= {rank}")
        if (i, j) in tables:
            raise GraphError(f"duplicate flip table for colours ({i}, {j})")
        table: dict[tuple[str, str], tuple[str, str]] = {}
        for row in rec["pairs"]:
            a, b, b2, a2 = row
            if (a, b) in table:
                raise GraphError(f"pair ({a}, {b}) listed twice", (a, b))
            table[a, b] = (b2, a2)
        tables[i, j] = table

    color = {e: i for i, es in edges.items() for e in es}
    for i in range(1, rank + 1):
        for j in range(i + 1, rank + 1):
            table = tables.setdefault((i, j), {})
            domain = {
                (a, b) for a in edges[i] for b in edges[j] if src[a] == rng[b]
            }
            codomain = {
                (b, a) for b in edges[j] for a in edges[i] if src[b] == rng[a]
            }
            for pair in sorted(domain - table.keys()):
                raise GraphError(f"flip T[{i},{j}] misses composable pair {pair}", pair)
            for pair in sorted(table.keys() - domain):
                raise GraphError(f"flip T[{i},{j}] lists non-composable pair {pair}", pair)
            seen: dict[tuple[str, str], tuple[str, str]] = {}
            for (a, b) in sorted(table):
                b2, a2 = table[a, b]
                if color.get(b2) != j or color.get(a2) != i:
                    raise GraphError(
                        f"flip T[{i},{j}]({a}, {b}) = ({b2}, {a2}) has wrong colours", (a, b)
                    )
                if (b2, a2) not in codomain:
                    raise GraphError(
                        f"flip T[{i},{j}]({a}, {b}) = ({b2}, {a2}) is not composable", (a, b)
                    )
                if rng[b2] != rng[a] or src[a2] != src[b]:
                    raise GraphError(
                        f"flip T[{i},{j}]({a}, {b}) = ({b2}, {a2}) moves the range or source", (a, b)
                    )
                if (b2, a2) in seen:
                    raise GraphError(
                        f"flip T[{i},{j}] is not injective: {seen[b2, a2]} and {(a, b)} both hit {(b2, a2)}",
                        (a, b),
                    )
                seen[b2, a2] = (a, b)
            if len(seen) != len(codomain):
                missing = sorted(codomain - seen.keys())[0]
                raise GraphError(f"flip T[{i},{j}] is not surjective: {missing} has no preimage", missing)

    return KGraph(
        rank=rank,
        vertices=tuple(sorted(vertices)),
        edges={i: tuple(sorted(es)) for i, es in edges.items()},
        src=src,
        rng=rng,
        flips={ij: dict(t) for ij, t in sorted(tables.items())},
    )


@dataclass(frozen=True)
class HexagonReport:
    ok: bool
    witness: tuple[str, str, str] | None = None
    left: tuple[str, str, str] | None = None
    right: tuple[str, str, str] | None = None
    triples_checked: int = 0


def hexagon_sides(g: KGraph, a: str, b: str, c: str) -> tuple[tuple[str, str, str], tuple[str, str, str]]:
    """Both sides of the hexagon equation on a composable triple of colours i < j < l."""
    b1, a1 = g.flip(a, b)
    c1, a2 = g.flip(a1, c)
    c2, b2 = g.flip(b1, c1)
    left = (c2, b2, a2)

    c3, b3 = g.flip(b, c)
    c4, a3 = g.flip(a, c3)
    b4, a4 = g.flip(a3, b3)
    right = (c4, b4, a4)
    return left, right


def check_hexagon(g: KGraph) -> HexagonReport:
    checked = 0
    for i in range(1, g.rank + 1):
        for j in range(i + 1, g.rank + 1):
            for l in range(j + 1, g.rank + 1):
                for a in g.edges_of(i):
                    for b in g.into(g.src[a], j):
                        for c in g.into(g.src[b], l):
                            checked += 1
                            left, right = hexagon_sides(g, a, b, c)
                            if left != right:
                                return HexagonReport(False, (a, b, c), left, right, checked)
    return HexagonReport(True, triples_checked=checked)


def _check_composable(g: KGraph, seq: Sequence[str]) -> None:
    for t, e in enumerate(seq):
        if e not in g.color:
            raise PathError(f"unknown edge {e!r} at position {t}", t)
    for t in range(len(seq) - 1):
        if g.src[seq[t]] != g.rng[seq[t + 1]]:
            raise PathError(
                f"edges {seq[t]!r} and {seq[t + 1]!r} at positions {t},{t + 1} are not composable", t
            )


def sort_by_flips(
    seq: Sequence[Hashable],
    target: Sequence[int],
    color: Callable[[Hashable], int],
    flip: Callable[[Hashable, Hashable], tuple[Hashable, Hashable]],
) -> list:
    """Rewrite a word by adjacent flips until its colour word equals ``target``.

    Letters of equal colour keep their relative order; the leftmost inversion
    is resolved first, which fixes the result even when the hexagon fails.
    """
    word = list(seq)
    if sorted(color(e) for e in word) != sorted(target):
        raise PathError(f"colour word {list(target)} does not match the word's degree")
    slots: dict[int, list[int]] = defaultdict(list)
    for pos, c in enumerate(target):
        slots[c].append(pos)
    used: dict[int, int] = defaultdict(int)
    rank_of = []
    for e in word:
        c = color(e)
        rank_of.append(slots[c][used[c]])
        used[c] += 1
    n = len(word)
    t = 0
    while t < n - 1:
        if rank_of[t] > rank_of[t + 1]:
            word[t], word[t + 1] = flip(word[t], word[t + 1])
            rank_of[t], rank_of[t + 1] = rank_of[t + 1], rank_of[t]
            t = max(t - 1, 0)
        else:
            t += 1
    return word


def reorder(g: KGraph, seq: Sequence[str], target: Sequence[int]) -> list[str]:
    return sort_by_flips(seq, target, g.color.__getitem__, g.flip)


def normalize(g: KGraph, seq: Sequence[str]) -> Path:
    """Normal form of a composable edge word."""
    if not seq:
        raise PathError("empty edge word has no vertex; use KGraph.identity")
    _check_composable(g, seq)
    word = reorder(g, seq, sorted(g.color[e] for e in seq))
    return Path(g.rng[word[0]], g.src[word[-1]], g.degree_of(word), tuple(word))


def make_path(g: KGraph, seq: Sequence[str], vertex: str | None = None) -> Path:
    """``normalize`` that also accepts the empty word when ``vertex`` is given."""
    if not seq:
        if vertex is None:
            raise PathError("empty edge word needs a vertex")
        return g.identity(vertex)
    return normalize(g, seq)


def compose(g: KGraph, lam: Path, mu: Path) -> Path:
    if lam.src != mu.rng:
        raise PathError(f"cannot compose: s(lambda)={lam.src!r} but r(mu)={mu.rng!r}")
    return make_path(g, lam.edges + mu.edges, lam.rng)


def factor(g: KGraph, lam: Path, m: Degree) -> tuple[Path, Path]:
    """The unique (mu, nu) with lam = mu nu and d(mu) = m."""
    m = as_degree(m, g.rank)
    if not m <= lam.degree:
        raise PathError(f"degree {m} is not below d(lambda) = {lam.degree}")
    rest = lam.degree - m
    word = reorder(g, lam.edges, m.colors() + rest.colors())
    cut = m.total()
    if cut == 0:
        head = g.identity(lam.rng)
    else:
        head = Path(lam.rng, g.src[word[cut - 1]], m, tuple(word[:cut]))
    if cut == len(word):
        tail = g.identity(lam.src)
    else:
        tail = Path(g.rng[word[cut]], lam.src, rest, tuple(word[cut:]))
    return head, tail


def segment(g: KGraph, lam: Path, m: Degree, n: Degree) -> Path:
    """lam(m, n): the middle factor of degree n - m."""
    m, n = as_degree(m, g.rank), as_degree(n, g.rank)
    if not (m <= n and n <= lam.degree):
        raise PathError(f"need 0 <= {m} <= {n} <= {lam.degree}")
    _, rest = factor(g, lam, m)
    mid, _ = factor(g, rest, n - m)
    return mid


def vertex_at(g: KGraph, lam: Path, m: Degree) -> str:
    """lam(m) as a vertex id."""
    return segment(g, lam, m, m).rng


def enumerate_paths(g: KGraph, v: str, m: Degree) -> list[Path]:
    """Every path of degree m with range v, lexicographic in edge ids."""
    m = as_degree(m, g.rank)
    if v not in g._vertex_set:
        raise GraphError(f"unknown vertex {v!r}")
    colors = m.colors()
    if not colors:
        return [g.identity(v)]
    out: list[Path] = []

    def walk(at: str, prefix: list[str]) -> None:
        depth = len(prefix)
        if depth == len(colors):
            out.append(Path(v, at, m, tuple(prefix)))
            return
        for e in g.into(at, colors[depth]):
            prefix.append(e)
            walk(g.src[e], prefix)
            prefix.pop()

    walk(v, [])
    return out


def count_paths(g: KGraph, v: str, m: Degree) -> int:
    """|r_m^{-1}(v)| via a dynamic programme over the sorted colour word."""
    m = as_degree(m, g.rank)
    frontier = {v: 1}
    for c in m.colors():
        nxt: dict[str, int] = defaultdict(int)
        for u, cnt in frontier.items():
            for e in g.into(u, c):
                nxt[g.src[e]] += cnt
        frontier = nxt
    return sum(frontier.values())


def check_row_finite_no_source(g: KGraph, m: Degree) -> dict:
    """Per-vertex row-finiteness and no-source at degree m, plus the closure check.

    In a finite graph every vertex is row-finite; the count is reported.  The
    closure check recounts at m whenever every vertex has incoming edges of
    every colour.
    """
    m = as_degree(m, g.rank)
    per_vertex = {}
    for v in g.vertices:
        cnt = len(enumerate_paths(g, v, m))
        per_vertex[v] = {"count": cnt, "row_finite": True, "no_source": cnt > 0}
    generators_pass = all(g.into(v, i) for v in g.vertices for i in range(1, g.rank + 1))
    all_pass = all(rec["no_source"] for rec in per_vertex.values())
    return {
        "degree": m,
        "per_vertex": per_vertex,
        "no_source": all_pass,
        "generators_pass": generators_pass,
        "closure_holds": (not generators_pass) or all_pass,
    }


def has_no_source(g: KGraph) -> bool:
    """No source at every e_i, hence at every degree."""
    return all(g.into(v, i) for v in g.vertices for i in range(1, g.rank + 1))
