"""Seeded generators of small valid k-graphs for property suites.

A presentation exists iff the colour adjacency matrices commute; the flips
are then random bijections between the two sides of each commuting square.
For k >= 3 the hexagon is enforced by rejection.
"""

from __future__ import annotations

import random
from itertools import permutations

from .skeleton import KGraph, build_graph, check_hexagon

Matrix = list[list[int]]


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return [[sum(a[u][t] * b[t][w] for t in range(n)) for w in range(n)] for u in range(n)]


def _total(m: Matrix) -> int:
    return sum(map(sum, m))


def _random_matrix(rnd: random.Random, n: int, max_edges: int, no_source: bool) -> Matrix:
    m = [[0] * n for _ in range(n)]
    count = rnd.randint(1, max_edges)
    rows = list(range(n))
    if no_source and n <= count:
        rnd.shuffle(rows)
        for u in rows:
            m[u][rnd.randrange(n)] += 1
        count -= n
    for _ in range(count):
        m[rnd.randrange(n)][rnd.randrange(n)] += 1
    return m


def _commuting_partners(base: Matrix, max_edges: int) -> list[Matrix]:
    n = len(base)
    out = [base]
    if n <= max_edges:
        out.append([[int(u == w) for w in range(n)] for u in range(n)])
    sq = _matmul(base, base)
    if 0 < _total(sq) <= max_edges:
        out.append(sq)
    if n <= 5:
        for perm in permutations(range(n)):
            if list(perm) == list(range(n)):
                continue
            p = [[int(perm[u] == w) for w in range(n)] for u in range(n)]
            if _matmul(p, base) == _matmul(base, p) and n <= max_edges:
                out.append(p)
    return out


def _pairwise_commute(ms: list[Matrix]) -> bool:
    return all(
        _matmul(ms[i], ms[j]) == _matmul(ms[j], ms[i])
        for i in range(len(ms))
        for j in range(i + 1, len(ms))
    )


def _graph_from_matrices(rnd: random.Random, ms: list[Matrix]) -> KGraph:
    """Edges from matrices (m[u][w] = #edges with range u, source w), random flips."""
    n = len(ms[0])
    k = len(ms)
    vertices = [f"v{u}" for u in range(n)]
    edges = []
    src, rng = {}, {}
    by_color: dict[int, list[str]] = {}
    for i, m in enumerate(ms, start=1):
        t = 0
        by_color[i] = []
        for u in range(n):
            for w in range(n):
                for _ in range(m[u][w]):
                    e = f"{'abcdefgh'[i - 1]}{t}"
                    t += 1
                    edges.append((i, e, vertices[w], vertices[u]))
                    src[e], rng[e] = vertices[w], vertices[u]
                    by_color[i].append(e)
    flips = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            left: dict[tuple[str, str], list] = {}
            right: dict[tuple[str, str], list] = {}
            for a in by_color[i]:
                for b in by_color[j]:
                    if src[a] == rng[b]:
                        left.setdefault((rng[a], src[b]), []).append((a, b))
                    if src[b] == rng[a]:
                        right.setdefault((rng[b], src[a]), []).append((b, a))
            table = {}
            for key, pairs in left.items():
                targets = list(right[key])
                rnd.shuffle(targets)
                table.update(zip(pairs, targets))
            flips[i, j] = table
    return build_graph(k, vertices, edges, flips)


def random_kgraph(
    rnd: random.Random,
    k: int,
    max_vertices: int = 5,
    max_edges: int = 4,
    no_source: bool = False,
    attempts: int = 500,
) -> KGraph:
    """A random valid (and, for k >= 3, hexagonal) k-graph."""
    for _ in range(attempts):
        n = rnd.randint(1, max_vertices)
        base = _random_matrix(rnd, n, max_edges, no_source)
        if rnd.random() < 0.3:
            ms = [base] + [_random_matrix(rnd, n, max_edges, no_source) for _ in range(k - 1)]
        else:
            partners = _commuting_partners(base, max_edges)
            ms = [rnd.choice(partners) for _ in range(k)]
        if any(_total(m) > max_edges for m in ms) or not _pairwise_commute(ms):
            continue
        g = _graph_from_matrices(rnd, ms)
        if k >= 3 and not check_hexagon(g).ok:
            continue
        return g
    raise RuntimeError("no valid k-graph found; loosen the bounds")


def random_corpus(seed: int, count: int, max_rank: int = 3, **kw) -> list[KGraph]:
    """``count`` graphs with ranks cycling through 1..max_rank."""
    rnd = random.Random(seed)
    out = []
    for t in range(count):
        k = t % max_rank + 1
        out.append(random_kgraph(rnd, k, no_source=rnd.random() < 0.6, **kw))
    return out
