"""Constructors for standard finite k-graphs."""

from __future__ import annotations

from itertools import product

from .skeleton import KGraph, build_graph


def free_loops(k: int, loops: int | list[int] = 1, vertex: str = "v0") -> KGraph:
    """One vertex with ``loops[i]`` loops of colour i+1.

    Flips pair the a-th colour-i loop with the b-th colour-j loop as
    T(x_a, y_b) = (y_b, x_a); every such presentation is hexagonal.
    """
    counts = [loops] * k if isinstance(loops, int) else list(loops)
    if len(counts) != k:
        raise ValueError("need one loop count per colour")
    names = {i: [_loop_name(i, a, counts[i - 1]) for a in range(counts[i - 1])] for i in range(1, k + 1)}
    edges = [(i, e, vertex, vertex) for i in names for e in names[i]]
    flips = {
        (i, j): {(a, b): (b, a) for a in names[i] for b in names[j]}
        for i in range(1, k + 1)
        for j in range(i + 1, k + 1)
    }
    return build_graph(k, [vertex], edges, flips)


def _loop_name(i: int, a: int, count: int) -> str:
    if count == 1:
        return f"l{i}"
    return f"l{i}_{a}"


def _vid(n: tuple[int, ...]) -> str:
    return ",".join(map(str, n))


def omega(k: int, depth: int = 1) -> KGraph:
    """Omega_k truncated to the box of vertices n <= (depth, ..., depth).

    Vertices are degrees n; the colour-i edge (n, n + e_i) has range n and
    source n + e_i.  Vertices on the top faces are sources of the truncation.
    """
    box = list(product(range(depth + 1), repeat=k))
    inside = set(box)

    def up(n: tuple[int, ...], i: int) -> tuple[int, ...]:
        return tuple(c + (1 if t == i - 1 else 0) for t, c in enumerate(n))

    def eid(n: tuple[int, ...], i: int) -> str:
        return f"e{i}@{_vid(n)}"

    edges = []
    for n in box:
        for i in range(1, k + 1):
            if up(n, i) in inside:
                edges.append((i, eid(n, i), _vid(up(n, i)), _vid(n)))
    flips: dict = {}
    for i in range(1, k + 1):
        for j in range(i + 1, k + 1):
            table = {}
            for n in box:
                corner = up(up(n, i), j)
                if corner in inside:
                    table[eid(n, i), eid(up(n, i), j)] = (eid(n, j), eid(up(n, j), i))
            flips[i, j] = table
    return build_graph(k, [_vid(n) for n in box], edges, flips)


def two_vertex_example() -> KGraph:
    """The two-vertex 2-graph with loops lambda_1, lambda_2 and edges mu_1, mu_2.

    lambda_1 is a colour-1 loop at L, lambda_2 a colour-1 loop at R,
    mu_1 : R -> L and mu_2 : L -> R have colour 2, and
    T(lambda_1, mu_1) = (mu_1, lambda_2), T(lambda_2, mu_2) = (mu_2, lambda_1).
    """
    edges = [
        (1, "lam1", "L", "L"),
        (1, "lam2", "R", "R"),
        (2, "mu1", "R", "L"),
        (2, "mu2", "L", "R"),
    ]
    flips = {(1, 2): {("lam1", "mu1"): ("mu1", "lam2"), ("lam2", "mu2"): ("mu2", "lam1")}}
    return build_graph(2, ["L", "R"], edges, flips)


def chain_graph() -> KGraph:
    """1-graph with one edge f : v -> w (source v, range w) and a loop at w."""
    return build_graph(1, ["v", "w"], [(1, "f", "v", "w"), (1, "loop", "w", "w")])


def disjoint_union(*graphs: KGraph, prefixes: list[str] | None = None) -> KGraph:
    if not graphs:
        raise ValueError("nothing to unite")
    k = graphs[0].rank
    if any(g.rank != k for g in graphs):
        raise ValueError("ranks differ")
    prefixes = prefixes or [f"g{t}:" for t in range(len(graphs))]
    vertices, edges, flips = [], [], {}
    for pre, g in zip(prefixes, graphs):
        vertices += [pre + v for v in g.vertices]
        edges += [(g.color[e], pre + e, pre + g.src[e], pre + g.rng[e]) for e in g.all_edges()]
        for ij, table in g.flips.items():
            flips.setdefault(ij, {}).update(
                {(pre + a, pre + b): (pre + b2, pre + a2) for (a, b), (b2, a2) in table.items()}
            )
    return build_graph(k, vertices, edges, flips)


def cartesian_product(g: KGraph, h: KGraph) -> KGraph:
    """The (k+l)-graph g x h; colours of h are shifted up by g.rank."""
    k = g.rank
    vertices = [f"{v}|{w}" for v in g.vertices for w in h.vertices]
    edges = []
    for e in g.all_edges():
        for w in h.vertices:
            edges.append((g.color[e], f"{e}|{w}", f"{g.src[e]}|{w}", f"{g.rng[e]}|{w}"))
    for f in h.all_edges():
        for v in g.vertices:
            edges.append((k + h.color[f], f"{v}|{f}", f"{v}|{h.src[f]}", f"{v}|{h.rng[f]}"))
    flips: dict = {}
    for (i, j), table in g.flips.items():
        flips[i, j] = {
            (f"{a}|{w}", f"{b}|{w}"): (f"{b2}|{w}", f"{a2}|{w}")
            for (a, b), (b2, a2) in table.items()
            for w in h.vertices
        }
    for (i, j), table in h.flips.items():
        flips[k + i, k + j] = {
            (f"{v}|{a}", f"{v}|{b}"): (f"{v}|{b2}", f"{v}|{a2}")
            for (a, b), (b2, a2) in table.items()
            for v in g.vertices
        }
    # mixed squares: (e, r(f)) (s(e), f) = (r(e), f) (e, s(f))
    for i in range(1, k + 1):
        for j in range(1, h.rank + 1):
            table = {}
            for e in g.edges_of(i):
                for f in h.edges_of(j):
                    table[f"{e}|{h.rng[f]}", f"{g.src[e]}|{f}"] = (f"{g.rng[e]}|{f}", f"{e}|{h.src[f]}")
            flips[i, k + j] = table
    return build_graph(k + h.rank, vertices, edges, flips)
