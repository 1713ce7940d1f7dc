"""Infinite paths, shifts, aperiodicity and invariant sets of finite k-graphs.

Two kinds of infinite path are supported.  :class:`InfPath` is eventually
periodic, ``prefix . cycle . cycle ...`` with d(cycle) >= (1,...,1); shifts and
equality of such paths are decided exactly.  :class:`LazyPath` is generated
step by step along the diagonal by a choice rule and only ever inspected
through finite windows, so claims about it are bounded.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from math import isqrt
from typing import Callable, Iterable, Sequence, Union

from .degree import Degree, as_degree
from .skeleton import (
    KGraph,
    Path,
    PathError,
    compose,
    enumerate_paths,
    has_no_source,
    make_path,
    segment,
)


class DynamicsError(ValueError):
    pass


@dataclass(frozen=True)
class InfPath:
    prefix: Path
    cycle: Path

    @property
    def rng(self) -> str:
        return self.prefix.rng


def infpath(g: KGraph, prefix: Path | Sequence[str] | str, cycle: Path | Sequence[str]) -> InfPath:
    """Build prefix . cycle^infinity; ``prefix`` may be a vertex id or an edge word."""
    if isinstance(prefix, str):
        prefix = g.identity(prefix)
    elif not isinstance(prefix, Path):
        prefix = make_path(g, list(prefix))
    if not isinstance(cycle, Path):
        cycle = make_path(g, list(cycle))
    if cycle.rng != cycle.src or cycle.rng != prefix.src:
        raise DynamicsError("cycle must be a loop at the source of the prefix")
    if any(c < 1 for c in cycle.degree):
        raise DynamicsError(f"cycle degree {cycle.degree} must be positive in every colour")
    return InfPath(prefix, cycle)


def _power(g: KGraph, alpha: InfPath, t: int) -> Path:
    out = alpha.prefix
    for _ in range(t):
        out = compose(g, out, alpha.cycle)
    return out


def _cover(alpha: InfPath, n: Degree) -> int:
    """Least t with d(prefix) + t d(cycle) >= n."""
    t = 0
    for p, c, want in zip(alpha.prefix.degree, alpha.cycle.degree, n):
        if want > p:
            t = max(t, -(-(want - p) // c))
    return t


@dataclass(frozen=True)
class LazyPath:
    """Infinite path built along the diagonal by ``rule``, seen from ``offset``.

    Step t appends one path of degree (1,...,1) chosen by
    ``rule(t, options)`` from the lexicographically sorted candidates.
    """

    g: KGraph = field(repr=False)
    start: str
    rule: Callable[[int, int], int] = field(repr=False)
    offset: Degree | None = None
    label: str = ""
    _diag: list = field(default_factory=list, repr=False, compare=False)

    def _extend(self, steps: int) -> None:
        ones = Degree.ones(self.g.rank)
        while len(self._diag) < steps:
            at = self._diag[-1][-1] if self._diag else self.start
            options = enumerate_paths(self.g, at, ones)
            if not options:
                raise DynamicsError(f"vertex {at!r} is a source; path cannot continue")
            pick = options[self.rule(len(self._diag), len(options)) % len(options)]
            self._diag.append((pick.edges, pick.src))

    def head(self, n: Degree) -> Path:
        """alpha(offset, offset + n)."""
        off = self.offset or Degree.zero(self.g.rank)
        end = off + n
        steps = max(end.coords)
        self._extend(steps)
        word = [e for edges, _ in self._diag[:steps] for e in edges]
        whole = make_path(self.g, word, self.start)
        return segment(self.g, whole, off, end)

    def shifted(self, p: Degree) -> LazyPath:
        off = (self.offset or Degree.zero(self.g.rank)) + p
        return LazyPath(self.g, self.start, self.rule, off, self.label, self._diag)


AnyPath = Union[InfPath, LazyPath]


def window(g: KGraph, alpha: AnyPath, n: Degree) -> Path:
    """alpha(0, n)."""
    n = as_degree(n, g.rank)
    if isinstance(alpha, LazyPath):
        return alpha.head(n)
    return segment(g, _power(g, alpha, _cover(alpha, n)), Degree.zero(g.rank), n)


def evaluate(g: KGraph, alpha: AnyPath, m: Degree, n: Degree) -> Path:
    """alpha(m, n) for m <= n."""
    m, n = as_degree(m, g.rank), as_degree(n, g.rank)
    return segment(g, window(g, alpha, n), m, n)


def shift(g: KGraph, alpha: AnyPath, p: Degree) -> AnyPath:
    """tau^p alpha."""
    p = as_degree(p, g.rank)
    if isinstance(alpha, LazyPath):
        return alpha.shifted(p)
    if p.is_zero():
        return alpha
    whole = _power(g, alpha, _cover(alpha, p))
    return InfPath(segment(g, whole, p, whole.degree), alpha.cycle)


def paths_equal_to_depth(g: KGraph, alpha: AnyPath, beta: AnyPath, depth: Degree) -> bool:
    return window(g, alpha, depth) == window(g, beta, depth)


def infpaths_equal(g: KGraph, alpha: InfPath, beta: InfPath) -> bool:
    """Exact equality of eventually periodic paths.

    Past N = d(prefix_a) v d(prefix_b) the tails are invariant under tau^u and
    tau^v (u, v the cycle degrees).  A tau^u-invariant path gamma satisfies
    gamma(0, t u) = gamma(0, u)^t, and these windows are cofinal, so two
    tau^u-invariant paths agree iff their (0, u) windows agree.
    """
    n = alpha.prefix.degree.join(beta.prefix.degree)
    if window(g, alpha, n) != window(g, beta, n):
        return False
    gamma, delta = shift(g, alpha, n), shift(g, beta, n)
    u, v = alpha.cycle.degree, beta.cycle.degree
    if window(g, shift(g, delta, u), v) != window(g, delta, v):
        return False
    return window(g, gamma, u) == window(g, delta, u)


def _pairs(bound: Degree) -> Iterable[tuple[Degree, Degree]]:
    degs = list(bound.below())
    for qi, q in enumerate(degs):
        for p in degs[:qi]:
            yield p, q


@dataclass(frozen=True)
class AperiodicityReport:
    status: str
    witness: tuple[Degree, Degree] | None = None
    exact: bool = True
    pairs_checked: int = 0


def is_aperiodic(g: KGraph, alpha: AnyPath, bound: Degree, depth: Degree | None = None) -> AperiodicityReport:
    """Search p != q <= bound with tau^p alpha = tau^q alpha.

    Eventually periodic paths are compared exactly; any such path is periodic
    (tau^{d(prefix)} = tau^{d(prefix)+d(cycle)}), which the search finds once
    bound >= d(prefix) + d(cycle).  Lazy paths are compared on windows of
    ``depth`` and can only be reported aperiodic up to the bound.
    """
    bound = as_degree(bound, g.rank)
    checked = 0
    if isinstance(alpha, InfPath):
        shifts = {p: shift(g, alpha, p) for p in bound.below()}
        for p, q in _pairs(bound):
            checked += 1
            if infpaths_equal(g, shifts[p], shifts[q]):
                return AperiodicityReport("periodic", (p, q), True, checked)
        return AperiodicityReport("aperiodic_up_to_bound", None, False, checked)
    if depth is None:
        raise DynamicsError("lazy paths need a comparison depth")
    depth = as_degree(depth, g.rank)
    whole = window(g, alpha, bound + depth)
    heads = {p: segment(g, whole, p, p + depth) for p in bound.below()}
    for p, q in _pairs(bound):
        checked += 1
        if heads[p] == heads[q]:
            return AperiodicityReport("periodic", (p, q), False, checked)
    return AperiodicityReport("aperiodic_up_to_bound", None, False, checked)


def rotation_rule(a: int) -> Callable[[int, int], int]:
    """Coding of the irrational rotation by sqrt(a) into ``count`` symbols, in integers."""
    if isqrt(a) ** 2 == a:
        raise ValueError(f"{a} is a perfect square")

    def rule(t: int, count: int) -> int:
        return isqrt(a * count * count * t * t) - count * isqrt(a * t * t)

    return rule


def random_rule(seed: int) -> Callable[[int, int], int]:
    cache: dict[int, int] = {}
    rnd = random.Random(seed)

    def rule(t: int, count: int) -> int:
        while len(cache) <= t:
            cache[len(cache)] = rnd.getrandbits(30)
        return cache[t] % count

    return rule


SEARCH_RULES = [("sqrt2", rotation_rule(2)), ("sqrt3", rotation_rule(3)), ("sqrt5", rotation_rule(5)),
                ("sqrt7", rotation_rule(7))] + [(f"random{s}", random_rule(s)) for s in range(4)]


@dataclass(frozen=True)
class ConditionAReport:
    ok: bool
    per_vertex: dict
    status: str = "bounded"
    bound: Degree | None = None
    depth: Degree | None = None
    periodic: dict = field(default_factory=dict)


def check_condition_a(g: KGraph, bound: Degree, depth: Degree) -> ConditionAReport:
    """Search every vertex for a path whose shifts up to ``bound`` differ on ``depth`` windows.

    Neighbourhoods are singletons.  Witnesses are lazy rotation-coded or
    pseudo-random diagonal paths and certify only the searched range.
    """
    if not has_no_source(g):
        raise DynamicsError("graph has a source; infinite paths may not exist")
    bound, depth = as_degree(bound, g.rank), as_degree(depth, g.rank)
    per_vertex: dict[str, LazyPath | None] = {}
    periodic: dict[str, tuple[Degree, Degree]] = {}
    for v in g.vertices:
        per_vertex[v] = None
        for label, rule in SEARCH_RULES:
            alpha = LazyPath(g, v, rule, label=label)
            report = is_aperiodic(g, alpha, bound, depth)
            if report.status == "aperiodic_up_to_bound":
                per_vertex[v] = alpha
                break
            periodic.setdefault(v, report.witness)
        if per_vertex[v] is not None:
            periodic.pop(v, None)
    ok = all(a is not None for a in per_vertex.values())
    return ConditionAReport(ok, per_vertex, "bounded", bound, depth, periodic)


def positive_orbit(g: KGraph, v: str) -> set[str]:
    """Orb+(v): ranges of paths with source v."""
    seen = {v}
    stack = [v]
    while stack:
        u = stack.pop()
        for i in range(1, g.rank + 1):
            for e in g.outof(u, i):
                if g.rng[e] not in seen:
                    seen.add(g.rng[e])
                    stack.append(g.rng[e])
    return seen


@dataclass(frozen=True)
class OrbitReport:
    orb_plus: frozenset[str]
    orb_minus: frozenset[str]
    orb: frozenset[str]


def canonical_shift(g: KGraph, gamma: InfPath, n: Degree, u: Degree) -> InfPath:
    """gamma rewritten as gamma(0, n) . c^infinity, c = gamma(n, n + u).

    Valid whenever tau^n gamma is tau^u-invariant; the result depends only
    on the morphism gamma, so it can serve as a dictionary key.
    """
    whole = window(g, gamma, n + u)
    return InfPath(segment(g, whole, Degree.zero(g.rank), n), segment(g, whole, n, n + u))


def shift_orbit(g: KGraph, alpha: InfPath) -> set[InfPath]:
    """All shifts tau^m alpha, m in N^k, each in canonical form.

    With N = d(prefix) and u = d(cycle), tau^N of every shift is
    tau^u-invariant, so each shift is fixed by its window of degree N + u and
    there are finitely many of them.
    """
    n, u = alpha.prefix.degree, alpha.cycle.degree
    start = canonical_shift(g, alpha, n, u)
    seen = {start}
    stack = [start]
    while stack:
        gamma = stack.pop()
        for i in range(1, g.rank + 1):
            nxt = canonical_shift(g, shift(g, gamma, Degree.unit(g.rank, i)), n, u)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return seen


def negative_orbit(g: KGraph, alpha: InfPath) -> set[str]:
    """{alpha(m) : m in N^k}."""
    return {gamma.rng for gamma in shift_orbit(g, alpha)}


def orbit(g: KGraph, v: str, alpha: InfPath) -> OrbitReport:
    if alpha.rng != v:
        raise DynamicsError(f"path has range {alpha.rng!r}, not {v!r}")
    minus = negative_orbit(g, alpha)
    orb: set[str] = set()
    for u in minus:
        orb |= positive_orbit(g, u)
    return OrbitReport(frozenset(positive_orbit(g, v)), frozenset(minus), frozenset(orb))


@dataclass(frozen=True)
class InvarianceReport:
    positive: bool
    negative: bool
    witnesses: dict

    @property
    def invariant(self) -> bool:
        return self.positive and self.negative


def check_invariant(g: KGraph, omega: Iterable[str]) -> InvarianceReport:
    """Positive: edges leaving omega land in omega.  Negative: each v in omega receives every colour from omega."""
    omega = set(omega)
    witnesses: dict = {}
    for e in g.all_edges():
        if g.src[e] in omega and g.rng[e] not in omega:
            witnesses["positive"] = e
            break
    for v in sorted(omega):
        for i in range(1, g.rank + 1):
            if not any(g.src[e] in omega for e in g.into(v, i)):
                witnesses["negative"] = [v, i]
                break
        if "negative" in witnesses:
            break
    return InvarianceReport("positive" not in witnesses, "negative" not in witnesses, witnesses)


MAX_MINIMAL_VERTICES = 20


@dataclass(frozen=True)
class MinimalityReport:
    minimal: bool
    witness: frozenset[str] | None = None
    status: str = "exact"


def check_minimal(g: KGraph) -> MinimalityReport:
    """No invariant subset strictly between empty and all vertices (exhaustive)."""
    n = len(g.vertices)
    if n > MAX_MINIMAL_VERTICES:
        raise DynamicsError(
            f"{n} vertices exceeds the exhaustive cap of {MAX_MINIMAL_VERTICES}; use minimal_by_sampling"
        )
    for size in range(1, n):
        for subset in combinations(g.vertices, size):
            if check_invariant(g, subset).invariant:
                return MinimalityReport(False, frozenset(subset))
    return MinimalityReport(True)


def minimal_by_sampling(g: KGraph) -> MinimalityReport:
    """Orbit density over one periodic path per recurrent vertex; a negative answer is exact."""
    everything = set(g.vertices)
    for x, cyc in sorted(recurrent_cycles(g).items()):
        orb = orbit(g, x, InfPath(g.identity(x), cyc)).orb
        if orb != everything:
            return MinimalityReport(False, frozenset(orb), "exact")
    return MinimalityReport(True, None, "inconclusive")


def simple_cycles(g: KGraph, v: str, max_len: int) -> list[Path]:
    """Loops at v of degree t(1,...,1), 1 <= t <= max_len."""
    ones = Degree.ones(g.rank)
    out = []
    for t in range(1, max_len + 1):
        for lam in enumerate_paths(g, v, ones * t):
            if lam.src == v:
                out.append(lam)
    return out


def eventually_periodic_paths(g: KGraph, v: str, max_cycle: int = 4, max_prefix: int | None = None) -> list[InfPath]:
    """prefix . cycle^infinity from v with diagonal cycles of length <= max_cycle."""
    ones = Degree.ones(g.rank)
    if max_prefix is None:
        max_prefix = len(g.vertices)
    out = []
    seen_starts: set[str] = set()
    for t in range(0, max_prefix + 1):
        for pre in enumerate_paths(g, v, ones * t):
            if (t, pre.src) in seen_starts:
                continue
            seen_starts.add((t, pre.src))
            for cyc in simple_cycles(g, pre.src, max_cycle):
                out.append(InfPath(pre, cyc))
    return out


def _walk(g: KGraph, allowed: set[str], a: str, b: str) -> list[str]:
    """Shortest edge word from range a to source b inside ``allowed`` (breadth first)."""
    back = {a: None}
    queue = [a]
    for u in queue:
        if u == b:
            break
        for i in range(1, g.rank + 1):
            for e in g.into(u, i):
                w = g.src[e]
                if w in allowed and w not in back:
                    back[w] = (u, e)
                    queue.append(w)
    word = []
    u = b
    while back[u] is not None:
        u, e = back[u]
        word.append(e)
    return word[::-1]


def recurrent_cycles(g: KGraph) -> dict[str, Path]:
    """For each vertex on a loop of degree >= (1,...,1), one such loop.

    These are exactly the vertices alpha(m) met far along eventually
    periodic paths: a closed edge walk through x using every colour
    normalizes to such a loop.
    """
    arcs = {v: set() for v in g.vertices}
    for e in g.all_edges():
        arcs[g.rng[e]].add(g.src[e])
    reach = {v: _reach(arcs, v) for v in g.vertices}
    out = {}
    for x in g.vertices:
        comp = {y for y in reach[x] if x in reach[y]}
        picks = []
        for i in range(1, g.rank + 1):
            inner = [e for e in g.edges_of(i) if g.rng[e] in comp and g.src[e] in comp]
            if not inner:
                break
            picks.append(inner[0])
        else:
            word: list[str] = []
            at = x
            for e in picks:
                word += _walk(g, comp, at, g.rng[e]) + [e]
                at = g.src[e]
            word += _walk(g, comp, at, x)
            out[x] = make_path(g, word)
    return out


def _reach(arcs: dict[str, set[str]], v: str) -> set[str]:
    seen = {v}
    stack = [v]
    while stack:
        for w in arcs[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def orbit_density_minimal(g: KGraph) -> bool:
    """Orb(v, alpha) = all vertices for every eventually periodic alpha.

    Orb+(alpha(m)) increases with m and is constant past the prefix, so the
    orbit of alpha equals that of its cycle; it suffices to take one loop per
    recurrent vertex.
    """
    everything = set(g.vertices)
    return all(
        orbit(g, x, InfPath(g.identity(x), cyc)).orb == everything for x, cyc in recurrent_cycles(g).items()
    )


def pitchfork(g: KGraph, us: Iterable[Path], vs: Iterable[Path]) -> set[Path]:
    """Initial segments of degree n ^ m common to both path sets."""
    us, vs = list(us), list(vs)
    if not us or not vs:
        return set()
    n, m = us[0].degree, vs[0].degree
    if any(u.degree != n for u in us) or any(x.degree != m for x in vs):
        raise DynamicsError("each path set must have a single degree")
    low = n.meet(m)
    zero = Degree.zero(g.rank)
    return {segment(g, u, zero, low) for u in us} & {segment(g, x, zero, low) for x in vs}


@dataclass(frozen=True)
class ContractingCertificate:
    v0: str
    V: frozenset[str]
    sets: tuple[tuple[Degree, tuple[Path, ...]], ...]

    def to_dict(self) -> dict:
        return {
            "v0": self.v0,
            "V": sorted(self.V),
            "sets": [{"degree": list(d.coords), "paths": [list(p.edges) for p in ps]} for d, ps in self.sets],
        }


def check_certificate(g: KGraph, cert: ContractingCertificate) -> bool:
    """Recheck every contracting condition directly."""
    if positive_orbit(g, cert.v0) != set(g.vertices):
        return False
    if not cert.V or len(cert.sets) < 2:
        return False
    for d, ps in cert.sets:
        if d.is_zero() or not ps:
            return False
        if any(p.degree != d or p.rng not in cert.V for p in ps):
            return False
    for (d1, a), (d2, b) in combinations(cert.sets, 2):
        if pitchfork(g, a, b):
            return False
    covered = set()
    for _, ps in cert.sets[1:]:
        covered |= {p.src for p in ps}
    return set(cert.V) <= covered


def check_contracting(g: KGraph, v0: str, max_m: int = 3, max_deg: Degree | int = 3) -> ContractingCertificate | None:
    """Exhaustive search for a contracting certificate with V a singleton.

    U_0, ..., U_m (1 <= m <= max_m) are non-empty sets of paths of a common
    non-zero degree <= max_deg with range in V; U_i and U_j have empty
    pitchfork; V lies in the union of s(U_1), ..., s(U_m).  Candidates are
    tried in lexicographic order, so the result is the least certificate.
    ``None`` means none exists within the bounds, not that none exists.
    """
    max_deg = as_degree(max_deg, g.rank)
    if positive_orbit(g, v0) != set(g.vertices):
        return None
    zero = Degree.zero(g.rank)
    for v in g.vertices:
        atoms = []
        for d in max_deg.below():
            if d == zero:
                continue
            paths = enumerate_paths(g, v, d)
            if paths:
                atoms.append((d, paths))
        # Single paths suffice: shrinking a U_i keeps conditions 1 and 2 and
        # one path per U_i with source v already meets condition 3.
        singles = [(d, (p,)) for d, ps in atoms for p in ps]
        for m in range(1, max_m + 1):
            for combo in combinations(range(len(singles)), m + 1):
                chosen = [singles[c] for c in combo]
                for first in range(m + 1):
                    order = [chosen[first]] + chosen[:first] + chosen[first + 1:]
                    if not any(p.src == v for _, ps in order[1:] for p in ps):
                        continue
                    cert = ContractingCertificate(v0, frozenset({v}), tuple(order))
                    if _disjoint(g, cert):
                        return cert
    return None


def _disjoint(g: KGraph, cert: ContractingCertificate) -> bool:
    return all(not pitchfork(g, a, b) for (_, a), (_, b) in combinations(cert.sets, 2))
