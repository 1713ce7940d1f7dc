"""Skew products of a discrete k-graph by covering maps of the circle.

The circle is modelled exactly as Q/Z: the point exp(2 pi i a/N) is the
reduced fraction a/N in [0, 1), and z -> z^n is multiplication by n.  A colour
i edge e carries two integers, m(e) != 0 (covering degree of the range map)
and n(e) > 0 (covering degree of the source map); the skew edge (e, z) has
range (r(e), m(e) z) and source (s(e), n(e) z).

For a composable pair (l1, l2) with flip (l1', l2') and M = m(l1) m(l2),
the fibre over a range point M z is parametrised by sheet indices

    z_{p1,p2} = (m(l2) z + p1/m(l1),  n(l1) z + (n(l1) p1 + m(l1) p2)/M)

and the fibre permutation sends (p1, p2) to the unique (q1, q2) with

    n(l2) (n(l1) p1 + m(l1) p2) = n(l2') (n(l1') q1 + m(l1') q2)   (mod |M|).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd, lcm
from typing import Iterable, Mapping

import numpy as np

from .skeleton import KGraph, build_graph


class SkewError(ValueError):
    pass


@dataclass(frozen=True)
class QmodZ:
    """A point of Q/Z in reduced form num/den with 0 <= num < den."""

    num: int
    den: int = 1

    def __post_init__(self) -> None:
        if self.den <= 0:
            raise ValueError("denominator must be positive")
        f = Fraction(self.num, self.den)
        num = f.numerator % f.denominator
        g = gcd(num, f.denominator)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", f.denominator // g)

    @classmethod
    def of(cls, value: Fraction | int | str) -> QmodZ:
        f = Fraction(value)
        return cls(f.numerator, f.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __add__(self, other: QmodZ) -> QmodZ:
        return QmodZ.of(self.value + other.value)

    def __sub__(self, other: QmodZ) -> QmodZ:
        return QmodZ.of(self.value - other.value)

    def __neg__(self) -> QmodZ:
        return QmodZ(-self.num, self.den)

    def __mul__(self, n: int) -> QmodZ:
        return QmodZ(n * self.num, self.den)

    __rmul__ = __mul__

    def __lt__(self, other: QmodZ) -> bool:
        return self.value < other.value

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"


def root_pow(z: QmodZ, n: int) -> QmodZ:
    """z -> z^n on the circle."""
    return z * n


def root_preimages(z: QmodZ, n: int) -> list[QmodZ]:
    """The n points w with w^n = z, in increasing order."""
    if n < 1:
        raise ValueError("n must be positive")
    return sorted(QmodZ.of((z.value + t) / n) for t in range(n))


@dataclass(frozen=True)
class Weights:
    m: Mapping[str, int]
    n: Mapping[str, int]

    def check_domain(self, g: KGraph) -> None:
        for e in g.all_edges():
            if e not in self.m or e not in self.n:
                raise SkewError(f"weights missing on edge {e!r}")
            if self.m[e] == 0:
                raise SkewError(f"m({e}) must be non-zero")
            if self.n[e] <= 0:
                raise SkewError(f"n({e}) must be positive")

    def to_dict(self) -> dict:
        return {"m": dict(sorted(self.m.items())), "n": dict(sorted(self.n.items()))}

    @classmethod
    def per_color(cls, g: KGraph, m: Iterable[int], n: Iterable[int]) -> Weights:
        """Weights constant on each colour; then condition (ii) holds automatically."""
        m, n = list(m), list(n)
        return cls(
            {e: m[g.color[e] - 1] for e in g.all_edges()},
            {e: n[g.color[e] - 1] for e in g.all_edges()},
        )


@dataclass(frozen=True)
class WeightReport:
    ok: bool
    violations: list[dict] = field(default_factory=list)


def validate_weights(g: KGraph, w: Weights) -> WeightReport:
    """Check the coprimality (i) and multiplicativity (ii) conditions exhaustively.

    (i) is required for composable pairs in both colour orders.
    """
    w.check_domain(g)
    violations: list[dict] = []
    for i in range(1, g.rank + 1):
        for j in range(1, g.rank + 1):
            if i == j:
                continue
            for a in g.edges_of(i):
                for b in g.into(g.src[a], j):
                    mm, nn = abs(w.m[a] * w.m[b]), w.n[a] * w.n[b]
                    d = gcd(mm, nn)
                    if d != 1:
                        violations.append(
                            {"condition": "i", "pair": [a, b], "colors": [i, j], "detail": f"gcd({mm}, {nn}) = {d}"}
                        )
    for (i, j), table in g.flips.items():
        for (a, b), (b2, a2) in sorted(table.items()):
            if w.m[a] * w.m[b] != w.m[b2] * w.m[a2]:
                violations.append(
                    {
                        "condition": "ii-m",
                        "pair": [a, b],
                        "colors": [i, j],
                        "detail": f"{w.m[a]}*{w.m[b]} != {w.m[b2]}*{w.m[a2]}",
                    }
                )
            if w.n[a] * w.n[b] != w.n[b2] * w.n[a2]:
                violations.append(
                    {
                        "condition": "ii-n",
                        "pair": [a, b],
                        "colors": [i, j],
                        "detail": f"{w.n[a]}*{w.n[b]} != {w.n[b2]}*{w.n[a2]}",
                    }
                )
    return WeightReport(not violations, violations)


@dataclass(frozen=True)
class FiberPermutation:
    pair: tuple[str, str]
    colors: tuple[int, int]
    target: tuple[str, str]
    table: Mapping[tuple[int, int], tuple[int, int]]

    def to_dict(self) -> dict:
        return {
            "pair": list(self.pair),
            "colors": list(self.colors),
            "table": [[p1, p2, q1, q2] for (p1, p2), (q1, q2) in sorted(self.table.items())],
        }

    def with_entry(self, key: tuple[int, int], value: tuple[int, int]) -> FiberPermutation:
        table = dict(self.table)
        table[key] = value
        return FiberPermutation(self.pair, self.colors, self.target, table)


def _pair_data(g: KGraph, w: Weights, pair: tuple[str, str]):
    a, b = pair
    if g.src[a] != g.rng[b]:
        raise SkewError(f"pair {pair} is not composable")
    a2, b2 = g.flip(a, b)
    return a, b, a2, b2


def _sheet_lhs(w: Weights, a: str, b: str, p1: int, p2: int) -> int:
    return w.n[b] * (w.n[a] * p1 + w.m[a] * p2)


def solve_fiber_congruence(g: KGraph, w: Weights, pair: tuple[str, str]) -> FiberPermutation:
    """Constructive solution of the sheet congruence for a composable pair.

    The pair may be in either colour order; the target is ``g.flip(pair)``.
    """
    a, b, a2, b2 = _pair_data(g, w, pair)
    M = abs(w.m[a] * w.m[b])
    s1, s2 = abs(w.m[a2]), abs(w.m[b2])
    if s1 * s2 != M:
        raise SkewError(f"|m| products differ across the flip of {pair}")
    if gcd(w.n[b2], M) != 1 or gcd(w.n[a2], s1) != 1:
        raise SkewError(f"non-invertible modulus for {pair}: weights violate the coprimality condition")
    inv_outer = pow(w.n[b2], -1, M)
    inv_first = pow(w.n[a2], -1, s1) if s1 > 1 else 0
    sign = 1 if w.m[a2] > 0 else -1
    table = {}
    for p1 in range(abs(w.m[a])):
        for p2 in range(abs(w.m[b])):
            x = (_sheet_lhs(w, a, b, p1, p2) * inv_outer) % M
            q1 = (x * inv_first) % s1
            rest = (x - w.n[a2] * q1) % M
            q2 = (sign * (rest // s1)) % s2
            table[p1, p2] = (q1, q2)
    return FiberPermutation((a, b), (g.color[a], g.color[b]), (a2, b2), table)


def brute_force_fiber_congruence(g: KGraph, w: Weights, pair: tuple[str, str]) -> FiberPermutation:
    """Exhaustive search for each sheet's unique partner; errors unless exactly one."""
    a, b, a2, b2 = _pair_data(g, w, pair)
    M = abs(w.m[a] * w.m[b])
    if M > 10**4:
        raise SkewError(f"modulus {M} too large for exhaustive search")
    table = {}
    for p1 in range(abs(w.m[a])):
        for p2 in range(abs(w.m[b])):
            lhs = _sheet_lhs(w, a, b, p1, p2) % M
            hits = [
                (q1, q2)
                for q1 in range(abs(w.m[a2]))
                for q2 in range(abs(w.m[b2]))
                if (_sheet_lhs(w, a2, b2, q1, q2) - lhs) % M == 0
            ]
            if len(hits) != 1:
                raise SkewError(f"sheet ({p1}, {p2}) of {pair} has {len(hits)} solutions, expected exactly one")
            table[p1, p2] = hits[0]
    return FiberPermutation((a, b), (g.color[a], g.color[b]), (a2, b2), table)


def all_fiber_perms(g: KGraph, w: Weights) -> dict[tuple[str, str], FiberPermutation]:
    """Fibre permutations for every composable pair of distinct colours, both orders."""
    out = {}
    for i in range(1, g.rank + 1):
        for j in range(1, g.rank + 1):
            if i != j:
                for a in g.edges_of(i):
                    for b in g.into(g.src[a], j):
                        out[a, b] = solve_fiber_congruence(g, w, (a, b))
    return out


def sheet_point(w: Weights, a: str, b: str, z: Fraction, p1: int, p2: int) -> tuple[QmodZ, QmodZ]:
    """The fibre point z_{p1,p2} of the pair (a, b) over the range point M z."""
    ma, mb, na = w.m[a], w.m[b], w.n[a]
    z1 = QmodZ.of(mb * z + Fraction(p1, ma))
    z2 = QmodZ.of(na * z + Fraction(na * p1 + ma * p2, ma * mb))
    return z1, z2


def sheet_index(w: Weights, a: str, b: str, z1: QmodZ, z2: QmodZ) -> tuple[Fraction, int, int]:
    """Inverse of :func:`sheet_point` for a canonical choice of z."""
    ma, mb, na = w.m[a], w.m[b], w.n[a]
    if QmodZ.of(na * z1.value) != QmodZ.of(mb * z2.value):
        raise SkewError(f"({z1}, {z2}) is not in the fibre of ({a}, {b})")
    M = ma * mb
    x = QmodZ.of(ma * z1.value)
    y = x.value / abs(M)
    z = y if M > 0 else -y
    t1 = (z1.value - mb * z) * ma
    if t1.denominator != 1:
        raise SkewError("sheet index is not integral")
    p1 = int(t1) % abs(ma)
    t2 = (z2.value - na * z) * M
    if t2.denominator != 1:
        raise SkewError("sheet index is not integral")
    r = (int(t2) - na * p1) % abs(M)
    if r % abs(ma):
        raise SkewError("sheet index is not integral")
    p2 = ((1 if ma > 0 else -1) * (r // abs(ma))) % abs(mb)
    return z, p1, p2


def apply_fiber(
    w: Weights, perm: FiberPermutation, z1: QmodZ, z2: QmodZ
) -> tuple[QmodZ, QmodZ]:
    """S on fibre points: locate the sheet, permute it, rebuild over the same z."""
    a, b = perm.pair
    a2, b2 = perm.target
    z, p1, p2 = sheet_index(w, a, b, z1, z2)
    if (p1, p2) not in perm.table:
        raise SkewError(f"sheet ({p1}, {p2}) missing from the table of {perm.pair}")
    q1, q2 = perm.table[p1, p2]
    return sheet_point(w, a2, b2, z, q1, q2)


def working_modulus(w: Weights, edges: Iterable[str]) -> int:
    return reduce(lcm, (abs(w.m[e]) * w.n[e] for e in edges), 1)


@dataclass(frozen=True)
class FiberLawReport:
    ok: bool
    checks: int
    violations: list[dict] = field(default_factory=list)
    z_independent: bool = True


def _sheet_units(ma: int, mb: int, na: int, Z, p1: int, p2: int, L: int):
    """sheet_point on arrays: points and the parameter z are integers in units of 1/L."""
    M = ma * mb
    z1 = (mb * Z + (p1 * L) // ma) % L
    z2 = (na * Z + (na * p1 + ma * p2) * (L // M)) % L
    return z1, z2


def _sheet_index_units(ma: int, mb: int, na: int, z1, z2, L: int):
    """sheet_index on arrays in units of 1/L; ``bad`` flags points with no integral sheet."""
    M = ma * mb
    aM, ama, amb = abs(M), abs(ma), abs(mb)
    x = (ma * z1) % L
    bad = x % aM != 0
    z = ((x // aM) if M > 0 else -(x // aM)) % L
    d1 = (z1 - mb * z) % L
    bad |= d1 % (L // ama) != 0
    p1 = ((1 if ma > 0 else -1) * (d1 // (L // ama))) % ama
    step = L // aM
    d2 = (z2 - na * z) % L
    bad |= d2 % step != 0
    r = ((1 if M > 0 else -1) * (d2 // step) - na * p1) % aM
    bad |= r % ama != 0
    p2 = ((1 if ma > 0 else -1) * (r // ama)) % amb
    return z, p1, p2, bad


def verify_fiber_laws(g: KGraph, w: Weights, perm: FiberPermutation, sample_den: int) -> FiberLawReport:
    """Evaluate every table entry at every z = t/sample_den.

    Checks fibre membership of both points, preservation of range and
    source, bijectivity of the table, and that the point map does not depend
    on the choice of z used to parametrise the sheets.

    Every point involved, including the canonical z recovered when the map
    is applied, has denominator dividing L = sample_den |M|, so the whole
    computation is exact integer arithmetic on numerators over L, vectorised
    across t.
    """
    a, b = perm.pair
    a2, b2 = perm.target
    ma, mb, na, nb = w.m[a], w.m[b], w.n[a], w.n[b]
    ma2, mb2, na2, nb2 = w.m[a2], w.m[b2], w.n[a2], w.n[b2]
    violations: list[dict] = []
    expected = {(p1, p2) for p1 in range(abs(ma)) for p2 in range(abs(mb))}
    codomain = {(q1, q2) for q1 in range(abs(ma2)) for q2 in range(abs(mb2))}
    if set(perm.table) != expected or set(perm.table.values()) != codomain:
        violations.append({"law": "bijection", "pair": [a, b]})
    M = abs(ma * mb)
    L = sample_den * M
    coeff = max(abs(x) for x in (ma, mb, na, nb, ma2, mb2, na2, nb2, M))
    dtype = np.int64 if L * coeff * (M + 2) < 2**62 else object
    Z = np.arange(sample_den, dtype=dtype) * M
    dense = np.full((2, abs(ma), abs(mb)), -1, dtype=np.int64)
    for (p1, p2), (q1, q2) in perm.table.items():
        if 0 <= p1 < abs(ma) and 0 <= p2 < abs(mb):
            dense[:, p1, p2] = (q1, q2)
    independent = True
    checks = 0
    for (p1, p2), (q1, q2) in sorted(perm.table.items()):
        checks += sample_den
        z1, z2 = _sheet_units(ma, mb, na, Z, p1, p2, L)
        w1, w2 = _sheet_units(ma2, mb2, na2, Z, q1, q2, L)
        laws = {
            "membership-source": (na * z1 - mb * z2) % L != 0,
            "membership-target": (na2 * w1 - mb2 * w2) % L != 0,
            "range": (ma * z1 - ma2 * w1) % L != 0,
            "source": (nb * z2 - nb2 * w2) % L != 0,
        }
        zc, s1, s2, bad = _sheet_index_units(ma, mb, na, z1, z2, L)
        s1, s2 = s1.astype(np.int64), s2.astype(np.int64)
        r1, r2 = dense[0][s1, s2].astype(dtype), dense[1][s1, s2].astype(dtype)
        missing = r1 < 0
        r1, r2 = np.where(missing, 0, r1), np.where(missing, 0, r2)
        u1, u2 = _sheet_units(ma2, mb2, na2, zc, r1, r2, L)
        moved = missing | ((u1 - w1) % L != 0) | ((u2 - w2) % L != 0)
        laws["z-independence"] = np.asarray(bad | moved, dtype=bool)
        if laws["z-independence"].any():
            independent = False
        for law, mask in laws.items():
            for t in np.flatnonzero(np.asarray(mask, dtype=bool)):
                violations.append(
                    {"law": law, "z": str(QmodZ(int(t), sample_den)), "p": [p1, p2], "q": [q1, q2]}
                )
    violations.sort(key=lambda v: (v["law"] != "bijection", v.get("p", []), v.get("z", "")))
    return FiberLawReport(not violations, checks, violations, independent)


def _skew_flip(g: KGraph, w: Weights, perms, x: tuple[str, QmodZ], y: tuple[str, QmodZ]):
    a, z1 = x
    b, z2 = y
    perm = perms[a, b]
    w1, w2 = apply_fiber(w, perm, z1, z2)
    a2, b2 = perm.target
    return (a2, w1), (b2, w2)


@dataclass(frozen=True)
class SkewHexagonReport:
    ok: bool
    checks: int
    witness: dict | None = None


def verify_skew_hexagon(
    g: KGraph, w: Weights, perms: Mapping[tuple[str, str], FiberPermutation] | None = None
) -> SkewHexagonReport:
    """Both sides of the hexagon for T x S on every composable triple and fibre point.

    Fibre points are enumerated over first coordinates t/W, W the working
    modulus of the triple, and all compatible second and third coordinates.
    """
    if perms is None:
        perms = all_fiber_perms(g, w)
    checks = 0
    for i in range(1, g.rank + 1):
        for j in range(i + 1, g.rank + 1):
            for l in range(j + 1, g.rank + 1):
                for a in g.edges_of(i):
                    for b in g.into(g.src[a], j):
                        for c in g.into(g.src[b], l):
                            W = working_modulus(w, (a, b, c))
                            for t in range(W):
                                z1 = QmodZ(t, W)
                                for z2 in root_preimages(z1 * w.n[a] * (1 if w.m[b] > 0 else -1), abs(w.m[b])):
                                    for z3 in root_preimages(
                                        z2 * w.n[b] * (1 if w.m[c] > 0 else -1), abs(w.m[c])
                                    ):
                                        checks += 1
                                        x, y, u = (a, z1), (b, z2), (c, z3)
                                        y1, x1 = _skew_flip(g, w, perms, x, y)
                                        u1, x2 = _skew_flip(g, w, perms, x1, u)
                                        u2, y2 = _skew_flip(g, w, perms, y1, u1)
                                        left = (u2, y2, x2)
                                        u3, y3 = _skew_flip(g, w, perms, y, u)
                                        u4, x3 = _skew_flip(g, w, perms, x, u3)
                                        y4, x4 = _skew_flip(g, w, perms, x3, y3)
                                        right = (u4, y4, x4)
                                        if left != right:
                                            return SkewHexagonReport(
                                                False,
                                                checks,
                                                {
                                                    "triple": [a, b, c],
                                                    "point": [str(z1), str(z2), str(z3)],
                                                    "left": [[e, str(z)] for e, z in left],
                                                    "right": [[e, str(z)] for e, z in right],
                                                },
                                            )
    return SkewHexagonReport(True, checks)


def required_resolution(g: KGraph, w: Weights) -> int:
    return working_modulus(w, g.all_edges())


def build_skew_graph(g: KGraph, w: Weights, N: int) -> KGraph:
    """Finite model of the skew product with the circle replaced by {a/N}.

    Vertices (v, a/N), colour-i edges (e, a/N) with range (r(e), m(e) a/N)
    and source (s(e), n(e) a/N); flips are T x S restricted to grid points.
    """
    need = required_resolution(g, w)
    if N < 1 or N % need:
        raise SkewError(f"resolution {N} must be a positive multiple of lcm |m(e)| n(e) = {need}")
    report = validate_weights(g, w)
    if not report.ok:
        raise SkewError(f"weights violate the flip conditions: {report.violations[0]}")
    perms = all_fiber_perms(g, w)

    def vid(v: str, z: QmodZ) -> str:
        return f"{v}@{z.num * (N // z.den)}"

    def eid(e: str, z: QmodZ) -> str:
        return f"{e}@{z.num * (N // z.den)}"

    grid = [QmodZ(t, N) for t in range(N)]
    vertices = [vid(v, z) for v in g.vertices for z in grid]
    edges = []
    for e in g.all_edges():
        for z in grid:
            edges.append((g.color[e], eid(e, z), vid(g.src[e], z * w.n[e]), vid(g.rng[e], z * w.m[e])))
    flips: dict = {}
    for (i, j), table in g.flips.items():
        out = {}
        for (a, b) in table:
            for z1 in grid:
                for z2 in grid:
                    if z1 * w.n[a] != z2 * w.m[b]:
                        continue
                    (b2, w1), (a2, w2) = _skew_flip(g, w, perms, (a, z1), (b, z2))
                    if N % w1.den or N % w2.den:
                        raise SkewError(
                            f"flip of ({a}@{z1}, {b}@{z2}) leaves the grid 1/{N}: ({b2}@{w1}, {a2}@{w2})"
                        )
                    out[eid(a, z1), eid(b, z2)] = (eid(b2, w1), eid(a2, w2))
        flips[i, j] = out
    return build_graph(g.rank, vertices, edges, flips)


def skew_preimage_counts(g: KGraph, w: Weights, N: int, skew: KGraph) -> dict:
    """Per (vertex, colour): edges arriving by range and by source in the model."""
    counts = {}
    for v in skew.vertices:
        for i in range(1, skew.rank + 1):
            counts[v, i] = {"range": len(skew.into(v, i)), "source": len(skew.outof(v, i))}
    return counts
