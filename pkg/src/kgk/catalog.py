"""Built-in base graphs with circle-covering weights."""

from __future__ import annotations

from math import gcd
from typing import Sequence

from .graphs import free_loops, omega, two_vertex_example
from .skeleton import KGraph
from .skew import SkewError, Weights, validate_weights

EXAMPLES = ("omega", "qn", "ex53", "ex54", "ex55", "free_loops")


def first_primes(count: int) -> list[int]:
    out: list[int] = []
    c = 2
    while len(out) < count:
        if all(c % p for p in out if p * p <= c):
            out.append(c)
        c += 1
    return out


def _ints(params: Sequence, want: int | None, name: str) -> list[int]:
    try:
        vals = [int(x) for x in params]
    except (TypeError, ValueError) as exc:
        raise SkewError(f"{name}: parameters must be integers") from exc
    if want is not None and len(vals) != want:
        raise SkewError(f"{name} takes {want} integer parameters, got {len(vals)}")
    return vals


def _pairs(params: Sequence, name: str) -> list[tuple[int, int]]:
    vals = _ints(params, None, name)
    if not vals or len(vals) % 2:
        raise SkewError(f"{name} takes pairs p_1 q_1 p_2 q_2 ...")
    return list(zip(vals[::2], vals[1::2]))


def _checked(g: KGraph, w: Weights) -> tuple[KGraph, Weights]:
    w.check_domain(g)
    report = validate_weights(g, w)
    if not report.ok:
        raise SkewError(f"weights violate the flip conditions: {report.violations[0]}")
    return g, w


def generate_example(name: str, params: Sequence = ()) -> tuple[KGraph, Weights | None]:
    """Base graph and weights for a named example.

    omega k [depth]         truncated Omega_k, no weights
    qn K                    one vertex, K loops, m = 1, n = first K primes
    ex53 p1 q1 ... pk qk    one vertex, k loops, m_i = p_i, n_i = q_i
    ex54 p0 q0 p1 q1 p2 q2  the two-vertex 2-graph
    ex55 m1 n1 m2 n2        Omega_2 truncated at depth 1, weights per colour
    free_loops k [loops]    one vertex, ``loops`` loops per colour, no weights
    """
    params = list(params)
    if name == "omega":
        vals = _ints(params, None, name)
        if len(vals) not in (1, 2) or vals[0] < 1:
            raise SkewError("omega takes a rank k >= 1 and an optional depth")
        return omega(vals[0], vals[1] if len(vals) > 1 else 1), None
    if name == "free_loops":
        vals = _ints(params, None, name)
        if len(vals) not in (1, 2) or vals[0] < 1:
            raise SkewError("free_loops takes a rank k >= 1 and an optional loop count")
        return free_loops(vals[0], vals[1] if len(vals) > 1 else 1), None
    if name == "qn":
        (K,) = _ints(params, 1, name)
        if K < 1:
            raise SkewError("qn needs K >= 1")
        g = free_loops(K)
        return _checked(g, Weights.per_color(g, [1] * K, first_primes(K)))
    if name == "ex53":
        pairs = _pairs(params, name)
        for p, q in pairs:
            if p == 0 or q < 1:
                raise SkewError(f"ex53 needs p_i != 0 and q_i > 0, got ({p}, {q})")
        for p, _ in pairs:
            for _, q in pairs:
                if gcd(abs(p), q) != 1:
                    raise SkewError(f"ex53 requires gcd(|p_i|, q_j) = 1; gcd({abs(p)}, {q}) = {gcd(abs(p), q)}")
        g = free_loops(len(pairs))
        return _checked(g, Weights.per_color(g, [p for p, _ in pairs], [q for _, q in pairs]))
    if name == "ex54":
        p0, q0, p1, q1, p2, q2 = _ints(params, 6, name)
        if 0 in (p0, p1, p2) or min(q0, q1, q2) < 1:
            raise SkewError("ex54 needs non-zero p and positive q")
        for p, q in ((p1, q1), (p2, q2)):
            d = gcd(abs(p0 * p), q0 * q)
            if d != 1:
                raise SkewError(f"ex54 requires gcd(|p_0 p_i|, q_0 q_i) = 1; gcd({abs(p0 * p)}, {q0 * q}) = {d}")
        g = two_vertex_example()
        w = Weights(
            {"lam1": p0, "lam2": p0, "mu1": p1, "mu2": p2},
            {"lam1": q0, "lam2": q0, "mu1": q1, "mu2": q2},
        )
        return _checked(g, w)
    if name == "ex55":
        m1, n1, m2, n2 = _ints(params, 4, name) if params else (1, 2, 1, 3)
        g = omega(2, 1)
        return _checked(g, Weights.per_color(g, [m1, m2], [n1, n2]))
    raise SkewError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")


def classify_example(name: str, params: Sequence = ()) -> dict:
    """The stated sufficient conditions for Condition (A) and simple purely infinite.

    Only the arithmetic of the weights is inspected; a false entry means the
    sufficient condition fails, not that the property fails.
    """
    generate_example(name, params)
    if name == "qn":
        return {"condition_a": True, "simple_pi_hypotheses": True}
    if name == "ex53":
        pairs = _pairs(params, name)
        cond_a = all((abs(p), q) != (1, 1) for p, q in pairs)
        return {"condition_a": cond_a, "simple_pi_hypotheses": cond_a and any(p % q for p, q in pairs)}
    if name == "ex54":
        p0, q0, p1, q1, p2, q2 = _ints(params, 6, name)
        cond_a = (abs(p0), q0) != (1, 1) and abs(p1 * p2) != q1 * q2
        simple = cond_a and bool(p0 % q0 or (p1 * p2) % (q1 * q2))
        return {"condition_a": cond_a, "simple_pi_hypotheses": simple}
    raise SkewError(f"no stated criteria for example {name!r}")
