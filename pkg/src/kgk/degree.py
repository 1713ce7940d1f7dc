"""Multidegrees in N^k with their lattice operations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator


class RankMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Degree:
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        if not coords:
            raise ValueError("degree needs rank >= 1")
        if any(c < 0 for c in coords):
            raise ValueError(f"negative coordinate in {coords}")
        object.__setattr__(self, "coords", coords)

    @classmethod
    def of(cls, *coords: int) -> Degree:
        return cls(tuple(coords))

    @classmethod
    def zero(cls, k: int) -> Degree:
        return cls((0,) * k)

    @classmethod
    def unit(cls, k: int, i: int) -> Degree:
        """The generator e_i; colors are 1-based."""
        if not 1 <= i <= k:
            raise ValueError(f"color {i} outside 1..{k}")
        return cls(tuple(1 if j == i - 1 else 0 for j in range(k)))

    @classmethod
    def ones(cls, k: int) -> Degree:
        return cls((1,) * k)

    @property
    def rank(self) -> int:
        return len(self.coords)

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coords)

    def __getitem__(self, i: int) -> int:
        return self.coords[i]

    def _check(self, other: Degree) -> None:
        if self.rank != other.rank:
            raise RankMismatch(f"rank {self.rank} vs rank {other.rank}")

    def __add__(self, other: Degree) -> Degree:
        self._check(other)
        return Degree(tuple(a + b for a, b in zip(self, other)))

    def __sub__(self, other: Degree) -> Degree:
        self._check(other)
        if not other <= self:
            raise ValueError(f"{other} is not below {self}")
        return Degree(tuple(a - b for a, b in zip(self, other)))

    def __mul__(self, t: int) -> Degree:
        return Degree(tuple(t * a for a in self))

    __rmul__ = __mul__

    def __le__(self, other: Degree) -> bool:
        self._check(other)
        return all(a <= b for a, b in zip(self, other))

    def __ge__(self, other: Degree) -> bool:
        return other <= self

    def join(self, other: Degree) -> Degree:
        self._check(other)
        return Degree(tuple(max(a, b) for a, b in zip(self, other)))

    def meet(self, other: Degree) -> Degree:
        self._check(other)
        return Degree(tuple(min(a, b) for a, b in zip(self, other)))

    __or__ = join
    __and__ = meet

    def total(self) -> int:
        return sum(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def colors(self) -> list[int]:
        """Color word of the ascending normal form, e.g. (2,1) -> [1, 1, 2]."""
        return [i + 1 for i, c in enumerate(self.coords) for _ in range(c)]

    def below(self) -> Iterator[Degree]:
        """All n with 0 <= n <= self, ordered by (total, coords)."""
        from itertools import product

        box = sorted(product(*(range(c + 1) for c in self.coords)), key=lambda t: (sum(t), t))
        return (Degree(t) for t in box)

    def key(self) -> tuple[int, tuple[int, ...]]:
        return (self.total(), self.coords)

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.coords)) + ")"


def as_degree(value: Degree | Iterable[int] | int, k: int | None = None) -> Degree:
    if isinstance(value, Degree):
        deg = value
    elif isinstance(value, int):
        deg = Degree((value,) if k is None else (value,) * k)
    else:
        deg = Degree(tuple(value))
    if k is not None and deg.rank != k:
        raise RankMismatch(f"expected rank {k}, got {deg.rank}")
    return deg


def degree_compare(m: Degree, n: Degree) -> dict:
    m._check(n)
    return {"leq": m <= n, "geq": n <= m, "join": m.join(n), "meet": m.meet(n)}
