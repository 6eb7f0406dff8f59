"""Quivers with loops, Borcherds-Cartan data and Euler forms."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Sequence

import numpy as np

Vertex = Hashable


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    """Finite quiver; loops and multiple arrows allowed.

    ``arrows`` is a tuple of (source, target) vertex ids.  Declaration order of
    vertices fixes the coordinate order of dimension vectors.
    """

    vertices: tuple
    arrows: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "arrows", tuple((s, t) for s, t in self.arrows))
        if len(set(self.vertices)) != len(self.vertices):
            raise QuiverError("duplicate vertex ids in %r" % (self.vertices,))
        vs = set(self.vertices)
        for s, t in self.arrows:
            if s not in vs or t not in vs:
                raise QuiverError("arrow (%r, %r) has an endpoint outside the vertex set" % (s, t))

    @cached_property
    def index(self) -> dict:
        return {v: k for k, v in enumerate(self.vertices)}

    @property
    def n(self) -> int:
        return len(self.vertices)

    @cached_property
    def arrow_indices(self) -> tuple[tuple[int, int], ...]:
        """Arrows as (source index, target index)."""
        return tuple((self.index[s], self.index[t]) for s, t in self.arrows)

    def loops(self, i: Vertex) -> int:
        return sum(1 for s, t in self.arrows if s == t == i)

    def n_arrows(self, i: Vertex, j: Vertex) -> int:
        return sum(1 for s, t in self.arrows if s == i and t == j)

    def loop_arrows(self, i: Vertex) -> list[int]:
        """Positions (in ``arrows``) of the loops at i, in declaration order."""
        return [a for a, (s, t) in enumerate(self.arrows) if s == t == i]

    def unit(self, i: Vertex) -> tuple[int, ...]:
        k = self.index[i]
        return tuple(1 if j == k else 0 for j in range(self.n))

    def zero_vector(self) -> tuple[int, ...]:
        return (0,) * self.n

    def describe(self) -> str:
        return "vertices=%s arrows=%s" % (list(self.vertices), [list(a) for a in self.arrows])


# Standard examples.
def jordan_quiver() -> Quiver:
    return Quiver((1,), ((1, 1),))


def loop_quiver(g: int) -> Quiver:
    return Quiver((1,), tuple((1, 1) for _ in range(g)))


def a2_quiver() -> Quiver:
    return Quiver((1, 2), ((1, 2),))


def loop_to_real_quiver() -> Quiver:
    """One-loop vertex 1 with an arrow to the loop-free vertex 2."""
    return Quiver((1, 2), ((1, 1), (1, 2)))


def euler_form(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    """<d, e> = sum_i d_i e_i - sum_{a: i -> j} d_i e_j."""
    if len(d) != Q.n or len(e) != Q.n:
        raise QuiverError("dimension vectors must have length %d" % Q.n)
    out = sum(x * y for x, y in zip(d, e))
    for s, t in Q.arrow_indices:
        out -= d[s] * e[t]
    return out


def sym_form(Q: Quiver, d: Sequence[int], e: Sequence[int]) -> int:
    return euler_form(Q, d, e) + euler_form(Q, e, d)


@dataclass(frozen=True)
class BorcherdsCartan:
    """Symmetric Borcherds-Cartan matrix with its vertex classes.

    ``lmax`` truncates the levels available at imaginary vertices.
    """

    vertices: tuple
    entries: tuple
    lmax: int = 3

    def __post_init__(self):
        a = self.entries
        n = len(self.vertices)
        if len(a) != n or any(len(row) != n for row in a):
            raise QuiverError("Cartan matrix must be square of size %d" % n)
        for i in range(n):
            if a[i][i] > 2 or a[i][i] % 2:
                raise QuiverError("diagonal entry a_%d%d = %d not in {2, 0, -2, ...}" % (i, i, a[i][i]))
            for j in range(n):
                if i != j and (a[i][j] != a[j][i] or a[i][j] > 0):
                    raise QuiverError("off-diagonal entries must be symmetric and <= 0")

    def a(self, i: Vertex, j: Vertex) -> int:
        idx = {v: k for k, v in enumerate(self.vertices)}
        return self.entries[idx[i]][idx[j]]

    @property
    def real(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vertices) if self.entries[k][k] == 2)

    @property
    def imaginary(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vertices) if self.entries[k][k] <= 0)

    @property
    def isotropic(self) -> tuple:
        return tuple(v for k, v in enumerate(self.vertices) if self.entries[k][k] == 0)

    def is_real(self, i: Vertex) -> bool:
        return i in self.real

    def levels(self, i: Vertex, lmax: int | None = None) -> range:
        """Admissible levels l with (i, l) in the truncated index set."""
        if self.is_real(i):
            return range(1, 2)
        return range(1, (self.lmax if lmax is None else lmax) + 1)

    def index_set(self, lmax: int | None = None) -> list[tuple]:
        return [(i, l) for i in self.vertices for l in self.levels(i, lmax)]

    def half_diag(self, i: Vertex) -> int:
        """Exponent of v_(i) = v^{a_ii / 2}."""
        return self.a(i, i) // 2

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=np.int64)


def cartan_from_quiver(Q: Quiver, lmax: int = 3) -> BorcherdsCartan:
    """a_ii = 2 - 2 g_i, a_ij = -n_ij - n_ji."""
    rows = []
    for i in Q.vertices:
        row = []
        for j in Q.vertices:
            if i == j:
                row.append(2 - 2 * Q.loops(i))
            else:
                row.append(-Q.n_arrows(i, j) - Q.n_arrows(j, i))
        rows.append(tuple(row))
    return BorcherdsCartan(Q.vertices, tuple(rows), lmax)


def parse_quiver(text: str) -> Quiver:
    """Parse the line format ``vertices: 1 2`` / ``arrow: 1 2`` with ``#`` comments."""
    vertices = None
    arrows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, rest = line.partition(":")
        if not sep:
            raise QuiverError("line %d: expected 'key: values', got %r" % (lineno, raw))
        key = key.strip().lower()
        try:
            vals = [int(x) for x in rest.split()]
        except ValueError:
            raise QuiverError("line %d: vertex ids must be integers" % lineno) from None
        if key == "vertices":
            if vertices is not None:
                raise QuiverError("line %d: vertices declared twice" % lineno)
            if not vals:
                raise QuiverError("line %d: empty vertex list" % lineno)
            vertices = tuple(vals)
        elif key == "arrow":
            if len(vals) != 2:
                raise QuiverError("line %d: an arrow needs exactly two endpoints" % lineno)
            arrows.append((vals[0], vals[1]))
        else:
            raise QuiverError("line %d: unknown key %r" % (lineno, key))
    if vertices is None:
        raise QuiverError("no 'vertices:' line found")
    try:
        return Quiver(vertices, tuple(arrows))
    except QuiverError as exc:
        raise QuiverError("invalid quiver: %s" % exc) from None
