"""Affine ADE Cartan matrices and their root systems.

Node conventions (node 0 is always the extended node):

* ``A1t``: two nodes joined by a double edge, ``C = [[2, -2], [-2, 2]]``.
* ``Ant`` (n >= 2): the cycle 0 - 1 - ... - n - 0.
* ``D4t``: outer nodes 0, 1, 2, 3, centre 4.
* ``Dnt`` (n >= 5): nodes 0 and 1 hang off node 2, the chain 2 - ... - (n-2),
  and nodes n-1, n hang off node n-2.
* ``E6t``: chain 1 - 2 - 3 - 4 - 5, with 3 - 6 - 0.
* ``E7t``: chain 0 - 1 - ... - 6, with 7 attached to 3.
* ``E8t``: chain 0 - 1 - ... - 7, with 8 attached to 5.

All arithmetic is on Python integers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from math import gcd
from typing import Iterable

from . import linalg


class UnsupportedTypeError(ValueError):
    pass


class NotAffineError(ValueError):
    pass


@dataclass(frozen=True)
class CartanMatrix:
    label: str
    entries: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.entries)

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def apply(self, v: Iterable[int]) -> tuple[int, ...]:
        v = tuple(v)
        return tuple(sum(c * x for c, x in zip(r, v)) for r in self.entries)

    def norm(self, v: Iterable[int]) -> int:
        """The quadratic form v^T C v."""
        v = tuple(v)
        return sum(x * y for x, y in zip(v, self.apply(v)))

    @cached_property
    def delta(self) -> tuple[int, ...]:
        return _kernel_generator(self)


@dataclass(frozen=True, order=True)
class Root:
    coords: tuple[int, ...]
    kind: str  # "real" | "imaginary"

    @property
    def positive(self) -> bool:
        return all(x >= 0 for x in self.coords)

    @property
    def height(self) -> int:
        return sum(self.coords)

    def __neg__(self) -> "Root":
        return Root(tuple(-x for x in self.coords), self.kind)


_LABEL = re.compile(r"^([ADE])(\d+)t$")


def _edges(kind: str, n: int) -> tuple[int, list[tuple[int, int]]]:
    if kind == "A" and n >= 2:
        return n + 1, [(i, (i + 1) % (n + 1)) for i in range(n + 1)]
    if kind == "D" and n == 4:
        return 5, [(i, 4) for i in range(4)]
    if kind == "D" and n >= 5:
        edges = [(0, 2), (1, 2)] + [(i, i + 1) for i in range(2, n - 2)]
        edges += [(n - 2, n - 1), (n - 2, n)]
        return n + 1, edges
    if kind == "E" and n == 6:
        return 7, [(1, 2), (2, 3), (3, 4), (4, 5), (3, 6), (6, 0)]
    if kind == "E" and n == 7:
        return 8, [(i, i + 1) for i in range(6)] + [(3, 7)]
    if kind == "E" and n == 8:
        return 9, [(i, i + 1) for i in range(7)] + [(5, 8)]
    raise UnsupportedTypeError(f"unsupported affine type: {kind}{n}t")


def build_cartan(label: str) -> CartanMatrix:
    m = _LABEL.match(label)
    if not m:
        raise UnsupportedTypeError(f"unsupported affine type: {label}")
    kind, n = m.group(1), int(m.group(2))
    if kind == "A" and n == 1:
        return CartanMatrix(label, ((2, -2), (-2, 2)))
    size, edges = _edges(kind, n)
    rows = [[2 if i == j else 0 for j in range(size)] for i in range(size)]
    for a, b in edges:
        rows[a][b] = rows[b][a] = -1
    return CartanMatrix(label, tuple(tuple(r) for r in rows))


def supported_labels() -> list[str]:
    labels = [f"A{n}t" for n in range(1, 8)] + [f"D{n}t" for n in range(4, 9)]
    return labels + ["E6t", "E7t", "E8t"]


def _kernel_generator(c: CartanMatrix) -> tuple[int, ...]:
    basis = linalg.nullspace(linalg.from_rows(c.entries))
    if len(basis) != 1:
        raise NotAffineError(f"{c.label}: corank {len(basis)}, expected 1")
    v = [linalg.to_fraction(x) for x in basis[0]]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if ints[0] < 0:
        ints = [-x for x in ints]
    if any(x <= 0 for x in ints):
        raise NotAffineError(f"{c.label}: kernel is not strictly positive")
    return tuple(ints)


def delta(c: CartanMatrix) -> Root:
    return Root(c.delta, "imaginary")


def reflect(c: CartanMatrix, i: int, v: Iterable[int]) -> tuple[int, ...]:
    """Simple reflection s_i(v) = v - (Cv)_i e_i."""
    v = tuple(v)
    if not 0 <= i < c.size:
        raise IndexError(f"node {i} out of range for {c.label}")
    if len(v) != c.size:
        raise ValueError("dimension mismatch")
    ci = sum(a * x for a, x in zip(c.entries[i], v))
    return v[:i] + (v[i] - ci,) + v[i + 1:]


def classify_vector(c: CartanMatrix, v: Iterable[int]) -> str | None:
    """'real', 'imaginary' or None according to the norm test."""
    v = tuple(v)
    if not any(v):
        return None
    if all(x >= 0 for x in v) or all(x <= 0 for x in v):
        if c.norm(v) == 2:
            return "real"
        d = c.delta
        k = v[0] // d[0] if d[0] else 0
        if k and all(x == k * y for x, y in zip(v, d)):
            return "imaginary"
    return None


def enumerate_roots(c: CartanMatrix, height_bound: int) -> list[Root]:
    """Positive roots of height at most ``height_bound``, lexicographically sorted.

    Real roots come from a breadth-first reflection orbit of the simple roots
    that never leaves the positive cone or the height ball.  Every positive
    non-simple real root has a reflection lowering its height, so the orbit
    restricted to the ball is complete.
    """
    if height_bound < 1:
        raise ValueError("height_bound must be >= 1")
    m = c.size
    simples = [tuple(int(i == j) for j in range(m)) for i in range(m)]
    seen = set(simples)
    frontier = list(simples)
    while frontier:
        nxt = []
        for v in frontier:
            for i in range(m):
                w = reflect(c, i, v)
                if w in seen or w[i] < 0:
                    continue
                if sum(w) > height_bound:
                    continue
                seen.add(w)
                nxt.append(w)
        frontier = nxt
    roots = [Root(v, "real") for v in seen]
    d = c.delta
    k = 1
    while k * sum(d) <= height_bound:
        roots.append(Root(tuple(k * x for x in d), "imaginary"))
        k += 1
    return sorted(roots)
