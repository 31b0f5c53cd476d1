"""Projection of an affine root system onto the rank-2 lattice spanned by the
extended node and one further node."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable

from .cartan_roots import CartanMatrix, build_cartan, enumerate_roots

Pair = tuple[int, int]


@dataclass(frozen=True)
class NodeSelection:
    parent: CartanMatrix
    node: int

    def __post_init__(self):
        if not 0 < self.node < self.parent.size:
            raise IndexError(f"node {self.node} is not a non-extended node of {self.parent.label}")

    @property
    def nodes(self) -> tuple[int, int]:
        return (0, self.node)

    @property
    def delta_bar(self) -> Pair:
        d = self.parent.delta
        return (d[0], d[self.node])

    @property
    def length(self) -> int:
        return self.parent.delta[self.node]


def selection(label: str, node: int | None = None) -> NodeSelection:
    """Selection by type label; ``node=None`` picks the node of maximal mark."""
    c = build_cartan(label)
    if node is None:
        d = c.delta
        node = max(range(1, c.size), key=lambda i: (d[i], -i))
    return NodeSelection(c, node)


def restrict(v: Iterable[int], sel: NodeSelection) -> Pair:
    v = tuple(v)
    if len(v) != sel.parent.size:
        raise ValueError(f"expected a vector of length {sel.parent.size}, got {len(v)}")
    return (v[0], v[sel.node])


def node_length(c: CartanMatrix, i: int) -> int:
    if not 0 <= i < c.size:
        raise IndexError(f"node {i} out of range for {c.label}")
    return c.delta[i]


@dataclass
class RestrictedRoots:
    roots: list[Pair]
    multiplicity: Counter = field(default_factory=Counter)
    real_images: set = field(default_factory=set)

    def __contains__(self, u) -> bool:
        return tuple(u) in self._set

    def __iter__(self):
        return iter(self.roots)

    def __len__(self):
        return len(self.roots)

    @property
    def _set(self):
        s = self.__dict__.get("_cache")
        if s is None:
            s = self.__dict__["_cache"] = set(self.roots)
        return s


def restricted_roots(sel: NodeSelection, height_bound: int) -> RestrictedRoots:
    """Images of roots of height <= bound, closed under sign; zero excluded.

    ``multiplicity`` counts parent positive roots per positive image.
    """
    mult: Counter = Counter()
    real: set = set()
    for r in enumerate_roots(sel.parent, height_bound):
        u = restrict(r.coords, sel)
        if u == (0, 0):
            continue
        mult[u] += 1
        if r.kind == "real":
            real.add(u)
            real.add((-u[0], -u[1]))
    images = set(mult)
    images |= {(-a, -b) for a, b in images}
    return RestrictedRoots(sorted(images), mult, real)


def _class_key(u: Pair, db: Pair) -> int:
    # constant along u + Z db; db[0] == 1 so the key separates classes exactly
    return u[0] * db[1] - u[1] * db[0]


def _rep_key(u: Pair):
    return (min(u) < 0, abs(u[0]) + abs(u[1]), u)


@dataclass
class ClassReport:
    representatives: list[Pair]
    stable: bool
    bound: int

    def __len__(self):
        return len(self.representatives)


def _classes_at(sel: NodeSelection, bound: int) -> dict[int, Pair]:
    db = sel.delta_bar
    out: dict[int, Pair] = {}
    for u in restricted_roots(sel, bound).real_images:
        if u[0] * db[1] == u[1] * db[0]:
            continue  # imaginary direction, tracked separately
        k = _class_key(u, db)
        if k not in out or _rep_key(u) < _rep_key(out[k]):
            out[k] = u
    return out


def root_classes_mod_delta(sel: NodeSelection, height_bound: int) -> ClassReport:
    """Real restricted roots modulo translation by delta-bar.

    Real roots whose image is parallel to delta-bar are excluded with the
    imaginary class.  ``stable`` certifies that the class set at the bound
    equals the class set at twice the bound.
    """
    a = _classes_at(sel, height_bound)
    b = _classes_at(sel, 2 * height_bound)
    stable = set(a) == set(b)
    reps = sorted(b.values() if stable else a.values(), key=_rep_key)
    return ClassReport(reps, stable, height_bound)


def primitive_direction(u: Pair) -> Pair:
    g = gcd(abs(u[0]), abs(u[1]))
    a, b = u[0] // g, u[1] // g
    if a < 0 or (a == 0 and b < 0):
        a, b = -a, -b
    return (a, b)


@dataclass
class Arrangement:
    lines: list[Pair]
    accumulation: Pair

    def angle(self, u: Pair) -> float:
        return math.atan2(u[1], u[0])

    def lines_in_sector(self, lo: float, hi: float) -> list[Pair]:
        """Lines meeting the closed angular sector [lo, hi] (radians, in (-pi, pi])."""
        out = []
        for d in self.lines:
            for t in (self.angle(d), self.angle((-d[0], -d[1]))):
                if lo <= t <= hi:
                    out.append(d)
                    break
        return out


def arrangement(sel: NodeSelection, height_bound: int) -> Arrangement:
    rr = restricted_roots(sel, height_bound)
    lines = sorted({primitive_direction(u) for u in rr.roots})
    return Arrangement(lines, primitive_direction(sel.delta_bar))


def nearest_lines(arr: Arrangement) -> tuple[float, float]:
    """Angular distance from the accumulation line to the closest line on each side."""
    t0 = arr.angle(arr.accumulation)
    below = [t0 - arr.angle(d) for d in arr.lines if arr.angle(d) < t0]
    above = [arr.angle(d) - t0 for d in arr.lines if arr.angle(d) > t0]
    return (min(below) if below else math.inf, min(above) if above else math.inf)
