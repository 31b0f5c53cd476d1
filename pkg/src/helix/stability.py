"""Central charges on the rank-2 lattice, phases of restricted roots and the
phase-gap search."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

from .restriction import (
    NodeSelection,
    Pair,
    _class_key,
    primitive_direction,
    restricted_roots,
    root_classes_mod_delta,
    selection,
)

PHASE_TOL = 1e-9
ACCUMULATION_ETA = 1e-6


class DegenerateChargeError(ValueError):
    def __init__(self, killed: Pair):
        super().__init__(f"central charge vanishes on the restricted root {killed}")
        self.killed = killed


@dataclass(frozen=True)
class CentralCharge:
    """Z(e_0) = z0, Z(e_1) = z1.  Exact when built from rationals."""

    z0: tuple
    z1: tuple
    exact: bool = True

    @classmethod
    def from_complex(cls, z0: complex, z1: complex) -> "CentralCharge":
        return cls((z0.real, z0.imag), (z1.real, z1.imag), exact=False)

    @classmethod
    def from_rationals(cls, z0, z1) -> "CentralCharge":
        f = lambda p: (Fraction(p[0]), Fraction(p[1]))  # noqa: E731
        return cls(f(z0), f(z1), exact=True)

    def __call__(self, v: Pair) -> complex:
        a, b = v
        return complex(a * self.z0[0] + b * self.z1[0], a * self.z0[1] + b * self.z1[1])

    def exact_value(self, v: Pair) -> tuple:
        a, b = v
        return (a * self.z0[0] + b * self.z1[0], a * self.z0[1] + b * self.z1[1])

    def scaled(self, w: complex) -> "CentralCharge":
        z0 = complex(*self.z0) * w
        z1 = complex(*self.z1) * w
        return CentralCharge.from_complex(z0, z1)

    def determinant(self):
        """Im(conj(z0) z1); zero iff z0 and z1 are R-linearly dependent."""
        return self.z0[0] * self.z1[1] - self.z0[1] * self.z1[0]


_NUM = r"[+-]?\d+(?:/\d+)?"


def _parse_gaussian(text: str) -> tuple[Fraction, Fraction]:
    s = text.replace(" ", "").replace("*", "")
    if not s:
        raise ValueError("empty complex number")
    m = re.fullmatch(rf"({_NUM})?(?:([+-])(\d+(?:/\d+)?)?i)?", s)
    if m and (m.group(1) or m.group(2)):
        re_part = Fraction(m.group(1)) if m.group(1) else Fraction(0)
        im_part = Fraction(0)
        if m.group(2):
            im_part = Fraction(m.group(3) or 1) * (-1 if m.group(2) == "-" else 1)
        return re_part, im_part
    m = re.fullmatch(rf"([+-]?)(\d+(?:/\d+)?)?i", s)
    if m:
        return Fraction(0), Fraction(m.group(2) or 1) * (-1 if m.group(1) == "-" else 1)
    raise ValueError(f"cannot parse complex number {text!r}")


def parse_charge(text: str) -> CentralCharge:
    """Parse ``"a+bi,c+di"`` with rational a, b, c, d."""
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected two comma-separated values, got {text!r}")
    return CentralCharge(_parse_gaussian(parts[0]), _parse_gaussian(parts[1]), exact=True)


def _killed_direction(z: CentralCharge) -> Pair | None:
    """Primitive lattice vector in ker Z, if Z is R-dependent with rational ratio."""
    x0, y0 = z.z0
    x1, y1 = z.z1
    # a z0 + b z1 = 0  =>  (a, b) proportional to (x1, -x0) or (y1, -y0)
    cand = (x1, -x0) if (x0 or x1) else (y1, -y0)
    if z.exact:
        den = math.lcm(Fraction(cand[0]).denominator, Fraction(cand[1]).denominator)
        v = (int(cand[0] * den), int(cand[1] * den))
        return primitive_direction(v) if any(v) else None
    r = abs(complex(*z.z1)) / max(abs(complex(*z.z0)), 1e-300)
    f = Fraction(r).limit_denominator(1000)
    if abs(float(f) - r) > 1e-9 * max(1.0, r):
        return None
    w = complex(*z.z1) / complex(*z.z0)
    sign = 1 if w.real > 0 else -1
    return primitive_direction((-sign * f.numerator, f.denominator))


def classify_charge(z: CentralCharge, sel: NodeSelection | None = None, height_bound: int = 60) -> str:
    """'degenerate', 'discrete' or 'dense_line'.

    Degenerate means Z kills a basis class or a restricted root of ``sel``
    (default: the full A1t lattice).  Lattice vectors outside the root set may
    be killed by a dense_line charge.
    """
    if sel is None:
        sel = selection("A1t", 1)
    if degenerate_witness(z, sel, height_bound) is not None:
        return "degenerate"
    det = z.determinant()
    if z.exact:
        dependent = det == 0
    else:
        dependent = abs(det) <= 1e-12 * abs(complex(*z.z0)) * abs(complex(*z.z1))
    return "dense_line" if dependent else "discrete"


def degenerate_witness(z: CentralCharge, sel: NodeSelection, height_bound: int = 60) -> Pair | None:
    zero = (lambda v: z.exact_value(v) == (0, 0)) if z.exact else (lambda v: abs(z(v)) < 1e-12)
    for e in ((1, 0), (0, 1)):
        if zero(e):
            return e
    det = z.determinant()
    dependent = det == 0 if z.exact else abs(det) <= 1e-12 * abs(z((1, 0))) * abs(z((0, 1)))
    if not dependent:
        return None
    k = _killed_direction(z)
    if k is None:
        return None
    hits = [u for u in restricted_roots(sel, height_bound).roots if primitive_direction(u) == k]
    return min(hits, key=lambda u: (abs(u[0]) + abs(u[1]), min(u) < 0, u)) if hits else None


def phase(w: complex) -> float:
    """Phase in (0, 2] with w = |w| exp(i pi phi)."""
    if w == 0:
        raise ValueError("phase of zero")
    t = math.atan2(w.imag, w.real) / math.pi
    if t <= 0:
        t += 2.0
    return t


def same_phase(z: CentralCharge, u: Pair, v: Pair) -> bool:
    """Exact collinearity-and-orientation test for Gaussian-rational charges."""
    if not z.exact:
        return abs(phase(z(u)) - phase(z(v))) < PHASE_TOL
    a, b = z.exact_value(u), z.exact_value(v)
    return a[0] * b[1] - a[1] * b[0] == 0 and a[0] * b[0] + a[1] * b[1] > 0


@dataclass
class PhaseSet:
    entries: list[tuple[Pair, float]]
    accumulation: tuple[float, float]
    bound: int

    @property
    def phases(self) -> list[float]:
        return [p for _, p in self.entries]


def _require_nondegenerate(z: CentralCharge, sel: NodeSelection, bound: int) -> str:
    tag = classify_charge(z, sel, bound)
    if tag == "degenerate":
        raise DegenerateChargeError(degenerate_witness(z, sel, bound))
    return tag


def phases(z: CentralCharge, sel: NodeSelection, height_bound: int) -> PhaseSet:
    """Phases of the positive restricted roots within the bound, sorted."""
    _require_nondegenerate(z, sel, height_bound)
    rr = restricted_roots(sel, height_bound)
    pos = [u for u in rr.roots if u[0] >= 0 and u[1] >= 0]
    entries = sorted(((u, phase(z(u))) for u in pos), key=lambda e: (e[1], e[0]))
    db = sel.delta_bar
    acc = (phase(z(db)), phase(z((-db[0], -db[1]))))
    return PhaseSet(entries, acc, height_bound)


def _circ_dist(a: float, b: float) -> float:
    d = abs(a - b) % 2.0
    return min(d, 2.0 - d)


def all_phases(z: CentralCharge, sel: NodeSelection, height_bound: int) -> list[float]:
    """Sorted distinct phases of all (positive and negative) restricted roots."""
    vals = sorted(phase(z(u)) for u in restricted_roots(sel, height_bound).roots)
    out: list[float] = []
    for p in vals:
        if not out or p - out[-1] > PHASE_TOL:
            out.append(p)
    if len(out) > 1 and out[0] + 2.0 - out[-1] <= PHASE_TOL:
        out.pop()
    return out


@dataclass
class GapReport:
    kind: str  # "gap" | "integer_spaced"
    phi: float | None
    epsilon: float | None
    bound: int
    stable: bool

    def as_dict(self) -> dict:
        return {"kind": self.kind, "phi": self.phi, "epsilon": self.epsilon,
                "bound": self.bound, "stable": self.stable}


def _gap_candidates(ph: list[float], acc: tuple[float, float], eta: float):
    n = len(ph)
    for j in range(n):
        a = ph[j]
        b = ph[(j + 1) % n] + (2.0 if j == n - 1 else 0.0)
        if b - a <= PHASE_TOL:
            continue
        touches = False
        for c in acc:
            for cc in (c, c + 2.0, c - 2.0):
                if a - eta <= cc <= b + eta:
                    touches = True
        if not touches:
            yield a, b - a


def root_free(z: CentralCharge, sel: NodeSelection, bound: int, phi: float, eps: float) -> bool:
    for p in all_phases(z, sel, bound):
        for q in (p, p + 2.0):
            if phi + PHASE_TOL < q < phi + eps - PHASE_TOL:
                return False
    return True


def find_phase_gap(z: CentralCharge, sel: NodeSelection, height_bound: int,
                   eta: float = ACCUMULATION_ETA) -> GapReport:
    """Largest root-free arc (phi, phi + eps) not abutting an accumulation point.

    The arc is re-tested at twice the bound; ``stable`` records the outcome.
    Dense-line charges have every phase an integer away from a fixed one.
    """
    tag = _require_nondegenerate(z, sel, height_bound)
    if tag == "dense_line":
        phi = phase(z(sel.delta_bar)) % 1.0
        return GapReport("integer_spaced", phi, None, height_bound, True)
    db = sel.delta_bar
    acc = (phase(z(db)), phase(z((-db[0], -db[1]))))
    ph = all_phases(z, sel, height_bound)
    cands = sorted(_gap_candidates(ph, acc, eta), key=lambda c: (-c[1], c[0]))
    if not cands:
        return GapReport("gap", None, None, height_bound, False)
    phi, eps = cands[0]
    stable = root_free(z, sel, 2 * height_bound, phi, eps)
    return GapReport("gap", phi % 2.0 if phi > 2.0 else phi, eps, height_bound, stable)


@dataclass
class TailCertificate:
    """Per delta-bar class r, the integer interval of translates r + k*db whose
    phase lies farther than eta from both accumulation phases."""

    classes: list[Pair]
    outliers: dict[Pair, tuple[int, int]]
    classes_stable: bool
    eta: float

    @property
    def outlier_count(self) -> int:
        return sum(max(0, hi - lo + 1) for lo, hi in self.outliers.values())


def tail_certificate(z: CentralCharge, sel: NodeSelection, height_bound: int,
                     eta: float = 1e-3) -> TailCertificate:
    """Certify that only finitely many restricted real roots have phases away from
    the accumulation points.

    Along a class r + k*db the phase distance to the nearer of +-db is
    |arg(k + t)| / pi or (pi - |arg(k + t)|) / pi with t = Z(r)/Z(db); it exceeds
    eta exactly on the open interval |k + Re t| < |Im t| / tan(pi*eta).
    """
    _require_nondegenerate(z, sel, height_bound)
    rep = root_classes_mod_delta(sel, height_bound)
    db = sel.delta_bar
    zd = z(db)
    tan_eta = math.tan(math.pi * eta)
    outliers: dict[Pair, tuple[int, int]] = {}
    for r in rep.representatives:
        t = z(r) / zd
        reach = abs(t.imag) / tan_eta
        lo = math.floor(-reach - t.real) + 1
        hi = math.ceil(reach - t.real) - 1
        # guard the float endpoints against the direct test
        while lo <= hi and _near_acc(z, r, lo, db, eta):
            lo += 1
        while lo - 1 <= hi and not _near_acc(z, r, lo - 1, db, eta):
            lo -= 1
        while hi >= lo and _near_acc(z, r, hi, db, eta):
            hi -= 1
        while not _near_acc(z, r, hi + 1, db, eta):
            hi += 1
        outliers[r] = (lo, hi)
    return TailCertificate(rep.representatives, outliers, rep.stable, eta)


def _near_acc(z: CentralCharge, r: Pair, k: int, db: Pair, eta: float) -> bool:
    u = (r[0] + k * db[0], r[1] + k * db[1])
    p = phase(z(u))
    acc = (phase(z(db)), phase(z((-db[0], -db[1]))))
    return min(_circ_dist(p, c) for c in acc) <= eta


def scan_outliers(z: CentralCharge, sel: NodeSelection, r: Pair, k_range: int, eta: float) -> list[int]:
    """Brute-force oracle: outlier translates by direct evaluation on [-k_range, k_range]."""
    db = sel.delta_bar
    return [k for k in range(-k_range, k_range + 1) if not _near_acc(z, r, k, db, eta)]
