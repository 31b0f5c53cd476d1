"""Independent brute-force oracles used by the test suite."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from helix import quiver_calc as qc
from helix import linalg


def brute_roots(cartan_rows, delta, height_bound):
    """All nonzero v >= 0 with height <= bound and v^T C v = 2, or v in Z delta.

    Plain enumeration of every nonnegative vector in the height simplex.
    """
    n = len(cartan_rows)
    rows = [list(r) for r in cartan_rows]
    out = set()

    def rec(prefix, remaining):
        if len(prefix) == n:
            if not any(prefix):
                return
            q = sum(prefix[i] * rows[i][j] * prefix[j] for i in range(n) for j in range(n) if rows[i][j])
            if q == 2:
                out.add(tuple(prefix))
            elif q == 0:
                k = prefix[0] // delta[0]
                if k and all(prefix[i] == k * delta[i] for i in range(n)):
                    out.add(tuple(prefix))
            return
        for x in range(remaining + 1):
            prefix.append(x)
            rec(prefix, remaining - x)
            prefix.pop()

    rec([], height_bound)
    return out


def _matmul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(len(b[0]) if b else 0)]
            for i in range(len(a))]


def _shape_ok_maps(preset, dims, values):
    maps, pos = {}, 0
    for a in preset.arrows:
        r, c = dims[a.dst], dims[a.src]
        maps[a.label] = [list(values[pos + i * c: pos + (i + 1) * c]) for i in range(r)]
        pos += r * c
    return maps


def _relations_vanish(preset, dims, maps):
    for rel in preset.relations:
        total = None
        for coef, path in rel.terms:
            m = [[int(i == j) for j in range(dims[rel.src])] for i in range(dims[rel.src])]
            for g in path:
                m = _matmul(maps[g], m) if m and maps[g] else [[0] * dims[rel.src] for _ in range(dims[preset.arrow(g).dst])]
            m = [[coef * x for x in row] for row in m]
            total = m if total is None else [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(total, m)]
        if total and any(any(row) for row in total):
            return False
    return True


def exhaustive_modules(preset, dims, entries=(0, 1)):
    """Every module with arrow-matrix entries drawn from ``entries``."""
    n = sum(dims[a.dst] * dims[a.src] for a in preset.arrows)
    for values in itertools.product(entries, repeat=n):
        maps = _shape_ok_maps(preset, dims, values)
        if not _relations_vanish(preset, dims, maps):
            continue
        rep = qc.Representation(preset, tuple(dims), {
            k: linalg.from_rows(v, dims_src(preset, k, dims)) for k, v in maps.items() if v})
        if rep.is_nilpotent():
            yield rep


def dims_src(preset, label, dims):
    return dims[preset.arrow(label).src]


def brick_census(preset, max_dims, exhaustive_total=4, random_trials=80, seed=0):
    """Dimension classes (d0, d1) <= max_dims at which some brick was found.

    Classes of total dimension <= exhaustive_total are searched exhaustively
    over 0/1 matrices; all classes additionally get ``random_trials`` random
    iterated extensions.
    """
    rng = random.Random(seed)
    found: dict[tuple[int, int], int] = {}
    for d0 in range(max_dims[0] + 1):
        for d1 in range(max_dims[1] + 1):
            if d0 + d1 == 0:
                continue
            hits = 0
            if d0 + d1 <= exhaustive_total:
                hits += sum(1 for m in exhaustive_modules(preset, (d0, d1)) if qc.is_brick(m))
            for _ in range(random_trials):
                if qc.is_brick(qc.random_module(preset, (d0, d1), rng)):
                    hits += 1
            found[(d0, d1)] = hits
    return found


def kernel_dim_numeric(mat_rows, cols):
    """Nullity via sympy-free exact elimination on Fractions."""
    rows = [[Fraction(x) for x in r] for r in mat_rows]
    rank = 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return cols - rank


def phase_outliers(z0: complex, z1: complex, r, db, k_range: int, eta: float) -> list[int]:
    """k in [-k_range, k_range] with the phase of Z(r + k db) farther than eta
    (in units of pi) from both phases of Z(+-db); plain float evaluation."""
    import cmath

    def ph(w):
        return cmath.phase(w) / cmath.pi

    zd = db[0] * z0 + db[1] * z1
    acc = (ph(zd), ph(-zd))
    out = []
    for k in range(-k_range, k_range + 1):
        w = (r[0] + k * db[0]) * z0 + (r[1] + k * db[1]) * z1
        p = ph(w)
        d = min(min(abs(p - a) % 2.0, 2.0 - abs(p - a) % 2.0) for a in acc)
        if d > eta:
            out.append(k)
    return out
