"""Exact rational linear algebra on top of ``flint.fmpq_mat``."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import flint

Mat = flint.fmpq_mat


def zeros(rows: int, cols: int) -> Mat:
    return flint.fmpq_mat(rows, cols)


def identity(n: int) -> Mat:
    m = flint.fmpq_mat(n, n)
    for i in range(n):
        m[i, i] = 1
    return m


def from_rows(rows: Sequence[Sequence], cols: int | None = None) -> Mat:
    rows = [list(r) for r in rows]
    if cols is None:
        cols = len(rows[0]) if rows else 0
    entries = []
    for r in rows:
        if len(r) != cols:
            raise ValueError("ragged matrix")
        entries.extend(to_fmpq(x) for x in r)
    return flint.fmpq_mat(len(rows), cols, entries)


def to_fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return flint.fmpq(f.numerator, f.denominator)
    if isinstance(x, int):
        return flint.fmpq(x)
    raise TypeError(f"not an exact rational: {x!r}")


def to_fraction(x: flint.fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def shape(m: Mat) -> tuple[int, int]:
    return m.nrows(), m.ncols()


def is_zero(m: Mat) -> bool:
    return all(x == 0 for x in m.entries())


def rank(m: Mat) -> int:
    if m.nrows() == 0 or m.ncols() == 0:
        return 0
    return m.rank()


def nullspace(m: Mat) -> list[list[flint.fmpq]]:
    """Basis of {v : m v = 0}, one list per basis vector."""
    rows, cols = m.nrows(), m.ncols()
    if cols == 0:
        return []
    if rows == 0:
        return [[flint.fmpq(int(i == j)) for i in range(cols)] for j in range(cols)]
    red, r = m.rref()
    pivots = []
    for i in range(r):
        for j in range(cols):
            if red[i, j] != 0:
                pivots.append(j)
                break
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for f in free:
        v = [flint.fmpq(0)] * cols
        v[f] = flint.fmpq(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i, f]
        basis.append(v)
    return basis


def column_space(m: Mat) -> Mat:
    """Matrix whose columns form a basis of the column space of ``m``."""
    rows, cols = m.nrows(), m.ncols()
    if rows == 0 or cols == 0:
        return zeros(rows, 0)
    red, r = m.transpose().rref()
    return from_rows([[red[i, j] for j in range(rows)] for i in range(r)], rows).transpose() \
        if r else zeros(rows, 0)


def hstack(mats: Iterable[Mat], rows: int) -> Mat:
    mats = list(mats)
    cols = sum(x.ncols() for x in mats)
    out = zeros(rows, cols)
    off = 0
    for x in mats:
        for i in range(rows):
            for j in range(x.ncols()):
                out[i, off + j] = x[i, j]
        off += x.ncols()
    return out


def vec_to_mat(v: Sequence, rows: int, cols: int) -> Mat:
    """Unflatten a row-major vector."""
    return flint.fmpq_mat(rows, cols, [to_fmpq(x) for x in v])


def complement_basis(sub: Mat, n: int) -> Mat:
    """Columns extending the column space of ``sub`` to a basis of Q^n."""
    cur = sub
    extra = []
    for j in range(n):
        e = zeros(n, 1)
        e[j, 0] = 1
        trial = hstack([cur, e], n)
        if rank(trial) > rank(cur):
            cur = trial
            extra.append(e)
    return hstack(extra, n) if extra else zeros(n, 0)
