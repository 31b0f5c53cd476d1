"""Finite-length modules over two-vertex quiver algebras with exact Hom / Ext.

Paths are tuples of arrow labels in traversal order (first arrow first); a
module evaluates ``(g1, ..., gk)`` as ``M(gk) ... M(g1)``.  Ext groups come
from the complex

    C0 = (+)_i Hom(M_i, N_i)  ->  C1 = (+)_arrows Hom(M_s, N_t)
       ->  C2 = (+)_relations Hom(M_src, N_dst)  [->  C3 = (+)_i Hom(M_i, N_i)]

whose last term is present for potential-defined (CY3) presets.  The
conifold convention is W = a1 b1 a2 b2 - a1 b2 a2 b1 with a_k: 0 -> 1 and
b_k: 1 -> 0; relations are the cyclic derivatives of W.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Sequence

import flint

from . import linalg
from .linalg import Mat


class QuiverError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    label: str
    src: int
    dst: int


@dataclass(frozen=True)
class Relation:
    label: str
    src: int
    dst: int
    terms: tuple[tuple[int, tuple[str, ...]], ...]


@dataclass(frozen=True)
class AlgebraPreset:
    name: str
    arrows: tuple[Arrow, ...]
    relations: tuple[Relation, ...]
    cy_dim: int
    potential: tuple[tuple[int, tuple[str, ...]], ...] | None = None
    vertices: int = 2

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise QuiverError(f"no arrow {label!r} in {self.name}")

    def arrow_count(self, src: int, dst: int) -> int:
        return sum(1 for a in self.arrows if a.src == src and a.dst == dst)

    def relation_for(self, arrow_label: str) -> Relation:
        for r in self.relations:
            if r.label == f"d_{arrow_label}":
                return r
        raise QuiverError(f"no relation dual to {arrow_label}")


def cyclic_derivatives(arrows: Sequence[Arrow], potential) -> tuple[Relation, ...]:
    rels = []
    for a in arrows:
        terms: dict[tuple[str, ...], int] = {}
        for coef, cycle in potential:
            for j, g in enumerate(cycle):
                if g == a.label:
                    p = tuple(cycle[j + 1:]) + tuple(cycle[:j])
                    terms[p] = terms.get(p, 0) + coef
        rels.append(Relation(f"d_{a.label}", a.dst, a.src,
                             tuple((c, p) for p, c in terms.items() if c)))
    return tuple(rels)


def preset_from_dict(data: dict) -> AlgebraPreset:
    arrows = tuple(Arrow(a["label"], a["src"], a["dst"]) for a in data["arrows"])
    potential = None
    if "potential" in data:
        potential = tuple((int(c), tuple(p)) for c, p in data["potential"])
        relations = cyclic_derivatives(arrows, potential)
    else:
        relations = tuple(
            Relation(r["label"], r["src"], r["dst"], tuple((int(c), tuple(p)) for c, p in r["terms"]))
            for r in data["relations"])
    preset = AlgebraPreset(data["name"], arrows, relations, int(data["cy_dim"]), potential,
                           int(data.get("vertices", 2)))
    _check_admissible(preset)
    return preset


def _check_admissible(p: AlgebraPreset) -> None:
    for r in p.relations:
        for _, path in r.terms:
            if len(path) < 2:
                raise QuiverError(f"relation {r.label} is not admissible")
            cur = r.src
            for g in path:
                a = p.arrow(g)
                if a.src != cur:
                    raise QuiverError(f"relation {r.label}: path {path} does not compose")
                cur = a.dst
            if cur != r.dst:
                raise QuiverError(f"relation {r.label}: path {path} ends at {cur}")


@lru_cache(maxsize=None)
def load_preset(name: str) -> AlgebraPreset:
    """Bundled presets: ``preproj_A1`` and ``conifold_nccr``."""
    try:
        text = resources.files("helix.data").joinpath(f"{name}.json").read_text()
    except FileNotFoundError:
        raise QuiverError(f"unknown preset {name!r}") from None
    return preset_from_dict(json.loads(text))


# -- representations --------------------------------------------------------


@dataclass(eq=False)
class Representation:
    preset: AlgebraPreset
    dims: tuple[int, ...]
    maps: dict[str, Mat]

    def __post_init__(self):
        self.dims = tuple(self.dims)
        for a in self.preset.arrows:
            m = self.maps.get(a.label)
            if m is None:
                self.maps[a.label] = linalg.zeros(self.dims[a.dst], self.dims[a.src])
            elif linalg.shape(m) != (self.dims[a.dst], self.dims[a.src]):
                raise QuiverError(f"arrow {a.label}: expected shape "
                                  f"{(self.dims[a.dst], self.dims[a.src])}, got {linalg.shape(m)}")

    @property
    def dimension_class(self) -> tuple[int, ...]:
        return self.dims

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def path(self, path: Sequence[str], start: int) -> Mat:
        out = linalg.identity(self.dims[start])
        for g in path:
            out = self.maps[g] * out
        return out

    def relation_value(self, r: Relation) -> Mat:
        out = linalg.zeros(self.dims[r.dst], self.dims[r.src])
        for c, p in r.terms:
            out = out + self.path(p, r.src) * c
        return out

    def satisfies_relations(self) -> bool:
        return all(linalg.is_zero(self.relation_value(r)) for r in self.preset.relations)

    def is_nilpotent(self) -> bool:
        """Radical-layer test: rad^L M = 0 for L = total dimension."""
        layer = [linalg.identity(d) for d in self.dims]
        for _ in range(self.total_dim + 1):
            if all(x.ncols() == 0 for x in layer):
                return True
            nxt = [[] for _ in self.dims]
            for a in self.preset.arrows:
                if layer[a.src].ncols():
                    nxt[a.dst].append(self.maps[a.label] * layer[a.src])
            layer = [linalg.column_space(linalg.hstack(nxt[i], self.dims[i])) if nxt[i]
                     else linalg.zeros(self.dims[i], 0) for i in range(len(self.dims))]
        return all(x.ncols() == 0 for x in layer)

    def validate(self) -> "Representation":
        if not self.satisfies_relations():
            raise QuiverError("relations do not vanish on this representation")
        if not self.is_nilpotent():
            raise QuiverError("representation is not nilpotent (not of finite length)")
        return self

    def to_json(self) -> dict:
        return {
            "dims": list(self.dims),
            "arrows": {a.label: [[str(linalg.to_fraction(self.maps[a.label][i, j]))
                                  for j in range(self.dims[a.src])]
                                 for i in range(self.dims[a.dst])]
                       for a in self.preset.arrows},
        }

    def __repr__(self):
        return f"Representation({self.preset.name}, dims={self.dims})"


def representation_from_json(preset: AlgebraPreset, data: dict) -> Representation:
    dims = tuple(int(d) for d in data["dims"])
    maps = {}
    for a in preset.arrows:
        rows = data.get("arrows", {}).get(a.label)
        if rows is None:
            continue
        rows = [[Fraction(x) for x in r] for r in rows]
        maps[a.label] = linalg.from_rows(rows, dims[a.src]) if rows else linalg.zeros(dims[a.dst], dims[a.src])
    return Representation(preset, dims, maps).validate()


def simple(preset: AlgebraPreset, i: int) -> Representation:
    if not 0 <= i < preset.vertices:
        raise QuiverError(f"no vertex {i}")
    return Representation(preset, tuple(int(j == i) for j in range(preset.vertices)), {})


def zero_module(preset: AlgebraPreset) -> Representation:
    return Representation(preset, (0,) * preset.vertices, {})


def direct_sum(*mods: Representation) -> Representation:
    preset = mods[0].preset
    dims = tuple(sum(m.dims[i] for m in mods) for i in range(preset.vertices))
    maps = {}
    for a in preset.arrows:
        big = linalg.zeros(dims[a.dst], dims[a.src])
        r0 = c0 = 0
        for m in mods:
            blk = m.maps[a.label]
            for i in range(blk.nrows()):
                for j in range(blk.ncols()):
                    big[r0 + i, c0 + j] = blk[i, j]
            r0 += m.dims[a.dst]
            c0 += m.dims[a.src]
        maps[a.label] = big
    return Representation(preset, dims, maps)


def change_basis(m: Representation, bases: Sequence[Mat]) -> Representation:
    """Isomorphic copy with M'(a) = P_t^{-1} M(a) P_s."""
    maps = {a.label: bases[a.dst].inv() * m.maps[a.label] * bases[a.src] if m.dims[a.dst] and m.dims[a.src]
            else m.maps[a.label] for a in m.preset.arrows}
    return Representation(m.preset, m.dims, maps)


# -- the Ext complex --------------------------------------------------------


def _kron(a: Mat, b: Mat) -> Mat:
    """Matrix of X -> a X b on row-major vectorisations."""
    ra, ca = a.nrows(), a.ncols()
    rb, cb = b.nrows(), b.ncols()
    # X is ca x rb, result ra x cb
    out = linalg.zeros(ra * cb, ca * rb)
    for i in range(ra):
        for k in range(ca):
            aik = a[i, k]
            if aik == 0:
                continue
            for l in range(rb):
                for j in range(cb):
                    blj = b[l, j]
                    if blj != 0:
                        out[i * cb + j, k * rb + l] += aik * blj
    return out


def _add_block(dst: Mat, blk: Mat, r0: int, c0: int, sign: int = 1) -> None:
    for i in range(blk.nrows()):
        for j in range(blk.ncols()):
            v = blk[i, j]
            if v != 0:
                dst[r0 + i, c0 + j] += v * sign


@dataclass
class ExtComplex:
    terms: list[list[tuple[object, int, int]]]  # per degree: (key, rows, cols) of Hom blocks
    diffs: list[Mat]
    offsets: list[dict]

    def dim(self, k: int) -> int:
        return sum(r * c for _, r, c in self.terms[k]) if k < len(self.terms) else 0

    def cohomology(self, k: int) -> int:
        if k < 0 or k >= len(self.terms):
            return 0
        rk_out = linalg.rank(self.diffs[k]) if k < len(self.diffs) else 0
        rk_in = linalg.rank(self.diffs[k - 1]) if k >= 1 else 0
        return self.dim(k) - rk_out - rk_in


def _layout(blocks):
    offs, pos = {}, 0
    for key, r, c in blocks:
        offs[key] = pos
        pos += r * c
    return offs, pos


def ext_complex(m: Representation, n: Representation) -> ExtComplex:
    p = m.preset
    if n.preset is not p and n.preset != p:
        raise QuiverError("modules over different presets")
    V = range(p.vertices)
    t0 = [(i, n.dims[i], m.dims[i]) for i in V]
    t1 = [(a.label, n.dims[a.dst], m.dims[a.src]) for a in p.arrows]
    t2 = [(r.label, n.dims[r.dst], m.dims[r.src]) for r in p.relations]
    terms = [t0, t1, t2]
    if p.potential is not None:
        terms.append([(i, n.dims[i], m.dims[i]) for i in V])
    layouts = [_layout(t) for t in terms]
    offs = [lo[0] for lo in layouts]
    sizes = [lo[1] for lo in layouts]

    d0 = linalg.zeros(sizes[1], sizes[0])
    for a in p.arrows:
        _add_block(d0, _kron(n.maps[a.label], linalg.identity(m.dims[a.src])),
                   offs[1][a.label], offs[0][a.src])
        _add_block(d0, _kron(linalg.identity(n.dims[a.dst]), m.maps[a.label]),
                   offs[1][a.label], offs[0][a.dst], -1)

    d1 = linalg.zeros(sizes[2], sizes[1])
    for r in p.relations:
        for coef, path in r.terms:
            arrows = [p.arrow(g) for g in path]
            for j, g in enumerate(arrows):
                left = n.path(path[j + 1:], g.dst)
                right = m.path(path[:j], r.src)
                _add_block(d1, _kron(left, right) * coef, offs[2][r.label], offs[1][g.label])

    diffs = [d0, d1]
    if p.potential is not None:
        d2 = linalg.zeros(sizes[3], sizes[2])
        for a in p.arrows:
            rel = p.relation_for(a.label)
            # chi_a : M_{t(a)} -> N_{s(a)}
            _add_block(d2, _kron(linalg.identity(n.dims[a.src]), m.maps[a.label]),
                       offs[3][a.src], offs[2][rel.label])
            _add_block(d2, _kron(n.maps[a.label], linalg.identity(m.dims[a.dst])),
                       offs[3][a.dst], offs[2][rel.label], -1)
        diffs.append(d2)
    return ExtComplex(terms, diffs, offs)


def hom_basis(m: Representation, n: Representation) -> list[list[Mat]]:
    """Basis of Hom(M, N); each element is a list of vertex maps N_i x M_i."""
    cx = ext_complex(m, n)
    out = []
    for v in linalg.nullspace(cx.diffs[0]):
        maps = []
        for i in range(m.preset.vertices):
            o = cx.offsets[0][i]
            maps.append(linalg.vec_to_mat(v[o:o + n.dims[i] * m.dims[i]], n.dims[i], m.dims[i]))
        out.append(maps)
    return out


def hom(m: Representation, n: Representation) -> int:
    cx = ext_complex(m, n)
    return cx.dim(0) - linalg.rank(cx.diffs[0])


def ext(m: Representation, n: Representation, k: int, route: str = "complex") -> int:
    """dim Ext^k(M, N).  ``route='duality'`` uses the Calabi-Yau identities
    (Ext^cy(M,N) = Hom(N,M); for cy = 3 also Ext^2(M,N) = Ext^1(N,M))."""
    p = m.preset
    if k == 0:
        return hom(m, n)
    if not 1 <= k <= p.cy_dim:
        raise QuiverError(f"ext degree {k} outside 0..{p.cy_dim}")
    if route == "complex":
        return ext_complex(m, n).cohomology(k)
    if route == "duality":
        if k == p.cy_dim:
            return hom(n, m)
        if p.cy_dim == 3 and k == 2:
            return ext(n, m, 1)
        raise QuiverError(f"no duality route for degree {k}")
    raise ValueError(f"unknown route {route!r}")


def euler_form(m: Representation, n: Representation) -> int:
    return sum((-1) ** k * ext(m, n, k) for k in range(m.preset.cy_dim + 1))


def euler_matrix(preset: AlgebraPreset) -> list[list[int]]:
    """Bilinear form on dimension classes, read off from the simples."""
    s = [simple(preset, i) for i in range(preset.vertices)]
    return [[euler_form(s[i], s[j]) for j in range(preset.vertices)] for i in range(preset.vertices)]


def is_brick(m: Representation) -> bool:
    if m.total_dim == 0:
        raise QuiverError("zero module is not a valid brick candidate")
    return hom(m, m) == 1


def is_semibrick(mods: Sequence[Representation]) -> bool:
    if not all(is_brick(x) for x in mods):
        return False
    return all(hom(x, y) == 0 for i, x in enumerate(mods) for j, y in enumerate(mods) if i != j)


# -- extensions and random modules -----------------------------------------


def cocycle_basis(m: Representation, n: Representation) -> list[list]:
    """Basis of ker(d1) in C1: arrow data psi_a : M_s -> N_t of extensions 0 -> N -> E -> M -> 0."""
    return linalg.nullspace(ext_complex(m, n).diffs[1])


def extension(m: Representation, n: Representation, cocycle: Sequence) -> Representation:
    """E with E_i = N_i (+) M_i and E(a) = [[N(a), psi_a], [0, M(a)]]."""
    p = m.preset
    cx = ext_complex(m, n)
    dims = tuple(n.dims[i] + m.dims[i] for i in range(p.vertices))
    maps = {}
    for a in p.arrows:
        big = linalg.zeros(dims[a.dst], dims[a.src])
        _add_block(big, n.maps[a.label], 0, 0)
        _add_block(big, m.maps[a.label], n.dims[a.dst], n.dims[a.src])
        o = cx.offsets[1][a.label]
        psi = linalg.vec_to_mat(cocycle[o:o + n.dims[a.dst] * m.dims[a.src]], n.dims[a.dst], m.dims[a.src])
        _add_block(big, psi, 0, n.dims[a.src])
        maps[a.label] = big
    e = Representation(p, dims, maps)
    if not e.satisfies_relations():
        raise QuiverError("cochain is not a cocycle")
    return e


def random_module(preset: AlgebraPreset, dims: Sequence[int], rng: random.Random,
                  coeffs: Sequence[int] = (-1, 0, 1, 1, 2)) -> Representation:
    """Random iterated extension of simples with prescribed dimension vector.

    Cocycles are random integer combinations of a basis of the linearised
    relation equations, so every output satisfies the relations and is filtered
    by simples (hence nilpotent).
    """
    order = [i for i in range(preset.vertices) for _ in range(dims[i])]
    rng.shuffle(order)
    if not order:
        return zero_module(preset)
    cur = simple(preset, order[0])
    for v in order[1:]:
        s = simple(preset, v)
        if rng.random() < 0.5:
            top, sub = s, cur
        else:
            top, sub = cur, s
        basis = cocycle_basis(top, sub)
        coc = [flint.fmpq(0)] * sum(r * c for _, r, c in ext_complex(top, sub).terms[1])
        for b in basis:
            c = rng.choice(coeffs)
            if c:
                coc = [x + c * y for x, y in zip(coc, b)]
        cur = extension(top, sub, coc)
    bases = [_random_invertible(d, rng) for d in cur.dims]
    return change_basis(cur, bases)


def _random_invertible(n: int, rng: random.Random) -> Mat:
    if n == 0:
        return linalg.zeros(0, 0)
    while True:
        m = linalg.from_rows([[rng.choice((-1, 0, 1, 1)) for _ in range(n)] for _ in range(n)])
        if m.det() != 0:
            return m


# -- submodules, quotients, torsion parts ----------------------------------


@dataclass(eq=False)
class Submodule:
    """Arrow-stable subspaces of ``ambient``; basis columns per vertex."""

    ambient: Representation
    bases: list[Mat]

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.ncols() for b in self.bases)

    def module(self) -> Representation:
        amb = self.ambient
        maps = {}
        for a in amb.preset.arrows:
            bs, bt = self.bases[a.src], self.bases[a.dst]
            if bs.ncols() == 0 or bt.ncols() == 0:
                continue
            img = amb.maps[a.label] * bs
            maps[a.label] = _solve_in_basis(bt, img)
        return Representation(amb.preset, self.dims, maps)

    def quotient(self) -> tuple[Representation, list[Mat]]:
        """M / U together with the projection matrices per vertex."""
        amb = self.ambient
        comps, invs = [], []
        for i, b in enumerate(self.bases):
            c = linalg.complement_basis(b, amb.dims[i])
            comps.append(c)
            full = linalg.hstack([b, c], amb.dims[i])
            invs.append(full.inv() if amb.dims[i] else linalg.zeros(0, 0))
        qd = tuple(c.ncols() for c in comps)
        proj = []
        for i, inv in enumerate(invs):
            k = self.bases[i].ncols()
            proj.append(linalg.from_rows([[inv[k + r, j] for j in range(amb.dims[i])] for r in range(qd[i])],
                                         amb.dims[i]) if qd[i] else linalg.zeros(0, amb.dims[i]))
        maps = {}
        for a in amb.preset.arrows:
            if qd[a.src] and qd[a.dst]:
                maps[a.label] = proj[a.dst] * amb.maps[a.label] * comps[a.src]
        return Representation(amb.preset, qd, maps), proj


def _solve_in_basis(basis: Mat, vecs: Mat) -> Mat:
    """X with basis * X = vecs (columns of vecs lie in the span of basis)."""
    n, k = basis.nrows(), basis.ncols()
    aug = linalg.hstack([basis, vecs], n)
    red, r = aug.rref()
    if r > k:
        raise QuiverError("subspace is not arrow-stable")
    x = linalg.zeros(k, vecs.ncols())
    pivots = []
    for i in range(r):
        for j in range(k + vecs.ncols()):
            if red[i, j] != 0:
                pivots.append(j)
                break
    for i, pc in enumerate(pivots):
        for j in range(vecs.ncols()):
            x[pc, j] = red[i, k + j]
    return x


def _span(cols: list[Mat], n: int) -> Mat:
    cols = [c for c in cols if c.ncols()]
    if not cols:
        return linalg.zeros(n, 0)
    return linalg.column_space(linalg.hstack(cols, n))


def trace(gens: Sequence[Representation], m: Representation) -> list[Mat]:
    """Sum of images of all homs G -> M, per vertex."""
    imgs: list[list[Mat]] = [[] for _ in m.dims]
    for g in gens:
        for f in hom_basis(g, m):
            for i in range(m.preset.vertices):
                if m.dims[i] and g.dims[i]:
                    imgs[i].append(f[i])
    return [_span(imgs[i], m.dims[i]) for i in range(m.preset.vertices)]


@dataclass
class TorsionResult:
    submodule: Submodule
    stable: bool
    steps: int

    @property
    def dims(self):
        return self.submodule.dims

    def torsion(self) -> Representation:
        return self.submodule.module()

    def free(self) -> Representation:
        return self.submodule.quotient()[0]


def _check_bound(mods, dim_bound):
    if dim_bound is None:
        return True
    return all(all(d <= b for d, b in zip(x.dims, dim_bound)) for x in mods)


def torsion_part(m: Representation, generators: Sequence[Representation],
                 dim_bound: Sequence[int] | None = None) -> TorsionResult:
    """Largest submodule of M lying in Filt(Fac(generators)), by iterated traces."""
    if any(g.total_dim == 0 for g in generators):
        raise QuiverError("generators must be nonzero")
    stable = _check_bound([m, *generators], dim_bound)
    cur = [linalg.zeros(d, 0) for d in m.dims]
    steps = 0
    while True:
        sub = Submodule(m, cur)
        q, proj = sub.quotient()
        if q.total_dim == 0:
            break
        tr = trace(generators, q)
        if all(t.ncols() == 0 for t in tr):
            break
        steps += 1
        new = []
        for i in range(m.preset.vertices):
            comp = linalg.complement_basis(cur[i], m.dims[i])
            lifted = comp * tr[i] if tr[i].ncols() else linalg.zeros(m.dims[i], 0)
            new.append(_span([cur[i], lifted], m.dims[i]))
        cur = new
    return TorsionResult(Submodule(m, cur), stable, steps)


def reject_part(m: Representation, cogenerators: Sequence[Representation],
                dim_bound: Sequence[int] | None = None) -> TorsionResult:
    """Largest submodule of M with no nonzero map to any cogenerator.

    This is the torsion part for the pair whose torsion-free class is
    Filt(Sub(cogenerators)); the quotient is the torsion-free part.
    """
    if any(g.total_dim == 0 for g in cogenerators):
        raise QuiverError("cogenerators must be nonzero")
    stable = _check_bound([m, *cogenerators], dim_bound)
    cur = [linalg.identity(d) for d in m.dims]
    steps = 0
    while True:
        sub = Submodule(m, cur)
        r = sub.module()
        if r.total_dim == 0:
            break
        kernels = None
        fs = [f for g in cogenerators for f in hom_basis(r, g)]
        if not fs:
            break
        steps += 1
        new = []
        for i in range(m.preset.vertices):
            if r.dims[i] == 0:
                new.append(linalg.zeros(m.dims[i], 0))
                continue
            stacked = [f[i] for f in fs if f[i].nrows()]
            if stacked:
                big = linalg.from_rows([[x[row, col] for col in range(r.dims[i])]
                                        for x in stacked for row in range(x.nrows())], r.dims[i])
                ker = linalg.nullspace(big)
            else:
                ker = [[flint.fmpq(int(a == b)) for a in range(r.dims[i])] for b in range(r.dims[i])]
            kb = linalg.from_rows(ker, r.dims[i]).transpose() if ker else linalg.zeros(r.dims[i], 0)
            new.append(cur[i] * kb if kb.ncols() else linalg.zeros(m.dims[i], 0))
        del kernels
        cur = new
    return TorsionResult(Submodule(m, cur), stable, steps)
