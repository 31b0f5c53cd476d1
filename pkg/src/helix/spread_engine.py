"""Split cohomology profiles and the spread-reduction procedure.

Convention: a summand (d, M) stands for M[d], so M contributes to the
cohomology H^{-d} of x = (+) M_k[d_k].  With this convention
Hom^i(x, x) collects ext^{d_l - d_k + i}(M_k, M_l) over summand pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Sequence

from . import quiver_calc as qc
from .mutation_groupoid import (
    HeartLabel, KConfig, Letter, format_word, heart_chain, k_action, mat_vec, reduce_word,
)


class ProfileError(ValueError):
    pass


class NotApplicable(ProfileError):
    pass


@dataclass(frozen=True, eq=False)
class Summand:
    degree: int
    module: qc.Representation
    marker: str | None = None
    name: str | None = None

    def describe(self) -> dict:
        out = {"degree": self.degree, "class": list(self.module.dims)}
        if self.name:
            out["module"] = self.name
        if self.marker is not None:
            out["marker"] = self.marker
        return out


@dataclass(eq=False)
class CohomologyProfile:
    preset: qc.AlgebraPreset
    summands: list[Summand]

    def __post_init__(self):
        for s in self.summands:
            if s.module.total_dim == 0:
                raise ProfileError("profile summands must be nonzero")

    @property
    def degrees(self) -> list[int]:
        return sorted({s.degree for s in self.summands})

    @property
    def spread(self) -> int:
        d = self.degrees
        return d[-1] - d[0] if d else 0

    def at(self, degree: int) -> list[Summand]:
        return [s for s in self.summands if s.degree == degree]

    def cohomology(self, degree: int) -> qc.Representation:
        mods = [s.module for s in self.at(degree)]
        return qc.direct_sum(*mods) if mods else qc.zero_module(self.preset)

    def k_class(self) -> tuple[int, int]:
        a = b = 0
        for s in self.summands:
            sign = -1 if s.degree % 2 else 1
            a += sign * s.module.dims[0]
            b += sign * s.module.dims[1]
        return (a, b)

    def describe(self) -> list[dict]:
        return [s.describe() for s in sorted(self.summands, key=lambda s: s.degree)]


def normalize(p: CohomologyProfile) -> tuple[CohomologyProfile, int]:
    if not p.summands:
        raise ProfileError("empty profile")
    lo = min(s.degree for s in p.summands)
    q = CohomologyProfile(p.preset, [replace(s, degree=s.degree - lo) for s in p.summands])
    return q, q.spread


def _ext(m: qc.Representation, n: qc.Representation, k: int) -> int:
    if k < 0 or k > m.preset.cy_dim:
        return 0
    return qc.ext(m, n, k)


def _pair_ext(a: Summand, b: Summand, k: int) -> int:
    # summands marked with different points have disjoint support
    if a.marker is not None and b.marker is not None and a.marker != b.marker:
        return 0
    return _ext(a.module, b.module, k)


def shifted_hom(p: CohomologyProfile, i: int) -> int:
    """dim Hom(x, x[i]) for the split object x."""
    return sum(_pair_ext(a, b, b.degree - a.degree + i) for a in p.summands for b in p.summands)


@dataclass
class SpreadReport:
    spread: int
    top: qc.Representation
    bottom: qc.Representation
    selfext_ok: bool
    witness: dict | None

    def as_dict(self) -> dict:
        return {"spread": self.spread, "top_class": list(self.top.dims),
                "bottom_class": list(self.bottom.dims), "selfext_ok": self.selfext_ok,
                "witness": self.witness}


def check_selfext_nonneg(p: CohomologyProfile) -> SpreadReport:
    p, n = normalize(p)
    witness = None
    for ia, a in enumerate(p.summands):
        for ib, b in enumerate(p.summands):
            gap = b.degree - a.degree
            for i in range(-1, -gap - 1, -1):
                k = gap + i
                v = _pair_ext(a, b, k)
                if v:
                    witness = {"i": i, "pair": [ia, ib], "ext_degree": k, "dim": v}
                    break
            if witness:
                break
        if witness:
            break
    return SpreadReport(n, p.cohomology(0), p.cohomology(n), witness is None, witness)


def _require(p: CohomologyProfile, min_spread: int) -> tuple[CohomologyProfile, int, SpreadReport]:
    rep = check_selfext_nonneg(p)
    q, n = normalize(p)
    if n < min_spread:
        raise NotApplicable(f"needs spread >= {min_spread}, got {n}")
    if not rep.selfext_ok:
        raise ProfileError(f"negative self-extensions do not vanish: {rep.witness}")
    return q, n, rep


def hom_vanishing_bang_bang(p: CohomologyProfile) -> bool:
    """Hom(H^0, H^-n) = Ext^1(H^0, H^-n) = 0; forced once spread >= 2."""
    _, _, rep = _require(p, 2)
    return qc.hom(rep.top, rep.bottom) == 0 and _ext(rep.top, rep.bottom, 1) == 0


# -- chain torsion classes ---------------------------------------------------


def kronecker_brick(preset: qc.AlgebraPreset, m: int, arrows: tuple[str, str]) -> qc.Representation:
    """Brick of dimension m at the source of ``arrows`` and m-1 at the target,
    with the two arrows acting as [I 0] and [0 I]."""
    x, y = (preset.arrow(a) for a in arrows)
    if (x.src, x.dst) != (y.src, y.dst):
        raise qc.QuiverError("arrows must be parallel")
    dims = [0] * preset.vertices
    dims[x.src], dims[x.dst] = m, m - 1
    left = qc.linalg.zeros(m - 1, m)
    right = qc.linalg.zeros(m - 1, m)
    for i in range(m - 1):
        left[i, i] = 1
        right[i, i + 1] = 1
    return qc.Representation(preset, tuple(dims), {arrows[0]: left, arrows[1]: right}).validate()


def _parallel_pair(preset: qc.AlgebraPreset, src: int, dst: int) -> tuple[str, str]:
    labels = [a.label for a in preset.arrows if a.src == src and a.dst == dst]
    if len(labels) != 2:
        raise qc.QuiverError("chain bricks need exactly two parallel arrows")
    return labels[0], labels[1]


def chain_bricks(preset: qc.AlgebraPreset, side: str, p: int) -> list[qc.Representation]:
    """Torsion generators of the p-th heart on a chain (as a tilt of H).

    Upper chain: bricks of classes (1,0), (2,1), ..., on the arrows 0 -> 1.
    Lower chain: bricks of classes (0,1), (1,2), ..., on the arrows 1 -> 0.
    """
    pair = _parallel_pair(preset, 0, 1) if side == "upper" else _parallel_pair(preset, 1, 0)
    return [kronecker_brick(preset, m, pair) for m in range(1, p + 1)]


@dataclass
class IntervalReport:
    upper_generators: list[qc.Representation]
    lower_cogenerators: list[qc.Representation]
    nonempty: bool
    bound_exceeded: bool
    chain_members: list[HeartLabel]

    def as_dict(self) -> dict:
        return {"upper_generator_classes": [list(m.dims) for m in self.upper_generators],
                "lower_cogenerator_classes": [list(m.dims) for m in self.lower_cogenerators],
                "nonempty": self.nonempty, "bound_exceeded": self.bound_exceeded,
                "chain_members": [h.as_dict() for h in self.chain_members]}


def improvement_interval(p: CohomologyProfile, N: int = 1, depth: int = 3,
                         dim_bound: Sequence[int] | None = None) -> IntervalReport:
    """Bounds of the window of hearts improving x: the torsion class generated by
    H^0 and the torsion-free class generated by H^-n, plus the chain hearts
    (up to ``depth``) lying inside the window."""
    q, n, rep = _require(p, 1)
    tops = [s.module for s in q.at(0)]
    bottoms = [s.module for s in q.at(n)]
    nonempty = qc.hom(rep.top, rep.bottom) == 0
    exceeded = False
    members = []
    for side in ("upper", "lower"):
        labels = heart_chain(side, depth, N)
        for lab in labels:
            gens = chain_bricks(q.preset, side, lab.position)
            t_top = qc.torsion_part(rep.top, gens, dim_bound)
            t_bot = qc.torsion_part(rep.bottom, gens, dim_bound)
            exceeded |= not (t_top.stable and t_bot.stable)
            if t_top.dims == rep.top.dims and sum(t_bot.dims) == 0:
                members.append(lab)
    return IntervalReport(tops, bottoms, nonempty, exceeded, members)


@dataclass
class RegradeResult:
    profile: CohomologyProfile
    top_in_torsion: bool
    bottom_torsion_free: bool
    bounds_ok: bool
    bound_exceeded: bool
    torsion_flags: list[bool] = field(default_factory=list)


def tilt_regrade(p: CohomologyProfile, generators: Sequence[qc.Representation],
                 dim_bound: Sequence[int] | None = None) -> RegradeResult:
    """Cohomology of x with respect to the tilt <F[1], T>: tM stays, fM drops one degree."""
    q, n = normalize(p)
    out: list[Summand] = []
    flags: list[bool] = []
    exceeded = False
    parts = []
    for s in q.summands:
        tp = qc.torsion_part(s.module, generators, dim_bound)
        exceeded |= not tp.stable
        t, f = tp.torsion(), tp.free()
        parts.append((s, t, f))
        if t.total_dim:
            out.append(Summand(s.degree, t, s.marker))
            flags.append(True)
        if f.total_dim:
            out.append(Summand(s.degree - 1, f, s.marker))
            flags.append(False)
    top_t = all(f.total_dim == 0 for s, t, f in parts if s.degree == 0)
    bot_f = all(t.total_dim == 0 for s, t, f in parts if s.degree == n)
    new = CohomologyProfile(q.preset, out)
    degs = new.degrees
    ok = True
    if top_t and degs and not (0 <= degs[0] and degs[-1] <= n):
        ok = False
    if bot_f and degs and not (-1 <= degs[0] and degs[-1] <= n - 1):
        ok = False
    return RegradeResult(new, top_t, bot_f, ok, exceeded, flags)


# -- guided walk ---------------------------------------------------------------


def _inverse_twist(obj, s: qc.Representation, j: int):
    """Inverse spherical twist by the simple s_j on a shifted module, when the
    answer is forced: s_j^k[m] -> s_j^k[m + d - 1], and RHom(s_j, M) = 0 fixes M."""
    m, shift = obj
    d = m.preset.cy_dim
    if all(m.dims[i] == 0 for i in range(len(m.dims)) if i != j):
        return (m, shift + d - 1)
    if all(_ext(s, m, k) == 0 for k in range(d + 1)):
        return obj
    return None


def _transport(m: qc.Representation, shift: int, label: HeartLabel):
    """Preimage of m[shift] under the functor word of a chain heart (shift letter removed)."""
    p = m.preset
    obj = (m, shift)
    phis = [x for x in label.word if x.kind == "Phi"]
    for x in phis:
        j = x.value % 2
        obj = _inverse_twist(obj, qc.simple(p, j), j)
        if obj is None:
            return None
    return obj


def _inverse_word(w: Sequence[Letter]) -> tuple[Letter, ...]:
    inv = {"Phi": "PhiInv", "PhiInv": "Phi", "VdB": "VdBInv", "VdBInv": "VdB"}
    out = []
    for x in reversed(w):
        if x.kind in inv:
            out.append(Letter(inv[x.kind], x.value))
        else:
            out.append(Letter(x.kind, -x.value))
    return tuple(out)


@dataclass
class WalkResult:
    word: tuple[Letter, ...]
    profile: CohomologyProfile
    labels: list[HeartLabel]
    complete: bool
    note: str = ""

    def as_dict(self, config: KConfig | None = None) -> dict:
        out = {"word": format_word(self.word), "steps": len(self.labels),
               "labels": [h.as_dict() for h in self.labels], "final_spread": self.profile.spread,
               "final_profile": self.profile.describe(), "complete": self.complete}
        if self.note:
            out["note"] = self.note
        return out


def guided_walk(p: CohomologyProfile, N: int = 1, max_steps: int = 10, depth: int = 3) -> WalkResult:
    """Tilt along chain hearts until the spread is at most one.

    Each step tries chain positions 1..depth (upper before lower) and takes the
    first heart in which the spread strictly drops and whose functor word can
    be undone on every summand.  The returned word w satisfies
    class(final) = K(w) class(input).
    """
    cur, n = normalize(p)
    rep = check_selfext_nonneg(cur)
    if not rep.selfext_ok:
        raise ProfileError(f"negative self-extensions do not vanish: {rep.witness}")
    total: list[Letter] = []
    used: list[HeartLabel] = []
    steps = 0
    while cur.spread > 1:
        if steps >= max_steps:
            return WalkResult(reduce_word(_inverse_word(total), N), cur, used, False, "max_steps exhausted")
        chosen = None
        for pos in range(1, depth + 1):
            for side in ("upper", "lower"):
                lab = heart_chain(side, pos, N)[-1]
                rg = tilt_regrade(cur, chain_bricks(cur.preset, side, pos))
                if rg.profile.spread >= cur.spread:
                    continue
                moved = []
                for s, is_torsion in zip(rg.profile.summands, rg.torsion_flags):
                    # x = Phi(y)[1]: torsion tM[d] comes from Phi^-1(tM[-1]) in degree d,
                    # free fM[d] = (fM[1])[d-1] from Phi^-1(fM) in degree d-1
                    shift = -1 if is_torsion else 0
                    got = _transport(s.module, shift, lab)
                    if got is None or got[1] != 0:
                        moved = None
                        break
                    moved.append(Summand(s.degree, got[0], s.marker))
                if moved is None:
                    continue
                chosen = (lab, CohomologyProfile(cur.preset, moved))
                break
            if chosen:
                break
        if chosen is None:
            return WalkResult(reduce_word(_inverse_word(total), N), cur, used, False,
                              "no chain heart within depth reduces the spread")
        lab, nxt = chosen
        total.extend(lab.word)
        used.append(lab)
        cur, _ = normalize(nxt)
        steps += 1
    return WalkResult(reduce_word(_inverse_word(total), N), cur, used, True)


# -- collapse ------------------------------------------------------------------


@dataclass
class CollapseReport:
    valid: bool
    groups: dict[str, list[dict]]
    witness: dict | None

    def as_dict(self) -> dict:
        return {"valid": self.valid, "groups": self.groups, "witness": self.witness}


def collapse_detect(p: CohomologyProfile) -> CollapseReport:
    """Group point-type summands by support marker; a marker seen in two
    degrees yields a nonzero top-to-bottom morphism through that point."""
    if any(s.marker is None for s in p.summands):
        raise NotApplicable("every summand needs a support marker")
    groups: dict[str, list[Summand]] = {}
    for s in p.summands:
        groups.setdefault(s.marker, []).append(s)
    witness = None
    for mk in sorted(groups):
        degs = sorted({s.degree for s in groups[mk]})
        if len(degs) > 1:
            lo = [s for s in groups[mk] if s.degree == degs[0]]
            hi = [s for s in groups[mk] if s.degree == degs[-1]]
            h = qc.hom(qc.direct_sum(*[s.module for s in lo]), qc.direct_sum(*[s.module for s in hi]))
            witness = {"marker": mk, "degrees": [degs[0], degs[-1]], "hom": h}
            break
    out = {mk: [s.describe() for s in sorted(v, key=lambda s: s.degree)] for mk, v in sorted(groups.items())}
    return CollapseReport(witness is None, out, witness)


# -- construction helpers and JSON ------------------------------------------------


def socle_top_module(preset: qc.AlgebraPreset) -> qc.Representation:
    """Dimension (2,2) module with simple top and socle s_0 over the CY2 preset:
    u -> (v1, v2) via a, b; v1 -> w via as, v2 -> -w via bs."""
    f = qc.linalg.from_rows
    maps = {"a": f([[1, 0], [0, 0]]), "b": f([[0, 0], [1, 0]]),
            "as": f([[0, 0], [1, 0]]), "bs": f([[0, 0], [0, -1]])}
    return qc.Representation(preset, (2, 2), maps).validate()


def spread_three_example(preset: qc.AlgebraPreset | None = None) -> CohomologyProfile:
    """s_1 in degree 0 and the (2,2) module in degree 3 over preproj_A1."""
    preset = preset or qc.load_preset("preproj_A1")
    return CohomologyProfile(preset, [Summand(0, qc.simple(preset, 1), name="s1"),
                                      Summand(3, socle_top_module(preset), name="B")])


def _module_from_json(preset: qc.AlgebraPreset, item) -> tuple[qc.Representation, str | None]:
    if isinstance(item, str):
        if item in ("s0", "s1"):
            return qc.simple(preset, int(item[1])), item
        raise ProfileError(f"unknown module name {item!r}")
    return qc.representation_from_json(preset, item), None


def profile_from_json(data, preset: qc.AlgebraPreset | None = None) -> CohomologyProfile:
    if isinstance(data, dict):
        if preset is None and "preset" in data:
            preset = qc.load_preset(data["preset"])
        data = data["summands"]
    if preset is None:
        raise ProfileError("no preset given")
    out = []
    for item in data:
        m, name = _module_from_json(preset, item["module"])
        out.append(Summand(int(item["degree"]), m, item.get("marker"), name))
    return CohomologyProfile(preset, out)


def load_profile(text: str, preset: qc.AlgebraPreset | None = None) -> CohomologyProfile:
    return profile_from_json(json.loads(text), preset)
