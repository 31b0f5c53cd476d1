"""Words in the mutation functors, their action on the rank-two K-lattice,
the two chains of algebraic hearts below H[1], pole monodromies, and the
class-level exchange graph of tilting complexes.

Letters are written in composition order: the leftmost letter is applied
last, so ``Phi0.Phi1`` means Phi_0 o Phi_1 and its K-matrix is R_0 R_1.
"""

from __future__ import annotations

import math
import re
from collections import deque
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


class WordSyntaxError(ValueError):
    def __init__(self, offset: int, message: str):
        super().__init__(f"offset {offset}: {message}")
        self.offset = offset
        self.message = message


class UnconfiguredGenerator(ValueError):
    pass


@dataclass(frozen=True)
class Letter:
    kind: str  # Phi, PhiInv, Shift, VdB, VdBInv, Beta
    value: int = 0

    def __str__(self):
        if self.kind == "Phi":
            return f"Phi{self.value}"
        if self.kind == "PhiInv":
            return f"Phi{self.value}'"
        if self.kind == "Shift":
            return f"[{self.value}]"
        if self.kind == "VdB":
            return "VdB"
        if self.kind == "VdBInv":
            return "VdB'"
        return f"B{self.value}"

    def __repr__(self):
        if self.kind in ("VdB", "VdBInv"):
            return self.kind
        return f"{self.kind}({self.value})"


def Phi(i: int) -> Letter:
    return Letter("Phi", i)


def PhiInv(i: int) -> Letter:
    return Letter("PhiInv", i)


def Shift(n: int) -> Letter:
    return Letter("Shift", n)


def Beta(k: int) -> Letter:
    return Letter("Beta", k)


VdB = Letter("VdB")
VdBInv = Letter("VdBInv")

FunctorWord = tuple  # tuple[Letter, ...]

_TOKEN = re.compile(r"Phi(-?\d+)('?)$|\[(-?\d+)\]$|VdB('?)$|B(-?\d+)$")


def parse_word(text: str) -> FunctorWord:
    """Parse ``Phi3``, ``Phi3'``, ``[2]``, ``VdB``, ``VdB'``, ``B-1`` joined by dots."""
    if text.strip() == "":
        return ()
    out = []
    pos = 0
    for tok in text.split("."):
        m = _TOKEN.match(tok)
        if not m:
            if tok == "":
                raise WordSyntaxError(pos, "empty token")
            raise WordSyntaxError(pos, f"unrecognised token {tok!r}")
        if m.group(1) is not None:
            out.append(Letter("PhiInv" if m.group(2) else "Phi", int(m.group(1))))
        elif m.group(3) is not None:
            out.append(Shift(int(m.group(3))))
        elif m.group(4) is not None:
            out.append(VdBInv if m.group(4) else VdB)
        else:
            out.append(Beta(int(m.group(5))))
        pos += len(tok.encode()) + 1
    return tuple(out)


def format_word(w: Iterable[Letter]) -> str:
    return ".".join(str(x) for x in w)


def index_period(N: int) -> int:
    """Phi indices are tracked modulo lcm(N, 2); for even N this is N."""
    if N < 1:
        raise ValueError("helix period must be >= 1")
    return N * 2 // math.gcd(N, 2)


_INVERSE = {"Phi": "PhiInv", "PhiInv": "Phi", "VdB": "VdBInv", "VdBInv": "VdB"}


def _push_betas(segment: list[Letter], N: int, L: int) -> list[Letter]:
    out = []
    acc = 0
    for x in segment:
        if x.kind == "Beta":
            acc += x.value
        else:
            # beta_k Phi_j = Phi_{j - kN} beta_k
            out.append(Letter(x.kind, (x.value - acc * N) % L))
    if (acc * N) % L:
        out.append(Beta(1))
    return out


def reduce_word(w: Sequence[Letter], N: int) -> FunctorWord:
    L = index_period(N)
    shift = sum(x.value for x in w if x.kind == "Shift")
    cur = [x for x in w if x.kind != "Shift"]
    while True:
        segs, seg = [], []
        for x in cur:
            if x.kind in ("VdB", "VdBInv"):
                segs.append(_push_betas(seg, N, L))
                segs.append([x])
                seg = []
            else:
                seg.append(x)
        segs.append(_push_betas(seg, N, L))
        stack: list[Letter] = []
        for x in (y for s in segs for y in s):
            if stack and x.kind in _INVERSE and stack[-1].kind == _INVERSE[x.kind] and stack[-1].value == x.value:
                stack.pop()
            elif stack and x.kind == "Beta" and stack[-1].kind == "Beta":
                # two residual betas (odd N) multiply to an even power
                stack.pop()
            else:
                stack.append(x)
        if stack == cur:
            break
        cur = stack
    return ((Shift(shift),) if shift else ()) + tuple(cur)


# -- K-theory --------------------------------------------------------------

Mat2 = tuple[tuple[int, int], tuple[int, int]]
IDENTITY: Mat2 = ((1, 0), (0, 1))
SWAP: Mat2 = ((0, 1), (1, 0))


def mat_mul(a: Mat2, b: Mat2) -> Mat2:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def mat_vec(a: Mat2, v: Sequence[int]) -> tuple[int, int]:
    return (a[0][0] * v[0] + a[0][1] * v[1], a[1][0] * v[0] + a[1][1] * v[1])


def det2(a: Mat2) -> int:
    return a[0][0] * a[1][1] - a[0][1] * a[1][0]


@dataclass(frozen=True)
class KConfig:
    """K-theory model: N is the helix period, c = ext^1 between the two simples.

    Mutating at the simple of vertex j negates its class and adds c copies of
    it to the other simple; Phi(i) mutates at vertex i mod 2.
    """

    N: int
    c: int
    name: str = "custom"
    class_count: int | None = None

    def generator(self, x: Letter) -> Mat2:
        if x.kind in ("Phi", "PhiInv"):
            if x.value % 2 == 0:
                return ((-1, self.c), (0, 1))
            return ((1, 0), (self.c, -1))
        if x.kind == "Shift":
            s = -1 if x.value % 2 else 1
            return ((s, 0), (0, s))
        if x.kind in ("VdB", "VdBInv"):
            return IDENTITY
        if x.kind == "Beta":
            return SWAP if (x.value * self.N) % 2 else IDENTITY
        raise UnconfiguredGenerator(f"no K-matrix for {x!r}")


def k_action(w: Sequence[Letter], config: KConfig) -> Mat2:
    out = IDENTITY
    for x in w:
        out = mat_mul(out, config.generator(x))
    return out


_PRESET_PERIODS = {"preproj_A1": 1, "conifold_nccr": 1}


@lru_cache(maxsize=None)
def preset_config(name: str) -> KConfig:
    """K-config of a bundled preset; c is computed, N is configuration data."""
    from . import quiver_calc
    from .restriction import root_classes_mod_delta, selection

    if name not in _PRESET_PERIODS:
        raise UnconfiguredGenerator(f"no K configuration for {name!r}")
    p = quiver_calc.load_preset(name)
    c = quiver_calc.ext(quiver_calc.simple(p, 0), quiver_calc.simple(p, 1), 1)
    count = len(root_classes_mod_delta(selection("A1t"), 20).representatives)
    return KConfig(_PRESET_PERIODS[name], c, name, count)


def full_period_word(N: int) -> FunctorWord:
    L = index_period(N)
    return tuple(Phi(i) for i in reversed(range(L)))


def monodromy(pole: str, N: int, index: int | None = None) -> FunctorWord:
    """Loop words: ``north``, ``south``, or ``equatorial`` (needs index)."""
    if pole == "north":
        w = [VdBInv, Beta(-1), *[Phi(i) for i in reversed(range(N))], VdB]
    elif pole == "south":
        w = [VdBInv, *[Phi(i) for i in range(N)], Beta(1), VdB]
    elif pole == "equatorial":
        if index is None or not 0 <= index < N:
            raise ValueError(f"equatorial puncture index must lie in 0..{N - 1}")
        w = [Phi(index), Phi(index)]
    else:
        raise ValueError(f"unknown pole {pole!r}")
    return reduce_word(w, N)


def is_unipotent(m: Mat2) -> bool:
    d = ((m[0][0] - 1, m[0][1]), (m[1][0], m[1][1] - 1))
    return mat_mul(d, d) == ((0, 0), (0, 0))


# -- heart chains ------------------------------------------------------------


@dataclass(frozen=True)
class HeartLabel:
    kind: str  # standard, upper_chain, lower_chain, upper_tail, lower_tail
    position: int
    word: FunctorWord
    text: str

    def as_dict(self) -> dict:
        return {"kind": self.kind, "position": self.position, "word": format_word(self.word), "text": self.text}


def _show(i: int, N: int) -> int:
    r = i % N
    return r - N if (i < 0 and r) else r


def standard_heart(i: int, N: int) -> HeartLabel:
    return HeartLabel("standard", 0, (), f"flΛ_{i % N}")


def heart_chain(side: str, steps: int, N: int) -> list[HeartLabel]:
    """First ``steps`` hearts of a chain.

    Words keep the chain's own indices (reduce_word folds them); the display
    text folds indices modulo N.

    ``upper``/``lower`` descend from H[1]; ``upper_tail``/``lower_tail`` are the
    ends of the same chains climbing from H, written with inverse functors.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    index_period(N)
    out = []
    for p in range(1, steps + 1):
        if side in ("upper", "lower_tail"):
            idx = list(range(p))
            lam = p
        elif side in ("lower", "upper_tail"):
            idx = [-(j + 1) for j in range(p)]
            lam = -p
        else:
            raise ValueError(f"unknown chain side {side!r}")
        if side in ("upper", "lower"):
            word = (Shift(1),) + tuple(Phi(i) for i in idx)
            text = "".join(f"Φ_{_show(i, N)}" for i in idx) + f"(flΛ_{_show(lam, N)})[1]"
        else:
            word = tuple(PhiInv(i) for i in idx)
            text = "".join(f"Φ_{_show(i, N)}^-1" for i in idx) + f"(flΛ_{_show(lam, N)})"
        out.append(HeartLabel(side + ("_chain" if side in ("upper", "lower") else ""), p, word, text))
    return out


def heart_simple_classes(label: HeartLabel, config: KConfig) -> list[tuple[int, int]]:
    """Classes of the two simples of the heart, images of the standard simples."""
    m = k_action(label.word, config)
    return [mat_vec(m, (1, 0)), mat_vec(m, (0, 1))]


# -- exchange graph ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class ChamberNode:
    """Tilting complex up to the class action: chamber c of the rank-two fan
    and cohomological shift n."""

    c: int
    n: int


def tilting_neighbors(node: ChamberNode) -> list[ChamberNode]:
    """Left/right mutation moves inside the fan, and the two boundary-crossing
    moves that reflect the chamber index and change the shift by one."""
    return [ChamberNode(node.c - 1, node.n), ChamberNode(node.c + 1, node.n),
            ChamberNode(-node.c, node.n + 1), ChamberNode(-node.c, node.n - 1)]


@dataclass
class ExchangeGraph:
    radius: int
    distance: dict[ChamberNode, int]
    edges: list[tuple[ChamberNode, ChamberNode]]

    @property
    def nodes(self) -> list[ChamberNode]:
        return sorted(self.distance)

    def adjacency(self) -> dict[ChamberNode, set[ChamberNode]]:
        adj = {v: set() for v in self.distance}
        for a, b in self.edges:
            adj[a].add(b)
            adj[b].add(a)
        return adj

    def is_connected(self) -> bool:
        if not self.distance:
            return True
        adj = self.adjacency()
        start = self.nodes[0]
        seen = {start}
        q = deque([start])
        while q:
            v = q.popleft()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    q.append(u)
        return len(seen) == len(self.distance)

    def is_tetravalent(self) -> bool:
        """Every node has four distinct neighbours, all present for nodes
        strictly inside the radius."""
        adj = self.adjacency()
        for v, d in self.distance.items():
            nb = set(tilting_neighbors(v))
            if len(nb) != 4 or v in nb:
                return False
            if d < self.radius and adj[v] != nb:
                return False
            if not adj[v] <= nb:
                return False
        return True

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "nodes": [[v.c, v.n] for v in self.nodes],
            "edges": [[[a.c, a.n], [b.c, b.n]] for a, b in self.edges],
        }

    def to_dot(self) -> str:
        lines = ["graph exchange {"]
        for v in self.nodes:
            lines.append(f'  "{v.c},{v.n}";')
        for a, b in self.edges:
            lines.append(f'  "{a.c},{a.n}" -- "{b.c},{b.n}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def exchange_graph(radius: int) -> ExchangeGraph:
    if radius < 0:
        raise ValueError("radius must be >= 0")
    root = ChamberNode(0, 0)
    dist = {root: 0}
    q = deque([root])
    while q:
        v = q.popleft()
        if dist[v] == radius:
            continue
        for u in tilting_neighbors(v):
            if u not in dist:
                dist[u] = dist[v] + 1
                q.append(u)
    edges = set()
    for v in dist:
        for u in tilting_neighbors(v):
            if u in dist:
                edges.add(tuple(sorted((v, u))))
    return ExchangeGraph(radius, dist, sorted(edges))
