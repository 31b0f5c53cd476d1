"""``helix`` command line.

Exit codes: 0 success, 1 I/O failure, 2 domain or usage error.  Failures
print a one-line JSON object on stderr.  Every subcommand accepts ``--json``;
JSON output is wrapped as {"schema": SCHEMA, "command": ..., "result": ...}.
Floats are printed with exactly nine decimals so output is byte-stable.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import re
import sys
from pathlib import Path

from . import quiver_calc as qc
from . import spread_engine as se
from .cartan_roots import NotAffineError, UnsupportedTypeError, build_cartan, enumerate_roots
from .mutation_groupoid import (
    KConfig, WordSyntaxError, det2, exchange_graph, format_word, heart_chain, k_action,
    parse_word, preset_config, reduce_word,
)
from .restriction import arrangement, restricted_roots, root_classes_mod_delta, selection
from .stability import (
    DegenerateChargeError, classify_charge, find_phase_gap, parse_charge, phase, phases,
)

SCHEMA = "helix/1"
PRESET_ENV = "HELIX_PRESET_DIR"
CATALOG_NOTE = "up to shifts, mutation functors, and the Grothendieck duality functor"


class DomainError(ValueError):
    pass


class _Fixed(str):
    pass


def _fix_floats(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if math.isinf(obj):
            return None
        return _Fixed(f"{obj:.9f}")
    if isinstance(obj, dict):
        return {k: _fix_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_fix_floats(v) for v in obj]
    return obj


def _json_text(command: str, result) -> str:
    def mark(o):
        if isinstance(o, _Fixed):
            return "@F" + o
        if isinstance(o, dict):
            return {k: mark(v) for k, v in o.items()}
        if isinstance(o, list):
            return [mark(v) for v in o]
        return o

    body = mark(_fix_floats({"schema": SCHEMA, "command": command, "result": result}))
    text = json.dumps(body, ensure_ascii=False, indent=2, sort_keys=False)
    return re.sub(r'"@F(-?\d+\.\d{9})"', r"\1", text) + "\n"


def f9(x: float) -> str:
    return f"{x:.9f}"


# -- presets -------------------------------------------------------------------


def resolve_preset(name: str) -> qc.AlgebraPreset:
    """Look in $HELIX_PRESET_DIR first, then the bundled presets."""
    d = os.environ.get(PRESET_ENV)
    if d:
        path = Path(d) / f"{name}.json"
        if path.exists():
            return qc.preset_from_dict(json.loads(path.read_text()))
    return qc.load_preset(name)


def _config(args) -> KConfig:
    if getattr(args, "period", None):
        c = args.c if args.c is not None else 2
        return KConfig(args.period, c)
    return preset_config(args.preset)


# -- svg -------------------------------------------------------------------------


def arrangement_svg(label: str, node: int, bound: int, charge=None) -> str:
    """Rays of restricted-root directions on the unit disc; accumulation rays dashed."""
    sel = selection(label, node)
    arr = arrangement(sel, bound)
    size, c, r = 800, 400.0, 360.0

    def ang(u):
        if charge is not None:
            return math.pi * phase(charge(u))
        return math.atan2(u[1], u[0])

    def ray(t):
        return f"{c + r * math.cos(t):.9f}", f"{c - r * math.sin(t):.9f}"

    acc = arr.accumulation
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        f'<title>{label} node {node} restricted root directions</title>',
        f'<rect x="0" y="0" width="{size}" height="{size}" style="fill:#ffffff;stroke:none"/>',
        f'<circle cx="{c:.9f}" cy="{c:.9f}" r="{r:.9f}" style="fill:none;stroke:#bbbbbb;stroke-width:1"/>',
    ]
    for d in arr.lines:
        if d == acc:
            continue
        for u in (d, (-d[0], -d[1])):
            x, y = ray(ang(u))
            out.append(f'<line x1="{c:.9f}" y1="{c:.9f}" x2="{x}" y2="{y}" '
                       f'style="stroke:#1f4e9c;stroke-width:1"/>')
    for u in (acc, (-acc[0], -acc[1])):
        x, y = ray(ang(u))
        out.append(f'<line x1="{c:.9f}" y1="{c:.9f}" x2="{x}" y2="{y}" '
                   f'style="stroke:#c0392b;stroke-width:3;stroke-dasharray:12 8"/>')
    out.append(f'<circle cx="{c:.9f}" cy="{c:.9f}" r="3" style="fill:#000000"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


# -- catalog ---------------------------------------------------------------------


def catalog(length: int) -> list[str]:
    if not 1 <= length <= 6:
        raise DomainError(f"curve length must lie in 1..6, got {length}")
    labels = ["O_C"] + [f"O_{k}C" for k in range(2, length + 1)]
    if length >= 5:
        labels.append("Z")
    return labels


# -- commands --------------------------------------------------------------------


def _emit(args, command: str, result, text: str) -> str:
    return _json_text(command, result) if args.json else text


def cmd_roots(args) -> str:
    c = build_cartan(args.type)
    roots = sorted(list(r.coords) for r in enumerate_roots(c, args.bound))
    text = "".join(",".join(map(str, r)) + "\n" for r in roots)
    return _emit(args, "roots", {"type": args.type, "bound": args.bound, "delta": list(c.delta),
                                 "roots": roots}, text)


def cmd_restrict(args) -> str:
    sel = selection(args.type, args.node)
    rr = restricted_roots(sel, args.bound)
    pairs = sorted(list(u) for u in rr.roots)
    cls = root_classes_mod_delta(sel, args.bound)
    res = {"type": args.type, "node": sel.node, "bound": args.bound, "length": sel.length,
           "delta_bar": list(sel.delta_bar), "restricted_roots": pairs,
           "classes_mod_delta_bar": [list(u) for u in cls.representatives], "classes_stable": cls.stable}
    text = "".join(f"{a},{b}\n" for a, b in pairs)
    return _emit(args, "restrict", res, text)


def cmd_arrange(args) -> str:
    sel = selection(args.type, args.node)
    charge = parse_charge(args.charge) if args.charge else None
    if args.json or args.format == "json":
        arr = arrangement(sel, args.bound)
        return _json_text("arrange", {"type": args.type, "node": sel.node, "bound": args.bound,
                                      "lines": [list(d) for d in arr.lines],
                                      "accumulation": list(arr.accumulation)})
    return arrangement_svg(args.type, sel.node, args.bound, charge)


def cmd_phases(args) -> str:
    sel = selection(args.type, args.node)
    z = parse_charge(args.charge)
    ps = phases(z, sel, args.bound)
    res = {"type": args.type, "node": sel.node, "bound": args.bound,
           "charge_kind": classify_charge(z, sel, args.bound),
           "accumulation": list(ps.accumulation),
           "phases": [[u[0], u[1], p] for u, p in ps.entries]}
    text = "".join(f"{u[0]},{u[1]},{f9(p)}\n" for u, p in ps.entries)
    return _emit(args, "phases", res, text)


def cmd_gap(args) -> str:
    sel = selection(args.type, args.node)
    z = parse_charge(args.charge)
    g = find_phase_gap(z, sel, args.bound)
    res = g.as_dict()
    parts = [g.kind]
    for k in ("phi", "epsilon"):
        v = res[k]
        parts.append(f"{k}={f9(v) if v is not None else 'none'}")
    parts.append(f"stable={str(g.stable).lower()}")
    return _emit(args, "gap", res, " ".join(parts) + "\n")


def cmd_mutate(args) -> str:
    cfg = _config(args)
    w = parse_word(args.word)
    red = reduce_word(w, cfg.N)
    m = k_action(red, cfg)
    res = {"word": format_word(w), "reduced": format_word(red), "N": cfg.N,
           "k_matrix": [list(r) for r in m], "det": det2(m)}
    text = f"{format_word(red) or '(empty)'}\n{m[0][0]} {m[0][1]}\n{m[1][0]} {m[1][1]}\n"
    return _emit(args, "mutate", res, text)


def cmd_chain(args) -> str:
    cfg = _config(args)
    labels = heart_chain(args.side, args.steps, cfg.N)
    res = {"side": args.side, "N": cfg.N, "labels": [h.as_dict() for h in labels]}
    text = "".join(f"{h.position}\t{format_word(h.word)}\t{h.text}\n" for h in labels)
    return _emit(args, "chain", res, text)


def cmd_graph(args) -> str:
    g = exchange_graph(args.radius)
    if args.json or args.format == "json":
        res = g.to_json()
        res.update(connected=g.is_connected(), tetravalent=g.is_tetravalent())
        return _json_text("graph", res)
    return g.to_dot()


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def cmd_spread(args) -> str:
    preset = resolve_preset(args.preset)
    prof = se.load_profile(_read_input(args.profile), preset)
    cfg = _config(args)
    rep = se.check_selfext_nonneg(prof)
    res = {"preset": preset.name, "profile": prof.describe(), "selfext": rep.as_dict()}
    if rep.selfext_ok and rep.spread >= 2:
        res["hom_vanishing"] = se.hom_vanishing_bang_bang(prof)
    if rep.selfext_ok and rep.spread >= 1:
        res["interval"] = se.improvement_interval(prof, cfg.N).as_dict()
        res["walk"] = se.guided_walk(prof, cfg.N, args.max_steps).as_dict()
    if prof.summands and all(s.marker is not None for s in prof.summands):
        res["collapse"] = se.collapse_detect(prof).as_dict()
    lines = [f"spread {rep.spread}", f"selfext_ok {str(rep.selfext_ok).lower()}"]
    if rep.witness:
        lines.append("witness " + json.dumps(rep.witness, sort_keys=True))
    if "walk" in res:
        lines.append(f"walk {res['walk']['word'] or '(empty)'} final_spread {res['walk']['final_spread']}")
    if "collapse" in res:
        lines.append(f"collapse_valid {str(res['collapse']['valid']).lower()}")
    return _emit(args, "spread", res, "\n".join(lines) + "\n")


def cmd_catalog(args) -> str:
    labels = catalog(args.length)
    res = {"length": args.length, "labels": labels, "note": CATALOG_NOTE}
    text = "\n".join(labels) + f"\n# {CATALOG_NOTE}\n"
    return _emit(args, "catalog", res, text)


# -- parser ----------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail(2, "usage", message)


def _positive(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="helix", description="Restricted affine roots, phases, mutation words and spreads.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", help="versioned JSON output")
        sp.add_argument("-o", "--output", help="write to a file instead of stdout")
        sp.set_defaults(fn=fn)
        return sp

    def typed(sp, bound):
        sp.add_argument("--type", default="A1t", help="affine type tag, e.g. A1t, D4t, E8t")
        sp.add_argument("--node", type=int, default=None, help="selected node (default: maximal mark)")
        sp.add_argument("--bound", type=_positive, default=bound, help="height bound")

    def kconf(sp):
        sp.add_argument("--preset", default="preproj_A1")
        sp.add_argument("--period", type=_positive, default=None, help="helix period N (overrides preset)")
        sp.add_argument("--c", type=int, default=None, help="ext^1 between simples for --period")

    sp = add("roots", cmd_roots, "positive affine roots up to a height bound")
    sp.add_argument("--type", required=True)
    sp.add_argument("--bound", type=_positive, default=30)
    typed(add("restrict", cmd_restrict, "restricted roots of a node selection"), 30)
    sp = add("arrange", cmd_arrange, "SVG ray plot of restricted-root directions")
    typed(sp, 30)
    sp.add_argument("--format", choices=["svg", "json"], default="svg")
    sp.add_argument("--charge", default=None, help="plot phases of Z instead of lattice directions")
    for name, fn, h in (("phases", cmd_phases, "phases of positive restricted roots"),
                        ("gap", cmd_gap, "phase gap away from the accumulation points")):
        sp = add(name, fn, h)
        typed(sp, 60)
        sp.add_argument("--charge", required=True, help='"a+bi,c+di"')
    sp = add("mutate", cmd_mutate, "reduce a functor word and print its K-matrix")
    sp.add_argument("--word", required=True)
    kconf(sp)
    sp = add("chain", cmd_chain, "hearts on the upper or lower chain")
    sp.add_argument("--side", choices=["upper", "lower", "upper_tail", "lower_tail"], required=True)
    sp.add_argument("--steps", type=_positive, default=2)
    kconf(sp)
    sp = add("graph", cmd_graph, "class-level exchange graph")
    sp.add_argument("--radius", type=int, default=3)
    sp.add_argument("--format", choices=["dot", "json"], default="dot")
    sp = add("spread", cmd_spread, "spread analysis of a split profile (JSON file or -)")
    sp.add_argument("profile")
    sp.add_argument("--max-steps", type=_positive, default=10)
    kconf(sp)
    sp = add("catalog", cmd_catalog, "brick labels for a curve of given length")
    sp.add_argument("--length", type=int, required=True)
    return p


def _fail(code: int, kind: str, message: str):
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit": code}) + "\n")
    raise SystemExit(code)


_DOMAIN = (DomainError, DegenerateChargeError, UnsupportedTypeError, NotAffineError, WordSyntaxError,
           qc.QuiverError, se.ProfileError, IndexError, ValueError, KeyError)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = args.fn(args)
    except OSError as e:
        _fail(1, "io", str(e))
    except DegenerateChargeError as e:
        _fail(2, "degenerate_charge", str(e))
    except _DOMAIN as e:
        _fail(2, type(e).__name__, str(e))
    try:
        if args.output:
            Path(args.output).write_text(out)
        else:
            sys.stdout.write(out)
    except OSError as e:
        _fail(1, "io", str(e))
    return 0


if __name__ == "__main__":
    sys.exit(main())
