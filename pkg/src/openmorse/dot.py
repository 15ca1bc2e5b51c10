"""Graphviz DOT rendering of Hasse diagrams, gradients, 1-skeletons and scans."""
from __future__ import annotations

from typing import Callable

from .complex import CellSet, HasseDiagram, hasse_diagram
from .gradient import VectorField
from .subdivision import chain_label


def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def hasse_dot(H: HasseDiagram, V: VectorField | None = None, name: Callable = chain_label) -> str:
    """Edges point coface -> face; gradient pairs point face -> coface and are marked."""
    if V is not None:
        H = H.with_reversals(V.pairs)
    ids = {c: f"n{i}" for i, c in enumerate(H.nodes)}
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for c in H.nodes:
        attrs = [f"label={_q(name(c))}", f"dim={len(c) - 1}"]
        if V is not None and V.is_critical(c):
            attrs += ["critical=true", "color=red"]
        lines.append(f"  {ids[c]} [{', '.join(attrs)}];")
    for b, a in H.edges:
        if (a, b) in H.reversed:
            lines.append(f"  {ids[a]} -> {ids[b]} [reversed=true, color=blue, penwidth=2];")
        else:
            lines.append(f"  {ids[b]} -> {ids[a]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def skeleton_dot(cells: CellSet, V: VectorField | None = None, name: Callable = chain_label) -> str:
    """1-skeleton as an undirected graph; vertex-edge pairs drawn as arrows, critical cells in red."""
    verts = cells.by_dim.get(0, ())
    edges = cells.by_dim.get(1, ())
    ids = {c: f"v{i}" for i, c in enumerate(verts)}
    lines = ["graph skeleton {"]
    for c in verts:
        attrs = [f"label={_q(name(c))}"]
        if V is not None and V.is_critical(c):
            attrs += ["critical=true", "color=red"]
        lines.append(f"  {ids[c]} [{', '.join(attrs)}];")
    for e in edges:
        u, w = e[:1], e[1:]
        attrs = [f"label={_q(name(e))}"]
        if V is not None:
            if V.is_critical(e):
                attrs += ["critical=true", "color=red"]
            elif e in V.down and len(V.down[e]) == 1:
                tail = V.down[e]
                attrs += ["paired=true", "dir=forward" if tail == u else "dir=back"]
        lines.append(f"  {ids[u]} -- {ids[w]} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def filtration_dot(report: dict) -> str:
    """Events of a structure scan as a left-to-right chain."""
    lines = ["digraph filtration {", "  rankdir=LR;"]
    prev = None
    for i, e in enumerate(report["events"]):
        if e["kind"] == "attach":
            label = f"attach dim {e['dim']} at {e['value']}\\n{e['cell']}\\nbetti {e['betti_after']}"
            attrs = f"label={_q(label)}, critical=true, color=red"
        else:
            label = f"collapse {e['pairs']} pairs\\nbetti {e['betti']}"
            attrs = f"label={_q(label)}, shape=box"
        lines.append(f"  e{i} [{attrs}];")
        if prev is not None:
            lines.append(f"  {prev} -> e{i};")
        prev = f"e{i}"
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj, V: VectorField | None = None, name: Callable = chain_label, skeleton: bool = False) -> str:
    if isinstance(obj, HasseDiagram):
        return hasse_dot(obj, V, name)
    if isinstance(obj, VectorField):
        if skeleton:
            return skeleton_dot(obj.domain, obj, name)
        return hasse_dot(hasse_diagram(obj.domain), obj, name)
    if isinstance(obj, CellSet):
        return skeleton_dot(obj, V, name) if skeleton else hasse_dot(hasse_diagram(obj), V, name)
    if isinstance(obj, dict) and "events" in obj:
        return filtration_dot(obj)
    raise TypeError(f"cannot render {type(obj).__name__}")
