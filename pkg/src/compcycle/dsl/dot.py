"""Graphviz DOT rendering. Output depends only on the rendered object, so
identical input gives byte-identical text."""
from __future__ import annotations

from ..core import FinCategory
from ..cycle import CycleClaim
from ..maps import NatTrans


def _q(text):
    return '"' + str(text).replace("\\", "\\\\").replace('"', '\\"') + '"'


def _category_lines(cat: FinCategory, prefix="", identities=True):
    lines = [f"  {_q(prefix + o)} [label={_q(o)}];" for o in cat.objects]
    for m in cat.morphisms:
        if not identities and cat.identity.get(m.dom) == m.id:
            continue
        lines.append(f"  {_q(prefix + m.dom)} -> {_q(prefix + m.cod)} [label={_q(m.id)}];")
    return lines


def category_dot(cat: FinCategory, name="C") -> str:
    out = [f"digraph {_q(name)} {{", "  rankdir=LR;", "  node [shape=ellipse];"]
    out += _category_lines(cat)
    out.append("}")
    return "\n".join(out) + "\n"


def _row(label, cat, prefix, identities):
    body = ["  " + line for line in _category_lines(cat, prefix, identities)]
    nodes = " ".join(_q(prefix + o) for o in cat.objects)
    return [
        f"  subgraph {_q('cluster_' + label)} {{",
        f"    label={_q(label)};",
        f"    {{ rank=same; {nodes} }}" if nodes else "    { rank=same; }",
        *body,
        "  }",
    ]


def claim_dot(claim: CycleClaim, name="claim", identities=False) -> str:
    """Two rows: the physical category on top, the abstraction below, joined
    by R (down, dashed) and Rt (up, dotted)."""
    P, A, R, Rt = claim.phys, claim.abs, claim.R, claim.Rt
    out = [f"digraph {_q(name)} {{", "  rankdir=TB;", "  newrank=true;",
           "  node [shape=ellipse];"]
    out += _row("phys", P, "phys:", identities)
    out += _row("abs", A, "abs:", identities)
    for p in P.objects:
        out.append(f"  {_q('phys:' + p)} -> {_q('abs:' + R.obj(p))} "
                   f"[label=\"R\", style=dashed, constraint=true];")
    for a in A.objects:
        out.append(f"  {_q('abs:' + a)} -> {_q('phys:' + Rt.obj(a))} "
                   f"[label=\"Rt\", style=dotted, constraint=false];")
    out.append("}")
    return "\n".join(out) + "\n"


def nattrans_dot(eta: NatTrans, name="eta") -> str:
    """The source functor's image on top, the target's below, components
    as vertical arrows."""
    F, G = eta.F, eta.G
    src = eta.src
    out = [f"digraph {_q(name)} {{", "  rankdir=TB;", "  newrank=true;",
           "  node [shape=ellipse];"]
    for label, H in (("F", F), ("G", G)):
        out.append(f"  subgraph {_q('cluster_' + label)} {{")
        out.append(f"    label={_q(label)};")
        nodes = " ".join(_q(f"{label}:{a}") for a in src.objects)
        out.append(f"    {{ rank=same; {nodes} }}")
        for a in src.objects:
            out.append(f"    {_q(f'{label}:{a}')} [label={_q(f'{label}({a}) = {H.obj(a)}')}];")
        for m in src.morphisms:
            if src.identity.get(m.dom) == m.id:
                continue
            a, b = (m.cod, m.dom) if H.contravariant else (m.dom, m.cod)
            out.append(f"    {_q(f'{label}:{a}')} -> {_q(f'{label}:{b}')} "
                       f"[label={_q(H.mor(m.id))}];")
        out.append("  }")
    for a in src.objects:
        out.append(f"  {_q('F:' + a)} -> {_q('G:' + a)} [label={_q(eta.at(a))}, style=bold];")
    out.append("}")
    return "\n".join(out) + "\n"


def export_dot(obj, name=None) -> str:
    if isinstance(obj, FinCategory):
        return category_dot(obj, name or "C")
    if isinstance(obj, CycleClaim):
        return claim_dot(obj, name or "claim")
    if isinstance(obj, NatTrans):
        return nattrans_dot(obj, name or "eta")
    raise TypeError(f"cannot render {type(obj).__name__}")
