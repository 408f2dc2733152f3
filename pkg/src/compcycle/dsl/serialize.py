"""Canonical text for a :class:`SpecFile`.

Blocks are ordered by kind and then name; members are sorted. Composites and
functor images implied by the identities are left out because the parser
derives them again.
"""
from __future__ import annotations

from .lexer import format_id as q
from .model import SpecFile, decl_key

INDENT = "  "


def _arrow(kw, name, src, dst, label):
    text = f"{kw} {q(name)}: {q(src)} -> {q(dst)}"
    return text + (f" @{q(label)}" if label is not None else "")


def _ids(key, names):
    return f"{key}: " + " ".join(q(n) for n in names) if names else f"{key}:"


def _fexpr(expr):
    if expr[0] == "ref":
        return q(expr[1])
    if expr[0] == "id":
        return f"Id({q(expr[1])})"
    return f"{_fexpr(expr[1])} . {_fexpr(expr[2])}"


def _category(d):
    yield f"category {q(d.name)} {{"
    yield INDENT + _ids("objects", d.objects)
    if d.null is not None:
        yield INDENT + f"null: {q(d.null)}"
    for m in d.morphisms:
        yield INDENT + _arrow("mor", *m)
    for o, m in d.identities:
        yield INDENT + f"id {q(o)} = {q(m)}"
    for g, f, h in d.composites:
        yield INDENT + f"comp {q(g)} . {q(f)} = {q(h)}"
    yield "}"


def _quiver(d):
    yield f"quiver {q(d.name)} {{"
    yield INDENT + _ids("nodes", d.nodes)
    for e in d.edges:
        yield INDENT + _arrow("edge", *e)
    yield "}"


def _lts(d):
    yield f"lts {q(d.name)} {{"
    yield INDENT + _ids("states", d.states)
    for t in d.transitions:
        yield INDENT + _arrow("trans", *t)
    yield "}"


def _functor(d):
    flag = " contravariant" if d.contravariant else ""
    yield f"functor {q(d.name)}: {q(d.src)} -> {q(d.dst)}{flag} {{"
    if d.theory is not None:
        yield INDENT + f"theory: {q(d.theory)}"
    for a, x in d.obj_map:
        yield INDENT + f"obj {q(a)} => {q(x)}"
    for f, u in d.mor_map:
        yield INDENT + f"mor {q(f)} => {q(u)}"
    yield "}"


def _nattrans(d):
    yield f"nattrans {q(d.name)}: {_fexpr(d.source)} => {_fexpr(d.target)} {{"
    for a, u in d.components:
        yield INDENT + f"at {q(a)}: {q(u)}"
    yield "}"


def _adjunction(d):
    yield f"adjunction {q(d.name)} {{"
    yield INDENT + f"F: {q(d.left)}"
    yield INDENT + f"G: {q(d.right)}"
    yield INDENT + f"unit: {q(d.unit)}"
    yield INDENT + f"counit: {q(d.counit)}"
    yield "}"


def _claim(d):
    yield f"claim {q(d.name)} {{"
    yield INDENT + f"direction: {d.direction}"
    for key in ("phys", "abs", "R", "Rt", "R_prime", "eta", "mode"):
        value = getattr(d, key)
        if value is not None:
            yield INDENT + f"{key}: {q(value)}"
    for key in ("chain", "layers", "links"):
        value = getattr(d, key)
        if value:
            yield INDENT + _ids(key, value)
    for r in d.realizations:
        yield INDENT + _ids("realize", r)
    yield "}"


def _audit(d):
    yield f"audit {q(d.name)} {{"
    yield INDENT + f"phys: {q(d.phys)}"
    yield INDENT + f"abs: {q(d.abs)}"
    yield "}"


_WRITERS = {
    "category": _category,
    "quiver": _quiver,
    "lts": _lts,
    "functor": _functor,
    "nattrans": _nattrans,
    "adjunction": _adjunction,
    "claim": _claim,
    "audit": _audit,
}


def serialize_decl(decl) -> str:
    return "\n".join(_WRITERS[decl.kind](decl)) + "\n"


def serialize(spec: SpecFile) -> str:
    blocks = [serialize_decl(d) for d in sorted(spec.declarations, key=decl_key)]
    return "\n".join(blocks)

