"""Declarations describing already-built objects, for writing them out."""
from __future__ import annotations

from ..core import FinCategory
from ..maps import Functor, NatTrans
from ..physproc import TransitionSystem
from .model import CategoryDecl, FunctorDecl, LtsDecl, NatTransDecl


def category_decl(name: str, cat: FinCategory) -> CategoryDecl:
    """Everything except the composites the identities already determine."""
    ident = cat.identity
    composites = []
    for (f, g), h in cat.comp.items():
        m_f, m_g = cat.morphism(f), cat.morphism(g)
        if ident.get(m_f.dom) == f and h == g:
            continue
        if ident.get(m_g.cod) == g and h == f:
            continue
        composites.append((g, f, h))
    return CategoryDecl(
        name, cat.objects,
        tuple((m.id, m.dom, m.cod, m.label) for m in cat.morphisms),
        tuple(ident.items()), tuple(composites), cat.null_object,
    )


def lts_decl(name: str, ts: TransitionSystem) -> LtsDecl:
    return LtsDecl(name, ts.states,
                   tuple((t.id, t.source, t.target, t.action) for t in ts.transitions))


def functor_decl(name: str, F: Functor, src: str, dst: str) -> FunctorDecl:
    derived = {}
    for o, i in F.src.identity.items():
        target = F.dst.identity.get(F.obj(o))
        if target is not None:
            derived[i] = target
    mor_map = tuple((f, u) for f, u in F.mor_map_names.items() if derived.get(f) != u)
    return FunctorDecl(name, src, dst, F.contravariant, F.theory_label,
                       tuple(F.obj_map_names.items()), mor_map)


def nattrans_decl(name: str, eta: NatTrans, source: str, target: str) -> NatTransDecl:
    return NatTransDecl(name, ("ref", source), ("ref", target),
                        tuple(eta.component_names.items()))
