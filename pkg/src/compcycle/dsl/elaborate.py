"""Turn parsed declarations into categories, functors and claims."""
from __future__ import annotations

from ..core import Morphism, new_category
from ..cycle import CycleClaim
from ..errors import CategoryError
from ..maps import (
    CONTRAVARIANT,
    COVARIANT,
    compose_functors,
    identity_functor,
    new_adjunction,
    new_functor,
    new_nat_trans,
)
from ..physproc import Transition, TransitionSystem
from .model import ERROR, INVALID, TYPE_MISMATCH, Diagnostic, SpecError, SpecFile


class Model:
    """Lazily built semantic objects for one spec, cached by name."""

    def __init__(self, spec: SpecFile):
        self.spec = spec
        self._cache = {}
        for name, cat in spec.prebuilt.items():
            self._cache[("cat", name)] = cat

    def _fail(self, decl, exc, code=TYPE_MISMATCH):
        line, col = self.spec.source_map.get((decl.kind, decl.name), (1, 1))
        raise SpecError([Diagnostic(ERROR, code, f"{decl.kind} {decl.name!r}: {exc}",
                                    line, col)])

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    def decl(self, kind, name):
        d = self.spec.get(kind, name)
        if d is None:
            raise KeyError(f"no {kind} named {name!r}")
        return d

    def category_decl(self, name):
        for kind in ("category", "quiver", "lts"):
            d = self.spec.get(kind, name)
            if d is not None:
                return d
        raise KeyError(f"no category named {name!r}")

    def category(self, name):
        return self._cached(("cat", name), lambda: self._build_category(name))

    def _build_category(self, name):
        d = self.category_decl(name)
        if d.kind != "category":  # pragma: no cover - prebuilt by the parser
            raise KeyError(name)
        dom = {m: a for m, a, _, _ in d.morphisms}
        cod = {m: b for m, _, b, _ in d.morphisms}
        ident = dict(d.identities)
        comp = {}
        for m in dom:
            i = ident.get(dom[m])
            if i is not None and cod[i] == dom[m]:
                comp[(i, m)] = m
            j = ident.get(cod[m])
            if j is not None and dom[j] == cod[m]:
                comp[(m, j)] = m
        for g, f, h in d.composites:
            comp[(f, g)] = h
        try:
            return new_category(d.objects, [Morphism(*m) for m in d.morphisms], ident, comp,
                                d.null)
        except CategoryError as exc:
            self._fail(d, exc, INVALID)

    def transition_system(self, name):
        d = self.decl("lts", name)
        return self._cached(("ts", name), lambda: TransitionSystem(
            d.states, tuple(Transition(*t) for t in d.transitions), f"lts {name}"))

    def functor(self, name):
        return self._cached(("functor", name), lambda: self._build_functor(name))

    def _build_functor(self, name):
        d = self.decl("functor", name)
        src, dst = self.category(d.src), self.category(d.dst)
        obj_map = dict(d.obj_map)
        mor_map = {}
        for o, i in src.identity.items():
            target = dst.identity.get(obj_map[o])
            if target is not None:
                mor_map[i] = target
        mor_map.update(d.mor_map)
        try:
            return new_functor(src, dst, obj_map, mor_map, d.theory,
                               CONTRAVARIANT if d.contravariant else COVARIANT)
        except CategoryError as exc:
            self._fail(d, exc)

    def fexpr(self, expr):
        tag = expr[0]
        if tag == "ref":
            return self.functor(expr[1])
        if tag == "id":
            return identity_functor(self.category(expr[1]))
        return compose_functors(self.fexpr(expr[2]), self.fexpr(expr[1]))

    def nattrans(self, name):
        return self._cached(("nattrans", name), lambda: self._build_nattrans(name))

    def _build_nattrans(self, name):
        d = self.decl("nattrans", name)
        try:
            return new_nat_trans(self.fexpr(d.source), self.fexpr(d.target), dict(d.components))
        except CategoryError as exc:
            self._fail(d, exc)

    def adjunction(self, name):
        d = self.decl("adjunction", name)

        def build():
            try:
                return new_adjunction(self.functor(d.left), self.functor(d.right),
                                      self.nattrans(d.unit), self.nattrans(d.counit))
            except CategoryError as exc:
                self._fail(d, exc)
        return self._cached(("adjunction", name), build)

    def cycle_claim(self, name, direction="compute"):
        d = self.decl("claim", name)
        if d.R is None or d.Rt is None:
            self._fail(d, "needs phys, abs, R and Rt")

        def build():
            try:
                return CycleClaim(self.category(d.phys), self.category(d.abs),
                                  self.functor(d.R), self.functor(d.Rt),
                                  "predict" if direction == "predict" else "compute")
            except CategoryError as exc:
                self._fail(d, exc)
        return self._cached(("claim", name, direction), build)


def elaborate(spec: SpecFile) -> Model:
    return Model(spec)
