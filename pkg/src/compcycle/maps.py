"""Functors, natural transformations and adjunctions between finite categories.

Composite functors are written in application order: ``compose_functors(F, G)``
applies ``F`` first, i.e. it is ``G . F``.

Adjunctions follow the layout ``F: D -> C``, ``G: C -> D`` with the unit
``Id_C => F . G`` and the counit ``G . F => Id_D``; the triangle identities are

    counit[G(c)] . G(unit[c]) == id_{G(c)}     for every c in C
    F(counit[d]) . unit[F(d)] == id_{F(d)}     for every d in D
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import kernels
from .core import (
    DEFAULT_MAX_WITNESSES,
    FinCategory,
    LawReport,
    Witness,
    _frozen,
    report_from_rows,
    witnesses_from_rows,
)
from .errors import CategoryError

COVARIANT = "covariant"
CONTRAVARIANT = "contravariant"
DEFAULT_BUDGET = 10**6

FUNCTOR_AXIOMS = ("TYPING", "IDENTITY", "COMPOSITION")
_FUNCTOR_KINDS = ("m", "o", "mm")
NATURALITY_AXIOMS = ("COMPONENT", "NATURALITY")
_NATURALITY_KINDS = ("o", "m")


def same_category(a: FinCategory, b: FinCategory) -> bool:
    return a is b or a == b


class Functor:
    """Structure-preserving map, stored as index arrays into ``dst``."""

    def __init__(self, src, dst, obj_map, mor_map, theory_label=None, variance=COVARIANT):
        if variance not in (COVARIANT, CONTRAVARIANT):
            raise CategoryError("BAD_VARIANCE", f"unknown variance {variance!r}")
        self.src = src
        self.dst = dst
        self.obj_map = _frozen(obj_map)
        self.mor_map = _frozen(mor_map)
        self.theory_label = theory_label
        self.variance = variance

    @property
    def contravariant(self):
        return self.variance == CONTRAVARIANT

    def obj(self, name):
        return self.dst.objects[self.obj_map[self.src.obj(name)]]

    def mor(self, name):
        return self.dst.mor_ids[self.mor_map[self.src.mor(name)]]

    @property
    def obj_map_names(self):
        return {a: self.dst.objects[x] for a, x in zip(self.src.objects, self.obj_map)}

    @property
    def mor_map_names(self):
        return {f: self.dst.mor_ids[u] for f, u in zip(self.src.mor_ids, self.mor_map)}

    def with_maps(self, obj_map=None, mor_map=None):
        return Functor(
            self.src, self.dst,
            self.obj_map if obj_map is None else obj_map,
            self.mor_map if mor_map is None else mor_map,
            self.theory_label, self.variance,
        )

    def __eq__(self, other):
        if not isinstance(other, Functor):
            return NotImplemented
        return (
            self.variance == other.variance
            and same_category(self.src, other.src)
            and same_category(self.dst, other.dst)
            and np.array_equal(self.obj_map, other.obj_map)
            and np.array_equal(self.mor_map, other.mor_map)
        )

    __hash__ = None

    def __repr__(self):
        label = f" {self.theory_label}" if self.theory_label else ""
        return f"<Functor{label} {self.variance} {self.src!r} -> {self.dst!r}>"


def new_functor(src: FinCategory, dst: FinCategory, obj_map: Mapping[str, str],
                mor_map: Mapping[str, str], theory_label=None, variance=COVARIANT) -> Functor:
    missing = [a for a in src.objects if a not in obj_map]
    missing += [f for f in src.mor_ids if f not in mor_map]
    if missing:
        raise CategoryError("PARTIAL_MAP", f"no image for {', '.join(missing)}", missing)
    for key, table in ((obj_map, src.obj_index), (mor_map, src.mor_index)):
        for k in key:
            if k not in table:
                raise CategoryError("DANGLING_REFERENCE", f"{k!r} is not in the source", (k,))
    try:
        objs = [dst.obj_index[obj_map[a]] for a in src.objects]
    except KeyError as exc:
        raise CategoryError("DANGLING_REFERENCE", f"{exc.args[0]!r} is not a target object",
                            (exc.args[0],)) from None
    try:
        mors = [dst.mor_index[mor_map[f]] for f in src.mor_ids]
    except KeyError as exc:
        raise CategoryError("DANGLING_REFERENCE", f"{exc.args[0]!r} is not a target morphism",
                            (exc.args[0],)) from None
    return Functor(src, dst, objs, mors, theory_label, variance)


def identity_functor(cat: FinCategory) -> Functor:
    return Functor(cat, cat, np.arange(cat.n_objects), np.arange(cat.n_morphisms))


def functor_rows(F: Functor):
    """Violation rows of F's laws. Functors are immutable, so the scan runs
    once per instance."""
    rows = F.__dict__.get("_law_rows")
    if rows is None:
        rows = _functor_scan(F)
        rows.flags.writeable = False
        F.__dict__["_law_rows"] = rows
    return rows


def _functor_scan(F: Functor):
    s, d = F.src, F.dst
    return kernels.functor_violations(
        s.dom, s.cod, s.ident, s.layout.pair_f, s.layout.pair_g, s.comp_tab,
        d.dom, d.cod, d.ident, d.layout.row_ptr, d.layout.out_pos, d.comp_tab,
        F.obj_map, F.mor_map, F.contravariant,
    )


def functor_report(F: Functor, rows, max_witnesses=DEFAULT_MAX_WITNESSES, detail=""):
    tables = {"o": F.src.objects, "m": F.src.mor_ids}
    return report_from_rows(rows, FUNCTOR_AXIOMS, _FUNCTOR_KINDS, tables, max_witnesses, detail)


def check_functor_laws(F: Functor, max_witnesses=DEFAULT_MAX_WITNESSES) -> LawReport:
    """Typing, identity preservation and composition preservation, exhaustively."""
    return functor_report(F, functor_rows(F), max_witnesses)


def compose_functors(F: Functor, G: Functor) -> Functor:
    """``G . F``: apply F, then G."""
    if not same_category(F.dst, G.src):
        raise CategoryError("NOT_COMPOSABLE", "target of the first functor is not the source "
                            "of the second")
    variance = COVARIANT if F.contravariant == G.contravariant else CONTRAVARIANT
    labels = [x for x in (F.theory_label, G.theory_label) if x]
    return Functor(F.src, G.dst, G.obj_map[F.obj_map], G.mor_map[F.mor_map],
                   ";".join(labels) or None, variance)


@dataclass(frozen=True)
class InversePairReport:
    rt_functorial: LawReport
    rtt_functorial: LawReport
    left_identity_ok: bool
    right_identity_ok: bool
    witnesses: tuple[Witness, ...] = ()

    @property
    def ok(self):
        return (self.rt_functorial.ok and self.rtt_functorial.ok
                and self.left_identity_ok and self.right_identity_ok)

    def __bool__(self):
        return self.ok


def roundtrip_witnesses(first: Functor, second: Functor, axiom, limit=None):
    """Witnesses where ``second . first`` differs from the identity on first.src."""
    if first.contravariant != second.contravariant:
        return [Witness(axiom, (), "composite is contravariant")], 1
    rows = kernels.sort_rows(kernels.roundtrip_violations(
        first.obj_map, second.obj_map, first.mor_map, second.mor_map))
    tables = {"o": first.src.objects, "m": first.src.mor_ids}
    wit = witnesses_from_rows(rows, (axiom, axiom), ("o", "m"), tables, limit)
    wit = [Witness(w.axiom, w.ids, "object" if r[0] == 0 else "morphism")
           for w, r in zip(wit, rows)]
    return wit, len(rows)


def _check_pair_typing(R, Rt):
    if not (same_category(R.dst, Rt.src) and same_category(Rt.dst, R.src)):
        raise CategoryError("NOT_COMPOSABLE", "the functors do not run between the same two "
                            "categories in opposite directions")


def check_inverse_pair(R: Functor, Rt: Functor,
                       max_witnesses=DEFAULT_MAX_WITNESSES) -> InversePairReport:
    """Both functors lawful, ``Rt . R == Id`` and ``R . Rt == Id`` strictly."""
    _check_pair_typing(R, Rt)
    left, n_left = roundtrip_witnesses(R, Rt, "INVERSE_LEFT", max_witnesses)
    right, n_right = roundtrip_witnesses(Rt, R, "INVERSE_RIGHT", max_witnesses)
    return InversePairReport(
        check_functor_laws(R, max_witnesses),
        check_functor_laws(Rt, max_witnesses),
        n_left == 0,
        n_right == 0,
        tuple((left + right)[:max_witnesses]),
    )


class NatTrans:
    """Components ``F(a) -> G(a)`` indexed by the objects of the common source."""

    def __init__(self, F: Functor, G: Functor, components):
        self.F = F
        self.G = G
        self.components = _frozen(components)

    @property
    def src(self):
        return self.F.src

    @property
    def dst(self):
        return self.F.dst

    def at(self, obj):
        return self.dst.mor_ids[self.components[self.src.obj(obj)]]

    @property
    def component_names(self):
        return {a: self.dst.mor_ids[c] for a, c in zip(self.src.objects, self.components)}

    def with_components(self, components):
        return NatTrans(self.F, self.G, components)

    def __eq__(self, other):
        if not isinstance(other, NatTrans):
            return NotImplemented
        return (self.F == other.F and self.G == other.G
                and np.array_equal(self.components, other.components))

    __hash__ = None

    def __repr__(self):
        return f"<NatTrans {self.component_names}>"


def _check_parallel(F, G):
    if not (same_category(F.src, G.src) and same_category(F.dst, G.dst)):
        raise CategoryError("NOT_PARALLEL", "functors do not share source and target")
    if F.variance != G.variance:
        raise CategoryError("NOT_PARALLEL", "mixed-variance transformations are not supported")


def new_nat_trans(F: Functor, G: Functor, components: Mapping[str, str]) -> NatTrans:
    _check_parallel(F, G)
    src, dst = F.src, F.dst
    missing = [a for a in src.objects if a not in components]
    if missing:
        raise CategoryError("PARTIAL_MAP", f"no component at {', '.join(missing)}", missing)
    comps = []
    for a in src.objects:
        m = components[a]
        if m not in dst.mor_index:
            raise CategoryError("DANGLING_REFERENCE", f"component {m!r} is not a morphism", (m,))
        comps.append(dst.mor_index[m])
    for a in components:
        if a not in src.obj_index:
            raise CategoryError("DANGLING_REFERENCE", f"{a!r} is not a source object", (a,))
    return NatTrans(F, G, comps)


def identity_nat_trans(F: Functor) -> NatTrans:
    return NatTrans(F, F, F.dst.ident[F.obj_map])


def naturality_rows(eta: NatTrans):
    F, G = eta.F, eta.G
    s, d = F.src, F.dst
    return kernels.naturality_violations(
        s.dom, s.cod, s.n_objects,
        d.dom, d.cod, d.layout.row_ptr, d.layout.out_pos, d.comp_tab,
        F.obj_map, F.mor_map, G.obj_map, G.mor_map, eta.components, F.contravariant,
    )


def check_naturality(eta: NatTrans, max_witnesses=DEFAULT_MAX_WITNESSES, detail="") -> LawReport:
    """Every component typed ``F(a) -> G(a)`` and every square
    ``G(f) . eta[a] == eta[b] . F(f)`` commuting."""
    tables = {"o": eta.src.objects, "m": eta.src.mor_ids}
    return report_from_rows(naturality_rows(eta), NATURALITY_AXIOMS, _NATURALITY_KINDS,
                            tables, max_witnesses, detail)


def vertical_compose(eta: NatTrans, theta: NatTrans) -> NatTrans:
    """``theta . eta``: F => G followed by G => H, componentwise."""
    if not eta.G == theta.F:
        raise CategoryError("NOT_COMPOSABLE", "middle functors differ")
    dst = eta.dst
    comps = []
    for a, (x, y) in enumerate(zip(eta.components, theta.components)):
        h = dst.lookup(x, y)
        if h < 0:
            raise CategoryError("NOT_COMPOSABLE", "components at "
                                f"{eta.src.objects[a]} do not compose", (eta.src.objects[a],))
        comps.append(h)
    return NatTrans(eta.F, theta.G, comps)


@dataclass(frozen=True)
class Adjunction:
    F: Functor  # D -> C
    G: Functor  # C -> D
    unit: NatTrans  # Id_C => F . G
    counit: NatTrans  # G . F => Id_D


def new_adjunction(F: Functor, G: Functor, unit: NatTrans, counit: NatTrans) -> Adjunction:
    if not (same_category(F.src, G.dst) and same_category(F.dst, G.src)):
        raise CategoryError("ILL_TYPED_ADJUNCTION", "F and G must run in opposite directions")
    C, D = F.dst, F.src
    if not (unit.F == identity_functor(C) and unit.G == compose_functors(G, F)):
        raise CategoryError("ILL_TYPED_ADJUNCTION", "unit must run from Id_C to F.G")
    if not (counit.F == compose_functors(F, G) and counit.G == identity_functor(D)):
        raise CategoryError("ILL_TYPED_ADJUNCTION", "counit must run from G.F to Id_D")
    return Adjunction(F, G, unit, counit)


def adjunction_from_components(F: Functor, G: Functor, unit: Mapping[str, str],
                               counit: Mapping[str, str]) -> Adjunction:
    C, D = F.dst, F.src
    u = new_nat_trans(identity_functor(C), compose_functors(G, F), unit)
    e = new_nat_trans(compose_functors(F, G), identity_functor(D), counit)
    return new_adjunction(F, G, u, e)


def identity_adjunction(cat: FinCategory) -> Adjunction:
    idf = identity_functor(cat)
    idt = identity_nat_trans(idf)
    return Adjunction(idf, idf, idt, idt)


def check_adjunction(adj: Adjunction, max_witnesses=DEFAULT_MAX_WITNESSES) -> LawReport:
    """Unit and counit naturality, then both triangle identities per object."""
    F, G = adj.F, adj.G
    C, D = F.dst, F.src
    parts = [
        check_naturality(adj.unit, None, "unit").violations,
        check_naturality(adj.counit, None, "counit").violations,
    ]
    rows = kernels.sort_rows(kernels.triangle_violations(
        C.dom, C.cod, C.ident, C.layout.row_ptr, C.layout.out_pos, C.comp_tab,
        D.dom, D.cod, D.ident, D.layout.row_ptr, D.layout.out_pos, D.comp_tab,
        F.obj_map, F.mor_map, G.obj_map, G.mor_map,
        adj.unit.components, adj.counit.components,
    ))
    details = ("counit[G(c)] . G(unit[c]) != id", "F(counit[d]) . unit[F(d)] != id")
    tri = [
        Witness("TRIANGLE", ((C if code == 0 else D).objects[int(i)],), details[code])
        for code, i, _, _ in rows
    ]
    parts.append(tuple(tri))
    allw = [w for p in parts for w in p]
    shown = tuple(allw[:max_witnesses])
    return LawReport(shown, truncated=len(allw) > len(shown), total=len(allw))


# -- brute-force enumerators ------------------------------------------------

def _spend(counter, budget):
    counter[0] += 1
    if counter[0] > budget:
        raise CategoryError("BUDGET_EXCEEDED", f"more than {budget} candidates examined")


def _constraints_by_last(src: FinCategory):
    """Composition entries keyed by the largest morphism index they involve."""
    by_last = [[] for _ in range(src.n_morphisms)]
    lay = src.layout
    for f, g, h in zip(lay.pair_f, lay.pair_g, src.comp_tab):
        if h >= 0:
            by_last[max(f, g, h)].append((int(f), int(g), int(h)))
    return by_last


def enumerate_functors(src: FinCategory, dst: FinCategory, budget=DEFAULT_BUDGET,
                       variance=COVARIANT) -> list[Functor]:
    """All lawful functors, ordered lexicographically by (obj_map, mor_map)."""
    contra = variance == CONTRAVARIANT
    by_last = _constraints_by_last(src)
    ident_of = {int(i): a for a, i in enumerate(src.ident) if i >= 0}
    counter = [0]
    results = []
    n_mor = src.n_morphisms

    for obj_map in itertools.product(range(dst.n_objects), repeat=src.n_objects):
        _spend(counter, budget)
        cands = []
        for f in range(n_mor):
            a, b = obj_map[src.dom[f]], obj_map[src.cod[f]]
            if contra:
                a, b = b, a
            if f in ident_of:
                i = int(dst.ident[a]) if a == b else -1
                cands.append([i] if i >= 0 else [])
            else:
                cands.append([int(x) for x in dst.hom_indices(a, b)])
        if any(not c for c in cands):
            continue
        mor_map = [0] * n_mor

        def consistent(k):
            for f, g, h in by_last[k]:
                x, y = mor_map[f], mor_map[g]
                if contra:
                    x, y = y, x
                if dst.lookup(x, y) != mor_map[h]:
                    return False
            return True

        def search(k):
            if k == n_mor:
                results.append(Functor(src, dst, obj_map, list(mor_map), None, variance))
                return
            for m in cands[k]:
                _spend(counter, budget)
                mor_map[k] = m
                if consistent(k):
                    search(k + 1)

        search(0)
    return results


def enumerate_nat_trans(F: Functor, G: Functor, budget=DEFAULT_BUDGET) -> list[NatTrans]:
    """All natural transformations F => G, lexicographic by components."""
    _check_parallel(F, G)
    src, dst = F.src, F.dst
    contra = F.contravariant
    cands = [[int(x) for x in dst.hom_indices(F.obj_map[a], G.obj_map[a])]
             for a in range(src.n_objects)]
    squares = [[] for _ in range(src.n_objects)]
    for f in range(src.n_morphisms):
        a, b = int(src.dom[f]), int(src.cod[f])
        squares[max(a, b)].append((f, a, b))
    counter = [0]
    results = []
    comps = [0] * src.n_objects

    def commutes(k):
        for f, a, b in squares[k]:
            ea, eb = comps[a], comps[b]
            if contra:
                lhs = dst.lookup(F.mor_map[f], ea)
                rhs = dst.lookup(eb, G.mor_map[f])
            else:
                lhs = dst.lookup(ea, G.mor_map[f])
                rhs = dst.lookup(F.mor_map[f], eb)
            if lhs < 0 or lhs != rhs:
                return False
        return True

    def search(k):
        if k == src.n_objects:
            results.append(NatTrans(F, G, list(comps)))
            return
        for m in cands[k]:
            _spend(counter, budget)
            comps[k] = m
            if commutes(k):
                search(k + 1)

    if src.n_objects == 0:
        _spend(counter, budget)
    search(0)
    return results
