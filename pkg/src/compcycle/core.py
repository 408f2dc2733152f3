"""Finite categories stored as explicit composition tables.

A :class:`FinCategory` keeps objects and morphisms in lexicographic order and
stores everything else as int64 index arrays, so that law checks reduce to
table lookups inside the kernels. Name-level views (``identity``, ``comp``,
``morphisms``) are derived on demand.

Composition is written diagrammatically in tables: ``comp[(f, g)]`` is the
composite *g after f*, defined exactly when ``cod(f) == dom(g)``.
"""
from __future__ import annotations

import graphlib
from dataclasses import dataclass
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import CategoryError

DEFAULT_MAX_WITNESSES = 10

CATEGORY_AXIOMS = (
    "MISSING_IDENTITY",
    "IDENTITY_TYPING",
    "COMP_TYPING",
    "CLOSURE",
    "LEFT_IDENTITY",
    "RIGHT_IDENTITY",
    "ASSOCIATIVITY",
    "NULL_NOT_INITIAL",
    "NULL_NOT_TERMINAL",
)
# which name table each witness slot draws from: o = object, m = morphism
_CATEGORY_KINDS = ("o", "om", "mmm", "mm", "m", "m", "mmm", "o", "o")


@dataclass(frozen=True)
class Morphism:
    id: str
    dom: str
    cod: str
    label: str | None = None


@dataclass(frozen=True)
class Witness:
    """One violated law instance: the axiom name plus the offending ids."""

    axiom: str
    ids: tuple[str, ...]
    detail: str = ""

    def __str__(self):
        text = f"{self.axiom}({', '.join(self.ids)})"
        return f"{text} [{self.detail}]" if self.detail else text

    def to_dict(self):
        return {"axiom": self.axiom, "ids": list(self.ids), "detail": self.detail}


@dataclass(frozen=True)
class LawReport:
    violations: tuple[Witness, ...] = ()
    truncated: bool = False
    total: int = 0

    @property
    def ok(self):
        return not self.violations

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {
            "ok": self.ok,
            "total": self.total,
            "truncated": self.truncated,
            "violations": [w.to_dict() for w in self.violations],
        }


def witnesses_from_rows(rows, axioms, kinds, tables, limit=None, detail=""):
    """Translate sorted kernel rows into named witnesses (at most ``limit``)."""
    out = []
    for row in rows[: limit if limit is not None else len(rows)]:
        code = int(row[0])
        ids = tuple(tables[k][int(i)] for k, i in zip(kinds[code], row[1:]))
        out.append(Witness(axioms[code], ids, detail))
    return out


def report_from_rows(rows, axioms, kinds, tables, max_witnesses=DEFAULT_MAX_WITNESSES,
                     detail=""):
    rows = kernels.sort_rows(rows)
    total = len(rows)
    wit = witnesses_from_rows(rows, axioms, kinds, tables, max_witnesses, detail)
    return LawReport(tuple(wit), truncated=total > len(wit), total=total)


def check_id(name):
    if not isinstance(name, str) or not name or not name.isprintable() or any(
        ch.isspace() for ch in name
    ):
        raise CategoryError("INVALID_ID", f"bad identifier {name!r}", (str(name),))
    return name


def _frozen(arr):
    arr = np.ascontiguousarray(arr, dtype=np.int64)
    arr.flags.writeable = False
    return arr


class Layout:
    """Index structure derived from dom/cod only; shared by table mutations."""

    def __init__(self, dom, cod, n_obj):
        n_mor = len(dom)
        out_list = np.argsort(dom, kind="stable")
        counts = np.bincount(dom, minlength=n_obj).astype(np.int64)
        out_ptr = np.concatenate(([0], np.cumsum(counts)))
        out_pos = np.empty(n_mor, dtype=np.int64)
        out_pos[out_list] = np.arange(n_mor) - out_ptr[dom[out_list]]
        row_len = counts[cod] if n_mor else np.zeros(0, dtype=np.int64)
        row_ptr = np.concatenate(([0], np.cumsum(row_len)))
        n_pairs = int(row_ptr[-1])
        pair_f = np.repeat(np.arange(n_mor), row_len)
        pair_g = out_list[out_ptr[cod[pair_f]] + (np.arange(n_pairs) - row_ptr[pair_f])]
        self.out_list = _frozen(out_list)
        self.out_ptr = _frozen(out_ptr)
        self.out_pos = _frozen(out_pos)
        self.row_ptr = _frozen(row_ptr)
        self.pair_f = _frozen(pair_f)
        self.pair_g = _frozen(pair_g)

    @property
    def n_pairs(self):
        return len(self.pair_f)


class FinCategory:
    """A finite category with a total (or reportably partial) table.

    Construct through :func:`new_category`; the raw constructor takes index
    arrays and performs no validation, which is what mutation tests use.
    """

    def __init__(self, objects, mor_ids, dom, cod, identity, comp, null=-1,
                 labels=None, layout=None):
        self.objects = tuple(objects)
        self.mor_ids = tuple(mor_ids)
        self.dom = _frozen(dom)
        self.cod = _frozen(cod)
        self.ident = _frozen(identity)
        self.comp_tab = _frozen(comp)
        self.null = int(null)
        self.labels = tuple(labels) if labels is not None else (None,) * len(self.mor_ids)
        self.layout = layout if layout is not None else Layout(self.dom, self.cod, len(self.objects))
        if len(self.comp_tab) != self.layout.n_pairs:
            raise ValueError("composition table does not match layout")

    # -- name-level views -------------------------------------------------
    @cached_property
    def obj_index(self):
        return {o: i for i, o in enumerate(self.objects)}

    @cached_property
    def mor_index(self):
        return {m: i for i, m in enumerate(self.mor_ids)}

    @cached_property
    def morphisms(self):
        return tuple(
            Morphism(m, self.objects[d], self.objects[c], lab)
            for m, d, c, lab in zip(self.mor_ids, self.dom, self.cod, self.labels)
        )

    @cached_property
    def identity(self):
        return MappingProxyType({
            self.objects[a]: self.mor_ids[i] for a, i in enumerate(self.ident) if i >= 0
        })

    @cached_property
    def comp(self):
        lay = self.layout
        return MappingProxyType({
            (self.mor_ids[f], self.mor_ids[g]): self.mor_ids[h]
            for f, g, h in zip(lay.pair_f, lay.pair_g, self.comp_tab)
            if h >= 0
        })

    @property
    def null_object(self):
        return self.objects[self.null] if self.null >= 0 else None

    def morphism(self, name):
        try:
            return self.morphisms[self.mor_index[name]]
        except KeyError:
            raise CategoryError("UNKNOWN_MOR", f"no morphism {name!r}", (name,)) from None

    def obj(self, name):
        try:
            return self.obj_index[name]
        except KeyError:
            raise CategoryError("UNKNOWN_OBJ", f"no object {name!r}", (name,)) from None

    def mor(self, name):
        try:
            return self.mor_index[name]
        except KeyError:
            raise CategoryError("UNKNOWN_MOR", f"no morphism {name!r}", (name,)) from None

    def lookup(self, f, g):
        """Index of the composite of f then g, or -1."""
        if self.cod[f] != self.dom[g]:
            return -1
        return int(self.comp_tab[self.layout.row_ptr[f] + self.layout.out_pos[g]])

    def hom_indices(self, a, b):
        lay = self.layout
        out = lay.out_list[lay.out_ptr[a]:lay.out_ptr[a + 1]]
        return out[self.cod[out] == b]

    def with_tables(self, identity=None, comp=None):
        """Copy with a replaced identity array and/or composition table."""
        return FinCategory(
            self.objects, self.mor_ids, self.dom, self.cod,
            self.ident if identity is None else identity,
            self.comp_tab if comp is None else comp,
            self.null, self.labels, self.layout,
        )

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.mor_ids)

    def kernel_args(self):
        lay = self.layout
        return (self.dom, self.cod, self.ident, lay.out_ptr, lay.out_list, lay.out_pos,
                lay.row_ptr, lay.pair_f, lay.pair_g, self.comp_tab, self.null)

    def __eq__(self, other):
        if not isinstance(other, FinCategory):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.mor_ids == other.mor_ids
            and self.labels == other.labels
            and self.null == other.null
            and np.array_equal(self.dom, other.dom)
            and np.array_equal(self.cod, other.cod)
            and np.array_equal(self.ident, other.ident)
            and np.array_equal(self.comp_tab, other.comp_tab)
        )

    __hash__ = None

    def __repr__(self):
        return f"<FinCategory {self.n_objects} objects, {self.n_morphisms} morphisms>"


def _as_morphism(m):
    if isinstance(m, Morphism):
        return m
    return Morphism(*m)


def new_category(objects: Iterable[str], morphisms, identity: Mapping[str, str],
                 comp: Mapping[tuple[str, str], str], null_object: str | None = None):
    """Build a category exactly as given; laws are not checked here."""
    objects = [check_id(o) for o in objects]
    morphisms = [_as_morphism(m) for m in morphisms]
    seen = set()
    for o in objects:
        if o in seen:
            raise CategoryError("DUPLICATE_ID", f"object {o!r} declared twice", (o,))
        seen.add(o)
    seen = set()
    for m in morphisms:
        check_id(m.id)
        if m.id in seen:
            raise CategoryError("DUPLICATE_ID", f"morphism {m.id!r} declared twice", (m.id,))
        seen.add(m.id)

    objects.sort()
    morphisms.sort(key=lambda m: m.id)
    oi = {o: i for i, o in enumerate(objects)}
    mi = {m.id: i for i, m in enumerate(morphisms)}

    def obj_ref(name, where):
        try:
            return oi[name]
        except KeyError:
            raise CategoryError("DANGLING_REFERENCE", f"{where} names unknown object {name!r}",
                                (name,)) from None

    def mor_ref(name, where):
        try:
            return mi[name]
        except KeyError:
            raise CategoryError("DANGLING_REFERENCE", f"{where} names unknown morphism {name!r}",
                                (name,)) from None

    dom = np.array([obj_ref(m.dom, m.id) for m in morphisms], dtype=np.int64)
    cod = np.array([obj_ref(m.cod, m.id) for m in morphisms], dtype=np.int64)
    ident = np.full(len(objects), -1, dtype=np.int64)
    for o, m in identity.items():
        ident[obj_ref(o, "identity")] = mor_ref(m, "identity")
    null = -1 if null_object is None else obj_ref(null_object, "null")

    layout = Layout(dom, cod, len(objects))
    table = np.full(layout.n_pairs, -1, dtype=np.int64)
    for (f, g), h in comp.items():
        fi, gi, hi = mor_ref(f, "comp"), mor_ref(g, "comp"), mor_ref(h, "comp")
        if cod[fi] != dom[gi]:
            raise CategoryError("ILL_TYPED_COMP", f"{g} . {f} is not composable", (f, g))
        if dom[hi] != dom[fi] or cod[hi] != cod[gi]:
            raise CategoryError("ILL_TYPED_COMP", f"{g} . {f} = {h} has the wrong type",
                                (f, g, h))
        table[layout.row_ptr[fi] + layout.out_pos[gi]] = hi
    return FinCategory(objects, [m.id for m in morphisms], dom, cod, ident, table, null,
                       [m.label for m in morphisms], layout)


def compose(cat: FinCategory, f: str, g: str) -> Morphism:
    """The recorded composite g after f."""
    fi, gi = cat.mor(f), cat.mor(g)
    if cat.cod[fi] != cat.dom[gi]:
        raise CategoryError("NOT_COMPOSABLE", f"cod({f}) != dom({g})", (f, g))
    h = cat.lookup(fi, gi)
    if h < 0:
        raise CategoryError("MISSING_COMPOSITE", f"no entry for {g} . {f}", (f, g))
    return cat.morphisms[h]


def check_category_laws(cat: FinCategory, max_witnesses=DEFAULT_MAX_WITNESSES) -> LawReport:
    rows = kernels.category_violations(*cat.kernel_args())
    tables = {"o": cat.objects, "m": cat.mor_ids}
    return report_from_rows(rows, CATEGORY_AXIOMS, _CATEGORY_KINDS, tables, max_witnesses)


def hom_set(cat: FinCategory, a: str, b: str) -> list[str]:
    ai, bi = cat.obj(a), cat.obj(b)
    return [cat.mor_ids[i] for i in cat.hom_indices(ai, bi)]


def opposite(cat: FinCategory) -> FinCategory:
    """Same objects and ids, every arrow reversed, composition order swapped."""
    morphisms = [Morphism(m.id, m.cod, m.dom, m.label) for m in cat.morphisms]
    comp = {(g, f): h for (f, g), h in cat.comp.items()}
    return new_category(cat.objects, morphisms, cat.identity, comp, cat.null_object)


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    label: str | None = None


@dataclass(frozen=True)
class Quiver:
    nodes: tuple[str, ...]
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        nodes = tuple(check_id(n) for n in self.nodes)
        edges = tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        if len(set(nodes)) != len(nodes):
            dup = next(n for n in nodes if nodes.count(n) > 1)
            raise CategoryError("DUPLICATE_ID", f"node {dup!r} declared twice", (dup,))
        ids = [check_id(e.id) for e in edges]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise CategoryError("DUPLICATE_ID", f"edge {dup!r} declared twice", (dup,))
        known = set(nodes)
        for e in edges:
            for end in (e.source, e.target):
                if end not in known:
                    raise CategoryError("DANGLING_REFERENCE",
                                        f"edge {e.id} names unknown node {end!r}", (e.id, end))
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)


PATH_SEP = ";"


def path_name(edge_ids):
    return PATH_SEP.join(edge_ids)


def free_category(quiver: Quiver) -> FinCategory:
    """All directed paths of an acyclic quiver, composed by concatenation.

    Identities are named ``id_<node>``; a path of edges ``e1, e2`` is named
    ``e1;e2``.
    """
    out = {n: [] for n in quiver.nodes}
    for e in quiver.edges:
        out[e.source].append(e)
    sorter = graphlib.TopologicalSorter({n: [e.target for e in out[n]] for n in quiver.nodes})
    try:
        order = list(sorter.static_order())  # targets before sources
    except graphlib.CycleError as exc:
        cycle = tuple(exc.args[1]) if len(exc.args) > 1 else ()
        raise CategoryError("CYCLIC_QUIVER", "quiver has a directed cycle", cycle) from None

    # paths[n]: nonempty paths starting at n, as (edge tuple, end node)
    paths = {}
    for n in order:
        acc = []
        for e in sorted(out[n], key=lambda e: e.id):
            acc.append(((e.id,), e.target))
            acc.extend(((e.id,) + p, end) for p, end in paths[e.target])
        paths[n] = acc

    labels = {e.id: e.label for e in quiver.edges}
    ident = {n: f"id_{n}" for n in quiver.nodes}
    morphisms = [Morphism(ident[n], n, n) for n in quiver.nodes]
    comp = {}
    start_of = {}
    for n in quiver.nodes:
        i = ident[n]
        comp[(i, i)] = i
        for p, end in paths[n]:
            name = path_name(p)
            start_of[name] = (p, n, end)
            morphisms.append(Morphism(name, n, end, labels[p[0]] if len(p) == 1 else None))
            comp[(i, name)] = name
            comp[(name, ident[end])] = name
    by_start = {n: [(p, end) for p, end in paths[n]] for n in quiver.nodes}
    for name, (p, _start, end) in start_of.items():
        for q, end2 in by_start[end]:
            comp[(name, path_name(q))] = path_name(p + q)
    return new_category(quiver.nodes, morphisms, ident, comp)
