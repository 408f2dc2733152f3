"""Physical systems as transition systems, plus the abstract-side fixtures.

Numerals are written most-significant digit first with no leading zeros, so
``"6,9"`` is the decimal pair (6, 9) and ``"110,1001"`` the same pair in
binary. Adder categories are thin: each hom-set holds at most one arrow.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .core import (
    FinCategory,
    Layout,
    Morphism,
    Quiver,
    check_category_laws,
    free_category,
    new_category,
)
from .errors import CategoryError
from .maps import Functor, NatTrans, new_functor

FREE_ACYCLIC = "free"
EXPLICIT_TABLE = "table"

BASES = (2, 8, 10)
MAX_WIDTH = {2: 8, 8: 4, 10: 3}
BASE_TAGS = {10: "dec", 8: "oct", 2: "bin"}
NULL_OBJECT = "0_Comp"


@dataclass(frozen=True)
class Transition:
    id: str
    source: str
    target: str
    action: str | None = None


@dataclass(frozen=True)
class TransitionSystem:
    states: tuple[str, ...]
    transitions: tuple[Transition, ...] = ()
    metadata: str = ""

    def __post_init__(self):
        trans = tuple(t if isinstance(t, Transition) else Transition(*t)
                      for t in self.transitions)
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", trans)
        # same endpoint / uniqueness rules as a quiver
        self.quiver()

    def quiver(self) -> Quiver:
        return Quiver(self.states, tuple((t.id, t.source, t.target, t.action)
                                         for t in self.transitions))


def _generated(cat: FinCategory, gens):
    """Indices reachable from ``gens`` and the identities under composition."""
    have = set(int(i) for i in cat.ident if i >= 0) | set(gens)
    frontier = list(have)
    while frontier:
        nxt = []
        for f in frontier:
            for g in list(have):
                for x, y in ((f, g), (g, f)):
                    h = cat.lookup(x, y)
                    if h >= 0 and h not in have:
                        have.add(h)
                        nxt.append(h)
        frontier = nxt
    return have


def lts_to_category(ts: TransitionSystem, mode=FREE_ACYCLIC,
                    table: FinCategory | None = None) -> FinCategory:
    """Compile a transition system: free path category, or a supplied quotient."""
    if mode == FREE_ACYCLIC:
        return free_category(ts.quiver())
    if mode != EXPLICIT_TABLE:
        raise CategoryError("BAD_MODE", f"unknown mode {mode!r}")
    if table is None:
        raise CategoryError("TABLE_MISMATCH", "explicit mode needs a composition table")
    problems = []
    if set(table.objects) != set(ts.states):
        problems.append("objects differ from states")
    for t in ts.transitions:
        if t.id not in table.mor_index:
            problems.append(f"transition {t.id} missing from table")
            continue
        m = table.morphism(t.id)
        if (m.dom, m.cod) != (t.source, t.target):
            problems.append(f"transition {t.id} has the wrong type in the table")
    if not problems:
        gens = [table.mor_index[t.id] for t in ts.transitions]
        stray = set(range(table.n_morphisms)) - _generated(table, gens)
        problems += [f"{table.mor_ids[i]} is not generated by transitions" for i in sorted(stray)]
        laws = check_category_laws(table)
        problems += [f"law violation {w}" for w in laws.violations]
    if problems:
        raise CategoryError("TABLE_MISMATCH", "; ".join(problems[:5]), problems)
    return table


def build_comp_category(type_decls: Iterable[str], program_decls, include_null=False,
                        composites: Mapping[tuple[str, str], str] | None = None) -> FinCategory:
    """Terms as objects, programs as morphisms, optionally a null object.

    ``program_decls`` holds ``(name, input_term, output_term)`` triples and
    ``composites`` maps ``(f, g)`` to the declared program equal to g after f.
    With ``include_null`` every pair of objects also receives its zero arrow
    (the composite through the null object), named ``zero_<x>_<y>``.
    """
    types = list(type_decls)
    programs = [tuple(p) for p in program_decls]
    composites = dict(composites or {})
    objects = types + ([NULL_OBJECT] if include_null else [])
    ident = {t: f"id_{t}" for t in objects}
    morphisms = [Morphism(ident[t], t, t) for t in objects]
    known = set(types)
    for name, src, tgt in programs:
        for t in (src, tgt):
            if t not in known:
                raise CategoryError("DANGLING_REFERENCE", f"program {name} uses unknown term {t}",
                                    (name, t))
        morphisms.append(Morphism(name, src, tgt))
    typ = {m.id: (m.dom, m.cod) for m in morphisms}
    for (f, g), h in composites.items():
        for x in (f, g, h):
            if x not in typ:
                raise CategoryError("DANGLING_REFERENCE", f"composite mentions unknown {x}", (x,))

    missing = []
    for f, a, b in programs:
        for g, b2, c in programs:
            if b == b2 and (f, g) not in composites:
                missing.append(f"{g} . {f}")
    if missing:
        raise CategoryError("UNCLOSED_TABLE", "missing composites: " + ", ".join(missing), missing)

    comp = dict(composites)
    zeros = set()

    def zero(x, y):
        return ident[NULL_OBJECT] if x == y == NULL_OBJECT else f"zero_{x}_{y}"

    if include_null:
        for x in objects:
            for y in objects:
                z = zero(x, y)
                if z not in typ:
                    morphisms.append(Morphism(z, x, y))
                    typ[z] = (x, y)
                zeros.add(z)
    by_dom = {}
    for m, (a, _) in typ.items():
        by_dom.setdefault(a, []).append(m)
    for f, (a, b) in typ.items():
        for g in by_dom.get(b, ()):
            c = typ[g][1]
            if f in zeros or g in zeros:
                comp[(f, g)] = zero(a, c)
            elif f == ident[a]:
                comp.setdefault((f, g), g)
            elif g == ident[b]:
                comp.setdefault((f, g), f)
    return new_category(objects, morphisms, ident, comp,
                        NULL_OBJECT if include_null else None)


# -- numerals ----------------------------------------------------------------

def numeral(value: int, base: int) -> str:
    return np.base_repr(int(value), base)


def parse_numeral(text: str, base: int) -> int:
    if not text or (len(text) > 1 and text[0] == "0"):
        raise CategoryError("BAD_NUMERAL", f"{text!r} is not a canonical numeral", (text,))
    try:
        value = int(text, base)
    except ValueError:
        raise CategoryError("BAD_NUMERAL", f"{text!r} is not a base-{base} numeral",
                            (text,)) from None
    return value


@dataclass(frozen=True)
class NumeralObj:
    base: int
    digits: tuple[str, ...]  # one string for a value, two for a pair

    def __post_init__(self):
        _check_base(self.base)
        if len(self.digits) not in (1, 2):
            raise CategoryError("BAD_NUMERAL", "numeral objects hold one or two values")
        for d in self.digits:
            parse_numeral(d, self.base)

    @classmethod
    def parse(cls, base, text):
        return cls(base, tuple(text.split(",")))

    @classmethod
    def of(cls, base, *values):
        return cls(base, tuple(numeral(v, base) for v in values))

    @property
    def id(self):
        return ",".join(self.digits)

    @property
    def values(self):
        return tuple(int(d, self.base) for d in self.digits)

    @property
    def is_pair(self):
        return len(self.digits) == 2

    @property
    def value(self):
        """The number this object denotes once added up."""
        return sum(self.values)


def _check_base(base):
    if base not in BASES:
        raise CategoryError("UNSUPPORTED_BASE", f"base must be one of {BASES}, got {base}",
                            (str(base),))


def _resolve_bound(base, width, bound):
    _check_base(base)
    if not 1 <= width <= MAX_WIDTH[base]:
        raise CategoryError("WIDTH_OVERFLOW",
                            f"width must be 1..{MAX_WIDTH[base]} for base {base}", (str(width),))
    cap = base**width
    bound = cap if bound is None else bound
    if not 1 <= bound <= cap:
        raise CategoryError("WIDTH_OVERFLOW", f"bound {bound} needs more than {width} digits",
                            (str(bound),))
    return bound


def digits_needed(bound, base):
    return max(1, len(numeral(bound - 1, base)))


def _thin_category(objects, arrows, null=None):
    """Category with at most one arrow per hom-set; composition is forced.

    ``arrows`` holds ``(id, dom, cod)`` triples and must be closed under
    composition (every composable pair has an arrow between its ends).
    """
    objects = sorted(objects)
    arrows = sorted(arrows)
    oi = {o: i for i, o in enumerate(objects)}
    n = len(objects)
    dom = np.fromiter((oi[a[1]] for a in arrows), dtype=np.int64, count=len(arrows))
    cod = np.fromiter((oi[a[2]] for a in arrows), dtype=np.int64, count=len(arrows))
    key = dom * n + cod
    if len(np.unique(key)) != len(key):
        raise CategoryError("DUPLICATE_ID", "thin category has parallel arrows")
    order = np.argsort(key)
    sorted_key = key[order]
    ident = np.full(n, -1, dtype=np.int64)
    loops = dom == cod
    ident[dom[loops]] = np.nonzero(loops)[0]
    layout = Layout(dom, cod, n)
    want = dom[layout.pair_f] * n + cod[layout.pair_g]
    pos = np.searchsorted(sorted_key, want)
    pos = np.minimum(pos, len(sorted_key) - 1)
    found = sorted_key[pos] == want
    if not found.all():
        raise CategoryError("UNCLOSED_TABLE", "thin category is not transitively closed")
    comp = order[pos]
    return FinCategory(objects, [a[0] for a in arrows], dom, cod, ident, comp,
                       -1 if null is None else oi[null], None, layout)


def _adder_arrows(base, bound, tag=""):
    """Objects and arrows of one adder copy; returns (objects, arrows, kinds)."""
    objects = []
    arrows = []
    for s in range(bound):
        o = f"{tag}{numeral(s, base)}"
        objects.append(o)
        arrows.append((f"id_{o}", o, o))
    for x in range(bound):
        for y in range(bound - x):
            p = f"{tag}{numeral(x, base)},{numeral(y, base)}"
            objects.append(p)
            arrows.append((f"id_{p}", p, p))
            arrows.append((f"add_{p}", p, f"{tag}{numeral(x + y, base)}"))
    return objects, arrows


class AdderCategory(FinCategory):
    """A :class:`FinCategory` that also records its base and value bound."""

    base: int
    width: int
    bound: int

    def numeral_obj(self, obj: str) -> NumeralObj:
        return NumeralObj.parse(self.base, obj)


def _adopt(cat: FinCategory, cls, **attrs):
    out = cls(cat.objects, cat.mor_ids, cat.dom, cat.cod, cat.ident, cat.comp_tab, cat.null,
              cat.labels, cat.layout)
    for k, v in attrs.items():
        setattr(out, k, v)
    return out


def build_adder_category(base: int, width: int, bound: int | None = None) -> AdderCategory:
    """Pair objects ``x,y`` with an ``add`` arrow to their sum, for every value
    (and every pair sum) below ``bound`` (default ``base**width``)."""
    bound = _resolve_bound(base, width, bound)
    objects, arrows = _adder_arrows(base, bound)
    cat = _thin_category(objects, arrows)
    return _adopt(cat, AdderCategory, base=base, width=width, bound=bound)


class ConversionCategory(FinCategory):
    """Several adder copies plus value-preserving conversion arrows.

    Copies are ordered as given in ``bases``; arrows run only from earlier
    copies to later ones. Objects carry a tag such as ``dec/6,9``.
    """

    bases: tuple[int, ...]
    bound: int

    def value_of(self, obj: str):
        tag, _, num = obj.partition("/")
        base = {v: k for k, v in BASE_TAGS.items()}[tag]
        return NumeralObj.parse(base, num)


def build_conversion_category(bases=(10, 8, 2), bound=100) -> ConversionCategory:
    if len(set(bases)) != len(bases):
        raise CategoryError("DUPLICATE_ID", "each base may appear once")
    for b in bases:
        _resolve_bound(b, digits_needed(bound, b), bound)
    objects = []
    arrows = []
    for b in bases:
        o, a = _adder_arrows(b, bound, BASE_TAGS[b] + "/")
        objects += o
        arrows += a
    for i, hi in enumerate(bases):
        for lo in bases[i + 1:]:
            th, tl = BASE_TAGS[hi], BASE_TAGS[lo]
            for s in range(bound):
                src = numeral(s, hi)
                arrows.append((f"{th}>{tl}/{src}", f"{th}/{src}", f"{tl}/{numeral(s, lo)}"))
            for x in range(bound):
                for y in range(bound - x):
                    src = f"{numeral(x, hi)},{numeral(y, hi)}"
                    arrows.append((f"{th}>{tl}/{src}", f"{th}/{src}",
                                   f"{tl}/{numeral(x, lo)},{numeral(y, lo)}"))
                    arrows.append((f"{th}>{tl}/add_{src}", f"{th}/{src}",
                                   f"{tl}/{numeral(x + y, lo)}"))
    cat = _thin_category(objects, arrows)
    return _adopt(cat, ConversionCategory, bases=tuple(bases), bound=bound)


def adder_conversion_functor(src: AdderCategory, dst: AdderCategory) -> Functor:
    """Value-preserving functor between two adder categories of equal bound."""
    obj_map = {}
    for o in src.objects:
        n = NumeralObj.parse(src.base, o)
        target = NumeralObj.of(dst.base, *n.values).id
        if target not in dst.obj_index:
            raise CategoryError("VALUE_MISMATCH", f"{o} has no counterpart", (o,))
        obj_map[o] = target
    mor_map = {}
    for m in src.morphisms:
        kind = m.id.split("_", 1)[0]
        mor_map[m.id] = f"{kind}_{obj_map[m.dom]}"
    return new_functor(src, dst, obj_map, mor_map, f"base{src.base}->base{dst.base}")


def base_conversion_nat_trans(conv: ConversionCategory, F_hi: Functor, F_lo: Functor) -> NatTrans:
    """Components are the conversion arrows ``F_hi(p) -> F_lo(p)``."""
    comps = []
    for p in range(F_hi.src.n_objects):
        x = int(F_hi.obj_map[p])
        y = int(F_lo.obj_map[p])
        vx = conv.value_of(conv.objects[x])
        vy = conv.value_of(conv.objects[y])
        hom = conv.hom_indices(x, y)
        if vx.values != vy.values or len(hom) != 1:
            raise CategoryError("VALUE_MISMATCH", f"{conv.objects[x]} and {conv.objects[y]} "
                                "denote different values", (F_hi.src.objects[p],))
        comps.append(int(hom[0]))
    return NatTrans(F_hi, F_lo, comps)


# -- cogwheel machines ----------------------------------------------------------

def cogwheel_fixture(base: int, width: int, bound: int | None = None, prefix="",
                     latch=False) -> TransitionSystem:
    """Toy adding machine: one state per input setting of the two wheels, one
    per result register value, and a ``crank`` transition from each setting to
    the register holding the sum. With ``latch`` the inputs are first loaded
    into an intermediate latch state."""
    bound = _resolve_bound(base, width, bound)
    states = [f"{prefix}reg:{numeral(s, base)}" for s in range(bound)]
    trans = []
    for x in range(bound):
        for y in range(bound - x):
            pair = f"{numeral(x, base)},{numeral(y, base)}"
            wheels = f"{prefix}wheels:{pair}"
            reg = f"{prefix}reg:{numeral(x + y, base)}"
            states.append(wheels)
            if latch:
                held = f"{prefix}latch:{pair}"
                states.append(held)
                trans.append(Transition(f"{prefix}load:{pair}", wheels, held, "load"))
                trans.append(Transition(f"{prefix}crank:{pair}", held, reg, "crank"))
            else:
                trans.append(Transition(f"{prefix}crank:{pair}", wheels, reg, "crank"))
    meta = f"cogwheel adder base={base} width={width} bound={bound}" + (" latch" if latch else "")
    return TransitionSystem(tuple(states), tuple(trans), meta)


def _cog_target(state, base, target_base, prefix, tag):
    kind, _, num = state[len(prefix):].partition(":")
    vals = [parse_numeral(d, base) for d in num.split(",")]
    return kind, tag + ",".join(numeral(v, target_base) for v in vals)


def encode_functor(phys: FinCategory, target: FinCategory, base: int, target_base=None,
                   prefix="", tag="", theory_label=None) -> Functor:
    """Read a compiled cogwheel machine as adder arithmetic in ``target``."""
    target_base = base if target_base is None else target_base
    obj_map = {s: _cog_target(s, base, target_base, prefix, tag)[1] for s in phys.objects}
    mor_map = {}
    for m in phys.morphisms:
        if m.dom == m.cod:
            mor_map[m.id] = f"id_{obj_map[m.dom]}"
        elif _cog_target(m.dom, base, target_base, prefix, tag)[0] == "wheels" and \
                _cog_target(m.cod, base, target_base, prefix, tag)[0] == "latch":
            mor_map[m.id] = f"id_{obj_map[m.dom]}"
        else:
            mor_map[m.id] = f"add_{obj_map[m.dom]}"
    return new_functor(phys, target, obj_map, mor_map,
                       theory_label or f"base{target_base}")


def decode_functor(target: FinCategory, phys: FinCategory, base: int, target_base=None,
                   prefix="", tag="", theory_label=None) -> Functor:
    """Set the machine's wheels from adder objects; the inverse of encoding."""
    target_base = base if target_base is None else target_base
    back = {}
    for s in phys.objects:
        kind, o = _cog_target(s, base, target_base, prefix, tag)
        if kind != "latch":
            back[o] = s
    mor_of = {(m.dom, m.cod): m.id for m in phys.morphisms}
    lost = [o for o in target.objects if o not in back]
    if lost:
        raise CategoryError("VALUE_MISMATCH", f"no machine state for {lost[0]}", lost)
    obj_map = {o: back[o] for o in target.objects}
    mor_map = {m.id: mor_of[(obj_map[m.dom], obj_map[m.cod])] for m in target.morphisms}
    return new_functor(target, phys, obj_map, mor_map,
                       theory_label or f"base{target_base}^-1")
