"""Verifiers deciding whether a physical system, a candidate abstraction and a
pair of representation functors form a computation.

Every verifier returns a :class:`Verdict`. Checks run in stages and stop at
the first failing stage, whose witnesses are reported.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .core import DEFAULT_MAX_WITNESSES, FinCategory, Witness, witnesses_from_rows
from .errors import CategoryError
from .maps import (
    DEFAULT_BUDGET,
    Functor,
    NatTrans,
    _check_parallel,
    check_adjunction,
    check_naturality,
    compose_functors,
    enumerate_functors,
    enumerate_nat_trans,
    functor_report,
    functor_rows,
    identity_functor,
    new_adjunction,
    roundtrip_witnesses,
    same_category,
)
from .physproc import TransitionSystem, lts_to_category

COMPUTE = "compute"
PREDICT = "predict"

STAGE_FUNCTOR = "functor-laws"
STAGE_INVERSE = "inverse-pair"
STAGE_SQUARE = "square"
STAGE_COMPOSITION = "composition"
STAGE_NATURALITY = "naturality"
STAGE_ADJUNCTION = "adjunction"
STAGE_LAYER = "layer"
STAGE_LINK = "link"
STAGE_CAUSAL = "causal"
STAGE_COUNTERFACTUAL = "counterfactual"


@dataclass(frozen=True)
class CycleClaim:
    phys: FinCategory
    abs: FinCategory
    R: Functor
    Rt: Functor
    direction: str = COMPUTE

    def __post_init__(self):
        if not (same_category(self.R.src, self.phys) and same_category(self.R.dst, self.abs)
                and same_category(self.Rt.src, self.abs)
                and same_category(self.Rt.dst, self.phys)):
            raise CategoryError("ILL_TYPED_CLAIM", "R must run phys -> abs and Rt abs -> phys")
        if self.direction not in (COMPUTE, PREDICT):
            raise CategoryError("ILL_TYPED_CLAIM", f"unknown direction {self.direction!r}")


@dataclass(frozen=True)
class Verdict:
    stage: str | None = None
    witnesses: tuple[Witness, ...] = ()
    counterexample_count: int = 0
    regime: str = ""

    @property
    def ok(self):
        return not self.witnesses

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {
            "ok": self.ok,
            "stage": self.stage,
            "counterexample_count": self.counterexample_count,
            "witnesses": [w.to_dict() for w in self.witnesses],
            **({"regime": self.regime} if self.regime else {}),
        }


PASS = Verdict()


def _fail(stage, witnesses, total=None, limit=DEFAULT_MAX_WITNESSES, regime=""):
    witnesses = list(witnesses)
    total = len(witnesses) if total is None else total
    return Verdict(stage, tuple(witnesses[:limit]), total, regime)


def _functor_stage(first: Functor, second: Functor, names, limit):
    """Functor laws for ``first`` and then ``second``; stops at the first
    unlawful one, like the stages themselves."""
    for F, name in zip((first, second), names):
        rows = functor_rows(F)
        if len(rows):
            rep = functor_report(F, rows, limit, name)
            return _fail(STAGE_FUNCTOR, rep.violations, rep.total, limit)
    return None


def _square_stage(src: FinCategory, dst: FinCategory, fwd: Functor, back: Functor, names, limit):
    rows = kernels.sort_rows(kernels.square_violations(
        src.dom, src.cod, dst.dom, dst.cod, fwd.obj_map, fwd.mor_map, back.mor_map))
    if not len(rows):
        return None
    fwd_name, back_name = names
    out = []
    for code, f, _, _ in rows[:limit]:
        img = dst.mor_ids[fwd.mor_map[f]]
        m = src.morphisms[f]
        if code == 0:
            want = (f"expected {fwd_name}({m.id}): {fwd_name}({m.dom}) -> "
                    f"{fwd_name}({m.cod}) = {dst.objects[fwd.obj_map[m.dom]]} -> "
                    f"{dst.objects[fwd.obj_map[m.cod]]}")
            out.append(Witness("SQUARE_TYPING", (m.id, img), want))
        else:
            out.append(Witness("SQUARE_RETURN", (m.id, img),
                               f"{back_name}({img}) = {src.mor_ids[back.mor_map[fwd.mor_map[f]]]}"))
    return _fail(STAGE_SQUARE, out, len(rows), limit)


def _cycle(first, second, src, dst, names, limit):
    bad = _functor_stage(first, second, names, limit)
    if bad is not None:
        return bad
    left, n_left = roundtrip_witnesses(first, second, "INVERSE_LEFT", limit)
    right, n_right = roundtrip_witnesses(second, first, "INVERSE_RIGHT", limit)
    if n_left or n_right:
        return _fail(STAGE_INVERSE, left + right, n_left + n_right, limit)
    square = _square_stage(src, dst, first, second, names, limit)
    return PASS if square is None else square


def check_compute_cycle(claim: CycleClaim, max_witnesses=DEFAULT_MAX_WITNESSES) -> Verdict:
    """Physical evolution read through R agrees with the abstract arrow R(f)
    for every physical morphism, and R, Rt are strict mutual inverses."""
    return _cycle(claim.R, claim.Rt, claim.phys, claim.abs, ("R", "Rt"), max_witnesses)


def check_predict_cycle(claim: CycleClaim, max_witnesses=DEFAULT_MAX_WITNESSES) -> Verdict:
    """Mirror image: abstract evolution instantiated through Rt and read back."""
    return _cycle(claim.Rt, claim.R, claim.abs, claim.phys, ("Rt", "R"), max_witnesses)


def check_cycle(claim: CycleClaim, max_witnesses=DEFAULT_MAX_WITNESSES) -> Verdict:
    if claim.direction == PREDICT:
        return check_predict_cycle(claim, max_witnesses)
    return check_compute_cycle(claim, max_witnesses)


def check_composite_cycle(claim: CycleClaim, morphisms, max_witnesses=DEFAULT_MAX_WITNESSES):
    """Local check along one composable chain of physical morphisms."""
    P, A, R, Rt = claim.phys, claim.abs, claim.R, claim.Rt
    chain = [P.mor(m) for m in morphisms]
    if not chain:
        raise CategoryError("NOT_COMPOSABLE", "empty chain")
    for f, g in zip(chain, chain[1:]):
        if P.cod[f] != P.dom[g]:
            raise CategoryError("NOT_COMPOSABLE", f"{P.mor_ids[f]} then {P.mor_ids[g]}",
                                (P.mor_ids[f], P.mor_ids[g]))

    typing = []
    for f in chain:
        u = R.mor_map[f]
        if (A.dom[u], A.cod[u]) != (R.obj_map[P.dom[f]], R.obj_map[P.cod[f]]):
            typing.append(Witness("TYPING", (P.mor_ids[f], A.mor_ids[u]), "R"))
    if typing:
        return _fail(STAGE_FUNCTOR, typing, limit=max_witnesses)

    broken = []
    acc = chain[0]
    for g in chain[1:]:
        h = P.lookup(acc, g)
        if h < 0:
            broken.append(Witness("CLOSURE", (P.mor_ids[acc], P.mor_ids[g]), "phys"))
            break
        want = A.lookup(R.mor_map[acc], R.mor_map[g])
        if want != R.mor_map[h]:
            got = A.mor_ids[R.mor_map[h]]
            broken.append(Witness("COMPOSITION", (P.mor_ids[acc], P.mor_ids[g]),
                                  f"R({P.mor_ids[h]}) = {got}"))
        acc = h
    if broken:
        return _fail(STAGE_COMPOSITION, broken, limit=max_witnesses)

    u = R.mor_map[acc]
    if (A.dom[u], A.cod[u]) != (R.obj_map[P.dom[acc]], R.obj_map[P.cod[acc]]):
        return _fail(STAGE_SQUARE, [Witness("SQUARE_TYPING", (P.mor_ids[acc], A.mor_ids[u]))])
    if Rt.mor_map[u] != acc:
        return _fail(STAGE_SQUARE, [Witness("SQUARE_RETURN", (P.mor_ids[acc], A.mor_ids[u]),
                                            f"Rt({A.mor_ids[u]}) = "
                                            f"{P.mor_ids[Rt.mor_map[u]]}")])
    return PASS


def check_refinement(R: Functor, R_prime: Functor, eta: NatTrans,
                     max_witnesses=DEFAULT_MAX_WITNESSES) -> Verdict:
    """Two representations related by eta: one square per physical morphism."""
    _check_parallel(R, R_prime)
    if not (eta.F == R and eta.G == R_prime):
        raise CategoryError("NOT_PARALLEL", "eta does not run from R to R_prime")
    rep = check_naturality(eta, max_witnesses)
    if rep.ok:
        return PASS
    P = R.src
    out = []
    for w in rep.violations:
        if w.axiom == "NATURALITY":
            m = P.morphism(w.ids[0])
            out.append(Witness("REFINEMENT_SQUARE", w.ids,
                               f"eta[{m.dom}] / eta[{m.cod}] square for {m.id}: "
                               f"{eta.at(m.dom)} ; {R_prime.mor(m.id)} vs "
                               f"{R.mor(m.id)} ; {eta.at(m.cod)}"))
        else:
            out.append(Witness("REFINEMENT_COMPONENT", w.ids,
                               f"eta[{w.ids[0]}] = {eta.at(w.ids[0])} is not "
                               f"{R.obj(w.ids[0])} -> {R_prime.obj(w.ids[0])}"))
    return _fail(STAGE_NATURALITY, out, rep.total, max_witnesses)


def _adjunction_verdict(R, Rt, supplied, budget, limit):
    """Relaxed regime: (Rt, R) related by unit Id_abs => R.Rt and counit
    Rt.R => Id_phys satisfying both triangle identities."""
    phys, abs_ = R.src, R.dst
    unit_src = identity_functor(abs_)
    unit_dst = compose_functors(Rt, R)
    counit_src = compose_functors(R, Rt)
    counit_dst = identity_functor(phys)
    if supplied is not None:
        unit, counit = supplied
        rep = check_adjunction(new_adjunction(R, Rt, unit, counit), limit)
        return PASS if rep.ok else _fail(STAGE_ADJUNCTION, rep.violations, rep.total, limit)
    try:
        units = enumerate_nat_trans(unit_src, unit_dst, budget)
        counits = enumerate_nat_trans(counit_src, counit_dst, budget)
    except CategoryError as exc:
        if exc.code == "BUDGET_EXCEEDED":
            raise CategoryError("NO_UNIT_COUNIT_FOUND",
                                "unit/counit enumeration exhausted the budget") from exc
        raise
    if not units or not counits:
        which = "unit" if not units else "counit"
        return _fail(STAGE_ADJUNCTION, [Witness("NO_CANDIDATE", (), f"no natural {which}")])
    first = None
    for n, (u, e) in enumerate(itertools.product(units, counits)):
        if n >= budget:
            raise CategoryError("NO_UNIT_COUNIT_FOUND", "unit/counit pairs exceed the budget")
        rep = check_adjunction(new_adjunction(R, Rt, u, e), limit)
        if rep.ok:
            return PASS
        if first is None:
            first = rep
    return _fail(STAGE_ADJUNCTION, first.violations, first.total, limit)


def check_multiple_realizability(abs_cat: FinCategory, realizations, strict=True,
                                 unit_counit=None, budget=DEFAULT_BUDGET,
                                 max_witnesses=DEFAULT_MAX_WITNESSES) -> list[Verdict]:
    """One verdict per ``(phys, R, Rt)`` realization of ``abs_cat``.

    Strict mode demands a compute cycle. Relaxed mode also accepts an adjoint
    pair, using supplied ``(unit, counit)`` transformations or, when absent,
    every candidate found by enumeration.
    """
    verdicts = []
    for i, (phys, R, Rt) in enumerate(realizations):
        if not same_category(R.dst, abs_cat):
            raise CategoryError("ILL_TYPED_CLAIM", f"realization {i} targets another abstraction")
        claim = CycleClaim(phys, abs_cat, R, Rt)
        v = check_compute_cycle(claim, max_witnesses)
        if strict or v.ok:
            verdicts.append(Verdict(v.stage, v.witnesses, v.counterexample_count, "strict"))
            continue
        bad = _functor_stage(R, Rt, ("R", "Rt"), max_witnesses)
        if bad is not None:
            verdicts.append(Verdict(bad.stage, bad.witnesses, bad.counterexample_count, "relaxed"))
            continue
        supplied = unit_counit[i] if unit_counit else None
        a = _adjunction_verdict(R, Rt, supplied, budget, max_witnesses)
        verdicts.append(Verdict(a.stage, a.witnesses, a.counterexample_count, "relaxed"))
    return verdicts


def check_nested(layers, links, max_witnesses=DEFAULT_MAX_WITNESSES) -> Verdict:
    """Layered computation: each layer a compute cycle, and every physical step
    of layer i, read through R_i and then the link into layer i+1, lands on an
    abstract step that layer i+1 actually realizes."""
    layers = list(layers)
    links = list(links)
    if not layers:
        raise CategoryError("LAYER_MISMATCH", "no layers")
    if len(links) != len(layers) - 1:
        raise CategoryError("LAYER_MISMATCH", f"{len(layers)} layers need {len(layers) - 1} links")
    for i, L in enumerate(links):
        if not (same_category(L.src, layers[i].abs) and same_category(L.dst, layers[i + 1].abs)):
            raise CategoryError("LAYER_MISMATCH", f"link {i} does not join layers {i} and {i + 1}")
    if len(layers) == 1:
        return check_compute_cycle(layers[0], max_witnesses)

    for i, claim in enumerate(layers):
        v = check_compute_cycle(claim, max_witnesses)
        if not v.ok:
            wit = [Witness(w.axiom, w.ids, f"layer {i}: {w.detail}") for w in v.witnesses]
            return _fail(STAGE_LAYER, wit, v.counterexample_count, max_witnesses)

    bad = []
    for i, L in enumerate(links):
        lo, hi = layers[i], layers[i + 1]
        A, B = lo.abs, hi.abs
        for f in range(lo.phys.n_morphisms):
            u = lo.R.mor_map[f]
            v = L.mor_map[u]
            a = L.obj_map[A.dom[u]]
            b = L.obj_map[A.cod[u]]
            if L.contravariant:
                a, b = b, a
            ok = (B.dom[v], B.cod[v]) == (a, b)
            ok = ok and hi.R.mor_map[hi.Rt.mor_map[v]] == v
            if not ok:
                bad.append(Witness("NESTED_SQUARE", (lo.phys.mor_ids[f], A.mor_ids[u],
                                                     B.mor_ids[v]), f"layer {i} -> {i + 1}"))
    if bad:
        return _fail(STAGE_SQUARE, bad, limit=max_witnesses)

    found = []
    total = 0
    for i, L in enumerate(links):
        rows = functor_rows(L)
        if len(rows):
            rep = functor_report(L, rows, max_witnesses, f"link {i}")
            found += rep.violations
            total += rep.total
    if total:
        return _fail(STAGE_LINK, found, total, max_witnesses)
    return PASS


def transitions_of(cat: FinCategory):
    """Indecomposable non-identity morphisms: the one-step transitions."""
    is_id = np.zeros(cat.n_morphisms, dtype=bool)
    is_id[cat.ident[cat.ident >= 0]] = True
    lay = cat.layout
    proper = ~is_id[lay.pair_f] & ~is_id[lay.pair_g] & (cat.comp_tab >= 0)
    composite = np.zeros(cat.n_morphisms, dtype=bool)
    composite[cat.comp_tab[proper]] = True
    return np.nonzero(~is_id & ~composite)[0]


def check_causal_counterfactual(claim: CycleClaim, max_witnesses=DEFAULT_MAX_WITNESSES) -> Verdict:
    """Causal: every one-step physical transition p1 -> p2 has its image
    R(p1) -> R(p2). Counterfactual: each abstract state in the image of R has
    a single successor across all transitions leaving its preimages."""
    P, A, R = claim.phys, claim.abs, claim.R
    steps = transitions_of(P)
    causal = []
    succ = {}
    for f in steps:
        f = int(f)
        u = R.mor_map[f]
        c1, c2 = int(R.obj_map[P.dom[f]]), int(R.obj_map[P.cod[f]])
        if not (0 <= u < A.n_morphisms) or (A.dom[u], A.cod[u]) != (c1, c2):
            causal.append(Witness("CAUSAL", (P.mor_ids[f],),
                                  f"no abstract step {A.objects[c1]} -> {A.objects[c2]}"))
        succ.setdefault(c1, set()).add(c2)
    if causal:
        return _fail(STAGE_CAUSAL, causal, limit=max_witnesses)
    counter = []
    for c1 in sorted(succ):
        if len(succ[c1]) > 1:
            names = tuple(A.objects[c] for c in sorted(succ[c1]))
            counter.append(Witness("COUNTERFACTUAL", (A.objects[c1],) + names,
                                   f"{A.objects[c1]} has {len(names)} successors"))
    if counter:
        return _fail(STAGE_COUNTERFACTUAL, counter, limit=max_witnesses)
    return PASS


@dataclass(frozen=True)
class AuditReport:
    n_state_maps_simple: int
    n_functorial: int
    simple_samples: tuple[dict, ...] = ()
    functorial_samples: tuple[dict, ...] = ()
    functorial_included: bool = True

    @property
    def strictness(self):
        return self.n_functorial < self.n_state_maps_simple

    def to_dict(self):
        return {
            "n_state_maps_simple": self.n_state_maps_simple,
            "n_functorial": self.n_functorial,
            "strictness": self.strictness,
            "functorial_included": self.functorial_included,
            "simple_samples": list(self.simple_samples),
            "functorial_samples": list(self.functorial_samples),
        }


def reachability(ts: TransitionSystem):
    """Sorted states and the relation "reachable in one or more steps"."""
    states = sorted(ts.states)
    idx = {s: i for i, s in enumerate(states)}
    n = len(states)
    step = np.zeros((n, n), dtype=bool)
    for t in ts.transitions:
        step[idx[t.source], idx[t.target]] = True
    reach = step.copy()
    while True:
        nxt = reach | ((reach.astype(np.int64) @ step.astype(np.int64)) > 0)
        if np.array_equal(nxt, reach):
            return states, reach
        reach = nxt


def audit_simple_mappings(phys_ts: TransitionSystem, abs_cat: FinCategory,
                          budget=DEFAULT_BUDGET, samples=3) -> AuditReport:
    """Count state assignments accepted by the simple mapping account against
    functor pairs accepted by the strict definition."""
    states, reach = reachability(phys_ts)
    arrows = [(int(abs_cat.dom[f]), int(abs_cat.cod[f])) for f in range(abs_cat.n_morphisms)
              if abs_cat.ident[abs_cat.dom[f]] != f]
    n_maps = len(states) ** abs_cat.n_objects
    if n_maps > budget:
        raise CategoryError("BUDGET_EXCEEDED", f"{n_maps} state maps exceed the budget")
    simple = []
    for sigma in itertools.product(range(len(states)), repeat=abs_cat.n_objects):
        if all(reach[sigma[a], sigma[b]] for a, b in arrows):
            simple.append(sigma)

    P = lts_to_category(phys_ts)
    pairs = []
    for Rt in enumerate_functors(abs_cat, P, budget):
        for R in enumerate_functors(P, abs_cat, budget):
            if np.array_equal(Rt.obj_map[R.obj_map], np.arange(P.n_objects)) and \
                    np.array_equal(Rt.mor_map[R.mor_map], np.arange(P.n_morphisms)) and \
                    np.array_equal(R.obj_map[Rt.obj_map], np.arange(abs_cat.n_objects)) and \
                    np.array_equal(R.mor_map[Rt.mor_map], np.arange(abs_cat.n_morphisms)):
                pairs.append((R, Rt))
    simple_set = set(simple)
    included = all(tuple(int(x) for x in Rt.obj_map) in simple_set for _, Rt in pairs)

    def as_names(sigma):
        return {abs_cat.objects[a]: states[s] for a, s in enumerate(sigma)}

    return AuditReport(
        len(simple),
        len(pairs),
        tuple(as_names(s) for s in simple[:samples]),
        tuple({"R": R.obj_map_names, "Rt": Rt.obj_map_names} for R, Rt in pairs[:samples]),
        included,
    )
