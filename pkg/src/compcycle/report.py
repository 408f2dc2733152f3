"""Run every check a spec calls for and collect the results in one report."""
from __future__ import annotations

import json
import time
from dataclasses import dataclass, field

from . import __version__
from .core import DEFAULT_MAX_WITNESSES, Witness, check_category_laws
from .cycle import (
    Verdict,
    audit_simple_mappings,
    check_causal_counterfactual,
    check_composite_cycle,
    check_compute_cycle,
    check_multiple_realizability,
    check_nested,
    check_predict_cycle,
    check_refinement,
)
from .dsl.elaborate import Model
from .dsl.model import CATEGORY_KINDS, SpecFile
from .errors import CategoryError
from .maps import DEFAULT_BUDGET, check_adjunction, check_functor_laws, check_naturality

STAGE_ERROR = "error"


@dataclass
class Entry:
    """One line of the report: a law check, a claim or an audit."""

    kind: str
    name: str
    ok: bool
    stage: str | None = None
    witnesses: tuple[Witness, ...] = ()
    counterexample_count: int = 0
    extra: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "kind": self.kind,
            "name": self.name,
            "ok": self.ok,
            "stage": self.stage,
            "counterexample_count": self.counterexample_count,
            "witnesses": [w.to_dict() for w in self.witnesses],
            **self.extra,
        }


@dataclass
class RunReport:
    input: str
    checks: list[Entry] = field(default_factory=list)
    claims: list[Entry] = field(default_factory=list)
    audits: list[Entry] = field(default_factory=list)
    wall_time: float | None = None

    @property
    def ok(self):
        return all(e.ok for e in self.entries())

    def entries(self):
        return [*self.checks, *self.claims, *self.audits]

    def to_dict(self):
        out = {
            "tool_version": __version__,
            "input": self.input,
            "ok": self.ok,
            "checks": [e.to_dict() for e in self.checks],
            "claims": [e.to_dict() for e in self.claims],
            "audits": [e.to_dict() for e in self.audits],
        }
        if self.wall_time is not None:
            out["wall_time"] = round(self.wall_time, 6)
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _law_entry(kind, name, rep):
    return Entry(kind, name, rep.ok, None if rep.ok else "laws", rep.violations, rep.total)


def _verdict_entry(kind, name, v: Verdict, **extra):
    return Entry(kind, name, v.ok, v.stage, v.witnesses, v.counterexample_count, extra)


def _error_entry(kind, name, exc: CategoryError, **extra):
    w = Witness(exc.code, tuple(exc.details), str(exc))
    return Entry(kind, name, False, STAGE_ERROR, (w,), 1, extra)


def _first_failure(*thunks):
    v = None
    for run in thunks:
        v = run()
        if not v.ok:
            return v
    return v


def in_source_order(spec: SpecFile):
    """Declarations as they appear in the text; programmatic specs keep their
    tuple order."""
    pos = spec.source_map
    order = {id(d): i for i, d in enumerate(spec.declarations)}
    return sorted(spec.declarations,
                  key=lambda d: (*pos.get((d.kind, d.name), (0, 0)), order[id(d)]))


def elaborate_all(model: Model):
    """Build every declared object up front, so that a spec which cannot be
    constructed is rejected before any check runs."""
    for d in model.spec.declarations:
        if d.kind in CATEGORY_KINDS:
            model.category(d.name)
            if d.kind == "lts":
                model.transition_system(d.name)
        elif d.kind == "functor":
            model.functor(d.name)
        elif d.kind == "nattrans":
            model.nattrans(d.name)
        elif d.kind == "adjunction":
            model.adjunction(d.name)
        elif d.kind == "claim" and d.direction in ("compute", "predict", "causal"):
            model.cycle_claim(d.name, d.direction)
        elif d.kind == "claim" and d.direction == "nested":
            for layer in d.layers:
                model.cycle_claim(layer)


def _run_claim(model: Model, d, limit, budget):
    if d.direction in ("compute", "predict"):
        claim = model.cycle_claim(d.name, d.direction)
        main = check_compute_cycle if d.direction == "compute" else check_predict_cycle
        steps = [lambda: main(claim, limit)]
        if d.chain:
            steps.append(lambda: check_composite_cycle(claim, d.chain, limit))
        return _verdict_entry("claim", d.name, _first_failure(*steps), direction=d.direction)
    if d.direction == "causal":
        v = check_causal_counterfactual(model.cycle_claim(d.name, "causal"), limit)
        return _verdict_entry("claim", d.name, v, direction=d.direction)
    if d.direction == "refinement":
        v = check_refinement(model.functor(d.R), model.functor(d.R_prime),
                             model.nattrans(d.eta), limit)
        return _verdict_entry("claim", d.name, v, direction=d.direction)
    if d.direction == "realizability":
        strict = (d.mode or "strict") == "strict"
        reals, supplied = [], []
        for r in d.realizations:
            reals.append((model.category(r[0]), model.functor(r[1]), model.functor(r[2])))
            supplied.append((model.nattrans(r[3]), model.nattrans(r[4])) if len(r) == 5
                            else None)
        verdicts = check_multiple_realizability(model.category(d.abs), reals, strict,
                                                supplied, budget, limit)
        per = [{"phys": r[0], "R": r[1], "Rt": r[2], **v.to_dict()}
               for r, v in zip(d.realizations, verdicts)]
        bad = next((v for v in verdicts if not v.ok), None)
        mode = "strict" if strict else "relaxed"
        if bad is None:
            return Entry("claim", d.name, True, extra={"direction": d.direction, "mode": mode,
                                                       "realizations": per})
        wit = tuple(Witness(w.axiom, w.ids, f"{r[0]}: {w.detail}" if w.detail else r[0])
                    for r, v in zip(d.realizations, verdicts) for w in v.witnesses)
        total = sum(v.counterexample_count for v in verdicts)
        return Entry("claim", d.name, False, bad.stage, wit[:limit], total,
                     {"direction": d.direction, "mode": mode, "realizations": per})
    # nested
    layers = [model.cycle_claim(name) for name in d.layers]
    links = [model.functor(name) for name in d.links]
    return _verdict_entry("claim", d.name, check_nested(layers, links, limit),
                          direction=d.direction)


def _guard(kind, name, run, **extra):
    try:
        return run()
    except CategoryError as exc:
        return _error_entry(kind, name, exc, **extra)


def check_spec(spec: SpecFile | Model, input_name="<spec>", max_witnesses=DEFAULT_MAX_WITNESSES,
               budget=DEFAULT_BUDGET, timing=False) -> RunReport:
    """Law checks on every declaration, then every claim and audit, each
    list in declaration order. Raises :class:`SpecError` if the spec cannot
    be elaborated."""
    start = time.perf_counter()
    model = spec if isinstance(spec, Model) else Model(spec)
    elaborate_all(model)
    report = RunReport(input_name)
    lim = max_witnesses
    for d in in_source_order(model.spec):
        k, n = d.kind, d.name
        if k in CATEGORY_KINDS:
            report.checks.append(_guard(k, n, lambda: _law_entry(
                k, n, check_category_laws(model.category(n), lim))))
        elif k == "functor":
            report.checks.append(_guard(k, n, lambda: _law_entry(
                k, n, check_functor_laws(model.functor(n), lim))))
        elif k == "nattrans":
            report.checks.append(_guard(k, n, lambda: _law_entry(
                k, n, check_naturality(model.nattrans(n), lim))))
        elif k == "adjunction":
            report.checks.append(_guard(k, n, lambda: _law_entry(
                k, n, check_adjunction(model.adjunction(n), lim))))
        elif k == "claim":
            report.claims.append(_guard(k, n, lambda: _run_claim(model, d, lim, budget),
                                        direction=d.direction))
        elif k == "audit":
            def audit():
                a = audit_simple_mappings(model.transition_system(d.phys),
                                          model.category(d.abs), budget)
                stage = None if a.functorial_included else "inclusion"
                return Entry(k, n, a.functorial_included, stage, extra=a.to_dict())
            report.audits.append(_guard(k, n, audit))
    if timing:
        report.wall_time = time.perf_counter() - start
    return report
