import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from compcycle import (
    CategoryError,
    CycleClaim,
    TransitionSystem,
    audit_simple_mappings,
    build_adder_category,
    build_conversion_category,
    check_causal_counterfactual,
    check_composite_cycle,
    check_compute_cycle,
    check_multiple_realizability,
    check_nested,
    check_predict_cycle,
    check_refinement,
    cogwheel_fixture,
    decode_functor,
    encode_functor,
    identity_functor,
    lts_to_category,
    new_functor,
    new_nat_trans,
)
from compcycle.fixtures import chain_system, interval_category
from compcycle.physproc import base_conversion_nat_trans


def cogwheel_claim(base=10, width=1, bound=None, direction="compute"):
    phys = lts_to_category(cogwheel_fixture(base, width, bound))
    adder = build_adder_category(base, width, bound)
    return CycleClaim(phys, adder, encode_functor(phys, adder, base),
                      decode_functor(adder, phys, base), direction)


def with_obj(F, name, target):
    return new_functor(F.src, F.dst, {**F.obj_map_names, name: target}, F.mor_map_names)


def with_mor(F, name, target):
    return new_functor(F.src, F.dst, F.obj_map_names, {**F.mor_map_names, name: target})


# -- compute and predict --------------------------------------------------------------------

def test_cogwheel_compute_cycle_passes():
    claim = cogwheel_claim()
    assert check_compute_cycle(claim).ok
    assert check_predict_cycle(claim).ok


def test_composite_chain_passes():
    assert check_composite_cycle(cogwheel_claim(), ["crank:3,4"]).ok


def test_composite_chain_over_a_path():
    phys = lts_to_category(chain_system(3))
    claim = CycleClaim(phys, phys, identity_functor(phys), identity_functor(phys))
    assert check_composite_cycle(claim, ["t0", "t1"]).ok
    with pytest.raises(CategoryError) as exc:
        check_composite_cycle(claim, ["t1", "t0"])
    assert exc.value.code == "NOT_COMPOSABLE"


def test_decode_collapsing_a_pair_fails_inverse_stage():
    claim = cogwheel_claim()
    Rt = with_obj(claim.Rt, "0,0", "reg:0")
    Rt = with_mor(Rt, "id_0,0", "id_reg:0")
    Rt = with_mor(Rt, "add_0,0", "id_reg:0")
    v = check_compute_cycle(CycleClaim(claim.phys, claim.abs, claim.R, Rt))
    assert not v.ok and v.stage == "inverse-pair"
    assert ("INVERSE_LEFT", ("wheels:0,0",)) in {(w.axiom, w.ids) for w in v.witnesses}


def test_unlawful_encoding_stops_at_functor_stage():
    claim = cogwheel_claim()
    R = with_mor(claim.R, "crank:3,4", "add_2,5")
    v = check_compute_cycle(CycleClaim(claim.phys, claim.abs, R, claim.Rt))
    assert v.stage == "functor-laws"
    assert v.witnesses[0].axiom == "TYPING" and v.witnesses[0].ids[0] == "crank:3,4"


def test_claim_typing_enforced():
    claim = cogwheel_claim()
    with pytest.raises(CategoryError) as exc:
        CycleClaim(claim.abs, claim.phys, claim.R, claim.Rt)
    assert exc.value.code == "ILL_TYPED_CLAIM"


@given(st.integers(0, 10**6), st.booleans())
def test_compute_pass_implies_predict_and_causal_pass(seed, perturb):
    """Any claim passing the compute cycle passes the other two."""
    import random
    rng = random.Random(seed)
    claim = cogwheel_claim(10, 1, rng.randint(1, 4))
    if perturb:
        f = rng.choice(claim.phys.mor_ids)
        R = with_mor(claim.R, f, rng.choice(claim.abs.mor_ids))
        claim = CycleClaim(claim.phys, claim.abs, R, claim.Rt)
    if check_compute_cycle(claim).ok:
        assert check_predict_cycle(claim).ok
        assert check_causal_counterfactual(claim).ok


# -- causal and counterfactual ---------------------------------------------------------------

def test_causal_passes_on_cogwheel():
    assert check_causal_counterfactual(cogwheel_claim()).ok


def test_collapsing_states_breaks_counterfactual():
    """Send the whole chain s0 -> s1 -> s2 onto a two-state abstraction where
    s0 and s1 coincide: a then has successors a and b."""
    phys = lts_to_category(chain_system(3))
    A = lts_to_category(TransitionSystem(("a", "b"), (("u", "a", "b"),)))
    om = {"s0": "a", "s1": "a", "s2": "b"}
    mm = {"id_s0": "id_a", "id_s1": "id_a", "id_s2": "id_b", "t0": "id_a", "t1": "u",
          "t0;t1": "u"}
    R = new_functor(phys, A, om, mm)
    Rt = new_functor(A, phys, {"a": "s0", "b": "s2"},
                     {"id_a": "id_s0", "id_b": "id_s2", "u": "t0;t1"})
    claim = CycleClaim(phys, A, R, Rt)
    v = check_causal_counterfactual(claim)
    assert v.stage == "counterfactual"
    expected = oracles.successor_conflicts(
        oracles.Plain(("s0", "s1", "s2"), {"t0": ("s0", "s1"), "t1": ("s1", "s2")}, {}, {}),
        (om, mm))
    assert {w.ids[0] for w in v.witnesses} == expected == {"a"}
    assert not check_compute_cycle(claim).ok


def test_missing_image_step_breaks_causal():
    phys = lts_to_category(chain_system(2))
    A = lts_to_category(TransitionSystem(("a", "b")))
    R = new_functor(phys, A, {"s0": "a", "s1": "b"},
                    {"id_s0": "id_a", "id_s1": "id_b", "t0": "id_a"})
    Rt = new_functor(A, phys, {"a": "s0", "b": "s1"}, {"id_a": "id_s0", "id_b": "id_s1"})
    v = check_causal_counterfactual(CycleClaim(phys, A, R, Rt))
    assert v.stage == "causal" and v.witnesses[0].ids == ("t0",)


# -- refinement ----------------------------------------------------------------------------------

@pytest.fixture(scope="module")
def numerals():
    phys = lts_to_category(cogwheel_fixture(10, 1, 10))
    conv = build_conversion_category((10, 8, 2), 10)
    F = {b: encode_functor(phys, conv, 10, b, tag=t) for b, t in
         ((10, "dec/"), (8, "oct/"), (2, "bin/"))}
    return conv, F


def test_refinement_by_base_conversion(numerals):
    conv, F = numerals
    for hi, lo in ((10, 8), (8, 2), (10, 2)):
        eta = base_conversion_nat_trans(conv, F[hi], F[lo])
        assert check_refinement(F[hi], F[lo], eta).ok


def test_refinement_with_a_wrong_component(numerals):
    conv, F = numerals
    eta = base_conversion_nat_trans(conv, F[10], F[2])
    comps = dict(eta.component_names)
    comps["wheels:3,4"] = comps["wheels:2,5"]
    v = check_refinement(F[10], F[2], new_nat_trans(F[10], F[2], comps))
    assert v.stage == "naturality"
    axioms = {w.axiom for w in v.witnesses}
    assert "REFINEMENT_COMPONENT" in axioms


def test_refinement_requires_matching_transformation(numerals):
    conv, F = numerals
    eta = base_conversion_nat_trans(conv, F[10], F[8])
    with pytest.raises(CategoryError) as exc:
        check_refinement(F[10], F[2], eta)
    assert exc.value.code == "NOT_PARALLEL"


# -- multiple realizability --------------------------------------------------------------------

@pytest.fixture(scope="module")
def realizations():
    adder = build_adder_category(10, 1, 3)
    out = []
    for base, width, latch in ((10, 1, False), (2, 2, False), (2, 2, True)):
        phys = lts_to_category(cogwheel_fixture(base, width, 3, latch=latch))
        out.append((phys, encode_functor(phys, adder, base, 10),
                    decode_functor(adder, phys, base, 10)))
    return adder, out


def test_strict_realizability(realizations):
    adder, reals = realizations
    verdicts = check_multiple_realizability(adder, reals[:2], strict=True)
    assert [v.ok for v in verdicts] == [True, True]
    assert not check_multiple_realizability(adder, reals[2:], strict=True)[0].ok


def test_relaxed_realizability_accepts_latched_machine(realizations):
    adder, reals = realizations
    verdicts = check_multiple_realizability(adder, reals, strict=False)
    assert all(v.ok for v in verdicts)
    assert verdicts[2].regime == "relaxed"


def test_realization_of_another_abstraction_rejected(realizations):
    adder, reals = realizations
    other = build_adder_category(10, 1, 2)
    with pytest.raises(CategoryError):
        check_multiple_realizability(other, reals)


# -- nested ----------------------------------------------------------------------------------

def _layer(n):
    P = lts_to_category(chain_system(n))
    return CycleClaim(P, P, identity_functor(P), identity_functor(P))


def test_single_layer_reduces_to_compute():
    assert check_nested([_layer(3)], []).ok


def test_nested_identity_link():
    a, b = _layer(2), _layer(2)
    assert check_nested([a, b], [identity_functor(a.abs)]).ok


def test_nested_link_count_checked():
    with pytest.raises(CategoryError) as exc:
        check_nested([_layer(2), _layer(2)], [])
    assert exc.value.code == "LAYER_MISMATCH"


def test_nested_failing_layer_reported():
    a = _layer(2)
    bad = CycleClaim(a.phys, a.abs, a.R, with_mor(a.Rt, "t0", "id_s0"))
    v = check_nested([bad, _layer(2)], [identity_functor(a.abs)])
    assert v.stage == "layer" and v.witnesses[0].detail.startswith("layer 0")


# -- audit ----------------------------------------------------------------------------------------

def test_audit_demo_simple_exceeds_functorial():
    ts = chain_system(3)
    A = interval_category()
    rep = audit_simple_mappings(ts, A)
    assert rep.n_state_maps_simple == len(oracles.simple_maps(
        ts.states, [(t.id, t.source, t.target) for t in ts.transitions], oracles.plain(A))) == 3
    assert rep.n_functorial == 0
    assert rep.strictness and rep.functorial_included


@pytest.mark.parametrize("n", [1, 2, 3])
def test_audit_against_oracle_on_chains(n):
    ts = chain_system(n)
    for A in (interval_category(), lts_to_category(chain_system(1)),
              lts_to_category(chain_system(2, "u"))):
        rep = audit_simple_mappings(ts, A)
        trans = [(t.id, t.source, t.target) for t in ts.transitions]
        assert rep.n_state_maps_simple == len(oracles.simple_maps(ts.states, trans,
                                                                   oracles.plain(A)))
        P = lts_to_category(ts)
        assert rep.n_functorial == len(oracles.inverse_pairs(oracles.plain(P), oracles.plain(A)))
        assert rep.n_functorial <= rep.n_state_maps_simple
        assert rep.functorial_included


def test_audit_budget_enforced():
    with pytest.raises(CategoryError) as exc:
        audit_simple_mappings(chain_system(4), interval_category(), budget=3)
    assert exc.value.code == "BUDGET_EXCEEDED"
