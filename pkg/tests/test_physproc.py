import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from compcycle import (
    CategoryError,
    Transition,
    TransitionSystem,
    build_adder_category,
    build_comp_category,
    build_conversion_category,
    check_category_laws,
    check_functor_laws,
    check_inverse_pair,
    check_naturality,
    cogwheel_fixture,
    compose,
    decode_functor,
    encode_functor,
    enumerate_nat_trans,
    hom_set,
    lts_to_category,
)
from compcycle.physproc import (
    EXPLICIT_TABLE,
    NULL_OBJECT,
    NumeralObj,
    adder_conversion_functor,
    base_conversion_nat_trans,
    numeral,
)
from conftest import build


# -- adder categories ----------------------------------------------------------------

def test_decimal_adder_arrow():
    cat = build_adder_category(10, 2)
    assert hom_set(cat, "6,9", "15") == ["add_6,9"]


def test_octal_adder_arrow():
    cat = build_adder_category(8, 2)
    assert hom_set(cat, "6,11", "17") == ["add_6,11"]


def test_binary_adder_arrow():
    cat = build_adder_category(2, 4)
    assert hom_set(cat, "110,1001", "1111") == ["add_110,1001"]


@pytest.mark.parametrize("base,width", [(10, 1), (10, 2), (8, 1), (8, 2), (2, 2), (2, 4)])
def test_adders_are_lawful(base, width):
    assert check_category_laws(build_adder_category(base, width)).ok


@pytest.mark.parametrize("base,width", [(10, 1), (8, 2), (2, 3)])
def test_every_add_arrow_lands_on_the_sum(base, width):
    cat = build_adder_category(base, width)
    adds = [m for m in cat.morphisms if m.id.startswith("add_")]
    bound = base**width
    assert len(adds) == bound * (bound + 1) // 2
    for m in adds:
        x, y = (int(d, base) for d in m.dom.split(","))
        assert int(m.cod, base) == x + y


def test_object_count_matches_bound():
    cat = build_adder_category(10, 1, bound=4)
    assert cat.n_objects == 4 + 10
    assert cat.bound == 4


@pytest.mark.parametrize("base,width", [(10, 4), (8, 5), (2, 9), (10, 0)])
def test_width_overflow(base, width):
    with pytest.raises(CategoryError) as exc:
        build_adder_category(base, width)
    assert exc.value.code == "WIDTH_OVERFLOW"


@pytest.mark.parametrize("base", [3, 16, 1])
def test_unsupported_base(base):
    with pytest.raises(CategoryError) as exc:
        build_adder_category(base, 1)
    assert exc.value.code == "UNSUPPORTED_BASE"


@given(st.sampled_from([2, 8, 10]), st.integers(0, 999), st.integers(0, 999))
def test_numeral_objects_round_trip(base, x, y):
    obj = NumeralObj.of(base, x, y)
    assert NumeralObj.parse(base, obj.id).values == (x, y)
    assert obj.value == x + y
    assert numeral(x, base) == obj.digits[0]


# -- base conversion -------------------------------------------------------------------

def test_conversion_functor_between_adders():
    F = adder_conversion_functor(build_adder_category(10, 1), build_adder_category(2, 4, 10))
    assert check_functor_laws(F).ok
    assert F.obj("6,3") == "110,11" and F.mor("add_6,3") == "add_110,11"


@pytest.fixture(scope="module")
def readings():
    ts = cogwheel_fixture(10, 2)
    phys = lts_to_category(ts)
    conv = build_conversion_category((10, 8, 2), 100)
    F = {b: encode_functor(phys, conv, 10, b, tag=t) for b, t in
         ((10, "dec/"), (8, "oct/"), (2, "bin/"))}
    return phys, conv, F


def test_conversion_category_is_lawful(readings):
    assert check_category_laws(readings[1]).ok


def test_decimal_to_binary_components(readings):
    _, conv, F = readings
    eta = base_conversion_nat_trans(conv, F[10], F[2])
    assert check_naturality(eta).ok
    assert conv.morphism(eta.at("wheels:6,9")).cod == "bin/110,1001"
    assert conv.morphism(eta.at("reg:15")).cod == "bin/1111"


def test_conversion_through_octal_equals_direct(readings):
    _, conv, F = readings
    d2o = base_conversion_nat_trans(conv, F[10], F[8])
    o2b = base_conversion_nat_trans(conv, F[8], F[2])
    d2b = base_conversion_nat_trans(conv, F[10], F[2])
    for p in readings[0].objects:
        assert compose(conv, d2o.at(p), o2b.at(p)).id == d2b.at(p)


def test_conversion_is_the_only_transformation():
    ts = cogwheel_fixture(10, 1, 3)
    phys = lts_to_category(ts)
    conv = build_conversion_category((10, 2), 3)
    dec = encode_functor(phys, conv, 10, 10, tag="dec/")
    bin_ = encode_functor(phys, conv, 10, 2, tag="bin/")
    found = enumerate_nat_trans(dec, bin_)
    assert found == [base_conversion_nat_trans(conv, dec, bin_)]
    assert enumerate_nat_trans(bin_, dec) == []


def test_conversion_rejects_repeated_base():
    with pytest.raises(CategoryError):
        build_conversion_category((10, 10))


# -- transition systems --------------------------------------------------------------------

def test_chain_compiles_to_free_category():
    ts = TransitionSystem(("s0", "s1", "s2"), (("t0", "s0", "s1"), ("t1", "s1", "s2")))
    cat = lts_to_category(ts)
    assert set(cat.mor_ids) == {"id_s0", "id_s1", "id_s2", "t0", "t1", "t0;t1"}
    assert compose(cat, "t0", "t1").id == "t0;t1"
    assert check_category_laws(cat).ok


def test_cyclic_system_needs_a_table():
    ts = TransitionSystem(("s",), (Transition("loop", "s", "s"),))
    with pytest.raises(CategoryError) as exc:
        lts_to_category(ts)
    assert exc.value.code == "CYCLIC_QUIVER"


def test_cyclic_system_with_explicit_table():
    ts = TransitionSystem(("s",), (Transition("flip", "s", "s"),))
    table = build(["s"], [("flip", "s", "s")], comp=[("flip", "flip", "id_s")])
    assert lts_to_category(ts, EXPLICIT_TABLE, table) is table


def test_explicit_table_must_match_transitions():
    ts = TransitionSystem(("s",), (Transition("flip", "s", "s"),))
    table = build(["s"], [("flop", "s", "s")], comp=[("flop", "flop", "id_s")])
    with pytest.raises(CategoryError) as exc:
        lts_to_category(ts, EXPLICIT_TABLE, table)
    assert exc.value.code == "TABLE_MISMATCH"


def test_duplicate_transition_rejected():
    with pytest.raises(CategoryError):
        TransitionSystem(("a", "b"), (("t", "a", "b"), ("t", "a", "b")))


# -- computational category -------------------------------------------------------------------

def test_negation_composes_to_identity():
    cat = build_comp_category(["Bool"], [("not", "Bool", "Bool")],
                              composites={("not", "not"): "id_Bool"})
    assert check_category_laws(cat).ok
    assert compose(cat, "not", "not").id == "id_Bool"


def test_null_object_is_initial_and_terminal():
    cat = build_comp_category(["Bool", "Nat"], [("not", "Bool", "Bool")], include_null=True,
                              composites={("not", "not"): "id_Bool"})
    assert check_category_laws(cat).ok
    for x in cat.objects:
        assert len(hom_set(cat, NULL_OBJECT, x)) == 1
        assert len(hom_set(cat, x, NULL_OBJECT)) == 1


def test_missing_composite_rejected():
    with pytest.raises(CategoryError) as exc:
        build_comp_category(["Bool"], [("not", "Bool", "Bool")])
    assert exc.value.code == "UNCLOSED_TABLE"


def test_unknown_term_rejected():
    with pytest.raises(CategoryError) as exc:
        build_comp_category(["Bool"], [("len", "Str", "Bool")])
    assert exc.value.code == "DANGLING_REFERENCE"


# -- cogwheel machines -------------------------------------------------------------------------

@pytest.mark.parametrize("base,width,src,dst", [
    (10, 2, "wheels:6,9", "15"),
    (8, 2, "wheels:6,11", "17"),
    (2, 4, "wheels:110,1001", "1111"),
])
def test_crank_reads_as_addition(base, width, src, dst):
    phys = lts_to_category(cogwheel_fixture(base, width))
    adder = build_adder_category(base, width)
    R = encode_functor(phys, adder, base)
    crank = "crank:" + src.split(":")[1]
    assert R.mor(crank) == "add_" + src.split(":")[1]
    assert adder.morphism(R.mor(crank)).cod == dst


@pytest.mark.parametrize("base,width", [(10, 1), (8, 1), (2, 3)])
def test_encode_decode_are_inverse(base, width):
    phys = lts_to_category(cogwheel_fixture(base, width))
    adder = build_adder_category(base, width)
    R = encode_functor(phys, adder, base)
    Rt = decode_functor(adder, phys, base)
    assert check_functor_laws(R).ok and check_functor_laws(Rt).ok
    assert check_inverse_pair(R, Rt).ok


def test_small_machine_has_one_inverse_pair():
    phys = lts_to_category(cogwheel_fixture(10, 1, 1))
    adder = build_adder_category(10, 1, 1)
    pairs = oracles.inverse_pairs(oracles.plain(phys), oracles.plain(adder))
    R = encode_functor(phys, adder, 10)
    assert len(pairs) == 1
    assert pairs[0][0] == (R.obj_map_names, R.mor_map_names)


def test_latched_machine_is_not_an_inverse_pair():
    phys = lts_to_category(cogwheel_fixture(2, 2, 4, latch=True))
    adder = build_adder_category(10, 1, 4)
    R = encode_functor(phys, adder, 2, 10)
    Rt = decode_functor(adder, phys, 2, 10)
    assert check_functor_laws(R).ok and check_functor_laws(Rt).ok
    assert not check_inverse_pair(R, Rt).ok
