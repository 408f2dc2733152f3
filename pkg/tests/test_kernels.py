"""The numba and numpy kernels must report identical violations."""
import os
import random
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from compcycle import (
    CycleClaim,
    Morphism,
    check_adjunction,
    check_category_laws,
    check_compute_cycle,
    check_functor_laws,
    check_naturality,
    cogwheel_fixture,
    build_adder_category,
    decode_functor,
    encode_functor,
    identity_functor,
    lts_to_category,
    new_adjunction,
    new_category,
)
from compcycle import _kernels_jit, _kernels_np, kernels
from compcycle._accel import NUMBA_AVAILABLE
from compcycle.maps import Functor, NatTrans

NAMES = ("category_violations", "functor_violations", "naturality_violations",
         "triangle_violations", "roundtrip_violations", "square_violations")

pytestmark = pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")


def with_backend(module, run):
    saved = {n: getattr(kernels, n) for n in NAMES}
    try:
        for n in NAMES:
            setattr(kernels, n, getattr(module, n))
        return run()
    finally:
        for n, f in saved.items():
            setattr(kernels, n, f)


def both(run):
    return with_backend(_kernels_jit, run), with_backend(_kernels_np, run)


def random_cat(seed):
    objs, mors, ident, comp = oracles.random_category(random.Random(seed))
    return new_category(objs, [Morphism(*m) for m in mors], ident, comp)


def scramble(arr, rng, hi):
    out = np.array(arr, copy=True)
    if len(out):
        out[rng.randrange(len(out))] = rng.randrange(-1, hi)
    return out


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_category_kernels_agree(seed, pick):
    cat = random_cat(seed)
    rng = random.Random(pick)
    mutated = cat.with_tables(comp=scramble(cat.comp_tab, rng, cat.n_morphisms),
                              identity=scramble(cat.ident, rng, cat.n_morphisms))
    jit, npy = both(lambda: check_category_laws(mutated, 10**9))
    assert jit == npy


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_functor_and_naturality_kernels_agree(seed, pick):
    cat = random_cat(seed)
    rng = random.Random(pick)
    ident = identity_functor(cat)

    def fresh():
        # new objects each time so cached rows do not cross backends
        F = Functor(cat, cat, scramble(ident.obj_map, rng.__class__(pick), cat.n_objects),
                    scramble(ident.mor_map, rng.__class__(pick + 1), cat.n_morphisms))
        comps = scramble(cat.ident, rng.__class__(pick + 2), cat.n_morphisms)
        eta = NatTrans(identity_functor(cat), identity_functor(cat), comps)
        return check_functor_laws(F, 10**9), check_naturality(eta, 10**9)

    jit, npy = both(fresh)
    assert jit == npy


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_triangle_kernels_agree(seed, pick):
    cat = random_cat(seed)

    def fresh():
        I = identity_functor(cat)
        comps = scramble(cat.ident, random.Random(pick), cat.n_morphisms)
        comps = np.where(comps < 0, cat.ident, comps)
        unit = NatTrans(I, identity_functor(cat), comps)
        counit = NatTrans(identity_functor(cat), identity_functor(cat), cat.ident)
        return check_adjunction(new_adjunction(I, identity_functor(cat), unit, counit), 10**9)

    jit, npy = both(fresh)
    assert jit == npy


@pytest.mark.parametrize("entry", range(0, 40, 3))
def test_cycle_kernels_agree(entry):
    phys = lts_to_category(cogwheel_fixture(10, 1))
    adder = build_adder_category(10, 1)

    def fresh():
        R = encode_functor(phys, adder, 10)
        Rt = decode_functor(adder, phys, 10)
        mm = R.mor_map.copy()
        mm[entry % len(mm)] = (mm[entry % len(mm)] + 1) % adder.n_morphisms
        return check_compute_cycle(CycleClaim(phys, adder, R.with_maps(mor_map=mm), Rt), 10**9)

    jit, npy = both(fresh)
    assert jit == npy
    assert not jit.ok


def test_environment_flag_selects_numpy():
    env = dict(os.environ, COMPCYCLE_DISABLE_JIT="1")
    code = "from compcycle import kernels; print(kernels.BACKEND)"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numpy"
    env["COMPCYCLE_DISABLE_JIT"] = ""
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True)
    assert out.stdout.strip() == "numba"
