"""Regenerate the machine-built files of the ``specs/`` corpus.

Run from the repository root: ``python3 scripts/build_corpus.py``.
"""
from __future__ import annotations

import sys
from pathlib import Path

from compcycle.dsl.convert import category_decl, functor_decl, lts_decl, nattrans_decl
from compcycle.dsl.model import ClaimDecl, FunctorDecl, SpecFile
from compcycle.dsl.serialize import serialize
from compcycle.physproc import (
    base_conversion_nat_trans,
    build_adder_category,
    build_conversion_category,
    cogwheel_fixture,
    decode_functor,
    encode_functor,
    lts_to_category,
)

SPECS = Path(__file__).resolve().parent.parent / "specs"


def adder_claim():
    """Decimal one-digit cogwheel machine against the decimal adder."""
    ts = cogwheel_fixture(10, 1)
    phys = lts_to_category(ts)
    adder = build_adder_category(10, 1)
    R = encode_functor(phys, adder, 10)
    Rt = decode_functor(adder, phys, 10)
    decls = [
        lts_decl("machine", ts),
        category_decl("adder", adder),
        functor_decl("encode", R, "machine", "adder"),
        functor_decl("decode", Rt, "adder", "machine"),
        ClaimDecl("computes", "compute", "machine", "adder", "encode", "decode",
                  chain=("crank:3,4",)),
        ClaimDecl("predicts", "predict", "machine", "adder", "encode", "decode"),
        ClaimDecl("causal", "causal", "machine", "adder", "encode", "decode"),
    ]
    return SpecFile(tuple(decls))


def broken_decode():
    """The same machine with decode sending the input pair 0,0 straight to
    the zero register: still a functor, no longer an inverse."""
    spec = adder_claim()
    out = []
    for d in spec.declarations:
        if d.kind == "functor" and d.name == "decode":
            obj = tuple((a, "reg:0" if a == "0,0" else x) for a, x in d.obj_map)
            mor = tuple((f, "id_reg:0" if f == "add_0,0" else u) for f, u in d.mor_map)
            d = FunctorDecl(d.name, d.src, d.dst, d.contravariant, d.theory, obj, mor)
        if d.kind == "claim" and d.name != "computes":
            continue
        out.append(d)
    return SpecFile(tuple(out))


def refinement():
    """Decimal, octal and binary readings of one machine, related by base
    conversion."""
    bound = 10
    ts = cogwheel_fixture(10, 1, bound)
    phys = lts_to_category(ts)
    conv = build_conversion_category((10, 8, 2), bound)
    F = {b: encode_functor(phys, conv, 10, b, tag=f"{t}/", theory_label=t)
         for b, t in ((10, "dec"), (8, "oct"), (2, "bin"))}
    decls = [lts_decl("machine", ts), category_decl("numerals", conv)]
    for b, name in ((10, "dec"), (8, "oct"), (2, "bin")):
        decls.append(functor_decl(name, F[b], "machine", "numerals"))
    for hi, lo in (("dec", "oct"), ("oct", "bin"), ("dec", "bin")):
        bh, bl = {"dec": 10, "oct": 8, "bin": 2}[hi], {"dec": 10, "oct": 8, "bin": 2}[lo]
        eta = base_conversion_nat_trans(conv, F[bh], F[bl])
        decls.append(nattrans_decl(f"{hi}_to_{lo}", eta, hi, lo))
        decls.append(ClaimDecl(f"refines_{hi}_{lo}", "refinement", "machine", "numerals",
                               hi, R_prime=lo, eta=f"{hi}_to_{lo}"))
    return SpecFile(tuple(decls))


def realizability():
    """One small decimal adder, realized by two renamed decimal machines and
    by a binary machine with an input latch."""
    bound = 4
    adder = build_adder_category(10, 1, bound)
    decls = [category_decl("adder", adder)]
    real = []
    for name, ts, base in (
        ("wheels_a", cogwheel_fixture(10, 1, bound, prefix="a."), 10),
        ("wheels_b", cogwheel_fixture(10, 1, bound, prefix="b."), 10),
        ("latch", cogwheel_fixture(2, 2, bound, latch=True), 2),
    ):
        prefix = name[-1] + "." if name.startswith("wheels") else ""
        phys = lts_to_category(ts)
        R = encode_functor(phys, adder, base, 10, prefix=prefix)
        Rt = decode_functor(adder, phys, base, 10, prefix=prefix)
        decls += [lts_decl(name, ts),
                  functor_decl(f"{name}_enc", R, name, "adder"),
                  functor_decl(f"{name}_dec", Rt, "adder", name)]
        real.append((name, f"{name}_enc", f"{name}_dec"))
    decls.append(ClaimDecl("wheels_strict", "realizability", abs="adder", mode="strict",
                           realizations=tuple(real[:2])))
    decls.append(ClaimDecl("all_relaxed", "realizability", abs="adder", mode="relaxed",
                           realizations=tuple(real)))
    return SpecFile(tuple(decls))


BUILT = {
    "adder_claim.catspec": adder_claim,
    "broken_decode.catspec": broken_decode,
    "refinement.catspec": refinement,
    "realizability.catspec": realizability,
}


def main(argv=None):
    for name, build in BUILT.items():
        (SPECS / name).write_text(serialize(build()), encoding="utf-8")
        print(SPECS / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
