"""Self-contained ``.catspec`` texts for the standard fixtures."""
from __future__ import annotations

from .core import Morphism, new_category
from .dsl.convert import category_decl, functor_decl, lts_decl
from .dsl.model import AuditDecl, ClaimDecl, SpecFile
from .dsl.serialize import serialize
from .errors import CategoryError
from .physproc import (
    Transition,
    TransitionSystem,
    build_adder_category,
    cogwheel_fixture,
    decode_functor,
    encode_functor,
    lts_to_category,
)

KINDS = ("adder", "cogwheel", "chain", "audit-demo")


def interval_category():
    return new_category(
        ["a", "b"],
        [Morphism("id_a", "a", "a"), Morphism("id_b", "b", "b"), Morphism("f", "a", "b")],
        {"a": "id_a", "b": "id_b"},
        {("id_a", "id_a"): "id_a", ("id_b", "id_b"): "id_b",
         ("id_a", "f"): "f", ("f", "id_b"): "f"},
    )


def chain_system(length: int, prefix="s") -> TransitionSystem:
    if length < 1:
        raise CategoryError("BAD_PARAM", f"chain length must be at least 1, got {length}")
    states = [f"{prefix}{i}" for i in range(length)]
    trans = [Transition(f"t{i}", states[i], states[i + 1], "step") for i in range(length - 1)]
    return TransitionSystem(tuple(states), tuple(trans), f"chain of {length}")


def adder_spec(base=10, width=2) -> SpecFile:
    return SpecFile((category_decl("adder", build_adder_category(base, width)),))


def cogwheel_spec(base=10, width=2) -> SpecFile:
    """Machine, adder, encode/decode functors and the compute claim joining them."""
    ts = cogwheel_fixture(base, width)
    phys = lts_to_category(ts)
    adder = build_adder_category(base, width)
    R = encode_functor(phys, adder, base)
    Rt = decode_functor(adder, phys, base)
    return SpecFile((
        lts_decl("machine", ts),
        category_decl("adder", adder),
        functor_decl("encode", R, "machine", "adder"),
        functor_decl("decode", Rt, "adder", "machine"),
        ClaimDecl("computes", "compute", "machine", "adder", "encode", "decode"),
    ))


def chain_spec(length=3) -> SpecFile:
    return SpecFile((lts_decl("chain", chain_system(length)),))


def audit_demo_spec(length=3) -> SpecFile:
    """A state chain audited against the two-object interval."""
    return SpecFile((
        lts_decl("chain", chain_system(length)),
        category_decl("interval", interval_category()),
        AuditDecl("demo", "chain", "interval"),
    ))


def fixture_text(kind: str, base=10, width=2, length=3) -> str:
    if kind == "adder":
        return serialize(adder_spec(base, width))
    if kind == "cogwheel":
        return serialize(cogwheel_spec(base, width))
    if kind == "chain":
        return serialize(chain_spec(length))
    if kind == "audit-demo":
        return serialize(audit_demo_spec(length))
    raise CategoryError("BAD_PARAM", f"unknown fixture {kind!r}")
