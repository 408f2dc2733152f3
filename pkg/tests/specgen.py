"""Random well-formed specs for round-trip testing."""
import random

import oracles
from compcycle import (
    CategoryError,
    Morphism,
    enumerate_functors,
    free_category,
    identity_functor,
    new_category,
)
from compcycle.core import Quiver
from compcycle.dsl import SpecFile
from compcycle.dsl.convert import category_decl, functor_decl
from compcycle.dsl.model import (
    AdjunctionDecl,
    AuditDecl,
    ClaimDecl,
    LtsDecl,
    NatTransDecl,
    QuiverDecl,
)

_SUFFIXES = ("", "", "", ",1", ":x", ".v", ";w", "-2", "+")


def _rename(rng, names, tag):
    out = {}
    for n in names:
        s = rng.choice(_SUFFIXES)
        head = rng.choice(("", "", "9"))
        out[n] = f"{head}{tag}{n}{s}"
    return out


def _random_category(rng, tag):
    objs, mors, ident, comp = oracles.random_category(rng, max_objects=3, max_morphisms=8)
    ro = _rename(rng, objs, tag)
    rm = _rename(rng, [m for m, _, _ in mors], tag + "m")
    labels = {m: rng.choice((None, None, "step", "x-y")) for m, _, _ in mors}
    return new_category(
        [ro[o] for o in objs],
        [Morphism(rm[m], ro[a], ro[b], labels[m]) for m, a, b in mors],
        {ro[o]: rm[i] for o, i in ident.items()},
        {(rm[f], rm[g]): rm[h] for (f, g), h in comp.items()},
    )


def _random_dag(rng, tag, edge_kw):
    n = rng.randint(1, 4)
    nodes = [f"{tag}{i}{rng.choice(_SUFFIXES)}" for i in range(n)]
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.4:
                edges.append((f"{edge_kw}{len(edges)}", nodes[i], nodes[j],
                              rng.choice((None, "tick", "a.b"))))
    return nodes, edges


def random_spec(seed: int) -> SpecFile:
    """A well-formed spec using every kind of declaration."""
    rng = random.Random(seed)
    decls = []
    cats = {}
    for k in range(rng.randint(1, 3)):
        name = f"C{k}" if rng.random() < 0.7 else f"cat.{k}"
        cats[name] = _random_category(rng, f"c{k}")
        decls.append(category_decl(name, cats[name]))
    nodes, edges = _random_dag(rng, "n", "e")
    decls.append(QuiverDecl("Q", tuple(nodes), tuple(edges)))
    states, trans = _random_dag(rng, "s", "t")
    decls.append(LtsDecl("L", tuple(states), tuple(trans)))
    cats["L"] = free_category(Quiver(tuple(states), tuple(trans)))

    names = sorted(cats)
    ident = {}
    for i, c in enumerate(names):
        F = identity_functor(cats[c])
        fname = f"id{i}"
        ident[c] = fname
        d = functor_decl(fname, F, c, c)
        if rng.random() < 0.3:
            d = type(d)(d.name, d.src, d.dst, d.contravariant, "base10", d.obj_map, d.mor_map)
        decls.append(d)
        comps = tuple((o, cats[c].identity[o]) for o in cats[c].objects)
        decls.append(NatTransDecl(f"refl{i}", ("ref", fname), ("ref", fname), comps))
        decls.append(NatTransDecl(f"unit{i}", ("id", c),
                                  ("comp", ("ref", fname), ("ref", fname)), comps))
        decls.append(NatTransDecl(f"counit{i}", ("comp", ("ref", fname), ("ref", fname)),
                                  ("id", c), comps))
        decls.append(AdjunctionDecl(f"adj{i}", fname, fname, f"unit{i}", f"counit{i}"))
        for j, direction in enumerate(("compute", "predict", "causal")):
            chain = ()
            if direction != "causal" and rng.random() < 0.5:
                chain = (rng.choice(cats[c].mor_ids),)
            decls.append(ClaimDecl(f"k{i}_{j}", direction, c, c, fname, fname, chain=chain))
        decls.append(ClaimDecl(f"r{i}", "refinement", R=fname, R_prime=fname, eta=f"refl{i}"))
        real = [(c, fname, fname)] if rng.random() < 0.5 else \
            [(c, fname, fname, f"unit{i}", f"counit{i}")]
        decls.append(ClaimDecl(f"mr{i}", "realizability", abs=c,
                               mode=rng.choice((None, "strict", "relaxed")),
                               realizations=tuple(real)))
        decls.append(AuditDecl(f"aud{i}", "L", c))
    a, b = rng.sample(names, 2) if len(names) > 1 else (names[0], names[0])
    try:
        found = enumerate_functors(cats[a], cats[b], budget=2000)
    except CategoryError:
        found = []
    if found:
        decls.append(functor_decl("link", rng.choice(found), a, b))
        decls.append(ClaimDecl("stack", "nested", layers=(f"k{names.index(a)}_0",
                                                           f"k{names.index(b)}_0"),
                               links=("link",)))
    rng.shuffle(decls)
    return SpecFile(tuple(decls))
