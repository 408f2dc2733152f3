"""Declaration records produced by the parser.

Records hold plain strings only. Unordered members (objects, morphisms,
table entries, map entries) are kept sorted so that two specs differing only
in member order compare equal; ordered members (claim chains, layers, links,
realizations) keep their written order because it carries meaning.
"""
from __future__ import annotations

from dataclasses import dataclass, field

ERROR = "error"
WARNING = "warning"

UNKNOWN_ID = "E001"
DUPLICATE = "E002"
SYNTAX = "E003"
TYPE_MISMATCH = "E004"
INVALID = "E005"
SYNTHESIZED_IDENTITY = "W001"

# Block kinds in canonical order.
KINDS = ("category", "quiver", "lts", "functor", "nattrans", "adjunction", "claim", "audit")
CATEGORY_KINDS = ("category", "quiver", "lts")

CLAIM_KINDS = ("compute", "predict", "causal", "refinement", "realizability", "nested")


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    message: str
    line: int
    column: int

    def __str__(self):
        return f"{self.line}:{self.column}: {self.severity} {self.code}: {self.message}"

    def to_dict(self):
        return {"severity": self.severity, "code": self.code, "message": self.message,
                "line": self.line, "column": self.column}


class SpecError(Exception):
    """A spec could not be parsed or elaborated; carries every diagnostic."""

    def __init__(self, diagnostics):
        self.diagnostics = tuple(diagnostics)
        errors = [d for d in self.diagnostics if d.severity == ERROR]
        first = errors[0] if errors else (self.diagnostics[0] if self.diagnostics else None)
        super().__init__(str(first) if first else "invalid spec")


@dataclass(frozen=True)
class CategoryDecl:
    name: str
    objects: tuple[str, ...] = ()
    morphisms: tuple[tuple[str, str, str, str | None], ...] = ()  # id, dom, cod, label
    identities: tuple[tuple[str, str], ...] = ()  # object, morphism
    composites: tuple[tuple[str, str, str], ...] = ()  # g, f, h for "g . f = h"
    null: str | None = None
    kind = "category"

    def __post_init__(self):
        _sort(self, "objects", "morphisms", "identities", "composites")


@dataclass(frozen=True)
class QuiverDecl:
    name: str
    nodes: tuple[str, ...] = ()
    edges: tuple[tuple[str, str, str, str | None], ...] = ()
    kind = "quiver"

    def __post_init__(self):
        _sort(self, "nodes", "edges")


@dataclass(frozen=True)
class LtsDecl:
    name: str
    states: tuple[str, ...] = ()
    transitions: tuple[tuple[str, str, str, str | None], ...] = ()
    kind = "lts"

    def __post_init__(self):
        _sort(self, "states", "transitions")


@dataclass(frozen=True)
class FunctorDecl:
    name: str
    src: str
    dst: str
    contravariant: bool = False
    theory: str | None = None
    obj_map: tuple[tuple[str, str], ...] = ()
    mor_map: tuple[tuple[str, str], ...] = ()  # identities omitted when derivable
    kind = "functor"

    def __post_init__(self):
        _sort(self, "obj_map", "mor_map")


# Functor expressions: ("ref", name) | ("id", category) | ("comp", outer, inner)
FExpr = tuple


@dataclass(frozen=True)
class NatTransDecl:
    name: str
    source: FExpr
    target: FExpr
    components: tuple[tuple[str, str], ...] = ()
    kind = "nattrans"

    def __post_init__(self):
        _sort(self, "components")


@dataclass(frozen=True)
class AdjunctionDecl:
    name: str
    left: str  # F
    right: str  # G
    unit: str
    counit: str
    kind = "adjunction"


@dataclass(frozen=True)
class ClaimDecl:
    name: str
    direction: str = "compute"
    phys: str | None = None
    abs: str | None = None
    R: str | None = None
    Rt: str | None = None
    R_prime: str | None = None
    eta: str | None = None
    mode: str | None = None
    chain: tuple[str, ...] = ()
    layers: tuple[str, ...] = ()
    links: tuple[str, ...] = ()
    realizations: tuple[tuple[str, ...], ...] = ()  # (phys, R, Rt[, unit, counit])
    kind = "claim"


@dataclass(frozen=True)
class AuditDecl:
    name: str
    phys: str
    abs: str
    kind = "audit"


def _sort(rec, *names):
    for n in names:
        object.__setattr__(rec, n, tuple(sorted(getattr(rec, n), key=_key)))


def _key(item):
    # labels may be None; sort them before any string
    if isinstance(item, tuple):
        return tuple(("", "") if x is None else ("~", x) for x in item)
    return item


def decl_key(decl):
    return KINDS.index(decl.kind), decl.name


@dataclass(eq=False)
class SpecFile:
    """Parsed declarations in source order, their positions and warnings.

    Equality is structural: declaration order and source positions are
    ignored.
    """

    declarations: tuple = ()
    source_map: dict = field(default_factory=dict)  # (kind, name) -> (line, column)
    diagnostics: tuple[Diagnostic, ...] = ()
    prebuilt: dict = field(default_factory=dict)  # category name -> FinCategory

    def __eq__(self, other):
        if not isinstance(other, SpecFile):
            return NotImplemented
        return sorted(self.declarations, key=decl_key) == sorted(other.declarations, key=decl_key)

    __hash__ = None

    def get(self, kind, name):
        for d in self.declarations:
            if d.kind == kind and d.name == name:
                return d
        return None

    def of_kind(self, *kinds):
        return [d for d in self.declarations if d.kind in kinds]

    def names(self):
        return [d.name for d in self.declarations]
