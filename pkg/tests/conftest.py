import os
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from compcycle import Morphism, Quiver, free_category, new_category

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

ROOT = Path(__file__).resolve().parent.parent
SPECS = ROOT / "specs"
GOLDEN = Path(__file__).resolve().parent / "golden"


def build(objects, arrows, comp=(), null=None):
    """Category from objects, non-identity arrows ``(id, dom, cod)`` and extra
    composites ``(f, g, h)`` (f first); identities ``id_<o>`` and their
    absorption entries are added."""
    morphisms = [Morphism(f"id_{o}", o, o) for o in objects]
    morphisms += [Morphism(*a) for a in arrows]
    table = {}
    for m in morphisms:
        table[(f"id_{m.dom}", m.id)] = m.id
        table[(m.id, f"id_{m.cod}")] = m.id
    for f, g, h in comp:
        table[(f, g)] = h
    return new_category(objects, morphisms, {o: f"id_{o}" for o in objects}, table, null)


@pytest.fixture
def point():
    return build(["*"], [])


@pytest.fixture
def interval():
    return build(["a", "b"], [("f", "a", "b")])


@pytest.fixture
def chain3():
    return free_category(Quiver(("a", "b", "c"), (("f", "a", "b"), ("g", "b", "c"))))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
