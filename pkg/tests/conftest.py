import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from bracketforge.biquandle import Biquandle  # noqa: E402
from bracketforge.files import load_biquandle, load_bracket, load_diagram  # noqa: E402

DIAGRAM_FIXTURES = ["hopf.txt", "trefoil.txt", "figure8.txt", "torus_4_2.txt", "u1.txt", "u2.txt"]
BIQUANDLE_FIXTURES = ["z2.json", "alex_z3_t2_s1.json", "alex_z5_t3_s2.json", "trivial1.json"]
BRACKET_FIXTURES = ["toy_z7.json", "constant_z7.json", "cocycle_z7.json", "kauffman.json"]

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def diagrams():
    return {name: load_diagram(f"fixtures/{name}") for name in DIAGRAM_FIXTURES}


@pytest.fixture(scope="session")
def z2() -> Biquandle:
    return load_biquandle("fixtures/z2.json")


@pytest.fixture(scope="session")
def toy():
    return load_bracket("fixtures/toy_z7.json")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, msg = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {msg}")
