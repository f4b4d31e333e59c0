import itertools

import pytest

from bracketforge.biquandle import alexander_biquandle, trivial_biquandle
from bracketforge.bracket import (BracketError, InvariantValue, bracket_invariant, constant_bracket,
                                  is_cocycle_bracket, kauffman_at, kauffman_bracket, make_bracket, state_sum,
                                  validate_bracket)
from bracketforge.coloring import Coloring, counting_invariant, enumerate_colorings
from bracketforge.diagram import add_kink, braid_closure, poke_r2
from bracketforge.files import load_bracket, load_diagram
from bracketforge.ring import Laurent, LaurentRing, ModularRing, NotInvertibleError
from conftest import BRACKET_FIXTURES, DIAGRAM_FIXTURES
from oracles import as_terms, brute_colorings, kauffman_polynomial, oracle_state_sum, plain

A = Laurent.variable()
Z7 = ModularRing(7)

# multisets from the recursive state-sum oracle in tests/oracles.py, frozen
ORACLE_MULTISETS = {
    "toy_z7.json": {"hopf.txt": {1: 2, 6: 2}, "trefoil.txt": {1: 2}, "figure8.txt": {1: 2},
                    "torus_4_2.txt": {6: 4}, "u1.txt": {1: 2}, "u2.txt": {6: 4}},
    "constant_z7.json": {"hopf.txt": {5: 4}, "trefoil.txt": {1: 2}, "figure8.txt": {1: 2},
                         "torus_4_2.txt": {5: 4}, "u1.txt": {1: 2}, "u2.txt": {5: 4}},
    "cocycle_z7.json": {"hopf.txt": {3: 2, 5: 2}, "trefoil.txt": {1: 2}, "figure8.txt": {1: 2},
                        "torus_4_2.txt": {5: 2, 6: 2}, "u1.txt": {1: 2}, "u2.txt": {5: 4}},
}
RAW_TOY = {"hopf.txt": {1: 2, 6: 2}, "trefoil.txt": {6: 2}, "figure8.txt": {6: 2}, "torus_4_2.txt": {1: 4},
           "u1.txt": {6: 2}, "u2.txt": {1: 4}}


def test_toy_bracket_validates(z2):
    report = validate_bracket(z2, Z7, [[1, 5], [4, 1]], [[3, 1], [5, 3]])
    assert report.ok and report.delta == 6 and report.w == 2


def test_kauffman_bracket_constants():
    k = kauffman_bracket()
    assert k.delta == -A ** 2 - A ** -2
    assert k.w == -A ** 3
    assert not is_cocycle_bracket(k)


def test_non_unit_entry_named(z2):
    report = validate_bracket(z2, Z7, [[1, 5], [4, 1]], [[0, 1], [5, 3]])
    assert report.conditions_failed() == ["unit.B"]
    assert report.violations[0].witness == (1, 1)
    with pytest.raises(BracketError):
        make_bracket(z2, Z7, [[1, 5], [4, 1]], [[0, 1], [5, 3]])


def test_inconsistent_delta_reports_both_values(z2):
    report = validate_bracket(z2, Z7, [[1, 6], [4, 1]], [[3, 1], [5, 3]])
    v = next(v for v in report.violations if v.condition == "ii")
    assert v.witness == (1, 2) and "2" in v.detail and "6" in v.detail
    assert report.delta is None


def test_exchange_failure_names_equation():
    # constant A=1 with B=3 over the three-element Alexander biquandle fails only in (iii)
    bq = alexander_biquandle(3, 2, 1)
    a = [[1, 1, 1], [1, 1, 2], [1, 1, 1]]
    b = [[1, 1, 1], [1, 1, 2], [1, 1, 1]]
    report = validate_bracket(bq, Z7, a, b)
    assert report.violations and all(v.condition.startswith(("iii", "i", "ii")) for v in report.violations)
    eq = [v for v in report.violations if v.condition.startswith("iii.")]
    assert eq and all(len(v.witness) == 3 for v in eq)


def test_state_sum_per_coloring(diagrams, toy):
    hopf = diagrams["hopf.txt"]
    by_pair = {}
    for f in enumerate_colorings(hopf, toy.biquandle):
        by_pair[(f[1], f[4])] = (state_sum(hopf, f, toy, "raw"), state_sum(hopf, f, toy))
    # equal colors at the crossing pair: the (1)(1)/(3)(3) pattern, value 1 with delta^k
    assert by_pair[(1, 1)] == (1, 6) and by_pair[(2, 2)] == (1, 6)
    assert by_pair[(1, 2)] == (6, 1) and by_pair[(2, 1)] == (6, 1)


def test_state_sum_rejects_bad_coloring(diagrams, toy):
    with pytest.raises(BracketError):
        state_sum(diagrams["hopf.txt"], Coloring((1, 1, 1, 1)), toy)


def test_unknot_values(diagrams, toy):
    f = Coloring((), (1,))
    assert state_sum(diagrams["u1.txt"], f, toy, "raw") == toy.delta
    assert state_sum(diagrams["u1.txt"], f, toy) == 1


def test_invariant_examples(diagrams, toy):
    hopf = bracket_invariant(diagrams["hopf.txt"], toy)
    assert hopf == {1: 2, 6: 2} and hopf.polynomial() == "2u + 2u^6"
    assert bracket_invariant(diagrams["u2.txt"], toy) == {6: 4}
    k = bracket_invariant(diagrams["u1.txt"], kauffman_bracket(), "raw")
    assert k.values() == [-A ** 2 - A ** -2]


@pytest.mark.parametrize("name", ["toy_z7.json", "constant_z7.json", "cocycle_z7.json"])
def test_multisets_match_frozen_oracle(diagrams, name):
    beta = load_bracket(f"fixtures/{name}")
    for dname, d in diagrams.items():
        assert bracket_invariant(d, beta) == ORACLE_MULTISETS[name][dname], dname
    if name == "toy_z7.json":
        for dname, d in diagrams.items():
            assert bracket_invariant(d, beta, "raw") == RAW_TOY[dname], dname


def test_state_sums_match_oracle_on_braids():
    bq = alexander_biquandle(3, 2, 2)
    from bracketforge.search import search_brackets
    brackets = [b for b in search_brackets(bq, ModularRing(5)) if not is_cocycle_bracket(b)][:3]
    for word in ([1, 1, 1], [1, -2, 1, -2], [1, 2, -1, 2, 2]):
        d = braid_closure(word)
        crossings, loops = plain(d)
        for beta in brackets:
            a = [list(r) for r in beta.A]
            b = [list(r) for r in beta.B]
            for f in enumerate_colorings(d, bq):
                col = (None,) + f.arcs
                for raw in (False, True):
                    want = oracle_state_sum(crossings, loops, col, a, b, 5, raw)
                    assert state_sum(d, f, beta, "raw" if raw else "unknot") == want


def test_cocycle_detection():
    assert is_cocycle_bracket(constant_bracket(alexander_biquandle(3, 2, 1), Z7, 1, 1))
    assert is_cocycle_bracket(load_bracket("fixtures/cocycle_z7.json"))
    assert not is_cocycle_bracket(load_bracket("fixtures/toy_z7.json"))


def test_kauffman_at_examples(diagrams):
    u1 = diagrams["u1.txt"]
    assert kauffman_at(u1, -1, Z7, "raw") == 5
    assert kauffman_at(u1, -1, Z7) == 1
    with pytest.raises(NotInvertibleError):
        kauffman_at(u1, 0, Z7)


def test_hopf_formal_kauffman_by_hand(diagrams):
    # states AA, BA, AB, BB contribute A^2 d^2, d, d, A^-2 d^2; times w^-2 = A^-6
    d = -A ** 2 - A ** -2
    by_hand = (A ** 2 * d ** 2 + 2 * d + A ** -2 * d ** 2) * A ** -6
    assert kauffman_at(diagrams["hopf.txt"], A, LaurentRing(), "raw") == by_hand


@pytest.mark.parametrize("name", DIAGRAM_FIXTURES)
def test_kauffman_matches_recursive_skein(diagrams, name):
    d = diagrams[name]
    crossings, loops = plain(d)
    assert kauffman_at(d, A, LaurentRing()).terms == as_terms(kauffman_polynomial(crossings, loops))


def test_polynomial_at_one_is_count(diagrams):
    for name in BRACKET_FIXTURES:
        beta = load_bracket(f"fixtures/{name}")
        for d in diagrams.values():
            assert bracket_invariant(d, beta).total == counting_invariant(d, beta.biquandle)


def test_chunked_evaluation_matches(diagrams, toy):
    d = poke_r2(diagrams["torus_4_2.txt"], 1, 5)
    assert bracket_invariant(d, toy, workers=3).counts == bracket_invariant(d, toy).counts


def test_invariance_on_small_moves(diagrams):
    for name in BRACKET_FIXTURES:
        beta = load_bracket(f"fixtures/{name}")
        d = diagrams["hopf.txt"]
        base = bracket_invariant(d, beta)
        for lab, sign, of in itertools.product((1, 4), (1, -1), (False, True)):
            assert bracket_invariant(add_kink(d, lab, sign, over_first=of), beta) == base
        for a, b, sign, rev in itertools.product((1, 2), (3, 4), (1, -1), (False, True)):
            assert bracket_invariant(poke_r2(d, a, b, sign, rev), beta) == base


def test_invariant_value_round_trip(diagrams):
    v = bracket_invariant(diagrams["trefoil.txt"], kauffman_bracket())
    assert InvariantValue.from_dict(v.to_dict()) == v
    assert v.polynomial() == "u^(-A^-16 + A^-12 + A^-4)"


def test_one_element_bracket_over_z5_values():
    one = trivial_biquandle(1)
    beta = make_bracket(one, ModularRing(5), [[2]], [[3]])
    assert beta.delta == (-2 * 2 - 3 * 3) % 5
    assert bracket_invariant(braid_closure([1, 1, 1]), beta).total == 1
