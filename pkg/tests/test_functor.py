import itertools

import pytest

from bracketforge.biquandle import alexander_biquandle
from bracketforge.bracket import InvariantValue, bracket_invariant, kauffman_bracket, make_bracket
from bracketforge.diagram import braid_closure, unlink
from bracketforge.files import load_functor, load_word
from bracketforge.functor import (ColoredTangleFunctor, Generator, TangleWord, WordError, check_functor_equations,
                                  evaluate_rows, evaluate_word, format_word, functor_from_bracket,
                                  functor_vs_bracket, hopf_words, identity, kron, mat_mul, parse_word)
from bracketforge.ring import ModularRing
from bracketforge.search import search_brackets

Z7 = ModularRing(7)


@pytest.fixture(scope="module")
def functor():
    return load_functor("fixtures/functor_z7.json")


@pytest.fixture(scope="module")
def printed():
    return load_functor("fixtures/functor_z7_printed.json")


def test_fixture_matrices(functor):
    assert functor.X[1, 1] == ((1, 0, 0, 0), (0, 0, 3, 0), (0, 3, 6, 0), (0, 0, 0, 1))
    assert functor.X[1, 2] == ((5, 0, 0, 0), (0, 0, 1, 0), (0, 1, 2, 0), (0, 0, 0, 5))
    assert functor.X[2, 1] == ((4, 0, 0, 0), (0, 0, 5, 0), (0, 5, 3, 0), (0, 0, 0, 4))
    assert functor.N == ((0, 1, 4, 0),) and [r[0] for r in functor.U] == [0, 2, 1, 0]


def test_corrected_functor_passes(functor):
    report = check_functor_equations(functor)
    assert report.ok, report.to_dict()
    assert report.checked == {"RII": 4, "zigzag": 2, "RIII": 8}


def test_printed_cup_fails_zigzag(printed):
    report = check_functor_equations(printed)
    assert report.failed("zigzag.left") and report.failed("zigzag.right")
    assert mat_mul(Z7, kron(Z7, printed.N, printed.I), kron(Z7, printed.I, printed.U)) == ((1, 0), (0, 6))


def test_perturbed_crossing_fails_rii(functor):
    X = dict(functor.X)
    m = [list(r) for r in X[1, 2]]
    m[0][0] = 6
    X[1, 2] = tuple(tuple(r) for r in m)
    bad = ColoredTangleFunctor(Z7, functor.biquandle, X, functor.X_inverse, functor.I, functor.U, functor.N,
                               functor.w)
    issues = check_functor_equations(bad).failed("RII")
    assert [i.colors for i in issues] == [(1, 2)]


def test_hopf_words(functor, toy, diagrams):
    values = {w.rows[1][1].colors: evaluate_word(functor, w) for _, w in hopf_words(functor.biquandle)}
    assert values == {(1, 1): 1, (2, 2): 1, (1, 2): 6, (2, 1): 6}
    fv = InvariantValue.from_values(Z7, values.values())
    assert fv == {1: 2, 6: 2} == bracket_invariant(diagrams["hopf.txt"], toy)


def test_word_fixtures(functor):
    assert evaluate_word(functor, load_word("fixtures/hopf_12.word")) == 6
    assert evaluate_word(functor, load_word("fixtures/hopf_11.word")) == 1
    assert evaluate_word(functor, load_word("fixtures/loop.word")) == 6
    assert evaluate_word(functor, load_word("fixtures/unlink2.word")) == 1


def test_printed_loop_value(printed):
    assert evaluate_word(printed, load_word("fixtures/loop.word")) == 2
    assert all(evaluate_word(printed, w) == 0 for _, w in hopf_words(printed.biquandle))


def test_builder_reproduces_fixture(functor, toy):
    built = functor_from_bracket(toy)
    assert built.X == functor.X and built.U == functor.U and built.N == functor.N
    assert built.X_inverse == functor.X_inverse


def test_built_functors_pass_for_other_brackets():
    assert check_functor_equations(functor_from_bracket(kauffman_bracket())).ok
    bq = alexander_biquandle(3, 2, 1)
    for beta in search_brackets(bq, ModularRing(5), limit=3, workers=1):
        f = functor_from_bracket(beta)
        assert check_functor_equations(f).ok
        assert check_functor_equations(f, "left-under").ok


def test_riii_check_discriminates(functor):
    # swapping the crossing matrices of two color pairs breaks the braid relation
    X = dict(functor.X)
    X[1, 1], X[1, 2] = X[1, 2], X[1, 1]
    Xi = {k: functor.X_inverse[k] for k in functor.X_inverse}
    Xi[1, 1], Xi[1, 2] = Xi[1, 2], Xi[1, 1]
    bad = ColoredTangleFunctor(Z7, functor.biquandle, X, Xi, functor.I, functor.U, functor.N, functor.w)
    assert check_functor_equations(bad).failed("RIII")


def test_identity_crossings_pass(functor):
    I4 = identity(Z7, 4)
    X = {k: I4 for k in functor.X}
    f = ColoredTangleFunctor(Z7, functor.biquandle, X, X, functor.I, functor.U, functor.N, 1)
    report = check_functor_equations(f)
    assert report.ok


def test_evaluation_is_associative(functor):
    word = load_word("fixtures/hopf_21.word")
    rows = word.rows
    whole = evaluate_rows(functor, rows)
    lower, upper = evaluate_rows(functor, rows[:2]), evaluate_rows(functor, rows[2:])
    assert mat_mul(Z7, upper, lower) == whole


def test_word_parsing():
    w = parse_word("U U | I X_{12} I | I X^-1(2,1) I | N N\np: 1\nn: 1")
    assert w.rows[1][1] == Generator("X", (1, 2)) and w.rows[2][1] == Generator("Xi", (2, 1))
    assert (w.p, w.n) == (1, 1)
    assert parse_word(format_word(w)) == w
    with pytest.raises(WordError) as err:
        parse_word("U | I I I | N")
    assert err.value.row == 2
    with pytest.raises(WordError):
        parse_word("U U | N")
    with pytest.raises(WordError):
        parse_word("U | X | N")


def test_writhe_factor(functor):
    loop = load_word("fixtures/loop.word")
    assert evaluate_word(functor, loop, p=1, n=0) == 6 * pow(functor.w, -1, 7) % 7


def test_functor_vs_bracket_unlink(functor, toy):
    bq = functor.biquandle
    words = [TangleWord(((Generator("U"), Generator("U")), (Generator("N"), Generator("N"))), 0, 0)] * 4
    rows = functor_vs_bracket(functor, toy, [("u2", words, unlink(2))])
    assert rows[0].equal and rows[0].functor == {1: 4}


def test_braid_words_match_raw_bracket():
    # closures of 2-braids as words: each coloring gives one word
    beta = make_bracket(alexander_biquandle(2, 1, 1), Z7, [[1, 5], [4, 1]], [[3, 1], [5, 3]])
    f = functor_from_bracket(beta)
    from bracketforge.functor import braid_colors
    for word in ([1, 1], [1, 1, 1], [1, 1, 1, 1]):
        d = braid_closure(word)
        vals = []
        for c1, c2 in itertools.product(beta.biquandle.elements, repeat=2):
            cols, pairs = (c1, c2), []
            for _ in word:
                pair, cols = braid_colors(beta.biquandle, *cols)
                pairs.append(pair)
            if cols != (c1, c2):
                continue
            rows = [(Generator("U"), Generator("U"))]
            rows += [(Generator("I"), Generator("X", p), Generator("I")) for p in pairs]
            rows.append((Generator("N"), Generator("N")))
            vals.append(evaluate_word(f, TangleWord(tuple(rows), len(word), 0)))
        assert InvariantValue.from_values(Z7, vals) == bracket_invariant(d, beta, "raw")
