from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ggt.errors import ArityMismatch, PreconditionError
from ggt.quasi import (
    BoundedCochain,
    BrooksQuasimorphism,
    PairSpec,
    brooks,
    brooks_eval,
    cauchy_check,
    coboundary,
    defect_estimate,
    defect_stable,
    from_quasimorphism,
    homogenize,
    left_translate_invariant,
    phi_eval,
    phi_inverse,
    phi_iso,
    quasimorphism_cochain,
    sample_tuples,
)
from ggt.words import Word, enumerate_words, invert

words = st.lists(st.integers(min_value=0, max_value=3), max_size=12).map(Word)


def test_brooks_eval():
    assert brooks_eval("ab", "abab") == 2
    assert brooks_eval("ab", "BABA") == -2
    assert brooks_eval("ab", "abAB") == 1
    assert brooks_eval("aa", "aaa") == 2
    with pytest.raises(PreconditionError):
        brooks_eval("", "ab")


def test_evaluation_cache_is_bounded():
    class SmallCache(BrooksQuasimorphism):
        cache_size = 8

    f = SmallCache("ab")
    for g in enumerate_words(2, 4):
        assert f(g) == brooks_eval("ab", g)
    assert f._cached.cache_info().currsize == 8
    assert f("abab") == 2


def test_brooks_repr_and_dict():
    f = brooks("ab")
    assert repr(f) == "brooks(ab)"
    assert f.to_dict() == {"kind": "brooks", "pattern": "ab"}


def test_single_letter_is_homomorphism():
    estimate = defect_estimate(brooks("a"), PairSpec("exhaustive", 3))
    assert estimate.value == 0
    assert estimate.pairs_examined == 53 * 53


def test_defect_of_ab():
    estimate = defect_estimate(brooks("ab"), PairSpec("exhaustive", 2))
    assert estimate.value >= 1
    f = brooks("ab")
    g1, g2 = estimate.argmax
    assert abs(f(g1) + f(g2) - f(g1 * g2)) == estimate.value


def test_defect_stable():
    first, second, stable = defect_stable(brooks("a"), PairSpec("exhaustive", 2))
    assert stable
    assert first.value == second.value == 0
    assert second.pairs_examined > first.pairs_examined


def test_sampled_pairs_are_reproducible():
    spec = PairSpec("sampled", 6, count=20, seed=11)
    assert list(spec.pairs()) == list(spec.pairs())
    assert len(list(spec.pairs())) == 20
    assert spec.doubled().count == 40


def test_pair_spec_validation():
    with pytest.raises(PreconditionError):
        PairSpec("random")
    with pytest.raises(PreconditionError):
        PairSpec("sampled", count=0)


def test_homogenize():
    f = brooks("ab")
    assert homogenize(f, "abAB", 7) == 1
    assert homogenize(f, "ba", 3) == Fraction(2, 3)
    with pytest.raises(PreconditionError):
        homogenize(f, "ab", 0)


def test_cauchy_check():
    check = cauchy_check(brooks("ab"), "ba", 5, 1)
    assert check.difference == Fraction(1, 10)
    assert check.bound == Fraction(1, 5)
    assert check.holds


def test_cauchy_check_uses_cyclic_core():
    check = cauchy_check(brooks("ab"), "abA", 4, 1)
    assert check.g == Word.parse("b")


def test_linear_combinations():
    assert (brooks("a") + brooks("b"))("ab") == 2
    assert (2 * brooks("ab"))("abab") == 4


def test_cochain_arity():
    c = from_quasimorphism(brooks("ab"))
    assert c.slots == 2
    with pytest.raises(ArityMismatch):
        c("a")
    with pytest.raises(ArityMismatch):
        c + quasimorphism_cochain(brooks("ab"))


def test_cochain_algebra():
    c = from_quasimorphism(brooks("ab"), bound=1)
    assert (c - c)("ab", "ba") == 0
    assert (c + c).bound == 2
    assert c.scale(-3).bound == 3
    assert BoundedCochain.constant(1, 5)("a", "b") == 5
    assert BoundedCochain.zero(2)("a", "b", "c") == 0


def test_coboundary_squares_to_zero():
    c = from_quasimorphism(brooks("ab"))
    dd = coboundary(coboundary(c))
    for tup in sample_tuples(2, 4, 5, 50, seed=3):
        assert dd(*tup) == 0
    bar = quasimorphism_cochain(brooks("ab"))
    ddbar = coboundary(coboundary(bar))
    for tup in sample_tuples(2, 3, 5, 50, seed=4):
        assert ddbar(*tup) == 0


def test_phi_intertwines_coboundaries():
    c = from_quasimorphism(brooks("aB"))
    lhs = phi_iso(coboundary(c))
    rhs = coboundary(phi_iso(c))
    for tup in sample_tuples(2, 2, 6, 50, seed=5):
        assert lhs(*tup) == rhs(*tup)


def test_phi_round_trip():
    bar = quasimorphism_cochain(brooks("ab"))
    back = phi_iso(phi_inverse(bar))
    for (g,) in sample_tuples(2, 1, 6, 30, seed=6):
        assert back(g) == bar(g)
    assert phi_eval(from_quasimorphism(brooks("ab")), ["ab"]) == 1


def test_phi_preconditions():
    with pytest.raises(PreconditionError):
        phi_iso(quasimorphism_cochain(brooks("a")))
    with pytest.raises(PreconditionError):
        phi_inverse(from_quasimorphism(brooks("a")))
    with pytest.raises(PreconditionError):
        from_quasimorphism(brooks("a"), side="up")


def test_translation_invariance():
    left = from_quasimorphism(brooks("ab"), side="left")
    assert left_translate_invariant(left, ["a", "bA"], "abb")
    inverse = phi_inverse(quasimorphism_cochain(brooks("ab")))
    assert left_translate_invariant(inverse, ["a", "b"], "ab")
    right = from_quasimorphism(brooks("ab"), side="right")
    assert right("ab", "") == 1
    assert right("aba", "a") == right("ab", "")


def test_sample_tuples_reproducible():
    assert sample_tuples(2, 3, 5, 10, seed=9) == sample_tuples(2, 3, 5, 10, seed=9)


@settings(max_examples=200)
@given(words)
def test_brooks_antisymmetric(g):
    for pattern in ("ab", "aab", "abAB"):
        f = brooks(pattern)
        assert f(invert(g)) == -f(g)


@settings(max_examples=100)
@given(words, words)
def test_defect_bounded_by_pattern_length(g1, g2):
    f = brooks("ab")
    assert abs(f(g1) + f(g2) - f(g1 * g2)) <= 3
