import pytest
from hypothesis import given
from hypothesis import strategies as st

from ggt.errors import ConfigError, GenusOutOfBounds, MalformedBudget, PreconditionError
from ggt.fpgroup import (
    Presentation,
    SearchBudget,
    VerdictKind,
    abelianized_invariant,
    cross_validate,
    cyclic_dehn_reduce,
    dehn_reduce,
    equality_oracle,
    free_presentation,
    is_identity,
    one_relator_presentation,
    presentation_from_toml,
    surface_presentation,
)
from ggt.words import IDENTITY, Word, concat, enumerate_words, format_word

words3 = st.lists(st.integers(min_value=0, max_value=5), max_size=10).map(Word)


@pytest.fixture(scope="module")
def n3():
    return surface_presentation(3)


def w(text):
    return Word.parse(text)


def test_surface_relators():
    assert format_word(surface_presentation(3).relators[0]) == "abABcc"
    assert format_word(surface_presentation(5).relators[0]) == "abABccddee"
    assert format_word(surface_presentation(2).relators[0]) == "aabb"
    assert format_word(surface_presentation(2, orientable=True).relators[0]) == "abABcdCD"


def test_genus_bounds():
    with pytest.raises(GenusOutOfBounds):
        surface_presentation(0)
    with pytest.raises(GenusOutOfBounds):
        surface_presentation(500)


def test_relators_must_be_cyclically_reduced():
    with pytest.raises(ConfigError):
        Presentation(2, [w("abA")])
    with pytest.raises(ConfigError):
        Presentation(2, [w("abc")])


def test_presentation_from_toml():
    p = presentation_from_toml('name = "N3"\nrank = 3\nrelators = ["abABcc"]\n')
    assert p.rank == 3
    assert p.name == "N3"
    assert p.relators == (w("abABcc"),)
    assert presentation_from_toml(p.to_toml()).relators == p.relators


@pytest.mark.parametrize("text", ["rank = ", 'rank = 2\nrelators = ["a1"]', "rank = -1"])
def test_presentation_from_toml_rejects(text):
    with pytest.raises(ConfigError):
        presentation_from_toml(text)


def test_budget_validation():
    with pytest.raises(MalformedBudget):
        SearchBudget(max_depth=0)
    assert SearchBudget().scaled(2).max_depth == 24


def test_free_group_equality():
    f2 = free_presentation(2)
    assert equality_oracle(w("abB"), w("a"), f2).is_equal
    verdict = equality_oracle(w("ab"), w("ba"), f2)
    assert verdict.is_distinct
    assert verdict.strategy == "free"


def test_relator_is_trivial(n3):
    assert is_identity(w("abABcc"), n3).is_equal
    assert abelianized_invariant(w("abABcc"), n3) == (0, 0, 0)


@pytest.mark.parametrize("strategy", ["rewrite", "normal_form"])
def test_commutator_equals_inverse_square(n3, strategy):
    assert equality_oracle(w("abAB"), w("CC"), n3, strategy=strategy).is_equal
    assert equality_oracle(w("cc"), w("baBA"), n3, strategy=strategy).is_equal


@pytest.mark.parametrize("strategy", ["rewrite", "normal_form"])
def test_abelianization_separates(n3, strategy):
    verdict = equality_oracle(w("a"), w("b"), n3, strategy=strategy)
    assert verdict.kind is VerdictKind.DISTINCT


def test_commutator_is_nontrivial(n3):
    verdict = equality_oracle(w("ab"), w("ba"), n3)
    assert verdict.is_distinct
    assert verdict.strategy == "normal_form"


def test_unknown_strategy(n3):
    with pytest.raises(PreconditionError):
        equality_oracle(w("a"), w("a"), n3, strategy="guess")


def test_dehn_trace(n3):
    trace = []
    assert cyclic_dehn_reduce(w("abABcc"), n3, trace) == IDENTITY
    assert trace


def test_splitting_of_surface(n3):
    splitting = n3.splitting()
    assert splitting is not None
    assert splitting.side_a == frozenset({0, 1})
    assert splitting.z(0) == w("abAB")


def test_splitting_absent_for_free_and_multi_relator():
    assert free_presentation(2).splitting() is None
    assert Presentation(2, [w("aa"), w("bb")]).splitting() is None


def test_normal_forms_round_trip(n3):
    splitting = n3.splitting()
    for word in enumerate_words(3, 3):
        nf = splitting.from_word(word)
        assert splitting.from_word(splitting.to_word(nf)) == nf


def test_counterexample_group_splits():
    p = one_relator_presentation(3, "aabbcc")
    splitting = p.splitting(frozenset({0, 1}))
    assert splitting is not None
    assert equality_oracle(w("aabb"), w("CC"), p).is_equal
    assert equality_oracle(w("ab"), w("ba"), p).is_distinct


def test_cross_validation_agrees(n3):
    report = cross_validate(n3, 2)
    assert report.disagreements == []
    assert report.pairs == 37 * 38 // 2
    assert report.unknown_fraction < 0.01


def test_out_of_rank_letters_rejected(n3):
    with pytest.raises(PreconditionError):
        equality_oracle(w("d"), w("a"), n3)
    with pytest.raises(PreconditionError):
        abelianized_invariant(w("d"), n3)


def test_dehn_reduce_examples(n3):
    short = dehn_reduce(w("abAB"), n3)
    assert len(short) <= 2
    assert equality_oracle(short, w("CC"), n3).is_equal
    assert dehn_reduce(IDENTITY, n3) == IDENTITY
    assert dehn_reduce(w("abABcc"), n3) == IDENTITY


def test_dehn_reduce_preserves_element(n3):
    for word in enumerate_words(3, 4):
        reduced = dehn_reduce(word, n3)
        assert len(reduced) <= len(word)
        assert equality_oracle(word, reduced, n3).is_equal


def test_abelianized_invariant_examples(n3):
    assert abelianized_invariant(w("abAB"), n3) == (0, 0, 0)
    assert abelianized_invariant(w("cc"), n3) == (0, 0, 0)
    assert abelianized_invariant(w("c"), n3) == (0, 0, 1)


def vector_word(vec):
    return Word(code for i, k in enumerate(vec) for code in [2 * i + (k < 0)] * abs(k))


@given(words3, words3)
def test_abelianized_invariant_is_additive(u, v):
    p = surface_presentation(3)
    total = [x + y for x, y in zip(abelianized_invariant(u, p), abelianized_invariant(v, p))]
    assert abelianized_invariant(concat(u, v), p) == abelianized_invariant(vector_word(total), p)


def test_budget_increase_keeps_decided_verdicts(n3):
    small = SearchBudget(max_depth=2, max_length=8, max_states=200)
    large = small.scaled(2)
    words = list(enumerate_words(3, 2))
    for i, u in enumerate(words):
        for v in words[i:]:
            before = equality_oracle(u, v, n3, small, strategy="rewrite")
            after = equality_oracle(u, v, n3, large, strategy="rewrite")
            if not before.is_unknown:
                assert after.kind is before.kind, (format_word(u), format_word(v))


@pytest.mark.slow
def test_cross_validation_agrees_to_length_four(n3):
    report = cross_validate(n3, 4)
    assert report.disagreements == []
    assert report.unknown_fraction < 0.01
