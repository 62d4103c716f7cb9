import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ggt.errors import ParseError, PreconditionError
from ggt.words import (
    IDENTITY,
    Letter,
    Word,
    concat,
    count_occurrences,
    cyclic_permutations,
    cyclic_reduce,
    enumerate_words,
    enumerate_words_over,
    format_word,
    invert,
    is_cyclically_reduced,
    power,
    random_word,
    random_words,
    shortlex_key,
)

codes = st.lists(st.integers(min_value=0, max_value=5), max_size=20)


def test_parse_and_format():
    w = Word.parse("abAB")
    assert tuple(w) == (0, 2, 1, 3)
    assert format_word(w) == "abAB"
    assert Word.parse("") == IDENTITY
    assert repr(IDENTITY) == "Word(e)"


def test_parse_reduces():
    assert Word.parse("aAb") == Word.parse("b")
    assert Word.parse("abBA").is_identity


def test_parse_rejects_digits():
    with pytest.raises(ParseError):
        Word.parse("a1")


def test_letter_codes():
    assert Letter(1, -1).code == 3
    assert Letter.from_code(2) == Letter(1, 1)
    assert Letter(0, 1).inverse() == Letter(0, -1)


def test_concat_cancels_at_junction():
    assert concat(Word.parse("abc"), Word.parse("CBa")) == Word.parse("aa")
    assert Word.parse("ab") * Word.parse("B") == Word.parse("a")


def test_power_and_inverse():
    c = Word.parse("abAB")
    assert power(c, 2) == Word.parse("abABabAB")
    assert power(c, -1) == Word.parse("baBA")
    assert power(c, 0) == IDENTITY
    assert ~Word.parse("ab") == Word.parse("BA")


def test_cyclic_reduce():
    core, conj = cyclic_reduce(Word.parse("abcBA"))
    assert core == Word.parse("c")
    assert conj == Word.parse("ab")
    assert concat(concat(conj, core), invert(conj)) == Word.parse("abcBA")
    assert is_cyclically_reduced(Word.parse("abAB"))
    assert not is_cyclically_reduced(Word.parse("abA"))


def test_count_occurrences_overlapping():
    assert count_occurrences(Word.parse("aaa"), Word.parse("aa")) == 2
    assert count_occurrences(Word.parse("abab"), Word.parse("ab")) == 2
    with pytest.raises(PreconditionError):
        count_occurrences(Word.parse("a"), IDENTITY)


def test_cyclic_permutations():
    perms = cyclic_permutations(Word.parse("abc"))
    assert [format_word(p) for p in perms] == ["abc", "bca", "cab"]


def test_enumerate_words_counts():
    # 1 + 4 + 12 + 36 reduced words in F2
    words = list(enumerate_words(2, 3))
    assert len(words) == 53
    assert words[:5] == [IDENTITY, Word.parse("a"), Word.parse("A"), Word.parse("b"), Word.parse("B")]
    assert sorted(words, key=shortlex_key) == words


def test_enumerate_words_over_subset():
    words = list(enumerate_words_over([2], 2))
    assert [format_word(w) for w in words] == ["", "c", "C", "cc", "CC"]


def test_random_word_is_reduced_and_reproducible():
    a = random_words(np.random.default_rng(3), 2, 10, 50)
    b = random_words(np.random.default_rng(3), 2, 10, 50)
    assert a == b
    for w in a:
        assert Word(w) == w
    assert len(random_word(np.random.default_rng(1), 3, 7)) == 7


@given(codes)
def test_word_is_reduced(raw):
    w = Word(raw)
    assert all(w[i] != w[i + 1] ^ 1 for i in range(len(w) - 1))


@given(codes, codes)
def test_inverse_of_product(u, v):
    u, v = Word(u), Word(v)
    assert invert(concat(u, v)) == concat(invert(v), invert(u))
    assert concat(u, invert(u)) == IDENTITY


@given(codes, codes, codes)
def test_concat_associative(u, v, w):
    u, v, w = Word(u), Word(v), Word(w)
    assert concat(concat(u, v), w) == concat(u, concat(v, w))
