import pytest

from ggt.errors import PreconditionError
from ggt.freesub import (
    automaton_for,
    conjugate_intersection,
    fold,
    malnormality_scan,
    subgroup_elements,
    truncated_conjugate_family,
)
from ggt.words import IDENTITY, Word, enumerate_words, format_word


def w(text):
    return Word.parse(text)


@pytest.fixture
def even():
    # <a^2, ab, ab^-1> is the index-2 subgroup of even-length words
    return automaton_for(["aa", "ab", "aB"], 2)


def test_fold_even_subgroup(even):
    assert even.num_states == 2
    assert even.contains(w("baaB"))
    assert even.contains(w("ba"))
    assert not even.contains(w("a"))
    assert even.contains(IDENTITY)


def test_membership_matches_parity(even):
    for word in enumerate_words(2, 4):
        assert even.contains(word) == (len(word) % 2 == 0)


def test_fold_cyclic_subgroup():
    aut = automaton_for(["aa"], 2)
    assert aut.num_states == 2
    assert aut.contains(w("aaaa"))
    assert not aut.contains(w("aba"))
    assert len(aut.edges()) == 2


def test_fold_keeps_basepoint_stem():
    aut = fold([w("abA")], 2)
    assert aut.num_states == 2
    assert aut.contains(w("abbA"))
    assert not aut.contains(w("b"))


def test_fold_reduces_generators():
    aut = fold([w("a"), w("bcC")], 3)
    assert aut.num_states == 1
    assert aut.contains(w("ab"))


def test_free_factor_is_one_state():
    aut = automaton_for(["a", "b"], 4)
    assert aut.num_states == 1
    assert aut.contains(w("abAB"))
    assert not aut.contains(w("c"))


def test_accepted_words(even):
    words = even.accepted_words(2)
    assert len(words) == 12
    assert all(len(x) == 2 for x in words)


def test_coset_keys():
    aut = automaton_for(["aa"], 2)
    assert aut.left_coset_key(w("a")) == aut.left_coset_key(w("aaa"))
    assert aut.left_coset_key(w("a")) != aut.left_coset_key(w("b"))
    assert aut.right_coset_key(w("b")) == aut.right_coset_key(w("aab"))


def test_exports(even):
    assert "doublecircle" in even.to_dot()
    graph = even.to_networkx()
    assert graph.number_of_nodes() == 2
    assert graph.number_of_edges() == 4
    assert even.to_dict()["generators"] == ["aa", "ab", "aB"]


def test_normal_subgroup_is_not_malnormal(even):
    scan = malnormality_scan(even, 1, 2)
    assert not scan.none_within_bounds
    assert w("a") in scan.violating_elements()


def test_free_factor_is_malnormal():
    scan = malnormality_scan(automaton_for(["a", "b"], 4), 2, 4)
    assert scan.none_within_bounds
    assert scan.scanned > 0


def test_cyclic_subgroup_is_malnormal():
    scan = malnormality_scan(automaton_for(["a"], 2), 2, 4)
    assert scan.none_within_bounds


def test_malnormality_scan_bounds():
    with pytest.raises(PreconditionError):
        malnormality_scan(automaton_for(["a"], 2), 0, 4)


def test_truncated_family():
    family = truncated_conjugate_family(1)
    assert [format_word(g) for g in family] == ["Aba", "b", "abA"]


def test_conjugate_intersection_in_truncated_family():
    aut = fold(truncated_conjugate_family(2), 2)
    found = conjugate_intersection(aut, w("a"), 5)
    assert w("b") in found
    assert all(aut.contains(x) for x in found)


def test_subgroup_elements():
    assert subgroup_elements([w("a")], 2) == {IDENTITY, w("a"), w("A"), w("aa"), w("AA")}


def test_membership_matches_brute_force():
    gens = [w("aa"), w("ab")]
    aut = fold(gens, 2)
    products = subgroup_elements(gens, 4)
    assert all(aut.contains(x) for x in products)
    short = {x for x in products if len(x) <= 4}
    assert {x for x in enumerate_words(2, 4) if aut.contains(x)} == short


def test_generated_elements_are_members(even):
    elements = subgroup_elements([w("aa"), w("ab"), w("aB")], 3)
    assert all(even.contains(x) for x in elements)
    assert not any(even.contains(x) for x in enumerate_words(2, 3) if len(x) % 2)
