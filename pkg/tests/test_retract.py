import pytest

from ggt.errors import ArityMismatch, ConfigError, PreconditionError
from ggt.fpgroup import free_presentation, surface_presentation
from ggt.retract import (
    HomSpec,
    compose,
    hom_from_toml,
    search_retraction,
    surface_section,
    verify_homomorphism,
    verify_retraction,
)
from ggt.words import Word, format_word

RETRACTION_G5 = ["a", "b", "b", "Ba", "A"]


def hom(genus, images):
    return HomSpec(surface_presentation(genus), free_presentation(2), [Word.parse(x) for x in images], name="r")


def test_generator_projection_is_not_a_homomorphism():
    verdict = verify_homomorphism(hom(5, ["a", "b", "", "", ""]))
    assert verdict.status == "refuted"
    assert verdict.relator == "abABccddee"
    assert verdict.image == "abAB"


def test_trivial_map_is_a_homomorphism():
    assert verify_homomorphism(hom(3, ["", "", ""])).verified


def test_known_genus_five_retraction():
    r = hom(5, RETRACTION_G5)
    assert verify_homomorphism(r).verified
    verdict = verify_retraction(r, surface_section(5))
    assert verdict.verified
    assert verdict.stage == "identity"


def test_retraction_must_fix_generators():
    r = hom(5, ["b", "a", "a", "Ab", "B"])
    verdict = verify_retraction(r, surface_section(5))
    assert verdict.status == "refuted"
    assert verdict.stage == "identity"
    assert verdict.relator == "a"


def test_compose():
    composite = compose(hom(5, RETRACTION_G5), surface_section(5))
    assert [format_word(x) for x in composite.images] == ["a", "b"]
    with pytest.raises(PreconditionError):
        compose(hom(5, RETRACTION_G5), hom(5, RETRACTION_G5))


@pytest.mark.slow
def test_search_finds_genus_five_retraction():
    r = search_retraction(surface_section(5), max_image_length=2)
    assert r is not None
    assert verify_retraction(r, surface_section(5)).verified


def test_search_fails_in_genus_three():
    assert search_retraction(surface_section(3), max_image_length=1) is None


def test_search_needs_generator_section():
    section = HomSpec(free_presentation(2), surface_presentation(5), [Word.parse("ab"), Word.parse("c")])
    with pytest.raises(PreconditionError):
        search_retraction(section)


def test_image_checks():
    with pytest.raises(ArityMismatch):
        HomSpec(free_presentation(2), free_presentation(2), [Word.parse("a")])
    with pytest.raises(ConfigError):
        HomSpec(free_presentation(2), free_presentation(2), [Word.parse("a"), Word.parse("c")])


def test_hom_from_toml():
    text = """
[retraction]
name = "r"
images = ["a", "b", "b", "Ba", "A"]

[retraction.source]
genus = 5

[retraction.target]
rank = 2

[section]
images = ["a", "b"]

[section.source]
rank = 2

[section.target]
genus = 5
"""
    r, i = hom_from_toml(text)
    assert r.source.rank == 5
    assert i.target.rank == 5
    assert verify_retraction(r, i).verified


@pytest.mark.parametrize(
    "text",
    [
        "[retraction",
        '[retraction]\nimages = ["a"]\n[retraction.source]\nrank = 1\ngenus = 3\n[retraction.target]\nrank = 1\n',
        '[retraction]\nimages = ["a1"]\n[retraction.source]\nrank = 1\n[retraction.target]\nrank = 1\n',
    ],
)
def test_hom_from_toml_rejects(text):
    with pytest.raises(ConfigError):
        hom_from_toml(text)
