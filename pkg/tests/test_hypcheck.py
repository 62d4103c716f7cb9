import pytest

from ggt.cayley import build_ball
from ggt.coned import SubgroupResolver, SubgroupSpec, build_coned
from ggt.errors import PreconditionError
from ggt.fpgroup import free_presentation, one_relator_presentation, surface_presentation
from ggt.hypcheck import (
    CATEGORY_BOTH,
    VERDICT_CONSISTENT,
    ambient_malnormality_scan,
    collect_evidence,
    commutator_exponent,
    condition_a,
    default_horizons,
    diam_criterion_scan,
    h_words,
    horizon_growth,
    local_finiteness_scan,
)
from ggt.words import Word, format_word


def w(text):
    return Word.parse(text)


def test_default_horizons():
    assert default_horizons(5) == (1, 3, 5)
    assert default_horizons(8) == (4, 6, 8)
    assert default_horizons(2) == (1, 2)


def test_condition_a_holds_for_surfaces(g3):
    assert condition_a(g3) == (True, None)


def test_condition_a_fails_without_x():
    ball = build_ball(free_presentation(2), 2)
    coned = build_coned(ball, SubgroupSpec((), (0, 1), generators=[w("aa")]))
    generates, witness = condition_a(coned)
    assert not generates
    assert witness == w("a")


def test_diameter_scan_g3(g3):
    scan = diam_criterion_scan(g3.ball, g3, 4)
    assert scan.scanned_elements > 0
    assert 1 <= scan.max_diameter <= 3
    assert scan.to_dict()["cap"] == 4


def test_diameter_scan_free_factor(f2_in_f4):
    scan = diam_criterion_scan(f2_in_f4.ball, f2_in_f4, 3)
    assert scan.max_diameter == 1
    assert scan.by_category[CATEGORY_BOTH] == 1


def test_diameter_scan_cap_above_radius(g3):
    with pytest.raises(PreconditionError):
        diam_criterion_scan(g3.ball, g3, 9)


def test_local_finiteness_g4(g4):
    assert [row.count for row in local_finiteness_scan(g4, 4)] == [1, 1, 1, 1, 3]


def test_horizon_growth_g3(g3):
    rows = horizon_growth(g3, 3, [5, 1, 3])
    assert [(row.horizon, row.count) for row in rows] == [(1, 1), (3, 3), (5, 5)]


def test_evidence_g3_flags_growth(g3):
    evidence = collect_evidence("g3", g3.ball, g3.spec, 4, 3, diameter_bound=3, coned=g3)
    assert evidence.condition_a
    assert evidence.verdict == "violated(c)"
    assert evidence.violated
    assert evidence.witness == "cccc"
    assert evidence.to_dict()["growth"][-1]["count"] == 5


def test_evidence_free_factor_consistent(f2_in_f4):
    evidence = collect_evidence("f2-in-f4", f2_in_f4.ball, f2_in_f4.spec, 3, 3, coned=f2_in_f4)
    assert evidence.verdict == VERDICT_CONSISTENT
    assert not evidence.violated
    assert all(row.count == 1 for row in evidence.condition_c)


def test_evidence_without_x_violates_generation():
    ball = build_ball(free_presentation(2), 2)
    spec = SubgroupSpec((), (0, 1), generators=[w("aa")])
    evidence = collect_evidence("cyclic", ball, spec, 2, 1)
    assert evidence.verdict == "violated(a)"
    assert evidence.witness == "a"


@pytest.mark.parametrize("text, k", [("", 0), ("CC", 1), ("abAB", 1), ("cc", -1), ("cccc", -2), ("a", None)])
def test_commutator_exponent(text, k):
    assert commutator_exponent(w(text), surface_presentation(3)) == k


def test_h_words():
    p = surface_presentation(3)
    spec = SubgroupSpec.surface(3)
    words = h_words(spec, SubgroupResolver(p, spec), 1)
    assert [format_word(x) for x in words] == ["a", "A", "b", "B"]


def test_surface_not_malnormal():
    report = ambient_malnormality_scan(surface_presentation(3), SubgroupSpec.surface(3), 1, 4)
    assert w("c") in report.violating_elements()


def test_squares_not_malnormal():
    p = one_relator_presentation(3, "aabbcc")
    report = ambient_malnormality_scan(p, SubgroupSpec.squares(), 1, 4)
    assert w("a") in report.violating_elements()
