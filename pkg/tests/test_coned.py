import pytest

from ggt.cayley import build_ball
from ggt.coned import (
    SubgroupResolver,
    SubgroupSpec,
    admissible_geodesics,
    build_coned,
    coned_distance_bound,
    dhat,
    dhat_ball,
    path_sigma_diameter,
    verify_admissible_path,
)
from ggt.errors import NotInSubgroup, PreconditionError
from ggt.fpgroup import free_presentation, surface_presentation
from ggt.words import IDENTITY, Word, format_word


def w(text):
    return Word.parse(text)


def names(words):
    return [format_word(x) for x in words]


def test_subgroup_spec_shapes():
    spec = SubgroupSpec.surface(5)
    assert spec.x_generators == (2, 3, 4)
    assert spec.x_codes == (4, 5, 6, 7, 8, 9)
    assert spec.to_dict()["x"] == ["c", "d", "e"]
    assert SubgroupSpec.squares().to_dict()["generators"] == ["aa", "bb"]
    with pytest.raises(PreconditionError):
        SubgroupSpec((2,), (0, 1), generators=[w("c")])


def test_resolver_modes():
    assert SubgroupResolver(surface_presentation(3), SubgroupSpec.surface(3)).mode == "splitting"
    assert SubgroupResolver(free_presentation(4), SubgroupSpec.free_factor(4)).mode == "free"
    whole = SubgroupResolver(free_presentation(2), SubgroupSpec((), (0, 1)))
    assert whole.mode == "whole"
    assert whole.contains(w("abAB"))


def test_surface_membership(g3):
    resolver = g3.resolver
    assert resolver.contains(w("ab"))
    assert resolver.contains(w("cc"))
    assert not resolver.contains(w("c"))
    assert not resolver.contains(w("cac"))
    assert g3.in_h[g3.ball.vertex(w("CC"))]


def test_squares_membership(squares):
    resolver = squares.resolver
    assert resolver.contains(w("aabb"))
    assert resolver.contains(w("cc"))
    assert not resolver.contains(w("a"))
    assert not resolver.contains(w("ab"))


def test_commutator_distance_g3(g3):
    value = dhat(g3, w("abAB"))
    assert value.finite
    assert value.value == 2
    assert value.certified
    assert names(value.path) == ["", "C", "CC"]


def test_relative_balls_g3(g3):
    assert names(dhat_ball(g3, 3, horizon=1).elements) == [""]
    assert len(dhat_ball(g3, 3, horizon=3)) == 3
    assert len(dhat_ball(g3, 3, horizon=5)) == 5
    assert "cccc" in names(g3.dhat_ball(3).elements)


def test_truncation_flag(g3):
    rel = g3.dhat_ball(3, horizon=3)
    assert rel.truncated
    assert rel.to_dict()["count"] == 3


def test_commutator_distance_g4(g4):
    assert g4.dhat(w("abAB")).value == 4
    assert names(g4.dhat_ball(3).elements) == [""]
    assert len(g4.dhat_ball(4)) == 3


def test_genus_five_ball_is_trivial():
    ball = build_ball(surface_presentation(5), 3, side_a={0, 1})
    coned = build_coned(ball, SubgroupSpec.surface(5))
    assert names(coned.dhat_ball(5).elements) == [""]


def test_free_factor_is_unreachable(f2_in_f4):
    value = f2_in_f4.dhat(w("a"))
    assert value.value is None
    assert value.status == "infinite_within_ball"
    assert names(f2_in_f4.dhat_ball(4).elements) == [""]
    assert f2_in_f4.generates_ball()


def test_non_member_rejected(g3):
    with pytest.raises(NotInSubgroup):
        g3.dhat(w("c"))


def test_admissible_geodesics_avoid_gamma_h(squares):
    paths = admissible_geodesics(squares, w("aaaa"))
    assert paths
    assert paths[0][0] == IDENTITY
    for path in paths:
        assert len(path) == 4
        check = verify_admissible_path(squares.resolver, path)
        assert check.valid, check.failure


def test_squares_power_distance(squares):
    assert squares.dhat(w("aaaa")).value == 3


def test_verify_admissible_path(g3):
    c = w("c")
    check = verify_admissible_path(g3.resolver, [IDENTITY, c, c**3, c**4])
    assert check.valid
    assert check.steps == ["X:c", "H:cc", "X:c"]

    bad = verify_admissible_path(g3.resolver, [IDENTITY, w("ab")])
    assert not bad.valid
    assert "Γ_H" in bad.failure

    gap = verify_admissible_path(g3.resolver, [IDENTITY, w("cd")])
    assert not gap.valid
    assert "outside" in gap.failure


def test_out_of_rank_letters_rejected(g3):
    with pytest.raises(PreconditionError):
        g3.dhat(w("d"))
    with pytest.raises(PreconditionError):
        g3.resolver.contains(w("cd"))


def test_coned_distance_bound(g3):
    resolver = g3.resolver
    assert coned_distance_bound(resolver, IDENTITY) == 0
    assert coned_distance_bound(resolver, w("c")) == 1
    assert coned_distance_bound(resolver, w("ab")) == 1
    assert coned_distance_bound(resolver, w("ca")) == 2
    assert coned_distance_bound(resolver, w("cac")) == 3


def test_path_sigma_diameter(g3):
    assert path_sigma_diameter(g3.resolver, w("c")) == (1, (0, 1))
    diameter, _ = path_sigma_diameter(g3.resolver, w("cac"))
    assert diameter == 3


def test_sigma_distances_reach_every_vertex(g3):
    assert g3.generates_ball()
    assert all(d >= 0 for d in g3.sigma_distances())


def test_exports():
    ball = build_ball(surface_presentation(3), 2, side_a={0, 1})
    coned = build_coned(ball, SubgroupSpec.surface(3))
    kinds = {data["kind"] for _, _, data in coned.to_networkx().edges(data=True)}
    assert kinds == {"X", "cone", "gamma_H"}
    assert "dotted" in coned.to_dot()
    with pytest.raises(PreconditionError):
        coned.to_networkx(max_vertices=5)
