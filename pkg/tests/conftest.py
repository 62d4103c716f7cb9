import pytest

from ggt.cayley import build_ball
from ggt.coned import SubgroupSpec, build_coned
from ggt.fpgroup import free_presentation, one_relator_presentation, surface_presentation


@pytest.fixture(scope="session")
def g3():
    ball = build_ball(surface_presentation(3), 5, side_a={0, 1})
    return build_coned(ball, SubgroupSpec.surface(3))


@pytest.fixture(scope="session")
def g4():
    ball = build_ball(surface_presentation(4), 4, side_a={0, 1})
    return build_coned(ball, SubgroupSpec.surface(4))


@pytest.fixture(scope="session")
def f2_in_f4():
    return build_coned(build_ball(free_presentation(4), 3), SubgroupSpec.free_factor(4))


@pytest.fixture(scope="session")
def squares():
    ball = build_ball(one_relator_presentation(3, "aabbcc"), 4, side_a={0, 1})
    return build_coned(ball, SubgroupSpec.squares())
