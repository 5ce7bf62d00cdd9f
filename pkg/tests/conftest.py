import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from residua.algebra import GF, QQ, Ring  # noqa: E402
from residua.residual import ResidualInstance  # noqa: E402
from residua.verify import InstanceRecipe, random_instance  # noqa: E402

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
INSTANCES = os.path.join(ROOT, "instances")

POWER_RECIPE = InstanceRecipe(variables=["x", "y", "z"], family="power",
                              params={"vars": 2, "exponent": 2}, a_degrees=[3, 3, 3])
HANKEL_RECIPE = InstanceRecipe(variables=["x1", "x2", "x3", "x4", "x5"], family="hankel",
                               params={"columns": 4}, a_degrees=[3, 3, 3, 3])
LINEAR_RECIPE = InstanceRecipe(field="QQ", variables=["x", "y", "z", "w"], family="explicit",
                               ideal=["x", "y"], a_degrees=[2, 2, 2])


@pytest.fixture
def qq_xy():
    return Ring(QQ, ["x", "y"])


@pytest.fixture
def gf_xyz():
    return Ring(GF(32003), ["x", "y", "z"])


@pytest.fixture(scope="session")
def link():
    """I = (x, y), a = (x^2, y^2) in QQ[x, y]."""
    R = Ring(QQ, ["x", "y"])
    x, y = R.gens
    return ResidualInstance([x, y], [x**2, y**2], name="link")


@pytest.fixture(scope="session")
def power_square():
    """I = (x, y)^2 in GF(32003)[x, y, z] with three seeded cubics."""
    return random_instance(POWER_RECIPE, 0)


@pytest.fixture(scope="session")
def linear_four():
    """I = (x, y) in QQ[x, y, z, w] with three seeded quadrics."""
    return random_instance(LINEAR_RECIPE, 0)


@pytest.fixture(scope="session")
def hankel():
    return random_instance(HANKEL_RECIPE, 0)
