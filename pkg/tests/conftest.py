import math

import pytest

import residue_lab.continuation as cont
import residue_lab.manifold.shapes as shapes


@pytest.fixture(scope="session")
def torus_spec():
    return shapes.torus(2.0, 1.0)


@pytest.fixture(scope="session")
def torus_profile(torus_spec):
    return cont.distance_profile(torus_spec)


@pytest.fixture(scope="session")
def circle_profile():
    return cont.distance_profile(shapes.circle(1.0))


@pytest.fixture(scope="session")
def sphere2_profile():
    return cont.distance_profile(shapes.sphere(2, 1.0))


@pytest.fixture(scope="session")
def ellipse_spec():
    return shapes.ellipse(1.0, 0.6)


@pytest.fixture(scope="session")
def ellipse_profile(ellipse_spec):
    return cont.distance_profile(ellipse_spec)
