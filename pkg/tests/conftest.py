import pytest

from klrb import fmod, hecke
from klrb.quiver import build_from_hecke_B


@pytest.fixture(scope="session")
def window_q2():
    """The standard window: values {2, 8, 1/2, 1/8}, p = 2, q = 2."""
    return build_from_hecke_B(["2", "8", "1/2", "1/8"], 2, 2)


@pytest.fixture(scope="session")
def window_q5():
    """The weight-zero variant: same values, q = 5."""
    return build_from_hecke_B(["2", "8", "1/2", "1/8"], 2, 5)


@pytest.fixture(scope="session")
def window_p3q7():
    """Window {7, 63, 1/7, 1/63} for p = 3, q = 7 (so the weight is nonzero)."""
    return build_from_hecke_B(["7", "63", "1/7", "1/63"], 3, 7)


@pytest.fixture(scope="session")
def crystal_q2(window_q2):
    return fmod.build_crystal(window_q2, 2)


@pytest.fixture(scope="session")
def crystal_q2_depth3(window_q2):
    return fmod.build_crystal(window_q2, 3)


@pytest.fixture(scope="session")
def crystal_q5_depth3(window_q5):
    return fmod.build_crystal(window_q5, 3)


@pytest.fixture(scope="session")
def crystal_p3q7_depth3(window_p3q7):
    return fmod.build_crystal(window_p3q7, 3)


@pytest.fixture(scope="session")
def params_q2():
    return hecke.HeckeParams("B", 2, q=2)


@pytest.fixture(scope="session")
def params_q5():
    return hecke.HeckeParams("B", 2, q=5)


@pytest.fixture(scope="session")
def params_p3q7():
    return hecke.HeckeParams("B", 3, q=7)
