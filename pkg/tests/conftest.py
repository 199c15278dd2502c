import pytest

from isoplab import density_from_config


@pytest.fixture
def const2():
    return density_from_config({"family": "constant", "dim": 2, "a": 1.0})


@pytest.fixture
def exp2():
    return density_from_config({"family": "radial_exp", "dim": 2, "a": 1.0,
                                "params": {"c": 1.0}})


@pytest.fixture
def exp3():
    return density_from_config({"family": "radial_exp", "dim": 3, "a": 1.0,
                                "params": {"c": 1.0}})


@pytest.fixture
def angular2():
    return density_from_config({"family": "angular_mod", "dim": 2, "a": 1.0,
                                "params": {"eta": 0.5, "k": 1, "c": 1.0}})
