import pathlib

import pytest

from orbifold_ht.cli import load_scenario

SCENARIO_DIR = (pathlib.Path(__file__).resolve().parent.parent
                / "src" / "orbifold_ht" / "scenarios")


def scenario_path(name):
    return SCENARIO_DIR / f"{name}.scenario"


@pytest.fixture(scope="session")
def kummer():
    return load_scenario(scenario_path("kummer"))


@pytest.fixture(scope="session")
def e_neg():
    return load_scenario(scenario_path("e-neg"))


@pytest.fixture(scope="session")
def e_z3():
    return load_scenario(scenario_path("e-z3"))


@pytest.fixture(scope="session")
def e_z4():
    return load_scenario(scenario_path("e-z4"))


@pytest.fixture(scope="session")
def torus_e():
    return load_scenario(scenario_path("torus-e"))


@pytest.fixture(scope="session")
def torus_a2():
    return load_scenario(scenario_path("torus-a2"))


@pytest.fixture(scope="session")
def all_quotients(kummer, e_neg, e_z3, e_z4):
    return [kummer, e_neg, e_z3, e_z4]
