import random

import pytest

from qautomata import documents, oml

SMALL_LATTICES = ["boolean:1", "boolean:2", "boolean:3", "mo:2", "mo:3", "example21"]


@pytest.fixture
def rng():
    return random.Random(20240613)


@pytest.fixture
def mo2():
    return oml.mo(2)


@pytest.fixture
def ex21_lattice():
    return oml.example21()


@pytest.fixture
def ex21():
    return documents.load(documents.fixture_path("example21.json"))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # keep each phase's report on the item so fixtures can read the outcome
    outcome = yield
    rep = outcome.get_result()
    setattr(item, "rep_" + rep.when, rep)
