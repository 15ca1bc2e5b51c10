from __future__ import annotations

import pytest

from openmorse import fixtures
from openmorse.induced import extend_function, induce, restrict


class Built:
    def __init__(self, fx):
        self.fx = fx
        self.ind = induce(fx.field, fx.pair, fx.function)
        self.W = restrict(self.ind)
        self.F = extend_function(self.ind)


@pytest.fixture(scope="session")
def running():
    return fixtures.running()


@pytest.fixture(scope="session")
def pathological():
    return fixtures.pathological()


@pytest.fixture(scope="session")
def running_built(running):
    return Built(running)


@pytest.fixture(scope="session")
def pathological_built(pathological):
    return Built(pathological)
