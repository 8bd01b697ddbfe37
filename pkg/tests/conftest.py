import random

import pytest

from qtchar import CartanData, LieType, default_height


@pytest.fixture(scope="session")
def a1():
    return CartanData.make(LieType.parse("A1"), horizon=60)


@pytest.fixture(scope="session")
def a2():
    return CartanData.make(LieType.parse("A2"), horizon=60)


@pytest.fixture(scope="session")
def a3():
    return CartanData.make(LieType.parse("A3"), horizon=60)


@pytest.fixture(scope="session")
def d4():
    # the worked example's height function: xi_2 = 0, xi_1 = xi_3 = xi_4 = 1
    lt = LieType.parse("D4")
    return CartanData.make(lt, default_height(lt, 1), horizon=60)


@pytest.fixture()
def rng():
    return random.Random(20260810)
