import random
from fractions import Fraction
from pathlib import Path

import pytest

from spdelta.dsl import parse
from spdelta.linalg import Subspace
from spdelta.system import from_equations, from_functionals
from spdelta.tensor import Slot

DATA = Path(__file__).parent / "data"


def load_system(name: str, cap: int = 8, label: str | None = None):
    eqs = parse((DATA / name).read_text(encoding="utf-8"))
    return from_equations(eqs, cap, label=label or name)


def load_equations(name: str):
    return parse((DATA / name).read_text(encoding="utf-8"))


def unit_functional(slot: Slot, mu: int, alpha) -> list:
    row = [0] * slot.dim
    row[slot.index(mu, tuple(alpha))] = 1
    return row


@pytest.fixture(scope="session")
def ex1():
    """Two unknowns on the plane with orders two and three."""
    return load_system("ex1.spd")


@pytest.fixture(scope="session")
def ex2():
    """Scalar three-variable system with orders two and three."""
    return load_system("ex2.spd")


@pytest.fixture(scope="session")
def so2():
    """Rotational first-order system: one-dimensional antisymmetric symbol."""
    return load_system("so2.spd", cap=6)


@pytest.fixture(scope="session")
def wave():
    return load_system("wave.spd", cap=6)


@pytest.fixture(scope="session")
def laplace():
    return load_system("laplace.spd", cap=6)


@pytest.fixture(scope="session")
def cint3():
    """Finite-type complete intersection in three variables."""
    return load_system("cint3.spd")


@pytest.fixture(scope="session")
def uz():
    """Single first-order scalar equation killing one derivative."""
    return load_system("uz.spd", cap=6)


@pytest.fixture(scope="session")
def uxy():
    return load_system("uxy.spd", cap=7)


@pytest.fixture(scope="session")
def dim1g2():
    """Rank-one second-order symbol: the span of x^2."""
    return load_system("dim1g2.spd", cap=7)


def random_subspace(rng: random.Random, ambient: int, target_dim: int,
                    bound: int = 5) -> Subspace:
    rows = [[Fraction(rng.randint(-bound, bound)) for _ in range(ambient)]
            for _ in range(target_dim)]
    return Subspace.span(rows, ambient)


def random_system(rng: random.Random, max_n: int = 3, max_nu: int = 2,
                  cap_extra: int = 2):
    """A small equation-generated system with one or two random functionals."""
    n = rng.randint(2, max_n)
    nu = rng.randint(1, max_nu)
    order = rng.randint(1, 2)
    slot = Slot(n, nu, order)
    count = rng.randint(1, min(2, slot.dim))
    rows = []
    for _ in range(count):
        row = [Fraction(rng.randint(-3, 3)) for _ in range(slot.dim)]
        if all(x == 0 for x in row):
            row[rng.randrange(slot.dim)] = Fraction(1)
        rows.append(row)
    cap = order + cap_extra
    return from_functionals(n, nu, [(order, r) for r in rows], cap)
