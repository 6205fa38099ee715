"""Shared builders for the test suite."""

from fractions import Fraction

import pytest

from cuspcheck import DelzantPolytope, Facet


def unit_simplex(n: int) -> DelzantPolytope:
    """x_i >= 0, x_1 + ... + x_n <= 1, hypotenuse labelled 'hyp'."""
    facets = [
        Facet(tuple(1 if j == i else 0 for j in range(n)), 0, label=f"x{i}")
        for i in range(n)
    ]
    facets.append(Facet((-1,) * n, -1, label="hyp"))
    return DelzantPolytope(n, tuple(facets))


def unit_cube(n: int) -> DelzantPolytope:
    """0 <= x_i <= 1, top facets labelled 'top{i}'."""
    facets = []
    for i in range(n):
        e = tuple(1 if j == i else 0 for j in range(n))
        facets.append(Facet(e, 0, label=f"bot{i}"))
        facets.append(Facet(tuple(-x for x in e), -1, label=f"top{i}"))
    return DelzantPolytope(n, tuple(facets))


def interval(a, b) -> DelzantPolytope:
    return DelzantPolytope(
        1, (Facet((1,), Fraction(a), label="lo"), Facet((-1,), -Fraction(b), label="hi"))
    )


@pytest.fixture
def triangle() -> DelzantPolytope:
    return unit_simplex(2)


@pytest.fixture
def square() -> DelzantPolytope:
    return unit_cube(2)


@pytest.fixture
def simplex3() -> DelzantPolytope:
    return unit_simplex(3)
