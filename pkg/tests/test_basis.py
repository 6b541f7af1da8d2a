from fractions import Fraction

import pytest
from hypothesis import given

from algebra.arith import INFINITY, RationalFunction
from algebra.basis import (
    BasisIndex, Geometry, KNExpansion, Omega, expand_form_product, expand_in_basis, form, function,
    kn_pairing, make_basis, omega, order_table, unit_expansion, vector_field,
)
from algebra.errors import ConfigError, IndexOutOfRange, SupportViolation, WeightMismatch
from conftest import GEOMETRIES, expansions

z = RationalFunction.variable()


def test_geometry_rejects_repeated_points():
    with pytest.raises(ConfigError):
        Geometry.of(0, Fraction(2, 2), 1)
    with pytest.raises(ConfigError):
        Geometry(())


def test_point_index_is_checked(geom2):
    assert geom2.point(2) == 1
    with pytest.raises(IndexOutOfRange):
        geom2.point(3)


@pytest.mark.parametrize("n", range(-2, 3))
def test_one_point_basis_is_laurent(geom1, n):
    assert function(geom1, n, 1).func == z ** n
    assert vector_field(geom1, n, 1).func == z ** (n + 1)
    assert omega(geom1, n, 1).func == z ** (-n - 1)
    assert Omega(geom1, n, 1).func == z ** (-n - 2)


def test_two_point_functions(geom2):
    assert function(geom2, 0, 1).func == 1 - z
    assert function(geom2, 0, 2).func == z


@pytest.mark.parametrize("n, p", [(-1, 1), (0, 2), (2, 1)])
def test_vector_field_orders(geom2, n, p):
    table = order_table(vector_field(geom2, n, p))
    q = 3 - p
    assert table[p] == n + 1
    assert table[q] == n + 2
    assert table[INFINITY] == -2 * n - 1
    assert sum(table.values()) == 2


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("weight", [-1, 0, 1, 2])
def test_duality(N, weight):
    geom = GEOMETRIES[N]
    for n in range(-2, 3):
        for m in range(-2, 3):
            for p in range(1, N + 1):
                for q in range(1, N + 1):
                    value = kn_pairing(make_basis(geom, weight, n, p), make_basis(geom, 1 - weight, -m, q))
                    assert value == (1 if (n, p) == (m, q) else 0)


def test_pairing_requires_complementary_weights(geom1):
    with pytest.raises(WeightMismatch):
        kn_pairing(function(geom1, 0, 1), function(geom1, 1, 1))


def test_pole_outside_punctures(geom2):
    with pytest.raises(SupportViolation):
        form(geom2, 0, (z - 2).inverse())


def test_unit_expansion(geom3):
    assert expand_in_basis(form(geom3, 0, 1)) == unit_expansion(geom3)


def test_product_expansion_one_point(geom1):
    a = function(geom1, 1, 1).func
    product = expand_form_product(geom1, 0, [(1, [(a, 0), (a, 0)])])
    assert product == KNExpansion.single(BasisIndex(0, 2, 1))


@given(expansions(N=2, weight=0))
def test_expansion_reconstructs_the_form(geom2_expansion):
    geom = GEOMETRIES[2]
    f = geom2_expansion.to_form(geom)
    assert expand_in_basis(f) == geom2_expansion


@given(expansions(N=3, weight=-1, degrees=(-1, 1)))
def test_divisor_degree(x):
    geom = GEOMETRIES[3]
    for idx in x.terms:
        table = order_table(make_basis(geom, idx.weight, idx.degree, idx.puncture))
        assert sum(table.values()) == 2


@pytest.mark.slow
@pytest.mark.parametrize("weight", [-1, 0, 1, 2])
def test_duality_wide_window(weight):
    geom = GEOMETRIES[2]
    for n in range(-8, 9):
        for m in range(-8, 9):
            for p in (1, 2):
                for q in (1, 2):
                    value = kn_pairing(make_basis(geom, weight, n, p), make_basis(geom, 1 - weight, -m, q))
                    assert value == (1 if (n, p) == (m, q) else 0), (n, p, m, q)
