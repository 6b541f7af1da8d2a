from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from algebra.arith import RationalFunction
from algebra.basis import BasisIndex, function, vector_field
from algebra.cocycles import (
    CocycleKind, DCocycle, GeometricCocycle, check_L_invariance, check_antisymmetry, check_cocycle_identity,
    check_locality, cocycle_A, cocycle_L, cocycle_mix, coboundary_equivalent, cocycle_table, find_coboundary,
)
from algebra.errors import ConfigError, WeightMismatch
from algebra.structure import bracket
from conftest import GEOMETRIES, A, e, expansions

z = RationalFunction.variable()
Z = sympy.Symbol("z")


def to_sympy(f):
    num = sum(sympy.Rational(c.numerator, c.denominator) * Z ** i for i, c in enumerate(f.numerator.coefficients))
    den = sum(sympy.Rational(c.numerator, c.denominator) * Z ** i for i, c in enumerate(f.denominator.coefficients))
    return num / den


def residue_oracle(expr, geom):
    return Fraction(str(sum(sympy.residue(expr, Z, sympy.Rational(a.numerator, a.denominator))
                            for a in geom.punctures)))


@pytest.mark.parametrize("n", range(-4, 5))
def test_one_point_values(geom1, n):
    fun = GeometricCocycle(CocycleKind.FUNCTION, geom1)
    vec = GeometricCocycle(CocycleKind.VECTOR, geom1)
    mix = GeometricCocycle(CocycleKind.MIXING, geom1)
    assert fun(A(n), A(-n)) == -n
    assert vec(e(n), e(-n)) == n ** 3 - n
    assert mix(e(n), A(-n)) == n * (n + 1)
    assert fun(A(n), A(1 - n)) == 0


@pytest.mark.parametrize("n, m", [(1, -1), (0, 2), (-2, 1), (2, -1)])
def test_values_match_sympy_residues(geom2, n, m):
    for p in (1, 2):
        g, h = function(geom2, n, p), function(geom2, m, 3 - p)
        expected = residue_oracle(to_sympy(g.func) * sympy.diff(to_sympy(h.func), Z), geom2)
        assert cocycle_A(g, h) == expected
        ef, ff = vector_field(geom2, n, p), vector_field(geom2, m, 3 - p)
        se, sf = to_sympy(ef.func), to_sympy(ff.func)
        expected = residue_oracle((sympy.diff(se, Z, 3) * sf - se * sympy.diff(sf, Z, 3)) / 2, geom2)
        assert cocycle_L(ef, ff) == expected
        expected = residue_oracle(se * sympy.diff(to_sympy(h.func), Z, 2), geom2)
        assert cocycle_mix(ef, h) == expected


def test_mixing_with_swapped_arguments(geom1):
    assert cocycle_mix(function(geom1, -2, 1), vector_field(geom1, 2, 1)) == -6


def test_weights_are_checked(geom1):
    fun = GeometricCocycle(CocycleKind.FUNCTION, geom1)
    with pytest.raises(WeightMismatch):
        fun.basis_value(BasisIndex(-1, 0, 1), BasisIndex(-1, 0, 1))


def test_connection_with_foreign_pole(geom1):
    with pytest.raises(ConfigError):
        GeometricCocycle(CocycleKind.VECTOR, geom1, (z - 2).inverse())


@given(expansions(N=2, weight=0), expansions(N=2, weight=0))
def test_function_cocycle_is_antisymmetric(x, y):
    gamma = GeometricCocycle(CocycleKind.FUNCTION, GEOMETRIES[2])
    assert check_antisymmetry(gamma, [(x, y)])


@given(expansions(N=2, weight=-1, degrees=(-1, 1)), expansions(N=2, weight=-1, degrees=(-1, 1)),
       expansions(N=2, weight=-1, degrees=(-1, 1)))
@settings(max_examples=15)
def test_vector_cocycle_identity(x, y, w):
    geom = GEOMETRIES[2]
    R = (z * (z - 1)).inverse()
    gamma = GeometricCocycle(CocycleKind.VECTOR, geom, R)
    report = check_cocycle_identity(gamma, lambda a, b: bracket(a, b, geom), [(x, y, w)])
    assert report.holds


def test_mixing_cocycle_identity_on_differential_operators(geom2):
    gamma = DCocycle(geom2, a=0, l=0, m=1)
    elements = [(A(0, 1), e(1, 2)), (A(-1, 2), e(0, 1)), (A(1, 1), e(-1, 1))]
    triples = [(elements[0], elements[1], elements[2]), (elements[2], elements[0], elements[1])]
    assert check_cocycle_identity(gamma, gamma.bracket, triples)


@st.composite
def operators(draw, N):
    """Operador diferencial (função, campo) de D."""
    return (draw(expansions(N=N, weight=0, degrees=(-2, 2))), draw(expansions(N=N, weight=-1, degrees=(-2, 2))))


@pytest.mark.parametrize("N", [1, 2])
@pytest.mark.parametrize("coefficients", [(1, 0, 0), (0, 0, 1), (1, 1, 1)])
def test_cocycle_identity_on_differential_operators(N, coefficients):
    a, l, m = coefficients
    gamma = DCocycle(GEOMETRIES[N], a=a, l=l, m=m)

    @given(st.tuples(operators(N), operators(N), operators(N)))
    @settings(max_examples=25)
    def check(triple):
        assert check_cocycle_identity(gamma, gamma.bracket, [triple])

    check()


def test_mixing_cocycle_identity_with_connection(geom2):
    T = z.inverse() + (z - 1).inverse()
    gamma = DCocycle(geom2, T=T, a=0, l=0, m=1)
    elements = [(A(k, p), e(1 - k, 3 - p)) for k in (-1, 0, 1, 2) for p in (1, 2)]
    triples = [(x, y, w) for x in elements[:4] for y in elements[2:6] for w in elements[4:]]
    report = check_cocycle_identity(gamma, gamma.bracket, triples)
    assert report.holds, report.witness
    assert report.checked == 64


@pytest.mark.parametrize("kind", list(CocycleKind))
def test_one_point_locality(geom1, kind):
    window = check_locality(GeometricCocycle(kind, geom1), (-3, 3))
    assert (window.M1, window.M2, window.stable) == (0, 0, True)


def test_two_point_locality_is_finite(geom2):
    window = check_locality(GeometricCocycle(CocycleKind.FUNCTION, geom2), (-3, 3))
    assert window.stable
    assert window.M2 <= 0 <= window.M1


@pytest.mark.parametrize("kind, first, second", [
    (CocycleKind.VECTOR, RationalFunction.constant(0), (z * (z - 1)).inverse()),
    (CocycleKind.MIXING, RationalFunction.constant(0), z.inverse() + (z - 1).inverse()),
])
def test_connection_change_is_a_coboundary(geom2, kind, first, second):
    g1 = GeometricCocycle(kind, geom2, first)
    g2 = GeometricCocycle(kind, geom2, second)
    phi = find_coboundary(g1, g2, (-2, 2))
    assert phi is not None
    assert coboundary_equivalent(g1, g2, phi, (-2, 2))


def test_L_invariance_reports_both_forms(geom1):
    report = check_L_invariance(geom1, [(e(0), A(1), A(-1)), (e(1), A(-2), A(1))])
    assert report.derivation
    assert not report.literal


def test_cocycle_table_is_sorted(geom1):
    rows = cocycle_table(GeometricCocycle(CocycleKind.VECTOR, geom1), (-2, 2))
    assert [(i.degree, j.degree, v) for i, j, v in rows] == [(-2, 2, -6), (2, -2, 6)]


@pytest.mark.slow
@pytest.mark.parametrize("kind", list(CocycleKind))
def test_two_point_locality_is_stable_on_wide_windows(geom2, kind):
    # a janela [-8, 8] é conferida contra [-10, 10]
    wide = check_locality(GeometricCocycle(kind, geom2), (-8, 8))
    narrow = check_locality(GeometricCocycle(kind, geom2), (-3, 3))
    assert wide.stable
    assert (wide.M1, wide.M2) == (narrow.M1, narrow.M2)
