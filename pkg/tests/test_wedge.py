from fractions import Fraction

import pytest

from algebra.affine import SL2_E, SL2_F, SL2_H, AlgebraTag, MatrixElement
from algebra.arith import RationalFunction
from algebra.cocycles import CocycleKind, GeometricCocycle
from algebra.errors import ChargeMixing, ConfigError, InvariantViolation, ShapeMismatch
from algebra.wedge import (
    BandedOperator, Current, Field, RepresentationData, SectionIndex, Shape, WedgeMonomial, WedgeVector,
    block_degree, enumerate_monomials, extract_cocycle, fermion_level, homogeneous_dimension, induced_alpha,
    linear_index, matrix_of_current, matrix_of_field, monomial_degree, permute_monomial,
    section_leading_rows, section_space_dimension, wedge_apply,
)
from conftest import GEOMETRIES, A, e

ONE = MatrixElement.identity(1, AlgebraTag.GL1)


def test_linear_index_roundtrip():
    shape = Shape(2, 2, 2)
    assert shape.block == 8
    assert linear_index(0, 1, 0, 1, shape) == 0
    assert linear_index(-1, 2, 1, 2, shape) == -1
    for M in range(-10, 10):
        assert shape.linear_index(shape.section_index(M)) == M


def test_shape_validation():
    with pytest.raises(ConfigError):
        Shape(0, 1, 1)
    with pytest.raises(ConfigError):
        Shape(2, 1, 1, inner_permutation=(0, 0))


def test_monomial_validation():
    with pytest.raises(InvariantViolation):
        WedgeMonomial(0, (1, -1))
    with pytest.raises(InvariantViolation):
        WedgeMonomial(0, (0,))


@pytest.mark.parametrize("entries, sign, prefix", [
    ([1, -1], -1, (-1,)),
    ([-1, 1], 1, (-1,)),
    ([0, 0], 0, None),
    ([2], 0, None),
    ([0], 1, ()),
])
def test_from_occupied(entries, sign, prefix):
    s, phi = WedgeMonomial.from_occupied(0, entries)
    assert s == sign
    assert (phi.prefix if phi is not None else None) == prefix


def test_degrees():
    assert monomial_degree(WedgeMonomial.vacuum(3)) == 0
    assert monomial_degree(WedgeMonomial(0, (-1,))) == -1
    assert monomial_degree(WedgeMonomial(0, (-1, 0))) == -2
    assert monomial_degree(WedgeMonomial(2, (-3,))) == -5


@pytest.mark.parametrize("charge", [0, 1, -2])
def test_homogeneous_dimensions_are_partition_numbers(charge):
    assert [homogeneous_dimension(charge, d) for d in range(7)] == [1, 1, 2, 3, 5, 7, 11]
    assert homogeneous_dimension(charge, -1) == 0


def test_enumeration_has_no_positive_degree():
    monomials = enumerate_monomials(0, 6)
    assert len(monomials) == len(set(monomials)) == 30
    assert all(-6 <= monomial_degree(phi) <= 0 for phi in monomials)
    assert monomials[0] == WedgeMonomial.vacuum(0)


def test_block_degree_ignores_order_inside_blocks():
    shape = Shape(2, 1, 1)
    for phi in enumerate_monomials(0, 5):
        permuted = permute_monomial(phi, shape, (1, 0))
        assert block_degree(permuted, 2) == block_degree(phi, 2)


def test_banded_operator_algebra():
    shift = BandedOperator.from_entries({(M - 1, M): 1 for M in range(-5, 6)}, "S")
    assert (shift.lower, shift.upper) == (1, 0)
    twice = shift.compose(shift)
    assert twice.entry(-2, 0) == 1
    assert (shift + shift.scale(2)).entry(2, 3) == 3
    assert (shift - shift).column(0) == ()


def test_band_is_enforced():
    bad = BandedOperator(lambda M: [(M + 3, 1)], 0, 1, "ruim")
    with pytest.raises(InvariantViolation):
        bad.column(0)


def test_charge_mixing():
    with pytest.raises(ChargeMixing):
        WedgeVector.vacuum(0) + WedgeVector.vacuum(1)


def test_heisenberg_on_the_vacuum(rep_gl1):
    vac = WedgeVector.vacuum(0)
    lowered = wedge_apply(matrix_of_current(ONE, A(-1), rep_gl1), vac)
    assert lowered == WedgeVector.basis(WedgeMonomial(0, (-1,)))
    assert not wedge_apply(matrix_of_current(ONE, A(1), rep_gl1), vac)
    raised = wedge_apply(matrix_of_current(ONE, A(1), rep_gl1), lowered)
    assert raised == vac


def test_e0_measures_the_degree(rep_gl1):
    op = matrix_of_field(e(0), rep_gl1)
    for phi in enumerate_monomials(0, 4):
        v = WedgeVector.basis(phi)
        assert wedge_apply(op, v) == v.scale(monomial_degree(phi))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_current_defect_one_point(rep_gl1, n):
    assert extract_cocycle(Current(ONE, A(n)), Current(ONE, A(-n)), rep_gl1) == n
    assert extract_cocycle(Current(ONE, A(n)), Current(ONE, A(1 - n)), rep_gl1) == 0


@pytest.mark.parametrize("n, expected", [(1, -1), (2, -3), (-2, -1)])
def test_mixing_defect_one_point(rep_gl1, n, expected):
    assert extract_cocycle(Field(e(n)), Current(ONE, A(-n)), rep_gl1) == expected


def test_levels(rep_gl1, rep_sl2):
    assert induced_alpha(rep_gl1) == -1
    assert fermion_level(rep_gl1) == 1
    assert fermion_level(rep_sl2) == 1


def test_two_copies_double_the_level():
    rep = RepresentationData(GEOMETRIES[1], dim=2, tag=AlgebraTag.GL1,
                             tau_images=(MatrixElement.identity(2),), algebra_rank=1)
    assert fermion_level(rep) == 2


def test_two_point_defect_is_proportional(rep_gl1_n2):
    alpha = induced_alpha(rep_gl1_n2)
    gamma = GeometricCocycle(CocycleKind.FUNCTION, GEOMETRIES[2])
    for X, Y in [(A(1, 1), A(-1, 2)), (A(2, 2), A(-1, 1)), (A(0, 1), A(0, 2))]:
        value = extract_cocycle(Current(ONE, X), Current(ONE, Y), rep_gl1_n2)
        assert value == alpha * gamma(X, Y)


def test_sl2_defect(rep_sl2):
    gamma = GeometricCocycle(CocycleKind.FUNCTION, GEOMETRIES[1])
    alpha = induced_alpha(rep_sl2)
    for x, y in [(SL2_E, SL2_F), (SL2_H, SL2_H), (SL2_E, SL2_H)]:
        value = extract_cocycle(Current(x, A(1)), Current(y, A(-1)), rep_sl2)
        assert value == alpha * x.product_trace(y) * gamma(A(1), A(-1))


def test_representation_validation():
    with pytest.raises(ShapeMismatch):
        RepresentationData(GEOMETRIES[1], dim=2, tag=AlgebraTag.GL1)
    z = RationalFunction.variable()
    with pytest.raises(ConfigError):
        RepresentationData(GEOMETRIES[1], connection_form=((z.inverse() ** 2,),))


def test_section_space_dimension():
    rep = RepresentationData(GEOMETRIES[3], r=2)
    assert section_space_dimension(rep, 0) == 6
    assert rep.shape.linear_index(SectionIndex(1, 3, 1, 1)) == 6 + 5


def test_section_leading_rows_are_diagonal():
    # psi_{n,j,p} tem ordem n exatamente em P_p e n+1 nos demais pontos
    rep = RepresentationData(GEOMETRIES[2], r=2)
    rows = section_leading_rows(rep, -1)
    assert len(rows) == 4
    assert all(sum(1 for c in row if c) == 1 for row in rows)
    assert section_space_dimension(RepresentationData(GEOMETRIES[1]), 3) == 1


@pytest.mark.slow
@pytest.mark.parametrize("x, y", [(SL2_E, SL2_F), (SL2_H, SL2_H), (SL2_E, SL2_H)])
def test_sl2_defect_two_points_wide_window(x, y):
    rep = RepresentationData(GEOMETRIES[2], r=1, dim=2, tag=AlgebraTag.SL, algebra_rank=2)
    gamma = GeometricCocycle(CocycleKind.FUNCTION, GEOMETRIES[2])
    alpha = induced_alpha(rep)
    indices = [(n, p) for n in range(-5, 6) for p in (1, 2)]
    for n, p in indices:
        for m, q in indices:
            value = extract_cocycle(Current(x, A(n, p)), Current(y, A(m, q)), rep)
            assert value == alpha * x.product_trace(y) * gamma(A(n, p), A(m, q)), (n, p, m, q)
