from fractions import Fraction

import pytest

from algebra.affine import SL2_E, SL2_F, SL2_H, AlgebraTag, MatrixElement
from algebra.casimir import (
    CandidateKind, CasimirCandidate, casimir_solve, check_delta_commutation, check_pairwise_scalar, gamma_extend,
    geometric_mixing_evaluator, representation_evaluator,
)
from algebra.checks import Status
from algebra.errors import ConfigError, SingularDiagonal
from algebra.sugawara import sugawara_context
from algebra.wedge import WedgeVector, enumerate_monomials, sample_monomials
from conftest import GEOMETRIES, A, e

ONE = MatrixElement.identity(1, AlgebraTag.GL1)
G1 = GEOMETRIES[1]


def synthetic(diagonal, extra):
    """gamma(e_m, A_{-k}) = diagonal(k) delta_{mk} + extra(m, k)"""
    def evaluate(e_idx, A_idx):
        m, k = e_idx.degree, -A_idx.degree
        return Fraction(diagonal(k) if m == k else 0) + Fraction(extra(m, k))
    return evaluate


@pytest.fixture
def ctx_gl1(rep_gl1):
    return sugawara_context(rep_gl1)


def test_geometric_solve_one_point(geom1):
    sol = casimir_solve(geom1, geometric_mixing_evaluator(geom1), (-4, 4))
    assert sol.genericity_failures == [-1]
    assert sol.diagonal[(2, 1)] == 6
    assert all(v == k * (k + 1) for (k, _), v in sol.diagonal.items())
    assert sol.kernel_dimension == 2
    assert sol.closed
    supports = sorted(tuple(idx.degree for idx in c.field.terms) for c in sol.candidates)
    assert supports == [(-1,), (0,)]


def test_synthetic_kernel():
    gamma = synthetic(lambda k: k * k + 1, lambda m, k: 1 if m == k - 1 else 0)
    sol = casimir_solve(G1, gamma, (-3, 3))
    assert sol.genericity_failures == []
    assert sol.kernel_dimension == 1
    (cand,) = sol.candidates
    assert cand.kind is CandidateKind.CASIMIR
    assert [cand.coefficient(n) for n in (-3, -2, -1)] == [0, 0, 0]
    assert [cand.coefficient(n) for n in (0, 1, 2, 3)] == [-100, 50, -10, 1]
    # a_{-4} entra na equação de k = -3
    assert not sol.closed


def test_solution_json():
    gamma = synthetic(lambda k: k * k + 1, lambda m, k: 0)
    data = casimir_solve(G1, gamma, (-1, 1)).to_json()
    assert data["kernel_dimension"] == 1
    assert data["diagonal"] == {"-1,1": "2", "1,1": "2"}
    assert data["candidates"][0]["coefficients"] == {"-1,0,1": "1"}


def test_gamma_extend():
    gamma = synthetic(lambda k: k * k + 1, lambda m, k: 1 if (k, m) == (1, 0) else 0)
    cand = gamma_extend(e(0), gamma, (-2, 2), G1)
    assert cand.kind is CandidateKind.SEMI_CASIMIR
    assert cand.coefficient(0) == 1
    assert cand.coefficient(1) == Fraction(-1, 2)
    assert cand.coefficient(2) == 0
    assert cand.window == (-2, 2)
    assert cand.closed


def test_gamma_extend_errors():
    gamma = synthetic(lambda k: 0 if k == 1 else 1, lambda m, k: 0)
    with pytest.raises(SingularDiagonal) as info:
        gamma_extend(e(-1), gamma, (-2, 2), G1)
    assert info.value.k == 1
    with pytest.raises(ConfigError):
        gamma_extend(e(1), gamma, (-2, 2), G1)
    with pytest.raises(ConfigError):
        gamma_extend(e(0), gamma, (-2, 2))


def test_representation_evaluator_matches_mixing(ctx_gl1):
    gamma = representation_evaluator(ctx_gl1)
    (e2,) = e(2).terms
    (Am2,) = A(-2).terms
    assert gamma(e2, Am2) == -3
    (em2,) = e(-2).terms
    (A2,) = A(2).terms
    assert gamma(em2, A2) == -1


@pytest.mark.parametrize("n", [-1, -2, -3])
def test_semi_casimir_commutes_with_negative_currents(ctx_gl1, n):
    cand = gamma_extend(e(0), representation_evaluator(ctx_gl1), (-3, 3), ctx_gl1.geometry)
    report = check_delta_commutation(ctx_gl1, cand, ONE, A(n), _samples(2))
    assert report.status is Status.PASS
    assert report.scalar == 0


def test_semi_casimir_truncation_is_inconclusive(ctx_gl1):
    cand = gamma_extend(e(0), representation_evaluator(ctx_gl1), (-3, 3), ctx_gl1.geometry)
    report = check_delta_commutation(ctx_gl1, cand, ONE, A(-4), _samples(2))
    assert report.status is Status.INCONCLUSIVE


def test_semi_casimir_rejects_nonnegative_currents(ctx_gl1):
    cand = gamma_extend(e(0), representation_evaluator(ctx_gl1), (-1, 1), ctx_gl1.geometry)
    with pytest.raises(ConfigError):
        check_delta_commutation(ctx_gl1, cand, ONE, A(0), _samples(1))


@pytest.mark.parametrize("n, scalar", [(1, 0), (2, Fraction(-3, 2))])
def test_pairwise_scalar(ctx_gl1, n, scalar):
    report = check_pairwise_scalar(ctx_gl1, e(n), e(-n))
    assert report.status is Status.PASS
    assert report.checked == 40
    assert report.scalar == scalar


def test_pairwise_scalar_agrees_on_two_sample_sets(ctx_gl1):
    vectors = [WedgeVector.basis(phi) for phi in sample_monomials(0, 50)]
    low, high = vectors[:20], vectors[20:]
    report = check_pairwise_scalar(ctx_gl1, e(2), e(-2), low, high)
    assert report.status is Status.PASS
    assert report.checked == 50
    assert report.scalar == Fraction(-3, 2)


def test_pairwise_scalar_needs_two_sets_of_twenty(ctx_gl1):
    with pytest.raises(ConfigError):
        check_pairwise_scalar(ctx_gl1, e(1), e(-1), _samples(1))
    vectors = [WedgeVector.basis(phi) for phi in sample_monomials(0, 30)]
    with pytest.raises(ConfigError):
        check_pairwise_scalar(ctx_gl1, e(1), e(-1), vectors)
    with pytest.raises(ConfigError):
        check_pairwise_scalar(ctx_gl1, e(1), e(-1), vectors[:20], vectors[10:30])


def _samples(depth):
    return [WedgeVector.basis(phi) for phi in enumerate_monomials(0, depth)]


@pytest.mark.parametrize("x", [SL2_E, SL2_F, SL2_H])
@pytest.mark.parametrize("k, n", [(1, -1), (0, 2), (-2, 1)])
def test_traceless_currents_commute_with_delta(rep_sl2, x, k, n):
    ctx = sugawara_context(rep_sl2)
    candidate = CasimirCandidate(e(k), CandidateKind.CASIMIR, (-3, 3))
    report = check_delta_commutation(ctx, candidate, x, A(n), _samples(2))
    assert report.status is Status.PASS
    assert report.scalar == 0
