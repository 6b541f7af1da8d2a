"""
Casimirs e semi-casimirs: operadores Delta_e = r(e) - T[e] que comutam (a
menos de escalar) com as correntes, obtidos de sistemas lineares truncados
no coeficiente de e = sum a_{n,p} e_{n,p}.
"""
import enum
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import sympy

from algebra.affine import AlgebraTag, MatrixElement
from algebra.arith import RationalFunction, as_rational, format_rational
from algebra.basis import BasisIndex, FormElement, Geometry, KNExpansion, expand_in_basis
from algebra.checks import ScalarReport, Status
from algebra.cocycles import CocycleKind, GeometricCocycle
from algebra.errors import ConfigError, SingularDiagonal, TruncationInsufficient
from algebra.sugawara import (
    SugawaraContext, common_scalar, delta_apply, representation_mixing, trace_weight,
)
from algebra.wedge import WedgeVector, matrix_of_current, sample_monomials, wedge_apply

logger = logging.getLogger(__name__)

# gamma(e_idx, A_idx) -> racional
Evaluator = Callable[[BasisIndex, BasisIndex], Fraction]

# folga da varredura de truncamento além da janela
_SCAN = 4


class CandidateKind(enum.Enum):
    CASIMIR = "casimir"
    SEMI_CASIMIR = "semi-casimir"


@dataclass(frozen=True)
class CasimirCandidate:
    field: KNExpansion
    kind: CandidateKind
    window: Tuple[int, int]
    closed: bool = True

    def coefficient(self, n: int, p: int = 1) -> Fraction:
        return self.field.coefficient(BasisIndex(-1, n, p))

    def to_json(self):
        return {
            "kind": self.kind.value,
            "window": list(self.window),
            "closed": self.closed,
            "coefficients": self.field.to_json(),
        }


@dataclass
class CasimirSolution:
    candidates: List[CasimirCandidate]
    diagonal: Dict[Tuple[int, int], Fraction]
    genericity_failures: List[int]
    closed: bool

    @property
    def kernel_dimension(self) -> int:
        return len(self.candidates)

    def to_json(self):
        return {
            "kernel_dimension": self.kernel_dimension,
            "genericity_failures": self.genericity_failures,
            "closed": self.closed,
            "diagonal": {f"{k},{p}": format_rational(v) for (k, p), v in sorted(self.diagonal.items())},
            "candidates": [c.to_json() for c in self.candidates],
        }


def geometric_mixing_evaluator(geom: Geometry, T: Optional[RationalFunction] = None, scale=1) -> Evaluator:
    """gamma^(m)(e_{m,p}, A_{k,q}) da conexão afim T."""
    gamma = GeometricCocycle(CocycleKind.MIXING, geom, T or RationalFunction.constant(0), as_rational(scale))
    return gamma.basis_value


def representation_evaluator(ctx: SugawaraContext) -> Evaluator:
    """Cociclo misto induzido pela representação fermiônica do contexto."""
    cache = {}

    def evaluate(e_idx: BasisIndex, A_idx: BasisIndex) -> Fraction:
        key = (e_idx, A_idx)
        if key not in cache:
            cache[key] = representation_mixing(ctx, KNExpansion.single(e_idx), KNExpansion.single(A_idx))
        return cache[key]

    return evaluate


def _unknowns(N: int, lo: int, hi: int):
    return [BasisIndex(-1, m, p) for m in range(lo, hi + 1) for p in range(1, N + 1)]


def _leaks(gamma: Evaluator, N: int, window: Tuple[int, int], equations) -> bool:
    """True se alguma equação envolve coeficientes fora da janela."""
    lo, hi = window
    outside = [m for m in range(lo - _SCAN, hi + _SCAN + 1) if not lo <= m <= hi]
    for A_idx in equations:
        for m in outside:
            for p in range(1, N + 1):
                if gamma(BasisIndex(-1, m, p), A_idx):
                    return True
    return False


def _to_sympy(value: Fraction):
    return sympy.Rational(value.numerator, value.denominator)


def casimir_solve(geom: Geometry, gamma: Evaluator, window: Tuple[int, int]) -> CasimirSolution:
    """
    Resolve sum_m a_{m,p} gamma(e_{m,p}, A_{-k,q}) = 0 para todo k != 0 da
    janela e devolve uma base do núcleo, sem supor dimensão 1.
    """
    lo, hi = window
    N = geom.N
    if lo > hi:
        return CasimirSolution([], {}, [], True)
    unknowns = _unknowns(N, lo, hi)
    equations = [BasisIndex(0, -k, q) for k in range(lo, hi + 1) if k != 0 for q in range(1, N + 1)]
    matrix = sympy.Matrix(len(equations), len(unknowns),
                          lambda i, j: _to_sympy(as_rational(gamma(unknowns[j], equations[i]))))
    diagonal = {}
    failures = []
    for k in range(lo, hi + 1):
        if k == 0:
            continue
        for q in range(1, N + 1):
            value = as_rational(gamma(BasisIndex(-1, k, q), BasisIndex(0, -k, q)))
            diagonal[(k, q)] = value
            if value == 0 and k not in failures:
                failures.append(k)
    if failures:
        logger.warning("diagonal nula (falha de genericidade) em k = %s", failures)
    closed = not _leaks(gamma, N, window, equations)
    candidates = []
    for vec in matrix.nullspace():
        pivot = next(c for c in reversed(list(vec)) if c != 0)
        coeffs = {idx: as_rational(c / pivot) for idx, c in zip(unknowns, vec)}
        candidates.append(CasimirCandidate(KNExpansion(-1, coeffs), CandidateKind.CASIMIR, window, closed))
    logger.info("casimir: núcleo de dimensão %d em %s", len(candidates), window)
    return CasimirSolution(candidates, diagonal, failures, closed)


def gamma_extend(e, gamma: Evaluator, window: Tuple[int, int], geom: Optional[Geometry] = None) -> CasimirCandidate:
    """
    Gamma(e): mantém os coeficientes de grau <= 0 e resolve as equações com
    k > 0 para os coeficientes a_{m,p}, 0 < m <= n_max.
    """
    if isinstance(e, FormElement):
        geom = geom or e.geometry
        e = expand_in_basis(e)
    if geom is None:
        raise ConfigError("gamma_extend exige a geometria")
    lo, hi = window
    if any(idx.degree > 0 or idx.degree < lo for idx in e.terms):
        raise ConfigError("e deve ter suporte em graus <= 0 dentro da janela")
    N = geom.N
    if hi < 1:
        return CasimirCandidate(e, CandidateKind.SEMI_CASIMIR, window, True)
    unknowns = _unknowns(N, 1, hi)
    equations = [BasisIndex(0, -k, q) for k in range(1, hi + 1) for q in range(1, N + 1)]
    for k in range(1, hi + 1):
        for q in range(1, N + 1):
            if gamma(BasisIndex(-1, k, q), BasisIndex(0, -k, q)) == 0:
                raise SingularDiagonal(k)
    matrix = sympy.Matrix(len(equations), len(unknowns),
                          lambda i, j: _to_sympy(as_rational(gamma(unknowns[j], equations[i]))))
    rhs = sympy.Matrix(len(equations), 1, lambda i, _: _to_sympy(
        -sum((c * as_rational(gamma(idx, equations[i])) for idx, c in e.items()), Fraction(0))))
    try:
        solution = matrix.LUsolve(rhs)
    except ValueError as exc:
        raise SingularDiagonal(None, "sistema de grau positivo singular") from exc
    coeffs = dict(e.terms)
    coeffs.update({idx: as_rational(c) for idx, c in zip(unknowns, solution)})
    full_window = (min(lo, 0), hi)
    closed = not _leaks(gamma, N, full_window, equations)
    return CasimirCandidate(KNExpansion(-1, coeffs), CandidateKind.SEMI_CASIMIR, full_window, closed)


def _candidate_field(candidate) -> Tuple[KNExpansion, bool]:
    if isinstance(candidate, CasimirCandidate):
        return candidate.field, candidate.closed
    if isinstance(candidate, FormElement):
        return expand_in_basis(candidate), True
    return candidate, True


def check_delta_commutation(ctx: SugawaraContext, candidate: CasimirCandidate, x: MatrixElement, A,
                            samples: Sequence[WedgeVector], gamma: Optional[Evaluator] = None) -> ScalarReport:
    """
    [Delta_e, x(A)] nas amostras. Casimir: deve ser lambda(x) gamma(e, A) vezes
    a identidade. Semi-casimir: deve anular as amostras para A de grau negativo.
    Se a cauda truncada de e pode alterar o resultado o veredito é INCONCLUSIVE.
    """
    if isinstance(A, FormElement):
        A = expand_in_basis(A)
    e = candidate.field
    lam = Fraction(0) if x.tag is AlgebraTag.SL else trace_weight(x)
    if candidate.kind is CandidateKind.SEMI_CASIMIR:
        if any(idx.degree >= 0 for idx in A.terms):
            raise ConfigError("semi-casimirs só comutam com A_k, k < 0")
        expected = Fraction(0)
    elif lam == 0:
        expected = Fraction(0)
    else:
        gamma = gamma or representation_evaluator(ctx)
        expected = lam * sum((a * b * as_rational(gamma(i, j)) for i, a in e.items() for j, b in A.items()),
                             Fraction(0))
    truncated = False
    if lam != 0:
        gamma = gamma or representation_evaluator(ctx)
        truncated = _leaks(gamma, ctx.geometry.N, candidate.window, list(A.terms))
    op = matrix_of_current(x, A, ctx.rep)

    def pairs():
        for v in samples:
            w = delta_apply(ctx, e, wedge_apply(op, v)) - wedge_apply(op, delta_apply(ctx, e, v))
            yield v, w

    report = common_scalar(pairs())
    if truncated:
        logger.warning("comutador de Delta_e com %r afetado pela truncagem", A)
        return ScalarReport(Status.INCONCLUSIVE, report.scalar,
                            str(TruncationInsufficient("coeficientes fora da janela contribuem")), report.checked)
    if report.status is Status.PASS and report.scalar != expected:
        return ScalarReport(Status.FAIL, report.scalar, {"expected": format_rational(expected)}, report.checked)
    return report


PAIRWISE_MINIMUM = 20


def check_pairwise_scalar(ctx: SugawaraContext, e, f, samples: Optional[Sequence[WedgeVector]] = None,
                          second: Optional[Sequence[WedgeVector]] = None) -> ScalarReport:
    """
    [Delta(e), Delta(f)] = lambda(e, f) id, conferido em dois conjuntos disjuntos
    de >= 20 amostras que precisam dar o mesmo escalar. Sem o segundo conjunto,
    as amostras são divididas ao meio.
    """
    if samples is None:
        monomials = sample_monomials(ctx.charge, 2 * PAIRWISE_MINIMUM)
        samples = [WedgeVector.basis(phi) for phi in monomials]
    samples = list(samples)
    if second is None:
        half = len(samples) // 2
        samples, second = samples[:half], samples[half:]
    second = list(second)
    if min(len(samples), len(second)) < PAIRWISE_MINIMUM:
        raise ConfigError(f"são necessários dois conjuntos de ao menos {PAIRWISE_MINIMUM} amostras")
    if any(v == w for v in samples for w in second):
        raise ConfigError("os conjuntos de amostras devem ser disjuntos")
    fe, closed_e = _candidate_field(e)
    ff, closed_f = _candidate_field(f)

    def pairs(vectors):
        for v in vectors:
            w = (delta_apply(ctx, fe, delta_apply(ctx, ff, v))
                 - delta_apply(ctx, ff, delta_apply(ctx, fe, v)))
            yield v, w

    first_report = common_scalar(pairs(samples))
    if first_report.status is not Status.PASS:
        return first_report
    second_report = common_scalar(pairs(second))
    checked = first_report.checked + second_report.checked
    if second_report.status is not Status.PASS:
        return ScalarReport(second_report.status, second_report.scalar, second_report.witness, checked)
    if first_report.scalar != second_report.scalar:
        witness = {"scalars": [format_rational(first_report.scalar), format_rational(second_report.scalar)]}
        logger.info("escalares diferentes entre os conjuntos: %s", witness)
        return ScalarReport(Status.FAIL, first_report.scalar, witness, checked)
    if not (closed_e and closed_f):
        return ScalarReport(Status.INCONCLUSIVE, first_report.scalar, "candidato truncado", checked)
    return ScalarReport(Status.PASS, first_report.scalar, None, checked)
