"""
Cociclos geométricos (funções, campos vetoriais e misto), identidade de
cociclo, localidade, invariância por L e equivalência por cobordo.

Todas as integrais sobre o ciclo separador são somas de resíduos nos pontos
de entrada.
"""
import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, Optional, Sequence, Tuple

import sympy

from algebra.arith import INFINITY, RationalFunction, as_rational, order_at, residue_of_product
from algebra.basis import (
    BasisIndex, FormElement, Geometry, KNExpansion, basis_indices, make_basis,
)
from algebra.checks import IdentityReport
from algebra.errors import ConfigError, GeometryMismatch, SupportViolation, WeightMismatch
from algebra.structure import bracket, d_bracket, lie_derivative

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProjectiveConnection:
    value: RationalFunction = field(default_factory=lambda: RationalFunction.constant(0))

    def validate(self, geom: Geometry):
        if not self.value.is_zero:
            try:
                FormElement(self.value, 2, geom)
            except SupportViolation as e:
                raise ConfigError(f"conexão projetiva com polos fora dos pontos: {self.value}") from e
        return self


@dataclass(frozen=True)
class AffineConnection:
    value: RationalFunction = field(default_factory=lambda: RationalFunction.constant(0))

    def __post_init__(self):
        if not self.value.is_zero and order_at(self.value, INFINITY) < -1:
            raise ConfigError(f"conexão afim com polo de ordem > 1 em INFINITY: {self.value}")

    def validate(self, geom: Geometry):
        if not self.value.is_zero:
            try:
                FormElement(self.value, 1, geom)
            except SupportViolation as e:
                raise ConfigError(f"conexão afim com polos fora dos pontos: {self.value}") from e
        return self


@dataclass(frozen=True)
class LocalityWindow:
    M1: int
    M2: int
    stable: bool = True

    def __post_init__(self):
        if self.M2 > self.M1:
            raise ValueError(f"janela de localidade invertida: [{self.M2}, {self.M1}]")


def _in_point_sum(geom: Geometry, terms) -> Fraction:
    total = Fraction(0)
    for coef, factors in terms:
        for a in geom.punctures:
            total += coef * residue_of_product(factors, a)
    return total


def _terms_A(g, h):
    return [(Fraction(1), ((g, 0), (h, 1)))]


def _terms_L(e, f, R):
    half = Fraction(1, 2)
    return [
        (half, ((e, 3), (f, 0))),
        (-half, ((e, 0), (f, 3))),
        (Fraction(-1), ((R, 0), (e, 1), (f, 0))),
        (Fraction(1), ((R, 0), (e, 0), (f, 1))),
    ]


def _terms_mix(e, g, T):
    return [(Fraction(1), ((e, 0), (g, 2))), (Fraction(1), ((T, 0), (e, 0), (g, 1)))]


def _same_geometry(*forms):
    geom = forms[0].geometry
    if any(f.geometry != geom for f in forms[1:]):
        raise GeometryMismatch("formas sobre geometrias diferentes")
    return geom


def _require_weight(f: FormElement, weight: int):
    if f.weight != weight:
        raise WeightMismatch(f"esperado peso {weight}, recebido {f.weight}")


def cocycle_A(g: FormElement, h: FormElement) -> Fraction:
    """gamma^(A)(g, h) = (1/2 pi i) int g dh"""
    geom = _same_geometry(g, h)
    _require_weight(g, 0)
    _require_weight(h, 0)
    return _in_point_sum(geom, _terms_A(g.func, h.func))


def cocycle_L(e: FormElement, f: FormElement, R: Optional[ProjectiveConnection] = None) -> Fraction:
    geom = _same_geometry(e, f)
    _require_weight(e, -1)
    _require_weight(f, -1)
    R = R or ProjectiveConnection()
    return _in_point_sum(geom, _terms_L(e.func, f.func, R.value))


def cocycle_mix(e: FormElement, g: FormElement, T: Optional[AffineConnection] = None) -> Fraction:
    """Cociclo misto; com os argumentos trocados (função, campo) devolve -gamma(campo, função)."""
    geom = _same_geometry(e, g)
    if e.weight == 0 and g.weight == -1:
        return -cocycle_mix(g, e, T)
    _require_weight(e, -1)
    _require_weight(g, 0)
    T = T or AffineConnection()
    return _in_point_sum(geom, _terms_mix(e.func, g.func, T.value))


class CocycleKind(enum.Enum):
    FUNCTION = "A"
    VECTOR = "L"
    MIXING = "m"


_WEIGHTS = {
    CocycleKind.FUNCTION: (0, 0),
    CocycleKind.VECTOR: (-1, -1),
    CocycleKind.MIXING: (-1, 0),
}


@lru_cache(maxsize=None)
def _basis_value(kind: CocycleKind, geom: Geometry, connection: RationalFunction,
                 i: BasisIndex, j: BasisIndex) -> Fraction:
    a = make_basis(geom, i.weight, i.degree, i.puncture).func
    b = make_basis(geom, j.weight, j.degree, j.puncture).func
    if kind is CocycleKind.FUNCTION:
        terms = _terms_A(a, b)
    elif kind is CocycleKind.VECTOR:
        terms = _terms_L(a, b, connection)
    else:
        terms = _terms_mix(a, b, connection)
    return _in_point_sum(geom, terms)


@dataclass(frozen=True)
class GeometricCocycle:
    """
    Avaliador bilinear de um cociclo geométrico sobre expansões na base.

    `connection` é R para o cociclo de campos e T para o misto; ignorado no
    cociclo de funções.
    """

    kind: CocycleKind
    geometry: Geometry
    connection: RationalFunction = field(default_factory=lambda: RationalFunction.constant(0))
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "scale", as_rational(self.scale))
        if self.kind is CocycleKind.FUNCTION:
            object.__setattr__(self, "connection", RationalFunction.constant(0))
        elif self.kind is CocycleKind.VECTOR:
            ProjectiveConnection(self.connection).validate(self.geometry)
        else:
            AffineConnection(self.connection).validate(self.geometry)

    @property
    def weights(self) -> Tuple[int, int]:
        return _WEIGHTS[self.kind]

    def basis_value(self, i: BasisIndex, j: BasisIndex) -> Fraction:
        if self.kind is CocycleKind.MIXING and (i.weight, j.weight) == (0, -1):
            return -self.basis_value(j, i)
        if (i.weight, j.weight) != self.weights:
            if self.kind is CocycleKind.MIXING and i.weight == j.weight:
                return Fraction(0)
            raise WeightMismatch(f"cociclo {self.kind.value} não aceita pesos {(i.weight, j.weight)}")
        return self.scale * _basis_value(self.kind, self.geometry, self.connection, i, j)

    def __call__(self, x: KNExpansion, y: KNExpansion) -> Fraction:
        total = Fraction(0)
        for i, a in x.items():
            for j, b in y.items():
                total += a * b * self.basis_value(i, j)
        return total

    def bracket(self, x: KNExpansion, y: KNExpansion) -> KNExpansion:
        """Colchete da álgebra de Lie sobre a qual o cociclo vive."""
        if self.kind is CocycleKind.FUNCTION:
            return KNExpansion(0)
        if self.kind is CocycleKind.VECTOR:
            return bracket(x, y, self.geometry)
        return lie_derivative(x, y, self.geometry)

    def scaled(self, c) -> "GeometricCocycle":
        return GeometricCocycle(self.kind, self.geometry, self.connection, self.scale * as_rational(c))


@dataclass(frozen=True)
class DCocycle:
    """
    gamma_D((g,e),(h,f)) = a*gamma^(A)(g,h) + l*gamma^(L)(e,f) + m*(gamma^(m)(e,h) - gamma^(m)(f,g))
    na álgebra D de operadores diferenciais, elementos como pares (função, campo).
    """

    geometry: Geometry
    R: RationalFunction = field(default_factory=lambda: RationalFunction.constant(0))
    T: RationalFunction = field(default_factory=lambda: RationalFunction.constant(0))
    a: Fraction = Fraction(1)
    l: Fraction = Fraction(1)
    m: Fraction = Fraction(1)

    def __call__(self, x, y) -> Fraction:
        g, e = x
        h, f = y
        fun = GeometricCocycle(CocycleKind.FUNCTION, self.geometry)
        vec = GeometricCocycle(CocycleKind.VECTOR, self.geometry, self.R)
        mix = GeometricCocycle(CocycleKind.MIXING, self.geometry, self.T)
        return (as_rational(self.a) * fun(g, h) + as_rational(self.l) * vec(e, f)
                + as_rational(self.m) * (mix(e, h) - mix(f, g)))

    def bracket(self, x, y):
        return d_bracket(x, y, self.geometry)


def check_antisymmetry(gamma, pairs: Iterable) -> IdentityReport:
    count = 0
    for x, y in pairs:
        count += 1
        if gamma(x, y) != -gamma(y, x):
            return IdentityReport(False, (x, y), count)
    return IdentityReport(True, None, count)


def check_cocycle_identity(gamma: Callable, bracket_op: Callable, triples: Iterable) -> IdentityReport:
    """gamma([f,g],h) + gamma([g,h],f) + gamma([h,f],g) = 0 em cada tripla."""
    count = 0
    for f, g, h in triples:
        count += 1
        total = (gamma(bracket_op(f, g), h) + gamma(bracket_op(g, h), f)
                 + gamma(bracket_op(h, f), g))
        if total != 0:
            logger.warning("identidade de cociclo falhou: soma %s", total)
            return IdentityReport(False, (f, g, h), count)
    return IdentityReport(True, None, count)


def _support_degrees(gamma: GeometricCocycle, window: Tuple[int, int]):
    wi, wj = gamma.weights
    degrees = range(window[0], window[1] + 1)
    hits = set()
    for i in basis_indices(gamma.geometry, wi, degrees):
        for j in basis_indices(gamma.geometry, wj, degrees):
            if gamma.basis_value(i, j) != 0:
                hits.add(i.degree + j.degree)
    return hits


def check_locality(gamma: GeometricCocycle, window: Tuple[int, int]) -> Optional[LocalityWindow]:
    """
    Menor [M2, M1] com gamma(V_n, V_m) != 0 => M2 <= n+m <= M1 na janela.
    Conferido contra a janela ampliada em 2; None para o cociclo nulo.
    """
    if window[0] > window[1]:
        raise ConfigError(f"janela vazia: {window}")
    base = _support_degrees(gamma, window)
    wider = _support_degrees(gamma, (window[0] - 2, window[1] + 2))
    if not wider:
        return None
    stable = bool(base) and (min(base), max(base)) == (min(wider), max(wider))
    if not stable:
        logger.warning("localidade instável para o cociclo %s", gamma.kind.value)
    return LocalityWindow(max(wider), min(wider), stable)


def _window_pairs(gamma: GeometricCocycle, window):
    wi, wj = gamma.weights
    degrees = range(window[0], window[1] + 1)
    return [(i, j) for i in basis_indices(gamma.geometry, wi, degrees)
            for j in basis_indices(gamma.geometry, wj, degrees)]


def _check_same_algebra(g1: GeometricCocycle, g2: GeometricCocycle):
    if g1.kind is not g2.kind:
        raise ConfigError("cociclos de tipos diferentes")
    if g1.geometry != g2.geometry:
        raise GeometryMismatch("cociclos sobre geometrias diferentes")


def coboundary_equivalent(g1: GeometricCocycle, g2: GeometricCocycle,
                          phi: Dict[BasisIndex, Fraction], window: Tuple[int, int]) -> bool:
    """gamma1(f,g) - gamma2(f,g) = phi([f,g]) para todos os pares da base na janela."""
    _check_same_algebra(g1, g2)
    for i, j in _window_pairs(g1, window):
        x, y = KNExpansion.single(i), KNExpansion.single(j)
        image = g1.bracket(x, y)
        rhs = sum((c * as_rational(phi.get(k, 0)) for k, c in image.items()), Fraction(0))
        if g1.basis_value(i, j) - g2.basis_value(i, j) != rhs:
            return False
    return True


def find_coboundary(g1: GeometricCocycle, g2: GeometricCocycle,
                    window: Tuple[int, int]) -> Optional[Dict[BasisIndex, Fraction]]:
    """
    Resolve o sistema linear para phi na janela; devolve uma solução (parâmetros
    livres em zero) ou None quando o sistema é incompatível.
    """
    _check_same_algebra(g1, g2)
    rows, rhs = [], []
    unknowns: Dict[BasisIndex, int] = {}
    for i, j in _window_pairs(g1, window):
        image = g1.bracket(KNExpansion.single(i), KNExpansion.single(j))
        row = {}
        for k, c in image.items():
            row[unknowns.setdefault(k, len(unknowns))] = c
        rows.append(row)
        rhs.append(g1.basis_value(i, j) - g2.basis_value(i, j))
    if not unknowns:
        return {} if all(v == 0 for v in rhs) else None
    A = sympy.zeros(len(rows), len(unknowns))
    for r, row in enumerate(rows):
        for col, c in row.items():
            A[r, col] = sympy.Rational(c.numerator, c.denominator)
    b = sympy.Matrix([sympy.Rational(v.numerator, v.denominator) for v in rhs])
    try:
        solution, params = A.gauss_jordan_solve(b)
    except ValueError:
        logger.info("sem cobordo na janela %s para %s", window, g1.kind.value)
        return None
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    by_column = {col: idx for idx, col in unknowns.items()}
    return {by_column[c]: as_rational(solution[c]) for c in range(len(unknowns)) if solution[c] != 0}


@dataclass(frozen=True)
class LInvarianceReport:
    derivation: bool
    literal: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.derivation


def check_L_invariance(geom: Geometry, samples: Sequence) -> LInvarianceReport:
    """
    Para c = gamma^(A), confere em cada amostra (e, A, B) a identidade de
    derivação c(e.A, B) + c(A, e.B) = 0 e, separadamente, a forma literal
    c(e.A, B) = c(A, e.B).
    """
    gamma = GeometricCocycle(CocycleKind.FUNCTION, geom)
    derivation, literal, witness = True, True, None
    for e, A, B in samples:
        left = gamma(lie_derivative(e, A, geom), B)
        right = gamma(A, lie_derivative(e, B, geom))
        if left + right != 0:
            derivation = False
            witness = witness or (e, A, B)
        if left != right:
            literal = False
    return LInvarianceReport(derivation, literal, witness)


def cocycle_table(gamma: GeometricCocycle, window: Tuple[int, int]) -> list:
    """Valores não nulos nos pares da base, em ordem lexicográfica dos índices."""
    rows = []
    for i, j in sorted(_window_pairs(gamma, window)):
        value = gamma.basis_value(i, j)
        if value:
            rows.append((i, j, value))
    return rows
