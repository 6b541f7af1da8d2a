"""
Álgebra de correntes g (x) A, sua extensão central afim e a álgebra D_g
(correntes mais campos vetoriais), para g = gl(r), sl(r) e gl(1).
"""
import enum
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, Optional

import numpy as np

from algebra.arith import INFINITY, RationalFunction, as_rational, format_rational, order_at
from algebra.checks import IdentityReport
from algebra.basis import (
    BasisIndex, FormElement, Geometry, KNExpansion, expand_in_basis, make_basis,
)
from algebra.cocycles import CocycleKind, GeometricCocycle
from algebra.errors import ConfigError, GeometryMismatch, ShapeMismatch, WeightMismatch
from algebra.structure import (
    Bounds, SplitVariant, TableKind, basis_product, bracket, lie_derivative, measure_bounds,
    triangular_split,
)

logger = logging.getLogger(__name__)


class AlgebraTag(enum.Enum):
    GL = "gl"
    SL = "sl"
    GL1 = "gl1"


class MatrixElement:
    """Matriz r x r exata; SL exige traço nulo e GL1 exige r = 1."""

    __slots__ = ("entries", "tag")

    def __init__(self, entries, tag: AlgebraTag = AlgebraTag.GL):
        rows = tuple(tuple(as_rational(v) for v in row) for row in entries)
        r = len(rows)
        if r < 1 or any(len(row) != r for row in rows):
            raise ShapeMismatch("a matriz deve ser quadrada e não vazia")
        if tag is AlgebraTag.GL1 and r != 1:
            raise ShapeMismatch("gl(1) exige matrizes 1x1")
        self.entries = rows
        self.tag = tag
        if tag is AlgebraTag.SL and self.trace() != 0:
            raise ShapeMismatch("elemento de sl com traço não nulo")

    @classmethod
    def from_array(cls, array, tag):
        return cls(array.tolist(), tag)

    @classmethod
    def zero(cls, r: int, tag: AlgebraTag = AlgebraTag.GL):
        return cls([[0] * r for _ in range(r)], tag)

    @classmethod
    def identity(cls, r: int, tag: AlgebraTag = AlgebraTag.GL):
        return cls([[1 if a == b else 0 for b in range(r)] for a in range(r)], tag)

    @classmethod
    def unit(cls, a: int, b: int, r: int, tag: AlgebraTag = AlgebraTag.GL):
        """Matriz elementar E_ab (índices a partir de 0)."""
        return cls([[1 if (i, j) == (a, b) else 0 for j in range(r)] for i in range(r)], tag)

    @property
    def rank(self) -> int:
        return len(self.entries)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.entries, dtype=object)

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for row in self.entries for v in row)

    def trace(self) -> Fraction:
        return sum((self.entries[i][i] for i in range(self.rank)), Fraction(0))

    def _check(self, other):
        if self.tag is not other.tag or self.rank != other.rank:
            raise ShapeMismatch(f"{self.tag.value}({self.rank}) e {other.tag.value}({other.rank})")

    def __eq__(self, other):
        if not isinstance(other, MatrixElement):
            return NotImplemented
        return self.tag is other.tag and self.entries == other.entries

    def __hash__(self):
        return hash((self.tag, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(format_rational(v) for v in row) for row in self.entries)
        return f"{self.tag.value}[{body}]"

    def __add__(self, other):
        self._check(other)
        return MatrixElement.from_array(self.array + other.array, self.tag)

    def __sub__(self, other):
        self._check(other)
        return MatrixElement.from_array(self.array - other.array, self.tag)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return MatrixElement.from_array(self.array * as_rational(c), self.tag)

    def commutator(self, other):
        self._check(other)
        a, b = self.array, other.array
        return MatrixElement.from_array(a.dot(b) - b.dot(a), self.tag)

    def product_trace(self, other) -> Fraction:
        self._check(other)
        return as_rational(np.trace(self.array.dot(other.array)))


SL2_E = MatrixElement([[0, 1], [0, 0]], AlgebraTag.SL)
SL2_F = MatrixElement([[0, 0], [1, 0]], AlgebraTag.SL)
SL2_H = MatrixElement([[1, 0], [0, -1]], AlgebraTag.SL)


def algebra_basis(tag: AlgebraTag, r: int):
    """Base linear padrão de g: unidades E_ab em gl, e_i, f_i, h_i em sl."""
    if tag is AlgebraTag.GL1:
        return [MatrixElement.identity(1, AlgebraTag.GL1)]
    if tag is AlgebraTag.GL:
        return [MatrixElement.unit(a, b, r) for a in range(r) for b in range(r)]
    basis = []
    for a in range(r):
        for b in range(r):
            if a != b:
                basis.append(MatrixElement.unit(a, b, r, AlgebraTag.SL))
    for a in range(r - 1):
        basis.append(MatrixElement.from_array(
            MatrixElement.unit(a, a, r).array - MatrixElement.unit(a + 1, a + 1, r).array, AlgebraTag.SL))
    return basis


def coordinates(x: MatrixElement):
    """Coordenadas de x na base de algebra_basis(x.tag, x.rank)."""
    r = x.rank
    if x.tag is not AlgebraTag.SL:
        return [x.entries[a][b] for a in range(r) for b in range(r)]
    coords = [x.entries[a][b] for a in range(r) for b in range(r) if a != b]
    running = Fraction(0)
    for a in range(r - 1):
        running += x.entries[a][a]
        coords.append(running)
    return coords


@dataclass(frozen=True)
class BilinearForm:
    """alpha(x, y) = trace*tr(xy) + trace_trace*tr(x)tr(y)"""

    trace: Fraction = Fraction(1)
    trace_trace: Fraction = Fraction(0)

    def __call__(self, x: MatrixElement, y: MatrixElement) -> Fraction:
        value = as_rational(self.trace) * x.product_trace(y)
        if self.trace_trace:
            value += as_rational(self.trace_trace) * x.trace() * y.trace()
        return value


TRACE = BilinearForm(Fraction(1), Fraction(0))
TRACE_TRACE = BilinearForm(Fraction(0), Fraction(1))


class CurrentElement:
    """Elemento de g (x) A na forma canônica {A_{n,p}: x}."""

    __slots__ = ("geometry", "tag", "rank", "terms")

    def __init__(self, geometry: Geometry, tag: AlgebraTag, rank: int, terms=None):
        clean = {}
        for idx, x in (terms or {}).items():
            if idx.weight != 0:
                raise WeightMismatch("correntes usam funções (peso 0)")
            if x.tag is not tag or x.rank != rank:
                raise ShapeMismatch(f"matriz {x!r} fora de {tag.value}({rank})")
            if not x.is_zero:
                clean[idx] = x
        self.geometry = geometry
        self.tag = tag
        self.rank = rank
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def from_terms(cls, geometry, tag, rank, pairs: Iterable):
        """pairs: [(MatrixElement, FormElement ou KNExpansion de peso 0), ...]"""
        acc: Dict[BasisIndex, MatrixElement] = {}
        for x, A in pairs:
            if isinstance(A, FormElement):
                if A.geometry != geometry:
                    raise GeometryMismatch("função sobre outra geometria")
                A = expand_in_basis(A)
            if A.weight != 0:
                raise WeightMismatch("correntes usam funções (peso 0)")
            for idx, c in A.items():
                term = x.scale(c)
                acc[idx] = acc[idx] + term if idx in acc else term
        return cls(geometry, tag, rank, acc)

    @classmethod
    def zero(cls, geometry, tag, rank):
        return cls(geometry, tag, rank)

    def _check(self, other):
        if self.geometry != other.geometry:
            raise GeometryMismatch("correntes sobre geometrias diferentes")
        if self.tag is not other.tag or self.rank != other.rank:
            raise ShapeMismatch("correntes de álgebras diferentes")

    def __eq__(self, other):
        if not isinstance(other, CurrentElement):
            return NotImplemented
        return (self.geometry, self.tag, self.rank, self.terms) == (
            other.geometry, other.tag, other.rank, other.terms)

    def __hash__(self):
        return hash((self.geometry, self.tag, self.rank, frozenset(self.terms.items())))

    def __repr__(self):
        inner = ", ".join(f"{x!r}*A({i.degree},{i.puncture})" for i, x in self.terms.items())
        return f"CurrentElement({inner})"

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other):
        self._check(other)
        acc = dict(self.terms)
        for idx, x in other.terms.items():
            acc[idx] = acc[idx] + x if idx in acc else x
        return CurrentElement(self.geometry, self.tag, self.rank, acc)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return CurrentElement(self.geometry, self.tag, self.rank,
                              {i: x.scale(c) for i, x in self.terms.items()})

    def map_functions(self, op) -> "CurrentElement":
        """Aplica uma operação linear A -> op(A) (KNExpansion de peso 0) a cada termo."""
        return CurrentElement.from_terms(
            self.geometry, self.tag, self.rank,
            [(x, op(KNExpansion.single(i))) for i, x in self.terms.items()])

    def entry_function(self, a: int, b: int) -> RationalFunction:
        func = RationalFunction.constant(0)
        for idx, x in self.terms.items():
            c = x.entries[a][b]
            if c:
                func = func + make_basis(self.geometry, 0, idx.degree, idx.puncture).func * c
        return func

    def to_json(self):
        return [{"function": i.label, "matrix": [[format_rational(v) for v in row] for row in x.entries]}
                for i, x in self.terms.items()]


@dataclass(frozen=True)
class AffineElement:
    current: CurrentElement
    central: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "central", as_rational(self.central))

    def __add__(self, other):
        return AffineElement(self.current + other.current, as_rational(self.central) + as_rational(other.central))

    def __sub__(self, other):
        return AffineElement(self.current - other.current, as_rational(self.central) - as_rational(other.central))

    def scale(self, c):
        c = as_rational(c)
        return AffineElement(self.current.scale(c), c * as_rational(self.central))

    @property
    def is_zero(self) -> bool:
        return not self.current and self.central == 0


@dataclass(frozen=True)
class DgElement:
    current: CurrentElement
    vector_field: KNExpansion = field(default_factory=lambda: KNExpansion(-1))
    central: Fraction = Fraction(0)

    def __post_init__(self):
        if self.vector_field.weight != -1:
            raise WeightMismatch("a parte de campo de D_g tem peso -1")
        object.__setattr__(self, "central", as_rational(self.central))

    def __add__(self, other):
        return DgElement(self.current + other.current, self.vector_field + other.vector_field,
                         as_rational(self.central) + as_rational(other.central))

    def __sub__(self, other):
        return DgElement(self.current - other.current, self.vector_field - other.vector_field,
                         as_rational(self.central) - as_rational(other.central))

    def scale(self, c):
        c = as_rational(c)
        return DgElement(self.current.scale(c), self.vector_field.scale(c), c * as_rational(self.central))

    @property
    def is_zero(self) -> bool:
        return not self.current and not self.vector_field and self.central == 0


def _current_bracket(x: CurrentElement, y: CurrentElement, form: BilinearForm):
    x._check(y)
    geom = x.geometry
    gamma = GeometricCocycle(CocycleKind.FUNCTION, geom)
    acc: Dict[BasisIndex, MatrixElement] = {}
    central = Fraction(0)
    for i, a in x.terms.items():
        for j, b in y.terms.items():
            comm = a.commutator(b)
            if not comm.is_zero:
                for k, c in basis_product(geom, TableKind.FUNCTION_PRODUCT, i, j).items():
                    term = comm.scale(c)
                    acc[k] = acc[k] + term if k in acc else term
            weight = form(a, b)
            if weight:
                central += weight * gamma.basis_value(i, j)
    return CurrentElement(geom, x.tag, x.rank, acc), central


def affine_bracket(X: AffineElement, Y: AffineElement, form: BilinearForm = TRACE) -> AffineElement:
    """[x(f), y(g)] = [x,y](fg) + alpha(x,y) gamma^(A)(f,g) t, com t central."""
    current, central = _current_bracket(X.current, Y.current, form)
    return AffineElement(current, central)


def dg_bracket(X: DgElement, Y: DgElement, R: Optional[RationalFunction] = None,
               T: Optional[RationalFunction] = None, form: BilinearForm = TRACE) -> DgElement:
    """
    Colchete em D_g: [e, x(A)] = x(e.A), campos pelo colchete de L e termo
    central alpha*gamma^(A) + gamma^(L) + tr(x)*gamma^(m) nos pares mistos.
    """
    geom = X.current.geometry
    if Y.current.geometry != geom:
        raise GeometryMismatch("elementos de D_g sobre geometrias diferentes")
    R = R if R is not None else RationalFunction.constant(0)
    T = T if T is not None else RationalFunction.constant(0)
    current, central = _current_bracket(X.current, Y.current, form)
    e, f = X.vector_field, Y.vector_field
    if e:
        current = current + Y.current.map_functions(lambda A: lie_derivative(e, A, geom))
    if f:
        current = current - X.current.map_functions(lambda A: lie_derivative(f, A, geom))
    field_part = bracket(e, f, geom) if e and f else KNExpansion(-1)
    central += GeometricCocycle(CocycleKind.VECTOR, geom, R)(e, f)
    mix = GeometricCocycle(CocycleKind.MIXING, geom, T)
    for j, y in Y.current.terms.items():
        if e and y.trace():
            central += y.trace() * mix(e, KNExpansion.single(j))
    for i, x in X.current.terms.items():
        if f and x.trace():
            central -= x.trace() * mix(f, KNExpansion.single(i))
    return DgElement(current, field_part, central)


def embed_finite(x: MatrixElement, geom: Geometry) -> AffineElement:
    """x -> x (x) 1, usando 1 = sum_p A_{0,p}."""
    terms = {BasisIndex(0, 0, p): x for p in range(1, geom.N + 1)}
    return AffineElement(CurrentElement(geom, x.tag, x.rank, terms), Fraction(0))


@dataclass(frozen=True)
class AffineSplit:
    plus: AffineElement
    zero: AffineElement
    minus: AffineElement

    def recombine(self) -> AffineElement:
        return self.plus + self.zero + self.minus


def affine_triangular_split(X: AffineElement, variant: SplitVariant = SplitVariant.STANDARD,
                            bounds: Optional[Bounds] = None, depth: Optional[int] = None) -> AffineSplit:
    """
    Separa a corrente aplicando a decomposição das funções a cada termo x (x) A;
    o termo central vai para a parte zero.
    """
    cur = X.current
    if variant is SplitVariant.STANDARD and bounds is None:
        bounds = measure_bounds(cur.geometry)
    parts = {"plus": {}, "zero": {}, "minus": {}}
    for idx, x in cur.terms.items():
        split = triangular_split(KNExpansion.single(idx), cur.geometry, variant, depth, bounds)
        for name, acc in parts.items():
            for k, c in split.part(name).items():
                acc[k] = acc[k] + x.scale(c) if k in acc else x.scale(c)

    def build(name, central=Fraction(0)):
        return AffineElement(CurrentElement(cur.geometry, cur.tag, cur.rank, parts[name]), central)

    return AffineSplit(build("plus"), build("zero", as_rational(X.central)), build("minus"))


def is_regular(x) -> bool:
    """Pertence a A^(1)_- (ou g (x) A^(1)_-): ordem >= 1 em INFINITY."""
    if isinstance(x, AffineElement):
        x = x.current
    if isinstance(x, CurrentElement):
        return all(order_at(x.entry_function(a, b), INFINITY) >= 1
                   for a in range(x.rank) for b in range(x.rank))
    if isinstance(x, FormElement):
        if x.weight != 0:
            raise WeightMismatch("regularidade definida para funções")
        return order_at(x.func, INFINITY) >= 1
    if isinstance(x, KNExpansion):
        raise ConfigError("use to_form(geom) antes de testar a regularidade de uma expansão")
    raise TypeError(f"tipo não suportado: {type(x).__name__}")


def check_jacobi(triples: Iterable, bracket_op: Callable = affine_bracket) -> IdentityReport:
    """[[X,Y],Z] + [[Y,Z],X] + [[Z,X],Y] = 0, termos centrais incluídos."""
    count = 0
    for X, Y, Z in triples:
        count += 1
        total = (bracket_op(bracket_op(X, Y), Z) + bracket_op(bracket_op(Y, Z), X)
                 + bracket_op(bracket_op(Z, X), Y))
        if not total.is_zero:
            logger.warning("Jacobi falhou: %r", total)
            return IdentityReport(False, (X, Y, Z), count)
    return IdentityReport(True, None, count)
