"""
Representação fermiônica: bases de seções psi_{n,p,j,a}, enumeração linear,
espaço de monômios semi-infinitos com carga e grau, ação regularizada de D_g
e extração da extensão central induzida.

Monômios guardam apenas o prefixo finito antes da cauda N_k = k + m.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy
from sympy.utilities.iterables import partitions

from algebra.affine import AlgebraTag, MatrixElement, algebra_basis, coordinates
from algebra.arith import INFINITY, RationalFunction, as_rational, format_rational, laurent_expand, order_at
from algebra.basis import (
    BasisIndex, FormElement, Geometry, KNExpansion, expand_form_product, expand_in_basis, make_basis,
)
from algebra.errors import (
    ChargeMixing, ConfigError, IndexOutOfRange, InvariantViolation, NonScalarDefect, ShapeMismatch,
    SupportViolation, WeightMismatch,
)
from algebra.structure import TableKind, basis_product, bracket, lie_derivative, multiply

logger = logging.getLogger(__name__)


# --- Enumeração ---------------------------------------------------------------

@dataclass(frozen=True)
class SectionIndex:
    n: int
    p: int
    j: int
    a: int


@dataclass(frozen=True)
class Shape:
    """(N, r, dim V_tau) e, opcionalmente, outra ordem dentro de cada bloco de grau."""

    N: int
    r: int
    dim: int
    inner_permutation: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if min(self.N, self.r, self.dim) < 1:
            raise ConfigError(f"forma inválida: {(self.N, self.r, self.dim)}")
        perm = self.inner_permutation
        if perm is not None and sorted(perm) != list(range(self.block)):
            raise ConfigError("a permutação interna deve permutar 0..B-1")

    @property
    def block(self) -> int:
        return self.N * self.r * self.dim

    def linear_index(self, idx: SectionIndex) -> int:
        if not 1 <= idx.p <= self.N or not 0 <= idx.j < self.r or not 1 <= idx.a <= self.dim:
            raise IndexOutOfRange(f"índice fora da forma {self}: {idx}")
        inner = ((idx.p - 1) * self.r + idx.j) * self.dim + (idx.a - 1)
        if self.inner_permutation is not None:
            inner = self.inner_permutation[inner]
        return idx.n * self.block + inner

    def section_index(self, M: int) -> SectionIndex:
        n, inner = divmod(M, self.block)
        if self.inner_permutation is not None:
            inner = self.inner_permutation.index(inner)
        rest, a = divmod(inner, self.dim)
        p, j = divmod(rest, self.r)
        return SectionIndex(n, p + 1, j, a + 1)


def linear_index(n: int, p: int, j: int, a: int, shape: Shape) -> int:
    return shape.linear_index(SectionIndex(n, p, j, a))


# --- Monômios e vetores -------------------------------------------------------

@dataclass(frozen=True, order=True)
class WedgeMonomial:
    charge: int
    prefix: Tuple[int, ...] = ()

    def __post_init__(self):
        pre = tuple(self.prefix)
        if any(b <= a for a, b in zip(pre, pre[1:])):
            raise InvariantViolation(f"prefixo não estritamente crescente: {pre}")
        if pre and pre[-1] >= len(pre) - 1 + self.charge:
            raise InvariantViolation(f"prefixo {pre} não canônico para carga {self.charge}")
        object.__setattr__(self, "prefix", pre)

    @classmethod
    def vacuum(cls, charge: int = 0):
        return cls(charge, ())

    @classmethod
    def from_occupied(cls, charge: int, entries: Sequence[int]):
        """
        Monta o monômio a partir do prefixo ordenado (a cauda começa em
        len(entries) + charge). Devolve (sinal, monômio) ou (0, None) quando há
        índice repetido.
        """
        seq = list(entries)
        sign = 1
        # ordenação por inserção contando transposições
        for i in range(1, len(seq)):
            k = i
            while k > 0 and seq[k - 1] > seq[k]:
                seq[k - 1], seq[k] = seq[k], seq[k - 1]
                sign = -sign
                k -= 1
        if any(b == a for a, b in zip(seq, seq[1:])):
            return 0, None
        if seq and seq[-1] >= len(seq) + charge:
            return 0, None
        while seq and seq[-1] == len(seq) - 1 + charge:
            seq.pop()
        return sign, cls(charge, tuple(seq))

    @property
    def tail_start(self) -> int:
        return len(self.prefix) + self.charge

    def is_occupied(self, index: int) -> bool:
        return index >= self.tail_start or index in self.prefix

    def holes(self) -> List[int]:
        """Índices vazios acima do primeiro ocupado."""
        if not self.prefix:
            return []
        present = set(self.prefix)
        return [i for i in range(self.prefix[0], self.tail_start) if i not in present]

    def label(self) -> str:
        return f"{self.charge}:" + ",".join(str(i) for i in self.prefix)


def monomial_degree(phi: WedgeMonomial) -> int:
    """sum_k (N_k - k - m); a cauda não contribui."""
    return sum(N - k - phi.charge for k, N in enumerate(phi.prefix))


def block_degree(phi: WedgeMonomial, block: int) -> int:
    """Grau medido pelos graus n das seções, independente da ordem dentro de cada bloco."""
    return sum(N // block - (k + phi.charge) // block for k, N in enumerate(phi.prefix))


def permute_monomial(phi: WedgeMonomial, shape: Shape, permutation: Tuple[int, ...]) -> WedgeMonomial:
    """Reescreve o monômio após renumerar cada bloco de grau pela permutação."""
    B = shape.block
    end = -(-phi.tail_start // B) * B
    occupied = list(phi.prefix) + list(range(phi.tail_start, end))
    mapped = []
    for M in occupied:
        n, inner = divmod(M, B)
        mapped.append(n * B + permutation[inner])
    _, out = WedgeMonomial.from_occupied(phi.charge, sorted(mapped))
    return out


class WedgeVector:
    """Combinação racional finita de monômios de uma mesma carga."""

    __slots__ = ("charge", "terms")

    def __init__(self, charge: int, terms=None):
        clean = {}
        for phi, c in (terms or {}).items():
            if phi.charge != charge:
                raise ChargeMixing(f"monômio de carga {phi.charge} no setor {charge}")
            c = as_rational(c)
            if c:
                clean[phi] = c
        self.charge = charge
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def basis(cls, phi: WedgeMonomial):
        return cls(phi.charge, {phi: 1})

    @classmethod
    def vacuum(cls, charge: int = 0):
        return cls.basis(WedgeMonomial.vacuum(charge))

    def __repr__(self):
        inner = ", ".join(f"[{phi.label()}]: {format_rational(c)}" for phi, c in self.terms.items())
        return f"WedgeVector({inner})"

    def __eq__(self, other):
        if not isinstance(other, WedgeVector):
            return NotImplemented
        return self.terms == other.terms and (self.charge == other.charge or not self.terms)

    def __hash__(self):
        return hash((self.charge, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def _combine(self, other, sign):
        if other.charge != self.charge and other.terms and self.terms:
            raise ChargeMixing(f"setores {self.charge} e {other.charge}")
        charge = self.charge if self.terms else other.charge
        acc = dict(self.terms)
        for phi, c in other.terms.items():
            acc[phi] = acc.get(phi, Fraction(0)) + sign * c
        return WedgeVector(charge, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = as_rational(c)
        return WedgeVector(self.charge, {phi: c * v for phi, v in self.terms.items()})

    def coefficient(self, phi: WedgeMonomial) -> Fraction:
        return self.terms.get(phi, Fraction(0))

    def items(self):
        return self.terms.items()

    def degrees(self):
        return sorted({monomial_degree(phi) for phi in self.terms})

    def to_json(self):
        return {phi.label(): format_rational(c) for phi, c in self.terms.items()}


def enumerate_monomials(charge: int, depth: int) -> List[WedgeMonomial]:
    """Todos os monômios de carga `charge` com grau em [-depth, 0], do grau 0 para baixo."""
    out = [WedgeMonomial.vacuum(charge)]
    for d in range(1, depth + 1):
        shapes = sorted(
            (tuple(sorted((part for part, mult in p.items() for _ in range(mult)), reverse=True))
             for p in partitions(d)),
            reverse=True)
        for lam in shapes:
            prefix = tuple(charge + k - part for k, part in enumerate(lam))
            out.append(WedgeMonomial(charge, prefix))
    return out


def homogeneous_dimension(charge: int, d: int) -> int:
    """Dimensão do subespaço de grau -d (para d < 0 o espaço é nulo)."""
    if d < 0:
        return 0
    return sum(1 for phi in enumerate_monomials(charge, d) if monomial_degree(phi) == -d)


# --- Operadores em banda --------------------------------------------------------

class BandedOperator:
    """
    Matriz infinita com finitas diagonais, dada coluna a coluna e calculada sob
    demanda. Cada coluna M só tem linhas em [M - lower, M + upper].
    """

    def __init__(self, column_fn: Callable[[int], Iterable[Tuple[int, Fraction]]],
                 lower: int, upper: int, label: str = ""):
        self._fn = column_fn
        self._cache: Dict[int, Tuple[Tuple[int, Fraction], ...]] = {}
        self.lower = max(0, lower)
        self.upper = max(0, upper)
        self.label = label

    def __repr__(self):
        return f"BandedOperator({self.label or '?'}, lower={self.lower}, upper={self.upper})"

    @classmethod
    def from_entries(cls, entries: Dict[Tuple[int, int], Fraction], label=""):
        columns: Dict[int, Dict[int, Fraction]] = {}
        for (I, J), c in entries.items():
            columns.setdefault(J, {})[I] = as_rational(c)
        lower = max([J - I for (I, J) in entries] + [0])
        upper = max([I - J for (I, J) in entries] + [0])
        return cls(lambda M: columns.get(M, {}).items(), lower, upper, label)

    @classmethod
    def zero(cls):
        return cls(lambda M: (), 0, 0, "0")

    def column(self, M: int) -> Tuple[Tuple[int, Fraction], ...]:
        hit = self._cache.get(M)
        if hit is not None:
            return hit
        acc: Dict[int, Fraction] = {}
        for row, c in self._fn(M):
            acc[row] = acc.get(row, Fraction(0)) + as_rational(c)
        col = tuple((row, c) for row, c in sorted(acc.items()) if c)
        for row, _ in col:
            if not M - self.lower <= row <= M + self.upper:
                raise InvariantViolation(
                    f"{self!r}: linha {row} fora da banda da coluna {M}")
        self._cache[M] = col
        return col

    def entry(self, row: int, col: int) -> Fraction:
        for r, c in self.column(col):
            if r == row:
                return c
        return Fraction(0)

    def __add__(self, other):
        return BandedOperator(lambda M: self.column(M) + other.column(M),
                              max(self.lower, other.lower), max(self.upper, other.upper),
                              f"({self.label}+{other.label})")

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = as_rational(c)
        return BandedOperator(lambda M: [(r, c * v) for r, v in self.column(M)],
                              self.lower, self.upper, f"{format_rational(c)}*{self.label}")

    def compose(self, other):
        """self o other"""
        def column(M):
            out = []
            for k, b in other.column(M):
                out.extend((r, a * b) for r, a in self.column(k))
            return out
        return BandedOperator(column, self.lower + other.lower, self.upper + other.upper,
                              f"{self.label}.{other.label}")


def _count_occupied_between(phi: WedgeMonomial, lo: int, hi: int) -> int:
    inside = sum(1 for i in phi.prefix if lo < i < hi)
    return inside + max(0, hi - max(lo + 1, phi.tail_start))


def _move(phi: WedgeMonomial, J: int, I: int) -> Tuple[int, Optional[WedgeMonomial]]:
    """E_{IJ} aplicado ao monômio: troca J por I; (sinal, monômio) ou (0, None)."""
    if not phi.is_occupied(J) or phi.is_occupied(I):
        return 0, None
    sign = -1 if _count_occupied_between(phi, min(I, J), max(I, J)) % 2 else 1
    entries = list(phi.prefix) + list(range(phi.tail_start, J + 1))
    entries.remove(J)
    entries.append(I)
    entries.sort()
    _, out = WedgeMonomial.from_occupied(phi.charge, entries)
    return sign, out


def wedge_apply(op: BandedOperator, v: WedgeVector) -> WedgeVector:
    """
    Regra de Leibniz com regularização: E_IJ (I != J) move J para I com o sinal
    da reordenação; E_II age por [I ocupado] - [I >= m] no setor de carga m.
    """
    acc: Dict[WedgeMonomial, Fraction] = {}
    for phi, coef in v.items():
        m, T0 = phi.charge, phi.tail_start
        diagonal = Fraction(0)
        sources = list(phi.prefix) + list(range(T0, T0 + op.lower))
        for J in sources:
            for I, a in op.column(J):
                if I == J:
                    continue
                sign, out = _move(phi, J, I)
                if out is None:
                    continue
                if out.charge != m:
                    raise ChargeMixing("o operador trocou de setor de carga")
                acc[out] = acc.get(out, Fraction(0)) + sign * coef * a
        for J in phi.prefix:
            if J < m:
                diagonal += op.entry(J, J)
        for J in range(m, T0):
            if J not in phi.prefix:
                diagonal -= op.entry(J, J)
        if diagonal:
            acc[phi] = acc.get(phi, Fraction(0)) + coef * diagonal
    return WedgeVector(v.charge, acc)


# --- Representação --------------------------------------------------------------

@dataclass(frozen=True)
class RepresentationData:
    """
    Fibrado trivial de posto r sobre a geometria, representação tau de g em
    V_tau e forma de conexão (r x r, entradas são coeficientes de dz).

    tau_images, se dado, lista as imagens da base padrão de g (algebra_basis);
    caso contrário tau é a representação fundamental.
    """

    geometry: Geometry
    r: int = 1
    dim: int = 1
    tag: AlgebraTag = AlgebraTag.GL1
    connection_form: Optional[Tuple[Tuple[RationalFunction, ...], ...]] = None
    tau_images: Optional[Tuple[MatrixElement, ...]] = None
    algebra_rank: Optional[int] = None

    def __post_init__(self):
        rank = self.algebra_rank or (self.dim if self.tau_images is None else None)
        if rank is None:
            raise ConfigError("com tau explícito informe algebra_rank")
        object.__setattr__(self, "algebra_rank", rank)
        if self.tag is AlgebraTag.GL1 and rank != 1:
            raise ShapeMismatch("gl(1) tem posto 1")
        if self.tau_images is None and rank != self.dim:
            raise ShapeMismatch("a representação fundamental exige dim = posto da álgebra")
        if self.tau_images is not None:
            basis = algebra_basis(self.tag, rank)
            if len(self.tau_images) != len(basis):
                raise ShapeMismatch("tau_images deve ter uma imagem por elemento da base de g")
            if any(t.rank != self.dim for t in self.tau_images):
                raise ShapeMismatch("imagens de tau devem ser dim x dim")
            self._check_homomorphism(basis)
        if self.connection_form is not None:
            self._check_connection()

    def _check_homomorphism(self, basis):
        for x in basis:
            for y in basis:
                lhs = self.tau(x.commutator(y))
                tx, ty = self.tau(x), self.tau(y)
                if (lhs != tx.dot(ty) - ty.dot(tx)).any():
                    raise ConfigError("tau não preserva o colchete")

    def _check_connection(self):
        rows = self.connection_form
        if len(rows) != self.r or any(len(row) != self.r for row in rows):
            raise ShapeMismatch("a forma de conexão deve ser r x r")
        for row in rows:
            for w in row:
                if w.is_zero:
                    continue
                try:
                    FormElement(w, 1, self.geometry)
                except SupportViolation as e:
                    raise ConfigError(f"forma de conexão com polos fora dos pontos: {w}") from e
                if any(order_at(w, a) < -1 for a in self.geometry.punctures):
                    raise ConfigError(f"forma de conexão com polo múltiplo: {w}")
                if order_at(w, INFINITY) - 2 < -1:
                    raise ConfigError(f"forma de conexão com polo múltiplo em INFINITY: {w}")

    @property
    def shape(self) -> Shape:
        return Shape(self.geometry.N, self.r, self.dim)

    def tau(self, x: MatrixElement):
        if x.tag is not self.tag or x.rank != self.algebra_rank:
            raise ShapeMismatch(f"{x!r} não pertence a {self.tag.value}({self.algebra_rank})")
        if self.tau_images is None:
            return x.array
        coords = coordinates(x)
        out = MatrixElement.zero(self.dim).array
        for c, image in zip(coords, self.tau_images):
            if c:
                out = out + image.array * c
        return out

    def connection(self, i: int, j: int) -> RationalFunction:
        if self.connection_form is None:
            return RationalFunction.constant(0)
        return self.connection_form[i][j]


def section_basis(rep: RepresentationData, n: int, j: int, p: int) -> Tuple[FormElement, ...]:
    """psi_{n,j,p} = A_{n,p} e_j, conferindo as assintóticas nos pontos e em INFINITY."""
    geom = rep.geometry
    if not 0 <= j < rep.r:
        raise IndexOutOfRange(f"componente {j} fora de 0..{rep.r - 1}")
    A = make_basis(geom, 0, n, p)
    zero = FormElement._unchecked(RationalFunction.constant(0), 0, geom)
    vector = tuple(A if i == j else zero for i in range(rep.r))
    for q, a in enumerate(geom.punctures, start=1):
        if order_at(A.func, a) != n + 1 - (1 if q == p else 0):
            raise InvariantViolation(f"psi_{n},{j},{p}: ordem errada em P_{q}")
    if order_at(A.func, INFINITY) != -n * geom.N - geom.N + 1:
        raise InvariantViolation(f"psi_{n},{j},{p}: ordem errada em INFINITY")
    return vector


def section_leading_rows(rep: RepresentationData, n: int) -> List[List[Fraction]]:
    """
    Para cada psi_{n,j,p}, os coeficientes de ordem n em cada P_q e cada
    componente: a parte principal que distingue as seções de grau n.
    """
    geom = rep.geometry
    rows = []
    for p in range(1, geom.N + 1):
        for j in range(rep.r):
            row = []
            for comp in section_basis(rep, n, j, p):
                for a in geom.punctures:
                    if comp.func.is_zero:
                        row.append(Fraction(0))
                    else:
                        row.append(laurent_expand(comp.func, a, 1 + max(0, n - order_at(comp.func, a)))
                                   .coefficient(n))
            rows.append(row)
    return rows


def section_space_dimension(rep: RepresentationData, n: int) -> int:
    """Dimensão do espaço gerado pelas seções de grau n, pelo posto das partes principais."""
    rows = section_leading_rows(rep, n)
    if not rows:
        return 0
    return sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in row] for row in rows]).rank()


def _spread_upper(N: int, extra: int) -> int:
    """Excesso máximo de grau pela contagem de ordens em INFINITY."""
    return max(0, extra + math.floor(-extra / N))


def _as_function_expansion(A, geom) -> KNExpansion:
    if isinstance(A, FormElement):
        if A.geometry != geom:
            raise ShapeMismatch("função sobre outra geometria")
        A = expand_in_basis(A)
    if A.weight != 0:
        raise WeightMismatch("correntes usam funções (peso 0)")
    return A


def _as_field_expansion(e, geom) -> KNExpansion:
    if isinstance(e, FormElement):
        if e.geometry != geom:
            raise ShapeMismatch("campo sobre outra geometria")
        e = expand_in_basis(e)
    if e.weight != -1:
        raise WeightMismatch("campos vetoriais têm peso -1")
    return e


@lru_cache(maxsize=4096)
def _current_operator(x: MatrixElement, A: KNExpansion, rep: RepresentationData) -> BandedOperator:
    shape, geom = rep.shape, rep.geometry
    B = shape.block
    t = rep.tau(x)
    if not A or not t.any():
        return BandedOperator.zero()
    a_lo, a_hi = A.window()
    lower = max(0, (1 - a_lo) * B - 1)
    upper = (a_hi + _spread_upper(geom.N, 2) + 1) * B - 1

    def column(M):
        s = shape.section_index(M)
        source = BasisIndex(0, s.n, s.p)
        for idx, coef in A.items():
            for k, c in basis_product(geom, TableKind.FUNCTION_PRODUCT, idx, source).items():
                for b in range(shape.dim):
                    tb = t[b][s.a - 1]
                    if tb:
                        yield shape.linear_index(SectionIndex(k.degree, k.puncture, s.j, b + 1)), coef * c * tb

    return BandedOperator(column, lower, upper, f"{x!r}({A!r})")


def matrix_of_current(x: MatrixElement, A, rep: RepresentationData) -> BandedOperator:
    """(x (x) A)(s (x) v) = (A s) (x) tau(x) v na base psi_M."""
    return _current_operator(x, _as_function_expansion(A, rep.geometry), rep)


@lru_cache(maxsize=65536)
def _connection_product(geom: Geometry, e_idx: BasisIndex, w: RationalFunction, n: int, p: int) -> KNExpansion:
    e = make_basis(geom, e_idx.weight, e_idx.degree, e_idx.puncture).func
    A = make_basis(geom, 0, n, p).func
    return expand_form_product(geom, 0, [(1, [(e, 0), (w, 0), (A, 0)])])


@lru_cache(maxsize=4096)
def _field_operator(e: KNExpansion, rep: RepresentationData) -> BandedOperator:
    shape, geom = rep.shape, rep.geometry
    B = shape.block
    if not e:
        return BandedOperator.zero()
    k_lo, k_hi = e.window()
    lower = max(0, (1 - k_lo) * B - 1)
    upper = (k_hi + _spread_upper(geom.N, 3) + 1) * B - 1

    def column(M):
        s = shape.section_index(M)
        source = BasisIndex(0, s.n, s.p)
        for idx, coef in e.items():
            for k, c in basis_product(geom, TableKind.FIELD_ON_FORM, idx, source).items():
                yield shape.linear_index(SectionIndex(k.degree, k.puncture, s.j, s.a)), coef * c
            for i in range(rep.r):
                w = rep.connection(i, s.j)
                if w.is_zero:
                    continue
                for k, c in _connection_product(geom, idx, w, s.n, s.p).items():
                    yield shape.linear_index(SectionIndex(k.degree, k.puncture, i, s.a)), coef * c

    return BandedOperator(column, lower, upper, f"nabla({e!r})")


def matrix_of_field(e, rep: RepresentationData) -> BandedOperator:
    """nabla_e psi = e.psi + (e contraído com a forma de conexão) psi"""
    return _field_operator(_as_field_expansion(e, rep.geometry), rep)


# --- Geradores de D_g e o cociclo induzido ----------------------------------------

@dataclass(frozen=True)
class Current:
    x: MatrixElement
    A: KNExpansion


@dataclass(frozen=True)
class Field:
    e: KNExpansion


Generator = Union[Current, Field]


def current(x: MatrixElement, A) -> Current:
    if isinstance(A, FormElement):
        A = expand_in_basis(A)
    return Current(x, A)


def field_of(e) -> Field:
    if isinstance(e, FormElement):
        e = expand_in_basis(e)
    return Field(e)


def operator_of(gen: Generator, rep: RepresentationData) -> BandedOperator:
    if isinstance(gen, Current):
        return matrix_of_current(gen.x, gen.A, rep)
    return matrix_of_field(gen.e, rep)


def generator_bracket(X: Generator, Y: Generator, geom: Geometry) -> List[Generator]:
    """Colchete em D_g sem o termo central, como soma de geradores."""
    if isinstance(X, Current) and isinstance(Y, Current):
        return [Current(X.x.commutator(Y.x), multiply(X.A, Y.A, geom))]
    if isinstance(X, Field) and isinstance(Y, Current):
        return [Current(Y.x, lie_derivative(X.e, Y.A, geom))]
    if isinstance(X, Current) and isinstance(Y, Field):
        return [Current(X.x, lie_derivative(Y.e, X.A, geom).scale(-1))]
    return [Field(bracket(X.e, Y.e, geom))]


def apply_generators(gens: Sequence[Generator], rep: RepresentationData, v: WedgeVector) -> WedgeVector:
    out = WedgeVector(v.charge)
    for g in gens:
        out = out + wedge_apply(operator_of(g, rep), v)
    return out


def sample_monomials(charge: int, count: int) -> List[WedgeMonomial]:
    depth = 0
    found = enumerate_monomials(charge, depth)
    while len(found) < count:
        depth += 1
        found = enumerate_monomials(charge, depth)
    return found[:count]


def defect_on(X: Generator, Y: Generator, rep: RepresentationData, v: WedgeVector) -> WedgeVector:
    """[r(X), r(Y)] v - r([X, Y]) v"""
    rX, rY = operator_of(X, rep), operator_of(Y, rep)
    comm = wedge_apply(rX, wedge_apply(rY, v)) - wedge_apply(rY, wedge_apply(rX, v))
    return comm - apply_generators(generator_bracket(X, Y, rep.geometry), rep, v)


def extract_cocycle(X: Generator, Y: Generator, rep: RepresentationData, charge: int = 0,
                    samples: int = 6) -> Fraction:
    """
    Escalar pelo qual [r(X), r(Y)] - r([X,Y]) age no setor de carga `charge`,
    calculado no vácuo e conferido em outros monômios.
    """
    scalar = None
    for phi in sample_monomials(charge, samples):
        v = WedgeVector.basis(phi)
        w = defect_on(X, Y, rep, v)
        s = w.coefficient(phi)
        if w != v.scale(s):
            raise NonScalarDefect(f"defeito não escalar em [{phi.label()}]: {w!r}")
        if scalar is None:
            scalar = s
        elif s != scalar:
            raise NonScalarDefect(f"defeito {s} em [{phi.label()}] difere de {scalar}")
    logger.debug("defeito central %s no setor %d", scalar, charge)
    return scalar


def normalizing_matrix(rep: RepresentationData) -> MatrixElement:
    """Elemento de g com tr(x^2) != 0 usado para fixar a constante de proporcionalidade."""
    for x in algebra_basis(rep.tag, rep.algebra_rank):
        if x.product_trace(x):
            return x
    raise ConfigError("álgebra sem elemento com tr(x^2) != 0")


@lru_cache(maxsize=64)
def induced_alpha(rep: RepresentationData, charge: int = 0, reference: Optional[MatrixElement] = None) -> Fraction:
    """alpha com defeito(x A_{1,1}, x A_{-1,1}) = alpha tr(x^2) gamma^(A)(A_{1,1}, A_{-1,1})."""
    x = reference if reference is not None else normalizing_matrix(rep)
    A1 = KNExpansion.single(BasisIndex(0, 1, 1))
    Am1 = KNExpansion.single(BasisIndex(0, -1, 1))
    defect = extract_cocycle(Current(x, A1), Current(x, Am1), rep, charge)
    # gamma^(A)(A_{1,1}, A_{-1,1}) = -1 para qualquer N
    return defect / (x.product_trace(x) * -1)


def fermion_level(rep: RepresentationData, charge: int = 0,
                  reference: Optional[MatrixElement] = None) -> Fraction:
    """Nível c = -alpha (normalização em que o vácuo de gl(1) tem nível 1)."""
    return -induced_alpha(rep, charge, reference)
