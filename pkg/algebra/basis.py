"""
Bases de Krichever-Novikov em gênero 0 com vários pontos marcados.

Os pontos de entrada P_1..P_N são racionais e o ponto de saída é fixo em
INFINITY. Cada f^lambda_{n,p} é dado pela fórmula fechada em produto e as
expansões de formas arbitrárias saem do emparelhamento por resíduos contra a
base dual.
"""
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from types import MappingProxyType
from typing import Iterable, Optional, Sequence, Tuple

from algebra.arith import (
    INFINITY, Polynomial, RationalFunction, as_rational, format_rational, laurent_expand,
    order_at, residue_of_product,
)
from algebra.errors import (
    ConfigError, GeometryMismatch, IndexOutOfRange, InvariantViolation,
    SupportViolation, WeightMismatch,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Geometry:
    """Pontos de entrada ordenados; saída em INFINITY, gênero 0."""

    punctures: Tuple[Fraction, ...]

    def __post_init__(self):
        pts = tuple(as_rational(p) for p in self.punctures)
        if not pts:
            raise ConfigError("é preciso ao menos um ponto marcado")
        if len(set(pts)) != len(pts):
            raise ConfigError(f"pontos marcados repetidos: {[format_rational(p) for p in pts]}")
        object.__setattr__(self, "punctures", pts)

    @classmethod
    def of(cls, *points):
        return cls(tuple(points))

    @property
    def N(self) -> int:
        return len(self.punctures)

    @property
    def genus(self) -> int:
        return 0

    def point(self, p: int) -> Fraction:
        if not 1 <= p <= self.N:
            raise IndexOutOfRange(f"ponto {p} fora de 1..{self.N}")
        return self.punctures[p - 1]

    @property
    def key(self) -> str:
        return ",".join(format_rational(p) for p in self.punctures)


@dataclass(frozen=True, order=True)
class BasisIndex:
    weight: int
    degree: int
    puncture: int

    @property
    def label(self) -> str:
        return f"{self.weight},{self.degree},{self.puncture}"


@dataclass(frozen=True)
class FormElement:
    """g(z)(dz)^weight; g só pode ter polos nos pontos marcados."""

    func: RationalFunction
    weight: int
    geometry: Geometry

    def __post_init__(self):
        den = self.func.denominator
        for a in self.geometry.punctures:
            k = den.root_multiplicity(a)
            if k:
                den = den // Polynomial.linear_factor(a) ** k
        if den.degree > 0:
            raise SupportViolation(
                f"{self.func} tem polos fora de {{{self.geometry.key}}}")

    @classmethod
    def _unchecked(cls, func, weight, geometry):
        obj = object.__new__(cls)
        object.__setattr__(obj, "func", func)
        object.__setattr__(obj, "weight", weight)
        object.__setattr__(obj, "geometry", geometry)
        return obj

    def _same_space(self, other):
        if self.geometry != other.geometry:
            raise GeometryMismatch("formas sobre geometrias diferentes")
        if self.weight != other.weight:
            raise WeightMismatch(f"pesos {self.weight} e {other.weight}")

    def __add__(self, other):
        self._same_space(other)
        return FormElement._unchecked(self.func + other.func, self.weight, self.geometry)

    def __sub__(self, other):
        self._same_space(other)
        return FormElement._unchecked(self.func - other.func, self.weight, self.geometry)

    def __neg__(self):
        return FormElement._unchecked(-self.func, self.weight, self.geometry)

    def __mul__(self, c):
        return FormElement._unchecked(self.func * as_rational(c), self.weight, self.geometry)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return self.func.is_zero

    def order_at(self, at):
        """Ordem da forma (não da função): em INFINITY inclui o -2*lambda de (dz)^lambda."""
        ord_f = order_at(self.func, at)
        if at is INFINITY and ord_f != math.inf:
            return ord_f - 2 * self.weight
        return ord_f


class KNExpansion:
    """Combinação finita de elementos da base de um mesmo peso."""

    __slots__ = ("weight", "terms")

    def __init__(self, weight: int, terms=None):
        clean = {}
        for idx, c in (terms or {}).items():
            if idx.weight != weight:
                raise WeightMismatch(f"índice {idx} numa expansão de peso {weight}")
            c = as_rational(c)
            if c:
                clean[idx] = c
        self.weight = weight
        self.terms = MappingProxyType(dict(sorted(clean.items())))

    def __repr__(self):
        inner = ", ".join(f"({i.label}): {format_rational(c)}" for i, c in self.terms.items())
        return f"KNExpansion(weight={self.weight}, {{{inner}}})"

    def __eq__(self, other):
        if not isinstance(other, KNExpansion):
            return NotImplemented
        return self.weight == other.weight and dict(self.terms) == dict(other.terms)

    def __hash__(self):
        return hash((self.weight, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def coefficient(self, idx: BasisIndex) -> Fraction:
        return self.terms.get(idx, Fraction(0))

    def items(self):
        return self.terms.items()

    def _combine(self, other, sign):
        if self.weight != other.weight:
            raise WeightMismatch(f"pesos {self.weight} e {other.weight}")
        acc = dict(self.terms)
        for idx, c in other.terms.items():
            acc[idx] = acc.get(idx, Fraction(0)) + sign * c
        return KNExpansion(self.weight, acc)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        c = as_rational(c)
        return KNExpansion(self.weight, {i: c * v for i, v in self.terms.items()})

    def __mul__(self, c):
        return self.scale(c)

    __rmul__ = __mul__

    def filter(self, predicate):
        return KNExpansion(self.weight, {i: c for i, c in self.terms.items() if predicate(i)})

    def degrees(self):
        return sorted({i.degree for i in self.terms})

    def window(self) -> Optional[Tuple[int, int]]:
        if not self.terms:
            return None
        degs = [i.degree for i in self.terms]
        return min(degs), max(degs)

    def to_form(self, geom: Geometry) -> FormElement:
        func = RationalFunction.constant(0)
        for idx, c in self.terms.items():
            func = func + make_basis(geom, idx.weight, idx.degree, idx.puncture).func * c
        return FormElement._unchecked(func, self.weight, geom)

    def to_json(self) -> dict:
        return {i.label: format_rational(c) for i, c in self.terms.items()}

    @classmethod
    def single(cls, idx: BasisIndex, c=1):
        return cls(idx.weight, {idx: c})


@lru_cache(maxsize=16384)
def make_basis(geom: Geometry, weight: int, n: int, p: int) -> FormElement:
    """
    f^lambda_{n,p} = c (z-P_p)^(n-lambda) prod_{i!=p} (z-P_i)^(n+1-lambda),
    normalizado para que a expansão local em P_p comece com coeficiente 1.
    """
    P = geom.point(p)
    k = n + 1 - weight
    scale = Fraction(1)
    exponents = {}
    for i, a in enumerate(geom.punctures, start=1):
        if i == p:
            exponents[a] = n - weight
        else:
            exponents[a] = k
            scale *= (P - a) ** (-k)
    func = RationalFunction.from_factors(scale, exponents)
    elem = FormElement._unchecked(func, weight, geom)

    for i, a in enumerate(geom.punctures, start=1):
        expected = k - (1 if i == p else 0)
        if order_at(func, a) != expected:
            raise InvariantViolation(f"ordem de f^{weight}_{n},{p} em P_{i} diferente de {expected}")
    expected_inf = -geom.N * k + 1 - 2 * weight
    if elem.order_at(INFINITY) != expected_inf:
        raise InvariantViolation(f"ordem de f^{weight}_{n},{p} em INFINITY diferente de {expected_inf}")
    if laurent_expand(func, P, 1).coefficients[0] != 1:
        raise InvariantViolation(f"f^{weight}_{n},{p} não está normalizado em P_{p}")
    return elem


def function(geom: Geometry, n: int, p: int) -> FormElement:
    """A_{n,p}"""
    return make_basis(geom, 0, n, p)


def vector_field(geom: Geometry, n: int, p: int) -> FormElement:
    """e_{n,p}"""
    return make_basis(geom, -1, n, p)


def omega(geom: Geometry, n: int, p: int) -> FormElement:
    """omega^{n,p} = f^1_{-n,p}; note o sinal trocado no grau."""
    return make_basis(geom, 1, -n, p)


def Omega(geom: Geometry, n: int, p: int) -> FormElement:
    """Omega^{n,p} = f^2_{-n,p}"""
    return make_basis(geom, 2, -n, p)


def form(geom: Geometry, weight: int, func) -> FormElement:
    if not isinstance(func, RationalFunction):
        func = RationalFunction.constant(func)
    return FormElement(func, weight, geom)


def order_table(elem: FormElement) -> dict:
    """Ordens da forma em cada ponto marcado e em INFINITY."""
    table = {p: elem.order_at(a) for p, a in enumerate(elem.geometry.punctures, start=1)}
    table[INFINITY] = elem.order_at(INFINITY)
    return table


def kn_pairing(f: FormElement, g: FormElement) -> Fraction:
    """
    <f, g> = soma dos resíduos de f*g dz nos pontos de entrada.

    O mesmo valor é recalculado como menos o resíduo em INFINITY; divergência
    é uma violação do teorema dos resíduos e levanta InvariantViolation.
    """
    if f.geometry != g.geometry:
        raise GeometryMismatch("emparelhamento entre geometrias diferentes")
    if f.weight + g.weight != 1:
        raise WeightMismatch(f"pesos {f.weight} e {g.weight} não são complementares")
    factors = ((f.func, 0), (g.func, 0))
    inner = sum((residue_of_product(factors, a) for a in f.geometry.punctures), Fraction(0))
    outer = residue_of_product(factors, INFINITY)
    if inner != -outer:
        raise InvariantViolation(f"resíduos internos {inner} != -{outer} em INFINITY")
    return inner


def _product_order_bounds(geom, terms):
    """Cotas inferiores das ordens de cada termo produto nos pontos e em INFINITY."""
    lows, infs = [], []
    for coef, factors in terms:
        if coef == 0 or any(f.is_zero for f, _ in factors):
            continue
        low = min(sum(order_at(f, a) - d for f, d in factors) for a in geom.punctures)
        lows.append(low)
        infs.append(sum(order_at(f, INFINITY) + d for f, d in factors))
    return lows, infs


def expand_form_product(geom: Geometry, weight: int, terms: Sequence) -> KNExpansion:
    """
    Expande sum_t coef_t * prod_i f_i^(d_i) (dz)^weight na base de peso `weight`.

    terms = [(coef, [(func, ordem_derivada), ...]), ...]. O produto nunca é
    formado; cada coeficiente é o emparelhamento contra a base dual calculado
    a partir das séries locais dos fatores.
    """
    terms = [(as_rational(c), tuple(fs)) for c, fs in terms]
    lows, infs = _product_order_bounds(geom, terms)
    if not lows:
        return KNExpansion(weight)
    h_lo = min(lows) + weight
    h_hi = weight + math.floor(-min(infs) / geom.N)
    logger.debug("expansão peso %d janela [%d, %d] N=%d", weight, h_lo, h_hi, geom.N)
    out = {}
    for n in range(h_lo, h_hi + 1):
        for p in range(1, geom.N + 1):
            dual = make_basis(geom, 1 - weight, -n, p).func
            total = Fraction(0)
            for coef, factors in terms:
                if coef == 0:
                    continue
                full = factors + ((dual, 0),)
                for a in geom.punctures:
                    total += coef * residue_of_product(full, a)
            if total:
                out[BasisIndex(weight, n, p)] = total
    return KNExpansion(weight, out)


def expand_in_basis(f: FormElement) -> KNExpansion:
    return expand_form_product(f.geometry, f.weight, [(1, [(f.func, 0)])])


def homogeneous_degree_window(f: FormElement) -> Optional[Tuple[int, int]]:
    """(grau mínimo, grau máximo) dos termos da expansão; None para a forma nula."""
    return expand_in_basis(f).window()


def unit_expansion(geom: Geometry) -> KNExpansion:
    """1 = sum_p A_{0,p}"""
    return KNExpansion(0, {BasisIndex(0, 0, p): 1 for p in range(1, geom.N + 1)})


def basis_indices(geom: Geometry, weight: int, window: Iterable[int]):
    return [BasisIndex(weight, n, p) for n in window for p in range(1, geom.N + 1)]
