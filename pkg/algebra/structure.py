"""
Produtos, colchetes e ações expandidos na base KN; constantes de estrutura,
cotas de quase-graduação e decomposições triangulares.
"""
import enum
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Tuple

import sympy

from algebra.arith import INFINITY, laurent_expand, order_at
from algebra.basis import (
    BasisIndex, FormElement, Geometry, KNExpansion, basis_indices,
    expand_form_product, expand_in_basis, make_basis,
)
from algebra.errors import (
    AlmostGradingViolation, ConfigError, GeometryMismatch, UnknownVariant, WeightMismatch,
)

logger = logging.getLogger(__name__)


class TableKind(enum.Enum):
    FUNCTION_PRODUCT = "function-product"
    VECTOR_BRACKET = "vector-bracket"
    FIELD_ON_FORM = "field-on-form"


class SplitVariant(enum.Enum):
    STANDARD = "standard"
    ENLARGED_STAR = "enlarged-star"
    DEPTH = "depth"


@lru_cache(maxsize=None)
def basis_product(geom: Geometry, kind: TableKind, i: BasisIndex, j: BasisIndex) -> KNExpansion:
    """Expansão de A_i*A_j, [e_i, e_j] ou e_i.f_j; nunca abaixo do grau n+m."""
    a = make_basis(geom, i.weight, i.degree, i.puncture).func
    b = make_basis(geom, j.weight, j.degree, j.puncture).func
    if kind is TableKind.FUNCTION_PRODUCT:
        if i.weight != 0 or j.weight != 0:
            raise WeightMismatch("produto de funções exige peso 0")
        weight, terms = 0, [(1, [(a, 0), (b, 0)])]
    elif kind is TableKind.VECTOR_BRACKET:
        if i.weight != -1 or j.weight != -1:
            raise WeightMismatch("colchete de campos exige peso -1")
        weight, terms = -1, [(1, [(a, 0), (b, 1)]), (-1, [(b, 0), (a, 1)])]
    else:
        if i.weight != -1:
            raise WeightMismatch("a ação exige um campo vetorial à esquerda")
        weight, terms = j.weight, [(1, [(a, 0), (b, 1)]), (j.weight, [(a, 1), (b, 0)])]
    result = expand_form_product(geom, weight, terms)
    low = i.degree + j.degree
    window = result.window()
    if window is not None and window[0] < low:
        raise AlmostGradingViolation(
            f"{kind.value}({i.label}; {j.label}) tem termo de grau {window[0]} < {low}")
    return result


def _bilinear(geom, kind, x: KNExpansion, y: KNExpansion, weight: int) -> KNExpansion:
    acc: Dict[BasisIndex, Fraction] = {}
    for i, a in x.items():
        for j, b in y.items():
            for k, c in basis_product(geom, kind, i, j).items():
                acc[k] = acc.get(k, Fraction(0)) + a * b * c
    return KNExpansion(weight, acc)


def _coerce(x, weight, geom):
    if isinstance(x, FormElement):
        if x.weight != weight:
            raise WeightMismatch(f"esperado peso {weight}, recebido {x.weight}")
        if geom is not None and x.geometry != geom:
            raise GeometryMismatch("elementos sobre geometrias diferentes")
        return expand_in_basis(x), x.geometry
    if isinstance(x, KNExpansion):
        if x.weight != weight:
            raise WeightMismatch(f"esperado peso {weight}, recebido {x.weight}")
        if geom is None:
            raise ConfigError("expansões exigem a geometria explícita")
        return x, geom
    raise TypeError(f"elemento não suportado: {type(x).__name__}")


def _pair(x, y, wx, wy, geom):
    if geom is None and isinstance(x, FormElement) and isinstance(y, FormElement):
        if x.geometry != y.geometry:
            raise GeometryMismatch("elementos sobre geometrias diferentes")
    if geom is None:
        geom = x.geometry if isinstance(x, FormElement) else getattr(y, "geometry", None)
    ex, geom = _coerce(x, wx, geom)
    ey, geom = _coerce(y, wy, geom)
    return ex, ey, geom


def multiply(a, b, geom: Optional[Geometry] = None) -> KNExpansion:
    ea, eb, geom = _pair(a, b, 0, 0, geom)
    return _bilinear(geom, TableKind.FUNCTION_PRODUCT, ea, eb, 0)


def bracket(e, f, geom: Optional[Geometry] = None) -> KNExpansion:
    """[e, f] = (e f' - f e') d/dz"""
    ee, ef, geom = _pair(e, f, -1, -1, geom)
    return _bilinear(geom, TableKind.VECTOR_BRACKET, ee, ef, -1)


def lie_derivative(e, f, geom: Optional[Geometry] = None) -> KNExpansion:
    weight = f.weight
    ee, ef, geom = _pair(e, f, -1, weight, geom)
    return _bilinear(geom, TableKind.FIELD_ON_FORM, ee, ef, weight)


def d_bracket(x: Tuple[KNExpansion, KNExpansion], y: Tuple[KNExpansion, KNExpansion], geom: Geometry):
    """
    Colchete na álgebra D = A + L de operadores diferenciais de ordem <= 1,
    com elementos dados por pares (função, campo).
    """
    g, e = x
    h, f = y
    func = lie_derivative(e, h, geom) - lie_derivative(f, g, geom)
    return func, bracket(e, f, geom)


@dataclass(frozen=True)
class StructureTable:
    kind: TableKind
    geometry: Geometry
    window: Tuple[int, int]
    entries: Dict[Tuple[BasisIndex, BasisIndex], KNExpansion] = field(compare=False)
    measured_bound: int

    def to_json(self) -> dict:
        rows = []
        for (i, j), value in sorted(self.entries.items()):
            rows.append({"left": i.label, "right": j.label, "value": value.to_json()})
        return {
            "kind": self.kind.value,
            "punctures": self.geometry.key,
            "window": list(self.window),
            "bound": self.measured_bound,
            "entries": rows,
        }


def _table_weights(kind, module_weight):
    if kind is TableKind.FUNCTION_PRODUCT:
        return 0, 0
    if kind is TableKind.VECTOR_BRACKET:
        return -1, -1
    return -1, module_weight


def build_structure_table(geom: Geometry, kind: TableKind, window: Tuple[int, int],
                          module_weight: int = 0) -> StructureTable:
    wi, wj = _table_weights(kind, module_weight)
    degrees = range(window[0], window[1] + 1)
    entries = {}
    bound = 0
    for i in basis_indices(geom, wi, degrees):
        for j in basis_indices(geom, wj, degrees):
            value = basis_product(geom, kind, i, j)
            entries[(i, j)] = value
            if value:
                bound = max(bound, value.window()[1] - i.degree - j.degree)
    return StructureTable(kind, geom, tuple(window), entries, bound)


@dataclass(frozen=True)
class Bounds:
    K: int
    L: int
    M: int
    window: Tuple[int, int]
    stable: bool


def _spread(geom, kind, window):
    wi, wj = _table_weights(kind, 0)
    degrees = range(window[0], window[1] + 1)
    left = basis_indices(geom, wi, degrees)
    right = basis_indices(geom, wj, degrees)
    symmetric = kind is not TableKind.FIELD_ON_FORM
    worst = 0
    for i in left:
        for j in right:
            if symmetric and j < i:
                continue
            value = basis_product(geom, kind, i, j)
            if value:
                worst = max(worst, value.window()[1] - i.degree - j.degree)
    return worst


@lru_cache(maxsize=64)
def measure_bounds(geom: Geometry, window: Tuple[int, int] = (-4, 4)) -> Bounds:
    """Menores K, L, M observados na janela, conferidos contra a janela ampliada em 2."""
    if window[0] > window[1]:
        raise ConfigError(f"janela vazia: {window}")
    kinds = (TableKind.FUNCTION_PRODUCT, TableKind.VECTOR_BRACKET, TableKind.FIELD_ON_FORM)
    base = tuple(_spread(geom, k, window) for k in kinds)
    wider = (window[0] - 2, window[1] + 2)
    grown = tuple(_spread(geom, k, wider) for k in kinds)
    stable = base == grown
    if not stable:
        logger.warning("cotas instáveis para N=%d: %s -> %s", geom.N, base, grown)
    else:
        logger.info("cotas K,L,M = %s para pontos %s", base, geom.key)
    K, L, M = grown
    return Bounds(K, L, M, tuple(window), stable)


def infinity_order(idx: BasisIndex, N: int) -> int:
    """Ordem em INFINITY da forma f^lambda_{n,p} (a mesma para todo p)."""
    return -N * (idx.degree + 1 - idx.weight) + 1 - 2 * idx.weight


@dataclass(frozen=True)
class OrderFiltration:
    """
    Dados da decomposição por ordem em INFINITY (variantes ENLARGED_STAR e DEPTH).

    plus_start: primeiro grau da parte plus
    threshold: ordem mínima em INFINITY exigida da parte minus
    lowest: menor ordem em INFINITY fora da parte plus
    strip: elementos da base que geram o complemento (parte zero)
    """
    weight: int
    plus_start: int
    threshold: int
    lowest: int
    strip: Tuple[BasisIndex, ...]


def _check_weight(weight: int):
    if weight not in (0, -1):
        raise UnknownVariant(f"decomposição triangular só para pesos 0 e -1, não {weight}")


def _filtration_limits(weight: int, variant: SplitVariant, depth: Optional[int]) -> Tuple[int, int]:
    if variant is SplitVariant.ENLARGED_STAR:
        # regulares em todos os P_i: A_{0,p}; e_{0,p}, e_{-1,p}
        return (0 if weight == 0 else -1), 0
    if variant is SplitVariant.DEPTH:
        if depth is None:
            raise ConfigError("a variante DEPTH precisa do parâmetro p")
        if weight == 0 and depth < 1:
            raise ConfigError("para funções a profundidade deve ser >= 1")
        if weight == -1 and depth < 0:
            raise ConfigError("para campos a profundidade deve ser >= 0")
        return 1, (depth if weight == 0 else depth + 1)
    raise UnknownVariant(f"variante desconhecida: {variant!r}")


def _jet(geom: Geometry, x: KNExpansion, lowest: int, threshold: int) -> list:
    """Coeficientes de x em INFINITY nas ordens lowest..threshold-1 (ordens da forma)."""
    size = threshold - lowest
    if not x:
        return [sympy.Integer(0)] * size
    func = x.to_form(geom).func
    shift = 2 * x.weight
    top = threshold - 1 + shift
    lead = order_at(func, INFINITY)
    if lead == math.inf or lead > top:
        return [sympy.Integer(0)] * size
    series = laurent_expand(func, INFINITY, top + 1 - lead)
    return [sympy.Rational(c.numerator, c.denominator)
            for c in (series.coefficient(o + shift) for o in range(lowest, threshold))]


@lru_cache(maxsize=None)
def order_filtration(geom: Geometry, weight: int, variant: SplitVariant,
                     depth: Optional[int] = None) -> OrderFiltration:
    """
    Escolhe, entre os elementos fora da parte plus com ordem abaixo do limiar,
    um conjunto cujos jatos em INFINITY são linearmente independentes. Esse
    conjunto gera a parte zero; o resto tem a ordem exigida depois da projeção.
    """
    _check_weight(weight)
    plus_start, threshold = _filtration_limits(weight, variant, depth)
    lowest = infinity_order(BasisIndex(weight, plus_start - 1, 1), geom.N)
    candidates = []
    n = plus_start - 1
    while infinity_order(BasisIndex(weight, n, 1), geom.N) < threshold:
        candidates.extend(BasisIndex(weight, n, p) for p in range(1, geom.N + 1))
        n -= 1
    strip, rows = [], []
    for idx in candidates:
        trial = sympy.Matrix(rows + [_jet(geom, KNExpansion.single(idx), lowest, threshold)])
        if trial.rank() > len(rows):
            rows = trial.tolist()
            strip.append(idx)
    logger.info("faixa de %s (peso %d, p=%s): %s", variant.value, weight, depth,
                [i.label for i in strip])
    return OrderFiltration(weight, plus_start, threshold, lowest, tuple(strip))


def _strip_component(geom: Geometry, filt: OrderFiltration, y: KNExpansion) -> KNExpansion:
    """Combinação dos elementos da faixa com o mesmo jato de y em INFINITY."""
    if not filt.strip or not y:
        return KNExpansion(y.weight)
    target = sympy.Matrix(_jet(geom, y, filt.lowest, filt.threshold))
    if not any(target):
        return KNExpansion(y.weight)
    columns = sympy.Matrix([_jet(geom, KNExpansion.single(i), filt.lowest, filt.threshold)
                            for i in filt.strip]).T
    solution, _ = columns.gauss_jordan_solve(target)
    return KNExpansion(y.weight, dict(zip(filt.strip, solution)))


def part_of(idx: BasisIndex, geom: Geometry, variant: SplitVariant = SplitVariant.STANDARD,
            bounds: Optional[Bounds] = None, depth: Optional[int] = None) -> str:
    """
    Classifica um elemento da base em 'plus', 'zero' ou 'minus'. Nas variantes
    por ordem, um elemento que se reparte entre zero e minus é 'mixed'.
    """
    _check_weight(idx.weight)
    if variant is SplitVariant.STANDARD:
        if bounds is None:
            raise ConfigError("a decomposição padrão precisa das cotas medidas")
        width = bounds.K if idx.weight == 0 else bounds.L
        if idx.degree >= 1:
            return "plus"
        return "zero" if idx.degree >= -width else "minus"
    split = triangular_split(KNExpansion.single(idx), geom, variant, depth, bounds)
    present = [name for name in ("plus", "zero", "minus") if getattr(split, name)]
    return present[0] if len(present) == 1 else "mixed"


@dataclass(frozen=True)
class TriangularSplit:
    plus: KNExpansion
    zero: KNExpansion
    minus: KNExpansion
    variant: SplitVariant
    depth: Optional[int] = None

    def recombine(self) -> KNExpansion:
        return self.plus + self.zero + self.minus

    def part(self, name: str) -> KNExpansion:
        if name not in ("plus", "zero", "minus"):
            raise UnknownVariant(f"parte desconhecida: {name!r}")
        return getattr(self, name)


def triangular_split(x: KNExpansion, geom: Geometry, variant: SplitVariant = SplitVariant.STANDARD,
                     depth: Optional[int] = None, bounds: Optional[Bounds] = None) -> TriangularSplit:
    """
    STANDARD separa por grau com as cotas medidas. ENLARGED_STAR e DEPTH separam
    por grau a parte plus e pela ordem em INFINITY o restante: a parte minus tem
    ordem >= limiar e a parte zero fica no complemento escolhido.
    """
    if not isinstance(variant, SplitVariant):
        raise UnknownVariant(f"variante desconhecida: {variant!r}")
    if variant is SplitVariant.STANDARD:
        if bounds is None:
            bounds = measure_bounds(geom)
        parts = {"plus": {}, "zero": {}, "minus": {}}
        for idx, c in x.items():
            parts[part_of(idx, geom, variant, bounds)][idx] = c
        return TriangularSplit(
            KNExpansion(x.weight, parts["plus"]),
            KNExpansion(x.weight, parts["zero"]),
            KNExpansion(x.weight, parts["minus"]),
            variant,
        )
    filt = order_filtration(geom, x.weight, variant, depth)
    plus = x.filter(lambda i: i.degree >= filt.plus_start)
    rest = x - plus
    zero = _strip_component(geom, filt, rest)
    return TriangularSplit(plus, zero, rest - zero, variant, depth)


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    witness: Optional[Tuple[KNExpansion, KNExpansion, KNExpansion]] = None

    def __bool__(self):
        return self.closed


def part_generators(geom: Geometry, part: str, weight: int, window: Tuple[int, int],
                    variant: SplitVariant = SplitVariant.STANDARD, depth: Optional[int] = None,
                    bounds: Optional[Bounds] = None) -> list:
    """Projeções na parte escolhida dos elementos da base na janela, sem repetição."""
    if variant is SplitVariant.STANDARD and bounds is None:
        bounds = measure_bounds(geom)
    out = []
    for idx in basis_indices(geom, weight, range(window[0], window[1] + 1)):
        piece = triangular_split(KNExpansion.single(idx), geom, variant, depth, bounds).part(part)
        if piece and piece not in out:
            out.append(piece)
    return out


def closure_check(geom: Geometry, part: str, kind: TableKind, window: Tuple[int, int],
                  variant: SplitVariant = SplitVariant.STANDARD, depth: Optional[int] = None,
                  bounds: Optional[Bounds] = None) -> ClosureReport:
    """
    Verifica se a parte escolhida é fechada sob produto (ou colchete) sobre os
    geradores da parte na janela. A testemunha é (a, b, componente fora da parte).
    """
    if part not in ("plus", "zero", "minus"):
        raise UnknownVariant(f"parte desconhecida: {part!r}")
    if kind is TableKind.FIELD_ON_FORM:
        raise UnknownVariant("fechamento só se aplica a produto e colchete")
    weight = 0 if kind is TableKind.FUNCTION_PRODUCT else -1
    if variant is SplitVariant.STANDARD and bounds is None:
        bounds = measure_bounds(geom)
    op = multiply if kind is TableKind.FUNCTION_PRODUCT else bracket
    sample = part_generators(geom, part, weight, window, variant, depth, bounds)
    for a, x in enumerate(sample):
        for y in sample[a:]:
            split = triangular_split(op(x, y, geom), geom, variant, depth, bounds)
            outside = split.recombine() - split.part(part)
            if outside:
                logger.info("parte %s não fechada: %r, %r -> %r", part, x, y, outside)
                return ClosureReport(False, (x, y, outside))
    return ClosureReport(True)
