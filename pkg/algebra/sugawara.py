"""
Construção de Sugawara sobre os setores da representação fermiônica.

    L*_{k,r} = -1/(2(c+kappa)) sum l_{(k,r)}^{(n,p)(m,s)} sum_i :u_i(A_{n,p}) u^i(A_{m,s}):

com l o resíduo triplo de omega^{n,p} omega^{m,s} e_{k,r} e a soma separada
nas partes abeliana e simples de g (T = T_0 + T_1).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

import sympy

from algebra.affine import AlgebraTag, MatrixElement, algebra_basis
from algebra.arith import INFINITY, as_rational, residue_of_product
from algebra.basis import BasisIndex, FormElement, Geometry, KNExpansion, expand_in_basis, make_basis
from algebra.checks import IdentityReport, ScalarReport, Status
from algebra.errors import ConfigError, CriticalLevel, ShapeMismatch, WeightMismatch
from algebra.structure import bracket, lie_derivative
from algebra.wedge import (
    Current, Field, RepresentationData, WedgeVector, _spread_upper, extract_cocycle, fermion_level,
    matrix_of_current, matrix_of_field, wedge_apply,
)

logger = logging.getLogger(__name__)


@lru_cache(maxsize=None)
def sugawara_coeff(geom: Geometry, k: int, r: int, n: int, p: int, m: int, s: int) -> Fraction:
    """
    (1/2 pi i) integral de omega^{n,p} omega^{m,s} e_{k,r} sobre o ciclo separador.

    Só é não nulo para k <= n + m <= k + 2 + floor(-2/N); fora disso nada é calculado.
    """
    if not k <= n + m <= k + _spread_upper(geom.N, 2):
        return Fraction(0)
    w1 = make_basis(geom, 1, -n, p).func
    w2 = make_basis(geom, 1, -m, s).func
    e = make_basis(geom, -1, k, r).func
    return -residue_of_product(((w1, 0), (w2, 0), (e, 0)), INFINITY)


def normal_order(first, second):
    """
    Ordem normal padrão: o rótulo de menor grau fica à esquerda.
    Rótulos são graus inteiros ou tuplas (grau, ponto). Devolve (esquerdo, direito, trocou).
    """
    deg = lambda label: label[0] if isinstance(label, tuple) else label
    if deg(first) <= deg(second):
        return first, second, False
    return second, first, True


@dataclass(frozen=True)
class SugawaraPart:
    name: str
    basis: Tuple[MatrixElement, ...]
    dual: Tuple[MatrixElement, ...]
    level: Fraction
    kappa: Fraction

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @property
    def denominator(self) -> Fraction:
        return self.level + self.kappa

    @property
    def prefactor(self) -> Fraction:
        if self.denominator == 0:
            raise CriticalLevel(f"parte {self.name}: c + kappa = 0")
        return Fraction(-1) / (2 * self.denominator)


@dataclass(frozen=True)
class SugawaraContext:
    rep: RepresentationData
    parts: Tuple[SugawaraPart, ...]
    charge: int = 0

    @property
    def geometry(self) -> Geometry:
        return self.rep.geometry


def dual_basis(basis: Sequence[MatrixElement]) -> Tuple[MatrixElement, ...]:
    """u^i com tr(u_i u^j) = delta_ij."""
    gram = sympy.Matrix(len(basis), len(basis),
                        lambda i, j: sympy.Rational(str(basis[i].product_trace(basis[j]))))
    if gram.det() == 0:
        raise ConfigError("forma traço degenerada nesta parte")
    inv = gram.inv()
    out = []
    for i in range(len(basis)):
        acc = basis[0].scale(0)
        for j, u in enumerate(basis):
            c = as_rational(inv[j, i])
            if c:
                acc = acc + u.scale(c)
        out.append(acc)
    return tuple(out)


def casimir_eigenvalue(basis: Sequence[MatrixElement], dual: Sequence[MatrixElement]) -> Fraction:
    """Autovalor de sum_i ad(u_i) ad(u^i) na parte (2 kappa)."""
    y = basis[0]
    image = basis[0].scale(0)
    for u, v in zip(basis, dual):
        image = image + u.commutator(v.commutator(y))
    for row_y, row_img in zip(y.entries, image.entries):
        for a, b in zip(row_y, row_img):
            if a:
                return b / a
    return Fraction(0)


def _split(tag: AlgebraTag, rank: int) -> List[Tuple[str, List[MatrixElement]]]:
    if tag is AlgebraTag.GL1:
        return [("abeliana", algebra_basis(tag, 1))]
    if tag is AlgebraTag.SL:
        return [("simples", algebra_basis(tag, rank))]
    parts = [("abeliana", [MatrixElement.identity(rank)])]
    if rank > 1:
        traceless = [MatrixElement(x.entries, AlgebraTag.GL) for x in algebra_basis(AlgebraTag.SL, rank)]
        parts.append(("simples", traceless))
    return parts


def sugawara_context(rep: RepresentationData, charge: int = 0, levels: Optional[Sequence] = None) -> SugawaraContext:
    """
    Monta as partes de g com bases duais, kappa pela Casimir adjunta e nível
    medido na própria representação (ou dado em `levels`).
    """
    parts = []
    for i, (name, basis) in enumerate(_split(rep.tag, rep.algebra_rank)):
        dual = dual_basis(basis)
        kappa = casimir_eigenvalue(basis, dual) / 2
        if levels is not None:
            level = as_rational(levels[i])
        else:
            reference = next(x for x in basis if x.product_trace(x))
            level = fermion_level(rep, charge, reference)
        logger.info("parte %s: nível %s, kappa %s", name, level, kappa)
        parts.append(SugawaraPart(name, tuple(basis), dual, level, kappa))
    return SugawaraContext(rep, tuple(parts), charge)


def sugawara_central_charge(ctx: SugawaraContext) -> Fraction:
    return sum((p.level * p.dimension / p.denominator for p in ctx.parts), Fraction(0))


def annihilation_degree(v: WedgeVector, rep: RepresentationData) -> int:
    """Menor h >= 1 tal que toda corrente de grau >= h anula v."""
    B = rep.shape.block
    h = 1
    for phi, _ in v.items():
        T0 = phi.tail_start
        lowest = phi.prefix[0] if phi.prefix else T0
        h = max(h, -(-T0 // B) - lowest // B)
    return h


def _apply_current(rep, x: MatrixElement, idx: BasisIndex, v: WedgeVector) -> WedgeVector:
    return wedge_apply(matrix_of_current(x, KNExpansion.single(idx), rep), v)


def apply_sugawara(ctx: SugawaraContext, k: int, r: int, v: WedgeVector) -> WedgeVector:
    """
    L*_{k,r} v. Só entram pares com o operador da direita (o de maior grau)
    abaixo do grau de aniquilação de v, o que torna a soma dupla finita.
    """
    out = WedgeVector(v.charge)
    if not v:
        return out
    rep, geom = ctx.rep, ctx.geometry
    N = geom.N
    h = annihilation_degree(v, rep)
    spread = _spread_upper(N, 2)
    for part in ctx.parts:
        pref = part.prefactor
        acc = WedgeVector(v.charge)
        right_cache = {}
        for n in range(k - h + 1, h):
            for m in range(max(k - n, k - h + 1), min(k + spread - n, h - 1) + 1):
                for p in range(1, N + 1):
                    for s in range(1, N + 1):
                        l = sugawara_coeff(geom, k, r, n, p, m, s)
                        if not l:
                            continue
                        left_idx, right_idx, swapped = normal_order((n, p), (m, s))
                        for u, ud in zip(part.basis, part.dual):
                            x_left, x_right = (ud, u) if swapped else (u, ud)
                            key = (x_right, right_idx)
                            if key not in right_cache:
                                right_cache[key] = _apply_current(rep, x_right, BasisIndex(0, *right_idx), v)
                            inner = right_cache[key]
                            if inner:
                                acc = acc + _apply_current(rep, x_left, BasisIndex(0, *left_idx), inner).scale(l)
        out = out + acc.scale(pref)
    return out


def _field_expansion(e) -> KNExpansion:
    if isinstance(e, FormElement):
        e = expand_in_basis(e)
    if e.weight != -1:
        raise WeightMismatch("T[e] exige um campo vetorial")
    return e


def apply_T_of_field(ctx: SugawaraContext, e, v: WedgeVector) -> WedgeVector:
    """T[e] = sum a_{n,p} L*_{n,p} para e = sum a_{n,p} e_{n,p}."""
    e = _field_expansion(e)
    out = WedgeVector(v.charge)
    for idx, coef in e.items():
        out = out + apply_sugawara(ctx, idx.degree, idx.puncture, v).scale(coef)
    return out


def _current_apply(ctx, x: MatrixElement, A, v: WedgeVector) -> WedgeVector:
    return wedge_apply(matrix_of_current(x, A, ctx.rep), v)


def check_fundamental(ctx: SugawaraContext, e, x: MatrixElement, A, samples: Iterable[WedgeVector]) -> IdentityReport:
    """[T[e], x(A)] = x(e.A) em cada vetor amostrado."""
    geom = ctx.geometry
    e = _field_expansion(e)
    if isinstance(A, FormElement):
        A = expand_in_basis(A)
    eA = lie_derivative(e, A, geom)
    count = 0
    for v in samples:
        count += 1
        lhs = (apply_T_of_field(ctx, e, _current_apply(ctx, x, A, v))
               - _current_apply(ctx, x, A, apply_T_of_field(ctx, e, v)))
        rhs = _current_apply(ctx, x, eA, v)
        if lhs != rhs:
            logger.warning("relação fundamental falhou em %r", v)
            return IdentityReport(False, {"vector": v.to_json(), "lhs": lhs.to_json(), "rhs": rhs.to_json()}, count)
    return IdentityReport(True, None, count)


def common_scalar(pairs: Iterable[Tuple[WedgeVector, WedgeVector]]) -> ScalarReport:
    """Confere w = s v com o mesmo s para todos os pares (v, w)."""
    scalar = None
    count = 0
    for v, w in pairs:
        count += 1
        if not v:
            continue
        phi, c = next(iter(v.items()))
        s = w.coefficient(phi) / c
        if w != v.scale(s) or (scalar is not None and s != scalar):
            return ScalarReport(Status.FAIL, scalar, {"vector": v.to_json(), "image": w.to_json()}, count)
        scalar = s
    return ScalarReport(Status.PASS, scalar if scalar is not None else Fraction(0), None, count)


def check_sugawara_projective(ctx: SugawaraContext, e, f, samples: Iterable[WedgeVector]) -> ScalarReport:
    """[T[e], T[f]] - T[[e,f]] age como escalar; para N = 1 vale (c/12) gamma^(L)(e, f)."""
    e, f = _field_expansion(e), _field_expansion(f)
    ef = bracket(e, f, ctx.geometry)

    def pairs():
        for v in samples:
            w = (apply_T_of_field(ctx, e, apply_T_of_field(ctx, f, v))
                 - apply_T_of_field(ctx, f, apply_T_of_field(ctx, e, v))
                 - apply_T_of_field(ctx, ef, v))
            yield v, w

    return common_scalar(pairs())


def delta_apply(ctx: SugawaraContext, e, v: WedgeVector) -> WedgeVector:
    """Delta_e v = r(e) v - T[e] v"""
    e = _field_expansion(e)
    return wedge_apply(matrix_of_field(e, ctx.rep), v) - apply_T_of_field(ctx, e, v)


def trace_weight(x: MatrixElement) -> Fraction:
    """lambda(x) = tr(x) / posto"""
    return x.trace() / x.rank


def representation_mixing(ctx: SugawaraContext, e, A) -> Fraction:
    """
    Escalar de [r(e), I(A)] - r(e.A) no setor, com I a identidade de g; é o
    cociclo misto induzido pela representação.
    """
    rep = ctx.rep
    if rep.tag is AlgebraTag.SL:
        raise ShapeMismatch("sl não contém a identidade; lambda(x) = 0")
    e = _field_expansion(e)
    if isinstance(A, FormElement):
        A = expand_in_basis(A)
    identity = MatrixElement.identity(rep.algebra_rank, rep.tag)
    return extract_cocycle(Field(e), Current(identity, A), rep, ctx.charge)
