"""
Aritmética exata sobre Q: polinômios, funções racionais, expansões de Laurent
e resíduos. Todo emparelhamento e todo cociclo do pacote é calculado aqui.
"""
import enum
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple, Union

import sympy

from algebra.errors import ConfigError

logger = logging.getLogger(__name__)

POSITIVE_INFINITY = math.inf


class Infinity(enum.Enum):
    INFINITY = "infinity"

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "INFINITY"


INFINITY = Infinity.INFINITY
Point = Union[Fraction, Infinity]


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleano não é racional")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    raise TypeError(f"valor não racional: {value!r}")


def format_rational(value: Fraction) -> str:
    """Formato "p/q" (ou "p" se inteiro) usado em toda saída JSON."""
    value = as_rational(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rational(text) -> Fraction:
    try:
        return as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"racional inválido: {text!r}") from e


class Polynomial:
    """Polinômio em z com coeficientes racionais, grau mais baixo primeiro."""

    __slots__ = ("coefficients",)

    def __init__(self, coefficients=()):
        coeffs = [as_rational(c) for c in coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coefficients = tuple(coeffs)

    @classmethod
    def _clean(cls, coeffs):
        coeffs = list(coeffs)
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        obj = object.__new__(cls)
        obj.coefficients = tuple(coeffs)
        return obj

    @classmethod
    def zero(cls):
        return cls._clean(())

    @classmethod
    def one(cls):
        return cls._clean((Fraction(1),))

    @classmethod
    def constant(cls, c):
        return cls._clean((as_rational(c),))

    @classmethod
    def monomial(cls, k, c=1):
        return cls._clean([Fraction(0)] * k + [as_rational(c)])

    @classmethod
    def linear_factor(cls, a):
        """z - a"""
        return cls._clean((-as_rational(a), Fraction(1)))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        return self.coefficients[-1] if self.coefficients else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.coefficients == other.coefficients
        return NotImplemented

    def __hash__(self):
        return hash(("Polynomial", self.coefficients))

    def __repr__(self):
        return f"Polynomial({self.to_string()})"

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        a, b = self.coefficients, other.coefficients
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Polynomial._clean(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._clean([-c for c in self.coefficients])

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c):
        c = as_rational(c)
        if c == 0:
            return Polynomial.zero()
        return Polynomial._clean([c * a for a in self.coefficients])

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            return self.scale(other)
        a, b = self.coefficients, other.coefficients
        if not a or not b:
            return Polynomial.zero()
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                out[i + j] += x * y
        return Polynomial._clean(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("expoente negativo")
        result, base = Polynomial.one(), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __divmod__(self, other):
        other = self._coerce(other)
        if other.is_zero:
            raise ZeroDivisionError("divisão por polinômio nulo")
        rem = list(self.coefficients)
        db = other.degree
        if len(rem) - 1 < db:
            return Polynomial.zero(), self
        inv = 1 / other.leading
        quot = [Fraction(0)] * (len(rem) - db)
        for k in range(len(rem) - 1 - db, -1, -1):
            c = rem[k + db] * inv
            quot[k] = c
            if c:
                for i, b in enumerate(other.coefficients):
                    rem[k + i] -= c * b
        return Polynomial._clean(quot), Polynomial._clean(rem[:db])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def derivative(self):
        return Polynomial._clean([i * c for i, c in enumerate(self.coefficients)][1:])

    def taylor_shift(self, a):
        """Coeficientes de p(a + t) em t."""
        a = as_rational(a)
        c = list(self.coefficients)
        if a == 0 or len(c) < 2:
            return Polynomial._clean(c)
        n = len(c)
        for i in range(n):
            for j in range(n - 2, i - 1, -1):
                c[j] += a * c[j + 1]
        return Polynomial._clean(c)

    def valuation(self):
        for i, c in enumerate(self.coefficients):
            if c != 0:
                return i
        return POSITIVE_INFINITY

    def monic(self):
        if self.is_zero:
            return self
        return self.scale(1 / self.leading)

    @staticmethod
    def gcd(a, b):
        while not b.is_zero:
            a, b = b, a % b
        return a.monic()

    @staticmethod
    def xgcd(a, b):
        """(g, s, t) com s*a + t*b = g, g mônico."""
        r0, r1 = a, b
        s0, s1 = Polynomial.one(), Polynomial.zero()
        t0, t1 = Polynomial.zero(), Polynomial.one()
        while not r1.is_zero:
            q, r = divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0.is_zero:
            return r0, s0, t0
        inv = 1 / r0.leading
        return r0.scale(inv), s0.scale(inv), t0.scale(inv)

    def root_multiplicity(self, a) -> int:
        a = as_rational(a)
        if self.is_zero:
            raise ValueError("polinômio nulo")
        k, p = 0, self
        while p.degree >= 1 and p(a) == 0:
            p = p // Polynomial.linear_factor(a)
            k += 1
        return k

    def to_string(self, var="z") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if k == 0:
                body = format_rational(mag)
            else:
                power = var if k == 1 else f"{var}^{k}"
                body = power if mag == 1 else f"{format_rational(mag)}*{power}"
            parts.append((sign, body))
        text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text


class RationalFunction:
    """Quociente exato de polinômios; forma canônica: mdc 1, denominador mônico."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=None):
        num = numerator if isinstance(numerator, Polynomial) else Polynomial.constant(numerator)
        if denominator is None:
            den = Polynomial.one()
        elif isinstance(denominator, Polynomial):
            den = denominator
        else:
            den = Polynomial.constant(denominator)
        if den.is_zero:
            raise ZeroDivisionError("denominador nulo")
        if num.is_zero:
            num, den = Polynomial.zero(), Polynomial.one()
        else:
            g = Polynomial.gcd(num, den)
            if g.degree > 0:
                num, den = num // g, den // g
            inv = 1 / den.leading
            num, den = num.scale(inv), den.scale(inv)
        self.numerator = num
        self.denominator = den

    @classmethod
    def _raw(cls, num, den):
        obj = object.__new__(cls)
        obj.numerator = num
        obj.denominator = den
        return obj

    @classmethod
    def constant(cls, c):
        return cls._raw(Polynomial.constant(c), Polynomial.one())

    @classmethod
    def variable(cls):
        return cls._raw(Polynomial.monomial(1), Polynomial.one())

    @classmethod
    def from_factors(cls, scale, exponents):
        """scale * prod (z - a)^k para pontos a distintos (já canônico)."""
        scale = as_rational(scale)
        if scale == 0:
            return cls.constant(0)
        num, den = Polynomial.constant(scale), Polynomial.one()
        for a, k in exponents.items():
            if k > 0:
                num = num * Polynomial.linear_factor(a) ** k
            elif k < 0:
                den = den * Polynomial.linear_factor(a) ** (-k)
        return cls._raw(num, den)

    @property
    def is_zero(self) -> bool:
        return self.numerator.is_zero

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.numerator == other.numerator and self.denominator == other.denominator
        if isinstance(other, (int, Fraction)):
            return self == RationalFunction.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return f"RationalFunction({self})"

    def __str__(self):
        num = self.numerator.to_string()
        if self.denominator == Polynomial.one():
            return num
        return f"({num})/({self.denominator.to_string()})"

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial):
            return RationalFunction(other)
        return RationalFunction.constant(other)

    def __add__(self, other):
        other = self._coerce(other)
        if self.denominator == other.denominator:
            return RationalFunction(self.numerator + other.numerator, self.denominator)
        return RationalFunction(self.numerator * other.denominator + other.numerator * self.denominator,
                                self.denominator * other.denominator)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._raw(-self.numerator, self.denominator)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, (RationalFunction, Polynomial)):
            c = as_rational(other)
            if c == 0:
                return RationalFunction.constant(0)
            return RationalFunction._raw(self.numerator.scale(c), self.denominator)
        other = self._coerce(other)
        if self.is_zero or other.is_zero:
            return RationalFunction.constant(0)
        g1 = Polynomial.gcd(self.numerator, other.denominator)
        g2 = Polynomial.gcd(other.numerator, self.denominator)
        n1, d2 = self.numerator // g1, other.denominator // g1
        n2, d1 = other.numerator // g2, self.denominator // g2
        num, den = n1 * n2, d1 * d2
        inv = 1 / den.leading
        return RationalFunction._raw(num.scale(inv), den.scale(inv))

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero:
            raise ZeroDivisionError("inversa da função nula")
        inv = 1 / self.numerator.leading
        return RationalFunction._raw(self.denominator.scale(inv), self.numerator.scale(inv))

    def __truediv__(self, other):
        if not isinstance(other, (RationalFunction, Polynomial)):
            return self * (1 / as_rational(other))
        return self * self._coerce(other).inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction._raw(self.numerator ** k, self.denominator ** k)

    def derivative(self):
        n, d = self.numerator, self.denominator
        return RationalFunction(n.derivative() * d - n * d.derivative(), d * d)

    def derivative_n(self, k: int):
        f = self
        for _ in range(k):
            f = f.derivative()
        return f


@dataclass(frozen=True)
class LaurentExpansion:
    at: object
    leading_order: int
    coefficients: Tuple[Fraction, ...]
    truncation_order: int
    identically_zero: bool = False

    def coefficient(self, order: int) -> Fraction:
        if self.identically_zero or order < self.leading_order:
            return Fraction(0)
        if order >= self.truncation_order:
            raise ValueError(f"ordem {order} além da truncagem {self.truncation_order}")
        return self.coefficients[order - self.leading_order]


def _series_quotient(num, den, terms):
    inv = 1 / den[0]
    q = []
    for k in range(terms):
        acc = num[k] if k < len(num) else Fraction(0)
        for i in range(1, min(k, len(den) - 1) + 1):
            acc -= den[i] * q[k - i]
        q.append(acc * inv)
    return q


def _compute_series(f: RationalFunction, at, terms):
    if at is INFINITY:
        num = tuple(reversed(f.numerator.coefficients))
        den = tuple(reversed(f.denominator.coefficients))
        lead = f.denominator.degree - f.numerator.degree
        return lead, tuple(_series_quotient(num, den, terms))
    shifted_num = f.numerator.taylor_shift(at)
    shifted_den = f.denominator.taylor_shift(at)
    vn, vd = shifted_num.valuation(), shifted_den.valuation()
    coeffs = _series_quotient(shifted_num.coefficients[vn:], shifted_den.coefficients[vd:], terms)
    return vn - vd, tuple(coeffs)


_SERIES_CACHE = {}
_SERIES_CACHE_LIMIT = 200_000


def local_series(f: RationalFunction, at, terms: int):
    """(ordem inicial, coeficientes) da expansão local; f não nula."""
    key = (f, at)
    hit = _SERIES_CACHE.get(key)
    if hit is not None and len(hit[1]) >= terms:
        return hit[0], hit[1][:terms]
    want = max(terms, 2 * len(hit[1])) if hit is not None else terms
    lead, coeffs = _compute_series(f, at, want)
    if len(_SERIES_CACHE) > _SERIES_CACHE_LIMIT:
        logger.debug("cache de séries cheio, limpando %d entradas", len(_SERIES_CACHE))
        _SERIES_CACHE.clear()
    _SERIES_CACHE[key] = (lead, coeffs)
    return lead, coeffs[:terms]


def laurent_expand(f: RationalFunction, at, terms: int) -> LaurentExpansion:
    if terms < 1:
        raise ValueError("terms deve ser >= 1")
    if at is not INFINITY:
        at = as_rational(at)
    if f.is_zero:
        return LaurentExpansion(at, 0, (), 0, identically_zero=True)
    lead, coeffs = local_series(f, at, terms)
    return LaurentExpansion(at, lead, coeffs, lead + terms)


@lru_cache(maxsize=65536)
def _order_at(f: RationalFunction, at):
    if f.is_zero:
        return POSITIVE_INFINITY
    if at is INFINITY:
        return f.denominator.degree - f.numerator.degree
    return f.numerator.root_multiplicity(at) - f.denominator.root_multiplicity(at)


def order_at(f: RationalFunction, at):
    if at is not INFINITY:
        at = as_rational(at)
    return _order_at(f, at)


def residue_form(f: RationalFunction, at) -> Fraction:
    """Resíduo da 1-forma f dz no ponto (em INFINITY via w = 1/z)."""
    return residue_of_product(((f, 0),), at)


def _derive_series(coeffs, lead, times):
    for _ in range(times):
        coeffs = [(lead + i) * c for i, c in enumerate(coeffs)]
        lead -= 1
    return coeffs


def _series_product(series, terms):
    acc = list(series[0][:terms])
    for s in series[1:]:
        out = [Fraction(0)] * terms
        for i, a in enumerate(acc):
            if a == 0:
                continue
            for j in range(terms - i):
                b = s[j]
                if b:
                    out[i + j] += a * b
        acc = out
    return acc


def residue_of_product(factors: Sequence, at) -> Fraction:
    """
    Resíduo de (prod f_i^(d_i)) dz, onde factors = [(f_i, d_i), ...].

    Só as expansões locais de cada fator entram na conta; o produto nunca é
    formado como função racional. Em INFINITY as derivadas devem ser zero.
    """
    if any(f.is_zero for f, _ in factors):
        return Fraction(0)
    if at is INFINITY:
        if any(d for _, d in factors):
            raise ValueError("derivadas em INFINITY não suportadas")
        total = sum(_order_at(f, INFINITY) for f, _ in factors)
        if total > 1:
            return Fraction(0)
        terms = 2 - total
        series = [local_series(f, INFINITY, terms)[1] for f, _ in factors]
        return -_series_product(series, terms)[1 - total]
    at = as_rational(at)
    formal = [_order_at(f, at) - d for f, d in factors]
    total = sum(formal)
    if total >= 0:
        return Fraction(0)
    terms = -total
    series = []
    for f, d in factors:
        lead, coeffs = local_series(f, at, terms)
        series.append(_derive_series(list(coeffs), lead, d))
    return _series_product(series, terms)[terms - 1]


def rational_roots(p: Polynomial):
    """Raízes racionais com multiplicidade (busca exata do sympy em QQ)."""
    if p.degree < 1:
        return {}
    z = sympy.Symbol("z")
    coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coefficients)]
    poly = sympy.Poly(coeffs, z, domain=sympy.QQ)
    return {as_rational(r): int(m) for r, m in poly.ground_roots().items()}


def residue_sum_check(f: RationalFunction) -> bool:
    """Teorema dos resíduos: soma sobre polos finitos + resíduo em INFINITY = 0."""
    if f.is_zero:
        return True
    roots = rational_roots(f.denominator)
    total = sum((residue_form(f, a) for a in roots), Fraction(0))
    rational_part = Polynomial.one()
    for a, k in roots.items():
        rational_part = rational_part * Polynomial.linear_factor(a) ** k
    rest = f.denominator // rational_part
    if rest.degree > 0:
        # polos irracionais: f = P*s/R + P*t/L com s*L + t*R = 1
        _, s, _ = Polynomial.xgcd(rational_part, rest)
        v = (f.numerator * s) % rest
        if v.degree == rest.degree - 1:
            total += v.leading / rest.leading
    total += residue_form(f, INFINITY)
    return total == 0


_Z = sympy.Symbol("z")


def _sympy_poly_to_polynomial(expr) -> Polynomial:
    poly = sympy.Poly(expr, _Z, domain=sympy.QQ)
    return Polynomial(as_rational(c) for c in reversed(poly.all_coeffs()))


def parse_rational_function(text) -> RationalFunction:
    """Lê expressões como "1/(z*(z-1))" ou "z^2 - 1/2" (sempre na variável z)."""
    source = str(text).replace("^", "**")
    try:
        expr = sympy.parse_expr(source, local_dict={"z": _Z})
        if expr.free_symbols - {_Z}:
            raise ConfigError(f"variável desconhecida em {text!r}")
        num, den = sympy.fraction(sympy.together(expr))
        return RationalFunction(_sympy_poly_to_polynomial(num), _sympy_poly_to_polynomial(den))
    except ConfigError:
        raise
    except Exception as e:
        raise ConfigError(f"função racional inválida: {text!r}") from e
