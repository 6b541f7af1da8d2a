"""Fixtures e estratégias compartilhadas pelos testes."""
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from algebra.affine import AlgebraTag
from algebra.arith import Polynomial, RationalFunction
from algebra.basis import BasisIndex, Geometry, KNExpansion
from algebra.wedge import RepresentationData

# series exatas e sympy deixam os primeiros exemplos lentos
settings.register_profile("kn", deadline=None, max_examples=40)
settings.load_profile("kn")

GEOMETRIES = {
    1: Geometry.of(0),
    2: Geometry.of(0, 1),
    3: Geometry.of(0, 1, Fraction(-1, 2)),
}


@pytest.fixture
def geom1():
    return GEOMETRIES[1]


@pytest.fixture
def geom2():
    return GEOMETRIES[2]


@pytest.fixture
def geom3():
    return GEOMETRIES[3]


@pytest.fixture
def rep_gl1():
    return RepresentationData(GEOMETRIES[1])


@pytest.fixture
def rep_gl1_n2():
    return RepresentationData(GEOMETRIES[2])


@pytest.fixture
def rep_sl2():
    return RepresentationData(GEOMETRIES[1], r=1, dim=2, tag=AlgebraTag.SL, algebra_rank=2)


def A(n, p=1):
    return KNExpansion.single(BasisIndex(0, n, p))


def e(n, p=1):
    return KNExpansion.single(BasisIndex(-1, n, p))


# --- estrategias ------------------------------------------------------------------

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=5)
nonzero_rationals = rationals.filter(lambda q: q != 0)
small_points = st.sampled_from([Fraction(0), Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(3), Fraction(-2, 3)])


@st.composite
def polynomials(draw, max_degree=4):
    coeffs = draw(st.lists(rationals, min_size=0, max_size=max_degree + 1))
    return Polynomial(coeffs)


@st.composite
def split_polynomials(draw, max_roots=3):
    """Polinômio mônico com raízes racionais (com multiplicidade)."""
    roots = draw(st.lists(small_points, min_size=0, max_size=max_roots))
    p = Polynomial.one()
    for a in roots:
        p = p * Polynomial.linear_factor(a)
    return p


@st.composite
def rational_functions(draw):
    num = draw(polynomials(3))
    den = draw(split_polynomials())
    return RationalFunction(num, den)


@st.composite
def expansions(draw, N=1, weight=0, degrees=(-2, 2)):
    """Combinação aleatória de até três elementos da base."""
    terms = draw(st.dictionaries(
        st.builds(BasisIndex, st.just(weight), st.integers(*degrees), st.integers(1, N)),
        nonzero_rationals, max_size=3))
    return KNExpansion(weight, terms)
