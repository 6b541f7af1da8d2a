import pytest
from hypothesis import given

from algebra.arith import INFINITY
from algebra.basis import BasisIndex, KNExpansion
from algebra.errors import ConfigError, UnknownVariant, WeightMismatch
from algebra.structure import (
    SplitVariant, TableKind, basis_product, bracket, build_structure_table, closure_check, lie_derivative,
    measure_bounds, multiply, order_filtration, part_of, triangular_split,
)
from conftest import GEOMETRIES, A, e, expansions

WINDOW = range(-3, 4)


@pytest.mark.parametrize("n", WINDOW)
@pytest.mark.parametrize("m", WINDOW)
def test_classical_relations(geom1, n, m):
    assert multiply(A(n), A(m), geom1) == A(n + m)
    assert bracket(e(n), e(m), geom1) == e(n + m).scale(m - n)
    assert lie_derivative(e(n), A(m), geom1) == A(n + m).scale(m)


def test_one_point_bounds_vanish(geom1):
    bounds = measure_bounds(geom1, (-2, 2))
    assert (bounds.K, bounds.L, bounds.M) == (0, 0, 0)
    assert bounds.stable


def test_two_point_bounds(geom2):
    bounds = measure_bounds(geom2, (-2, 2))
    assert bounds.K == 1
    assert bounds.L <= 1 and bounds.M <= 1


def test_empty_window_is_rejected(geom1):
    with pytest.raises(ConfigError):
        measure_bounds(geom1, (2, -2))


@pytest.mark.parametrize("N", [2, 3])
def test_products_stay_in_the_window(N):
    geom = GEOMETRIES[N]
    K = 2 + (-2 // N)
    for n in range(-2, 3):
        for m in range(-2, 3):
            value = basis_product(geom, TableKind.FUNCTION_PRODUCT, BasisIndex(0, n, 1), BasisIndex(0, m, N))
            if value:
                low, high = value.window()
                assert n + m <= low and high <= n + m + K


def test_weights_are_checked(geom1):
    with pytest.raises(WeightMismatch):
        basis_product(geom1, TableKind.VECTOR_BRACKET, BasisIndex(0, 1, 1), BasisIndex(-1, 1, 1))
    with pytest.raises(WeightMismatch):
        multiply(e(1), A(1), geom1)


def test_structure_table_json(geom1):
    table = build_structure_table(geom1, TableKind.FUNCTION_PRODUCT, (-1, 1))
    rows = table.to_json()["entries"]
    assert len(rows) == 9
    assert rows[0] == {"left": "0,-1,1", "right": "0,-1,1", "value": {"0,-2,1": "1"}}
    assert table.measured_bound == 0


@given(expansions(N=2, weight=-1, degrees=(-1, 1)), expansions(N=2, weight=0, degrees=(-1, 1)),
       expansions(N=2, weight=0, degrees=(-1, 1)))
def test_leibniz_rule(x, g, h):
    geom = GEOMETRIES[2]
    lhs = lie_derivative(x, multiply(g, h, geom), geom)
    rhs = multiply(lie_derivative(x, g, geom), h, geom) + multiply(g, lie_derivative(x, h, geom), geom)
    assert lhs == rhs


@given(expansions(N=2, weight=-1, degrees=(-1, 1)), expansions(N=2, weight=-1, degrees=(-1, 1)))
def test_bracket_is_antisymmetric(x, y):
    geom = GEOMETRIES[2]
    assert bracket(x, y, geom) == -bracket(y, x, geom)


@pytest.mark.parametrize("n, expected", [(2, "plus"), (1, "plus"), (0, "zero"), (-1, "minus")])
def test_standard_split_one_point(geom1, n, expected):
    bounds = measure_bounds(geom1, (-2, 2))
    assert part_of(BasisIndex(0, n, 1), geom1, SplitVariant.STANDARD, bounds) == expected


@pytest.mark.parametrize("weight, n, expected", [
    (0, 0, "plus"), (0, -1, "minus"), (-1, -1, "plus"), (-1, -2, "minus"),
])
def test_enlarged_split_one_point(geom1, weight, n, expected):
    assert part_of(BasisIndex(weight, n, 1), geom1, SplitVariant.ENLARGED_STAR) == expected


def test_depth_split_validates_depth(geom1):
    with pytest.raises(ConfigError):
        part_of(BasisIndex(0, 0, 1), geom1, SplitVariant.DEPTH, depth=0)
    with pytest.raises(UnknownVariant):
        part_of(BasisIndex(1, 0, 1), geom1, SplitVariant.DEPTH, depth=1)


def test_depth_split_one_point(geom1):
    # ordens 0, 1 e 2 em INFINITY para A_0, A_{-1} e A_{-2}
    parts = [part_of(BasisIndex(0, n, 1), geom1, SplitVariant.DEPTH, depth=2) for n in (1, 0, -1, -2, -3)]
    assert parts == ["plus", "zero", "zero", "minus", "minus"]


def test_depth_split_keeps_regular_fields_in_minus(geom2):
    # e_{-1,1} + e_{-1,2} = d/dz, de ordem 2 em INFINITY
    x = e(-1, 1) + e(-1, 2)
    assert x.to_form(geom2).order_at(INFINITY) == 2
    split = triangular_split(x, geom2, SplitVariant.DEPTH, depth=1)
    assert split.minus == x
    assert not split.zero
    assert not split.plus


def test_depth_split_mixed_element(geom2):
    filt = order_filtration(geom2, -1, SplitVariant.DEPTH, 1)
    assert [i.label for i in filt.strip] == ["-1,0,1", "-1,0,2", "-1,-1,1"]
    assert part_of(BasisIndex(-1, -1, 2), geom2, SplitVariant.DEPTH, depth=1) == "mixed"
    split = triangular_split(e(-1, 2), geom2, SplitVariant.DEPTH, depth=1)
    assert split.zero == -e(-1, 1)
    assert split.minus == e(-1, 1) + e(-1, 2)


def test_enlarged_strip_is_empty(geom3):
    for weight in (0, -1):
        assert order_filtration(geom3, weight, SplitVariant.ENLARGED_STAR).strip == ()


@pytest.mark.parametrize("weight, depth", [(0, 1), (0, 2), (-1, 0), (-1, 1), (-1, 2)])
def test_depth_minus_part_has_the_required_order(weight, depth):
    geom = GEOMETRIES[2]

    @given(expansions(N=2, weight=weight, degrees=(-3, 3)))
    def check(x):
        split = triangular_split(x, geom, SplitVariant.DEPTH, depth=depth)
        assert split.recombine() == x
        assert all(i.degree >= 1 for i in split.plus.terms)
        assert all(i.degree <= 0 for i in split.minus.terms)
        if split.minus:
            needed = depth if weight == 0 else depth + 1
            assert split.minus.to_form(geom).order_at(INFINITY) >= needed

    check()


@given(expansions(N=2, weight=0, degrees=(-3, 3)))
def test_split_recombines(x):
    geom = GEOMETRIES[2]
    split = triangular_split(x, geom, bounds=measure_bounds(geom, (-2, 2)))
    assert split.recombine() == x


@pytest.mark.parametrize("part", ["plus", "minus"])
@pytest.mark.parametrize("kind", [TableKind.FUNCTION_PRODUCT, TableKind.VECTOR_BRACKET])
def test_outer_parts_are_subalgebras(geom2, part, kind):
    bounds = measure_bounds(geom2, (-2, 2))
    assert closure_check(geom2, part, kind, (-3, 3), bounds=bounds)

@pytest.mark.parametrize("kind, depth", [
    (TableKind.FUNCTION_PRODUCT, 1), (TableKind.FUNCTION_PRODUCT, 2),
    (TableKind.VECTOR_BRACKET, 0), (TableKind.VECTOR_BRACKET, 1),
])
def test_depth_minus_is_a_subalgebra(geom2, kind, depth):
    report = closure_check(geom2, "minus", kind, (-3, 2), SplitVariant.DEPTH, depth=depth)
    assert report.closed, report.witness


@pytest.mark.parametrize("kind", [TableKind.FUNCTION_PRODUCT, TableKind.VECTOR_BRACKET])
def test_enlarged_minus_is_a_subalgebra(geom2, kind):
    assert closure_check(geom2, "minus", kind, (-3, 2), SplitVariant.ENLARGED_STAR)


def test_closure_witness_names_the_offending_component(geom1):
    # a faixa de funções com p = 2 contém A_0 e A_{-1}, e A_{-1} * A_{-1} = A_{-2} está em minus
    report = closure_check(geom1, "zero", TableKind.FUNCTION_PRODUCT, (-2, 0), SplitVariant.DEPTH, depth=2)
    assert not report
    x, y, outside = report.witness
    assert outside
