"""
Baterias de verificação usadas pelo comando verify. Cada bateria recebe a
configuração do job e devolve registros CheckRecord em ordem determinística.
"""
import logging
import random
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, List

from algebra.affine import (
    AffineElement, AlgebraTag, CurrentElement, DgElement, MatrixElement, algebra_basis, check_jacobi, dg_bracket,
)
from algebra.basis import BasisIndex, KNExpansion, basis_indices, kn_pairing, make_basis
from algebra.casimir import (
    casimir_solve, check_delta_commutation, check_pairwise_scalar, gamma_extend, geometric_mixing_evaluator,
)
from algebra.checks import CheckRecord, Status, status_of
from algebra.cocycles import (
    CocycleKind, DCocycle, GeometricCocycle, check_L_invariance, check_antisymmetry, check_cocycle_identity,
    check_locality, find_coboundary,
)
from algebra.errors import UnknownVariant
from algebra.structure import (
    SplitVariant, TableKind, basis_product, bracket, closure_check, d_bracket, lie_derivative, measure_bounds, multiply,
)
from algebra.sugawara import check_fundamental, sugawara_context
from algebra.wedge import (
    Current, WedgeVector, block_degree, enumerate_monomials, extract_cocycle, homogeneous_dimension,
    induced_alpha, monomial_degree, permute_monomial,
)

logger = logging.getLogger(__name__)


def _degrees(cfg):
    return range(cfg.window[0], cfg.window[1] + 1)


def _rng(cfg):
    return random.Random(cfg.seed)


def _label(x):
    if x is None:
        return None
    return x.label if isinstance(x, BasisIndex) else repr(x)


# --- dualidade ---------------------------------------------------------------------

def suite_duality(cfg) -> List[CheckRecord]:
    geom = cfg.geometry
    records = []
    for weight in (-1, 0, 1, 2):
        witness = None
        checked = 0
        for n in _degrees(cfg):
            for m in _degrees(cfg):
                for p in range(1, geom.N + 1):
                    for q in range(1, geom.N + 1):
                        checked += 1
                        value = kn_pairing(make_basis(geom, weight, n, p), make_basis(geom, 1 - weight, -m, q))
                        expected = 1 if (n, p) == (m, q) else 0
                        if value != expected and witness is None:
                            witness = f"<f^{weight}_{n},{p}, f^{1 - weight}_{-m},{q}> = {value}"
        records.append(CheckRecord(f"duality/lambda={weight}", status_of(witness is None), witness,
                                   {"pairs": checked}))
    return records


# --- estrutura ---------------------------------------------------------------------

def _classical_witness(geom, cfg):
    for n in _degrees(cfg):
        for m in _degrees(cfg):
            A = basis_product(geom, TableKind.FUNCTION_PRODUCT, BasisIndex(0, n, 1), BasisIndex(0, m, 1))
            if A != KNExpansion.single(BasisIndex(0, n + m, 1)):
                return f"A_{n} A_{m}"
            e = basis_product(geom, TableKind.VECTOR_BRACKET, BasisIndex(-1, n, 1), BasisIndex(-1, m, 1))
            if e != KNExpansion.single(BasisIndex(-1, n + m, 1), m - n):
                return f"[e_{n}, e_{m}]"
            eA = basis_product(geom, TableKind.FIELD_ON_FORM, BasisIndex(-1, n, 1), BasisIndex(0, m, 1))
            if eA != KNExpansion.single(BasisIndex(0, n + m, 1), m):
                return f"e_{n}.A_{m}"
    return None


def _closure_records(geom, cfg, bounds):
    records = []
    window = tuple(cfg.window)
    for kind, tag in ((TableKind.FUNCTION_PRODUCT, "product"), (TableKind.VECTOR_BRACKET, "bracket")):
        for part in ("plus", "minus"):
            report = closure_check(geom, part, kind, window, bounds=bounds)
            records.append(CheckRecord(f"structure/closure/{part}/{tag}", status_of(report.closed),
                                       _witness_labels(report.witness)))
        # funções de ordem >= 1 e campos de ordem >= 1 em INFINITY
        depth = 1 if kind is TableKind.FUNCTION_PRODUCT else 0
        report = closure_check(geom, "minus", kind, window, SplitVariant.DEPTH, depth)
        records.append(CheckRecord(f"structure/closure/depth-{depth}/{tag}", status_of(report.closed),
                                   _witness_labels(report.witness)))
    return records


def _witness_labels(witness):
    if witness is None:
        return None
    return " / ".join(repr(x) for x in witness)


def _leibniz_witness(geom, rng, cfg):
    fields = _sample(rng, geom, -1, cfg, cfg.samples)
    funcs = _sample(rng, geom, 0, cfg, 2 * cfg.samples)
    for e, A, B in zip(fields, funcs[::2], funcs[1::2]):
        left = lie_derivative(e, multiply(A, B, geom), geom)
        right = multiply(lie_derivative(e, A, geom), B, geom) + multiply(A, lie_derivative(e, B, geom), geom)
        if left != right:
            return f"{e!r}, {A!r}, {B!r}"
    return None


def _jacobi_witness(geom, rng, cfg):
    fields = _sample(rng, geom, -1, cfg, 3 * cfg.samples)
    for x, y, z in zip(fields[::3], fields[1::3], fields[2::3]):
        total = (bracket(bracket(x, y, geom), z, geom) + bracket(bracket(y, z, geom), x, geom)
                 + bracket(bracket(z, x, geom), y, geom))
        if total:
            return f"{x!r}, {y!r}, {z!r}"
    return None


def suite_structure(cfg) -> List[CheckRecord]:
    geom = cfg.geometry
    N = geom.N
    rng = _rng(cfg)
    bounds = measure_bounds(geom, tuple(cfg.window))
    details = {"K": bounds.K, "L": bounds.L, "M": bounds.M, "window": list(bounds.window)}
    records = [CheckRecord("structure/bounds-stable",
                           Status.PASS if bounds.stable else Status.INCONCLUSIVE, None, details)]
    predicted_K = 2 + (-2) // N
    predicted_M = 3 + (-3) // N
    records.append(CheckRecord("structure/order-count", status_of(bounds.K <= predicted_K and bounds.L <= predicted_M
                                                                  and bounds.M <= predicted_M),
                               None, {"K_max": predicted_K, "LM_max": predicted_M}))
    if N == 1:
        witness = _classical_witness(geom, cfg)
        records.append(CheckRecord("structure/classical", status_of(witness is None), witness))
    witness = _leibniz_witness(geom, rng, cfg)
    records.append(CheckRecord("structure/leibniz", status_of(witness is None), witness, {"triples": cfg.samples}))
    witness = _jacobi_witness(geom, rng, cfg)
    records.append(CheckRecord("structure/jacobi", status_of(witness is None), witness, {"triples": cfg.samples}))
    records.extend(_closure_records(geom, cfg, bounds))
    return records


# --- cociclos ----------------------------------------------------------------------

def _sample(rng, geom, weight, cfg, count):
    pool = basis_indices(geom, weight, _degrees(cfg))
    return [KNExpansion.single(rng.choice(pool)) for _ in range(count)]


def _locality_record(name, gamma, cfg):
    window = check_locality(gamma, tuple(cfg.window))
    if window is None:
        return CheckRecord(name, Status.PASS, None, {"zero": True})
    status = Status.PASS if window.stable else Status.INCONCLUSIVE
    return CheckRecord(name, status, None, {"M1": window.M1, "M2": window.M2})


def _classical_cocycle_witness(geom, cfg):
    fun = GeometricCocycle(CocycleKind.FUNCTION, geom)
    vec = GeometricCocycle(CocycleKind.VECTOR, geom)
    mix = GeometricCocycle(CocycleKind.MIXING, geom)
    for n in _degrees(cfg):
        if fun.basis_value(BasisIndex(0, n, 1), BasisIndex(0, -n, 1)) != -n:
            return f"gamma^(A)(A_{n}, A_{-n})"
        if vec.basis_value(BasisIndex(-1, n, 1), BasisIndex(-1, -n, 1)) != n ** 3 - n:
            return f"gamma^(L)(e_{n}, e_{-n})"
        if mix.basis_value(BasisIndex(-1, n, 1), BasisIndex(0, -n, 1)) != n * (n + 1):
            return f"gamma^(m)(e_{n}, A_{-n})"
    return None


def suite_cocycles(cfg) -> List[CheckRecord]:
    geom = cfg.geometry
    rng = _rng(cfg)
    count = cfg.samples
    fun = GeometricCocycle(CocycleKind.FUNCTION, geom)
    vec = GeometricCocycle(CocycleKind.VECTOR, geom, cfg.R)
    mix = GeometricCocycle(CocycleKind.MIXING, geom, cfg.T)
    records = []

    fields = _sample(rng, geom, -1, cfg, 3 * count)
    funcs = _sample(rng, geom, 0, cfg, 3 * count)
    pairs = list(zip(funcs[::2], funcs[1::2]))
    report = check_antisymmetry(fun, pairs)
    records.append(CheckRecord("cocycles/A/antisymmetry", status_of(report.holds), _label(report.witness)))
    samples = list(zip(fields[:count], funcs[:count], funcs[count:2 * count]))
    inv = check_L_invariance(geom, samples)
    records.append(CheckRecord("cocycles/A/L-invariance", status_of(inv.derivation), None,
                               {"literal": inv.literal}))

    pairs = list(zip(fields[::2], fields[1::2]))
    report = check_antisymmetry(vec, pairs)
    records.append(CheckRecord("cocycles/L/antisymmetry", status_of(report.holds), _label(report.witness)))
    triples = list(zip(fields[:count], fields[count:2 * count], fields[2 * count:]))
    report = check_cocycle_identity(vec, lambda x, y: bracket(x, y, geom), triples)
    records.append(CheckRecord("cocycles/L/identity", status_of(report.holds), None, {"triples": report.checked}))

    gamma_d = DCocycle(geom, cfg.R, cfg.T, Fraction(0), Fraction(0), Fraction(1))
    d_triples = [((funcs[i], fields[i]), (funcs[count + i], fields[count + i]),
                  (funcs[2 * count + i], fields[2 * count + i])) for i in range(count)]
    report = check_cocycle_identity(gamma_d, lambda x, y: d_bracket(x, y, geom), d_triples)
    records.append(CheckRecord("cocycles/m/identity", status_of(report.holds), None, {"triples": report.checked}))

    for name, gamma in (("A", fun), ("L", vec), ("m", mix)):
        records.append(_locality_record(f"cocycles/{name}/locality", gamma, cfg))

    if geom.N == 1 and cfg.R.is_zero and cfg.T.is_zero:
        witness = _classical_cocycle_witness(geom, cfg)
        records.append(CheckRecord("cocycles/classical-values", status_of(witness is None), witness))

    if cfg.R2 is not None:
        other = GeometricCocycle(CocycleKind.VECTOR, geom, cfg.R2)
        phi = find_coboundary(vec, other, tuple(cfg.window))
        records.append(CheckRecord("cocycles/L/connection-independence", status_of(phi is not None)))
    if cfg.T2 is not None:
        other = GeometricCocycle(CocycleKind.MIXING, geom, cfg.T2)
        phi = find_coboundary(mix, other, tuple(cfg.window))
        records.append(CheckRecord("cocycles/m/connection-independence", status_of(phi is not None)))
    return records


# --- álgebra afim -------------------------------------------------------------------

def _random_matrix(rng, basis):
    acc = basis[0].scale(0)
    for x in basis:
        acc = acc + x.scale(rng.randint(-2, 2))
    return acc


def _random_current(rng, cfg, basis):
    geom = cfg.geometry
    pool = basis_indices(geom, 0, _degrees(cfg))
    terms = {}
    for _ in range(rng.randint(1, 2)):
        idx = rng.choice(pool)
        terms[idx] = _random_matrix(rng, basis)
    return CurrentElement(geom, cfg.tag, cfg.rank, terms)


def suite_affine(cfg) -> List[CheckRecord]:
    rng = _rng(cfg)
    geom = cfg.geometry
    basis = algebra_basis(cfg.tag, cfg.rank)
    count = cfg.samples
    triples = [tuple(AffineElement(_random_current(rng, cfg, basis)) for _ in range(3)) for _ in range(count)]
    report = check_jacobi(triples)
    records = [CheckRecord("affine/jacobi", status_of(report.holds), None, {"triples": report.checked})]

    fields = basis_indices(geom, -1, _degrees(cfg))

    def dg_random():
        return DgElement(_random_current(rng, cfg, basis), KNExpansion.single(rng.choice(fields)))

    dg_triples = [(dg_random(), dg_random(), dg_random()) for _ in range(count)]
    report = check_jacobi(dg_triples, lambda X, Y: dg_bracket(X, Y, cfg.R, cfg.T))
    records.append(CheckRecord("affine/jacobi-D_g", status_of(report.holds), None, {"triples": report.checked}))
    return records


# --- representação fermiônica -----------------------------------------------------------

@lru_cache(maxsize=None)
def partition_count(n: int, largest: int = None) -> int:
    """Número de partições de n com partes <= largest."""
    if largest is None:
        largest = n
    if n == 0:
        return 1
    return sum(partition_count(n - k, min(k, n - k)) for k in range(1, min(n, largest) + 1))


ENUMERATION_DEPTH = 6


def suite_wedge(cfg) -> List[CheckRecord]:
    rep = cfg.representation
    shape = rep.shape
    records = []
    # contagem por partições até o grau -6, ao menos
    depth = max(cfg.depth, ENUMERATION_DEPTH)
    counts = {d: homogeneous_dimension(cfg.charge, d) for d in range(depth + 1)}
    ok = all(counts[d] == partition_count(d) for d in counts)
    monomials = enumerate_monomials(cfg.charge, depth)
    nonpositive = all(monomial_degree(phi) <= 0 for phi in monomials)
    records.append(CheckRecord("wedge/enumeration", status_of(ok and nonpositive), None,
                               {"counts": [counts[d] for d in sorted(counts)]}))

    perm = tuple(reversed(range(shape.block)))
    bad = next((phi.label() for phi in monomials
                if block_degree(permute_monomial(phi, shape, perm), shape.block) != block_degree(phi, shape.block)),
               None)
    records.append(CheckRecord("wedge/enumeration-invariance", status_of(bad is None), bad))

    alpha = induced_alpha(rep, cfg.charge)
    gamma = GeometricCocycle(CocycleKind.FUNCTION, rep.geometry)
    basis = algebra_basis(rep.tag, rep.algebra_rank)
    indices = basis_indices(rep.geometry, 0, _degrees(cfg))
    witness = None
    checked = 0
    for x in basis:
        for y in basis:
            for i in indices:
                for j in indices:
                    A, B = KNExpansion.single(i), KNExpansion.single(j)
                    value = extract_cocycle(Current(x, A), Current(y, B), rep, cfg.charge)
                    checked += 1
                    if value != alpha * x.product_trace(y) * gamma.basis_value(i, j):
                        witness = witness or f"{x!r} {i.label} / {y!r} {j.label}: {value}"
    records.append(CheckRecord("wedge/current-cocycle", status_of(witness is None), witness,
                               {"alpha": str(alpha), "pairs": checked}))
    return records


# --- Sugawara e casimirs ----------------------------------------------------------------

def _sample_vectors(cfg):
    return [WedgeVector.basis(phi) for phi in enumerate_monomials(cfg.charge, cfg.depth)]


def suite_sugawara(cfg) -> List[CheckRecord]:
    rep = cfg.representation
    ctx = sugawara_context(rep, cfg.charge)
    geom = rep.geometry
    samples = _sample_vectors(cfg)
    basis = algebra_basis(rep.tag, rep.algebra_rank)
    records = []
    for e_idx in basis_indices(geom, -1, range(-2, 3)):
        e = KNExpansion.single(e_idx)
        witness = None
        checked = 0
        for A_idx in basis_indices(geom, 0, range(-3, 4)):
            A = KNExpansion.single(A_idx)
            for x in basis:
                report = check_fundamental(ctx, e, x, A, samples)
                checked += 1
                if not report.holds:
                    witness = witness or f"e_{e_idx.label}, {x!r} A_{A_idx.label}"
        records.append(CheckRecord(f"sugawara/fundamental/e_{e_idx.label}", status_of(witness is None), witness,
                                   {"levels": [str(p.level) for p in ctx.parts],
                                    "kappa": [str(p.kappa) for p in ctx.parts],
                                    "pairs": checked}))
    return records


def suite_pairwise(cfg) -> List[CheckRecord]:
    """[Delta(e_n), Delta(e_m)] como escalar em dois conjuntos disjuntos de amostras (só gl(1))."""
    rep = cfg.representation
    if rep.tag is not AlgebraTag.GL1:
        logger.info("bateria pairwise só se aplica a gl(1), não a %s", rep.tag.value)
        return []
    ctx = sugawara_context(rep, cfg.charge)
    records = []
    for n, m in ((1, -1), (2, -2), (2, -1)):
        e = KNExpansion.single(BasisIndex(-1, n, 1))
        f = KNExpansion.single(BasisIndex(-1, m, 1))
        report = check_pairwise_scalar(ctx, e, f)
        records.append(CheckRecord(f"pairwise/e_{n}/e_{m}", report.status, report.witness,
                                   {"scalar": str(report.scalar), "samples": report.checked}))
    return records


def suite_casimir(cfg) -> List[CheckRecord]:
    geom = cfg.geometry
    gamma = geometric_mixing_evaluator(geom, cfg.T)
    solution = casimir_solve(geom, gamma, tuple(cfg.window))
    records = [CheckRecord("casimir/solve", Status.PASS if solution.closed else Status.INCONCLUSIVE, None,
                           {"kernel_dimension": solution.kernel_dimension,
                            "genericity_failures": solution.genericity_failures})]
    rep = cfg.representation
    if rep.tag is not AlgebraTag.GL1:
        return records
    ctx = sugawara_context(rep, cfg.charge)
    candidate = gamma_extend(KNExpansion.single(BasisIndex(-1, 0, 1)), gamma, tuple(cfg.window), geom)
    x = MatrixElement.identity(1, rep.tag)
    samples = _sample_vectors(cfg)
    for k in range(1, min(3, -cfg.window[0]) + 1):
        report = check_delta_commutation(ctx, candidate, x, KNExpansion.single(BasisIndex(0, -k, 1)), samples)
        records.append(CheckRecord(f"casimir/semi-casimir/A_{-k}", report.status, report.witness,
                                   {"scalar": str(report.scalar)}))
    return records


SUITES: Dict[str, Callable] = {
    "duality": suite_duality,
    "structure": suite_structure,
    "cocycles": suite_cocycles,
    "affine": suite_affine,
    "wedge": suite_wedge,
    "sugawara": suite_sugawara,
    "casimir": suite_casimir,
    "pairwise": suite_pairwise,
}


def run_suite(name: str, cfg) -> List[CheckRecord]:
    if name == "all":
        records = []
        for suite in SUITES:
            records.extend(run_suite(suite, cfg))
        return records
    if name not in SUITES:
        raise UnknownVariant(f"bateria desconhecida: {name!r}")
    logger.info("executando bateria %s", name)
    records = SUITES[name](cfg)
    for r in records:
        if r.status is not Status.PASS:
            logger.warning("%s: %s", r.name, r.status.value)
    return records
