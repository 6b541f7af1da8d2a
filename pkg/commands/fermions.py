import logging

import click

from algebra.arith import format_rational
from algebra.basis import KNExpansion
from algebra.casimir import casimir_solve, gamma_extend, geometric_mixing_evaluator, representation_evaluator
from algebra.errors import ConfigError
from algebra.sugawara import apply_sugawara, sugawara_central_charge, sugawara_context
from algebra.wedge import Current, Field, WedgeVector, monomial_degree, operator_of, wedge_apply
from commands.jobconfig import load_config, param_index, param_matrix, param_monomial
from commands.middleware import handle_errors
from commands.saida import emit

logger = logging.getLogger(__name__)


def _generator(cfg):
    kind = cfg.param("generator", "current")
    if kind == "current":
        A = param_index(cfg, "A", 0, default=[0])
        return Current(param_matrix(cfg), KNExpansion.single(A)), f"{A.label}"
    if kind == "field":
        e = param_index(cfg, "e", -1, default=[0])
        return Field(KNExpansion.single(e)), e.label
    raise ConfigError(f"gerador desconhecido: {kind!r} (use current ou field)")


def _vector_json(v):
    return {"terms": v.to_json(), "degrees": v.degrees()}


@click.command("wedge-act")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@handle_errors
def cmd_wedge_act(config_path):
    """Aplica x(A_{n,p}) ou e_{n,p} a um monômio semi-infinito (params.monomial)."""
    cfg = load_config(config_path)
    rep = cfg.representation
    gen, label = _generator(cfg)
    phi = param_monomial(cfg)
    result = wedge_apply(operator_of(gen, rep), WedgeVector.basis(phi))
    emit({
        "generator": cfg.param("generator", "current"),
        "index": label,
        "monomial": phi.label(),
        "degree": monomial_degree(phi),
        "result": _vector_json(result),
    })


@click.command("sugawara")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@handle_errors
def cmd_sugawara(config_path):
    """L*_{k,r} aplicado a um monômio, com níveis, kappa e carga central do contexto."""
    cfg = load_config(config_path)
    ctx = sugawara_context(cfg.representation, cfg.charge)
    e = param_index(cfg, "e", -1, default=[0])
    phi = param_monomial(cfg)
    result = apply_sugawara(ctx, e.degree, e.puncture, WedgeVector.basis(phi))
    emit({
        "index": e.label,
        "monomial": phi.label(),
        "result": _vector_json(result),
        "parts": [{"name": p.name, "dimension": p.dimension, "level": format_rational(p.level),
                   "kappa": format_rational(p.kappa)} for p in ctx.parts],
        "central_charge": format_rational(sugawara_central_charge(ctx)),
    })


def solve_casimir(cfg):
    """Resolve o sistema dos casimirs com o cociclo escolhido em params.evaluator."""
    geom = cfg.geometry
    name = cfg.param("evaluator", "geometric")
    if name == "geometric":
        gamma = geometric_mixing_evaluator(geom, cfg.T)
    elif name == "representation":
        gamma = representation_evaluator(sugawara_context(cfg.representation, cfg.charge))
    else:
        raise ConfigError(f"avaliador desconhecido: {name!r} (use geometric ou representation)")
    return gamma, casimir_solve(geom, gamma, cfg.window)


@click.command("casimir")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@handle_errors
def cmd_casimir(config_path):
    """Núcleo do sistema triangular dos casimirs e, com params.extend, a extensão Gamma(e)."""
    cfg = load_config(config_path)
    gamma, solution = solve_casimir(cfg)
    report = {"punctures": cfg.geometry.key, "window": list(cfg.window), "solution": solution.to_json()}
    if "extend" in cfg.params:
        e = param_index(cfg, "extend", -1)
        candidate = gamma_extend(KNExpansion.single(e), gamma, cfg.window, cfg.geometry)
        report["extension"] = candidate.to_json()
    if solution.genericity_failures:
        logger.warning("diagonal nula em k = %s", solution.genericity_failures)
    emit(report)


comandos = (cmd_wedge_act, cmd_sugawara, cmd_casimir)
