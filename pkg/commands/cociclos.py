import click

from algebra.arith import format_rational
from algebra.cocycles import CocycleKind, GeometricCocycle, check_locality, cocycle_table
from algebra.errors import ConfigError
from commands.jobconfig import load_config, param_index
from commands.middleware import handle_errors
from commands.saida import emit, emit_table

KINDS = {kind.value: kind for kind in CocycleKind}


def build_cocycle(cfg) -> GeometricCocycle:
    """params.kind em A, L ou m; R e T do job entram em L e m."""
    name = cfg.param("kind", "A")
    if name not in KINDS:
        raise ConfigError(f"cociclo desconhecido: {name!r} (use {sorted(KINDS)})")
    kind = KINDS[name]
    connection = {CocycleKind.VECTOR: cfg.R, CocycleKind.MIXING: cfg.T}.get(kind)
    if connection is None:
        return GeometricCocycle(kind, cfg.geometry)
    return GeometricCocycle(kind, cfg.geometry, connection)


def table_rows(gamma, window):
    return [[i.label, j.label, format_rational(v)] for i, j, v in cocycle_table(gamma, window)]


@click.command("cocycle")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--table", is_flag=True)
@handle_errors
def cmd_cocycle(config_path, table):
    """Valor do cociclo num par da base; sem params.left/right, os valores não nulos da janela."""
    cfg = load_config(config_path)
    gamma = build_cocycle(cfg)
    wi, wj = gamma.weights
    if "left" in cfg.params or "right" in cfg.params:
        i = param_index(cfg, "left", wi)
        j = param_index(cfg, "right", wj)
        emit({"kind": gamma.kind.value, "left": i.label, "right": j.label,
              "value": format_rational(gamma.basis_value(i, j))})
        return

    rows = table_rows(gamma, cfg.window)
    if table:
        emit_table(rows, ["esquerda", "direita", "valor"])
        return
    locality = check_locality(gamma, cfg.window)
    emit({
        "kind": gamma.kind.value,
        "punctures": cfg.geometry.key,
        "window": list(cfg.window),
        "locality": None if locality is None else
        {"M1": locality.M1, "M2": locality.M2, "stable": locality.stable},
        "entries": [{"left": a, "right": b, "value": v} for a, b, v in rows],
    })


comandos = (cmd_cocycle,)
