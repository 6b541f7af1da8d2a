import click

from algebra.errors import ConfigError
from algebra.structure import TableKind, basis_product, measure_bounds
from commands.jobconfig import load_config, param_index
from commands.middleware import handle_errors
from commands.saida import emit


def _bounds_json(geom):
    b = measure_bounds(geom)
    return {"K": b.K, "L": b.L, "M": b.M, "stable": b.stable}


@click.command("mult")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@handle_errors
def cmd_mult(config_path):
    """A_{n,p} * A_{m,q} expandido na base (params.left, params.right)."""
    cfg = load_config(config_path)
    geom = cfg.geometry
    i = param_index(cfg, "left", 0)
    j = param_index(cfg, "right", 0)
    value = basis_product(geom, TableKind.FUNCTION_PRODUCT, i, j)
    emit({"left": i.label, "right": j.label, "value": value.to_json(), "bounds": _bounds_json(geom)})


@click.command("bracket")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@handle_errors
def cmd_bracket(config_path):
    """
    [e_{n,p}, e_{m,q}]; com params.on = lambda, a ação e_{n,p} . f^lambda_{m,q}.
    """
    cfg = load_config(config_path)
    geom = cfg.geometry
    i = param_index(cfg, "left", -1)
    on = cfg.param("on")
    if on is None:
        j = param_index(cfg, "right", -1)
        value = basis_product(geom, TableKind.VECTOR_BRACKET, i, j)
    else:
        if isinstance(on, bool) or not isinstance(on, int):
            raise ConfigError(f"params.on deve ser um peso inteiro, recebido {on!r}")
        j = param_index(cfg, "right", on)
        value = basis_product(geom, TableKind.FIELD_ON_FORM, i, j)
    emit({"left": i.label, "right": j.label, "value": value.to_json(), "bounds": _bounds_json(geom)})


comandos = (cmd_mult, cmd_bracket)
