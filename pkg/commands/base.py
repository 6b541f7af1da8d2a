import logging

import click

from algebra.arith import INFINITY, format_rational
from algebra.basis import basis_indices, kn_pairing, make_basis, order_table
from commands.jobconfig import load_config, param_index
from commands.middleware import handle_errors
from commands.saida import emit, emit_table

logger = logging.getLogger(__name__)


def _orders(elem):
    return {("infinity" if at is INFINITY else str(at)): o for at, o in order_table(elem).items()}


@click.command("basis")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--table", is_flag=True, help="Tabela legível em vez de JSON.")
@handle_errors
def cmd_basis(config_path, table):
    """Lista os f^lambda_{n,p} da janela com suas ordens."""
    cfg = load_config(config_path)
    geom = cfg.geometry
    degrees = range(cfg.window[0], cfg.window[1] + 1)
    elements = []
    for idx in basis_indices(geom, cfg.weight, degrees):
        elem = make_basis(geom, idx.weight, idx.degree, idx.puncture)
        elements.append({"index": idx.label, "function": str(elem.func), "orders": _orders(elem)})
    logger.info("%d elementos de peso %d", len(elements), cfg.weight)

    if table:
        points = [str(p) for p in range(1, geom.N + 1)] + ["infinity"]
        rows = [[e["index"], e["function"]] + [e["orders"][p] for p in points] for e in elements]
        emit_table(rows, ["indice", "funcao"] + [f"ord_{p}" for p in points])
        return
    emit({"punctures": geom.key, "weight": cfg.weight, "window": list(cfg.window), "elements": elements})


@click.command("pair")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--table", is_flag=True)
@handle_errors
def cmd_pair(config_path, table):
    """Emparelhamento KN <f^lambda_{n,p}, f^{1-lambda}_{m,q}>; sem params, a matriz na janela."""
    cfg = load_config(config_path)
    geom = cfg.geometry
    lam = cfg.weight
    if "left" in cfg.params or "right" in cfg.params:
        i = param_index(cfg, "left", lam)
        j = param_index(cfg, "right", 1 - lam)
        value = kn_pairing(make_basis(geom, lam, i.degree, i.puncture),
                           make_basis(geom, 1 - lam, j.degree, j.puncture))
        emit({"left": i.label, "right": j.label, "value": format_rational(value)})
        return

    degrees = range(cfg.window[0], cfg.window[1] + 1)
    rows = []
    for i in basis_indices(geom, lam, degrees):
        for j in basis_indices(geom, 1 - lam, [-n for n in degrees]):
            value = kn_pairing(make_basis(geom, lam, i.degree, i.puncture),
                               make_basis(geom, 1 - lam, j.degree, j.puncture))
            if value:
                rows.append([i.label, j.label, format_rational(value)])
    if table:
        emit_table(rows, ["esquerda", "direita", "valor"])
        return
    emit({"punctures": geom.key, "weight": lam,
          "entries": [{"left": a, "right": b, "value": v} for a, b, v in rows]})


comandos = (cmd_basis, cmd_pair)
