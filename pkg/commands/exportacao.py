import click

from algebra.arith import format_rational
from algebra.errors import ConfigError
from algebra.structure import TableKind, build_structure_table
from algebra.sugawara import sugawara_coeff
from commands.cociclos import build_cocycle, table_rows
from commands.fermions import solve_casimir
from commands.jobconfig import load_config
from commands.middleware import handle_errors
from commands.saida import emit

TABLE_KINDS = {kind.value: kind for kind in TableKind}


def export_structure_table(cfg):
    name = cfg.param("kind", TableKind.FUNCTION_PRODUCT.value)
    if name not in TABLE_KINDS:
        raise ConfigError(f"tabela desconhecida: {name!r} (use {sorted(TABLE_KINDS)})")
    return build_structure_table(cfg.geometry, TABLE_KINDS[name], cfg.window, cfg.weight).to_json()


def export_cocycle_table(cfg):
    gamma = build_cocycle(cfg)
    rows = table_rows(gamma, cfg.window)
    return {"kind": gamma.kind.value, "punctures": cfg.geometry.key, "window": list(cfg.window),
            "entries": [{"left": a, "right": b, "value": v} for a, b, v in rows]}


def export_sugawara_coeffs(cfg):
    """l^{(n,p),(m,s)}_{(k,r)} não nulos com k, n, m na janela."""
    geom = cfg.geometry
    degrees = range(cfg.window[0], cfg.window[1] + 1)
    points = range(1, geom.N + 1)
    entries = []
    for k in degrees:
        for r in points:
            for n in degrees:
                for p in points:
                    for m in degrees:
                        for s in points:
                            value = sugawara_coeff(geom, k, r, n, p, m, s)
                            if value:
                                entries.append({"k": f"{k},{r}", "n": f"{n},{p}", "m": f"{m},{s}",
                                                "value": format_rational(value)})
    return {"punctures": geom.key, "window": list(cfg.window), "entries": entries}


def export_casimir_basis(cfg):
    _, solution = solve_casimir(cfg)
    return {"punctures": cfg.geometry.key, "window": list(cfg.window), "solution": solution.to_json()}


EXPORTS = {
    "structure-table": export_structure_table,
    "cocycle-table": export_cocycle_table,
    "sugawara-coeffs": export_sugawara_coeffs,
    "casimir-basis": export_casimir_basis,
}


@click.command("export")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--what", "what", type=click.Choice(sorted(EXPORTS)), required=True)
@click.option("--out", "out", type=click.Path(dir_okay=False), default=None)
@handle_errors
def cmd_export(config_path, what, out):
    """Exporta uma tabela em JSON (racionais "p/q", chaves ordenadas)."""
    cfg = load_config(config_path)
    emit(EXPORTS[what](cfg), out)


comandos = (cmd_export,)
