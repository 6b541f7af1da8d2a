import logging

import click

from algebra.checks import Status
from algebra.structure import measure_bounds
from algebra.suites import SUITES, run_suite
from commands.jobconfig import load_config
from commands.middleware import EXIT_CHECK_FAILED, handle_errors
from commands.saida import emit
from config import record_runs_enabled

logger = logging.getLogger(__name__)

SUITE_NAMES = sorted(SUITES) + ["all"]


def _persistir(suite, cfg, registros, bounds):
    from models.database import init_db
    from models.registro import buscar_limites, registrar_execucao, registrar_limites

    init_db()
    if buscar_limites(cfg.geometry) is None:
        registrar_limites(cfg.geometry, bounds)
    execucao = registrar_execucao(suite, cfg.digest, registros)
    logger.info("execucao %s gravada (%d falhas)", execucao.id, execucao.falhas)


@click.command("verify")
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None)
@click.option("--suite", "suite", default="all", help="Uma de: " + ", ".join(SUITE_NAMES))
@click.option("--out", "out", type=click.Path(dir_okay=False), default=None)
@handle_errors
def cmd_verify(config_path, suite, out):
    """Roda as baterias de verificação; sai com 1 se algum registro for FAIL."""
    # 1. Valida a bateria antes de qualquer calculo
    if suite not in SUITE_NAMES:
        raise click.UsageError(f"bateria desconhecida: {suite!r} (use {', '.join(SUITE_NAMES)})")
    cfg = load_config(config_path)

    # 2. Executa
    records = run_suite(suite, cfg)
    registros = [r.to_dict() for r in records]
    bounds = measure_bounds(cfg.geometry)
    resumo = {s.value: sum(1 for r in records if r.status is s) for s in Status}

    # 3. Relatorio
    emit({
        "suite": suite,
        "punctures": cfg.geometry.key,
        "config_digest": cfg.digest,
        "bounds": {"K": bounds.K, "L": bounds.L, "M": bounds.M, "stable": bounds.stable},
        "records": registros,
        "summary": resumo,
    }, out)

    # 4. Persistencia opcional (nao altera o relatorio)
    if record_runs_enabled():
        _persistir(suite, cfg, registros, bounds)

    if resumo[Status.FAIL.value]:
        raise SystemExit(EXIT_CHECK_FAILED)


comandos = (cmd_verify,)
