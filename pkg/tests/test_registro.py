import pytest

from algebra.structure import measure_bounds
from models.database import db_session, init_db
from models.registro import (
    ExecucaoVerificacao, LimiteMedido, buscar_limites, registrar_execucao, registrar_limites,
)
from conftest import GEOMETRIES


@pytest.fixture
def banco():
    init_db()
    yield db_session
    db_session.query(LimiteMedido).delete()
    db_session.query(ExecucaoVerificacao).delete()
    db_session.commit()
    db_session.remove()


def test_limites_ida_e_volta(banco):
    geom = GEOMETRIES[2]
    assert buscar_limites(geom) is None
    bounds = measure_bounds(geom)
    registrar_limites(geom, bounds)
    salvo = buscar_limites(geom)
    assert salvo.to_dict()["geometria"] == "0,1"
    assert (salvo.K, salvo.L, salvo.M) == (bounds.K, bounds.L, bounds.M)
    assert salvo.to_dict()["janela"] == list(bounds.window)
    assert buscar_limites(GEOMETRIES[1]) is None


def test_registrar_execucao(banco):
    registros = [
        {"name": "a", "status": "PASS", "witness": None, "details": {}},
        {"name": "b", "status": "INCONCLUSIVE", "witness": "cauda", "details": {}},
        {"name": "c", "status": "PASS", "witness": None, "details": {}},
    ]
    execucao = registrar_execucao("casimir", "0" * 64, registros)
    assert (execucao.aprovados, execucao.falhas, execucao.inconclusivos) == (2, 0, 1)
    assert execucao.sucesso

    falha = registrar_execucao("wedge", "0" * 64, registros + [{"name": "d", "status": "FAIL"}])
    assert not falha.sucesso
    assert db_session.query(ExecucaoVerificacao).count() == 2
