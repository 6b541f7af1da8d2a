from sqlalchemy import Column, Integer, String, Boolean, DateTime, Text
from datetime import datetime
import json

from models.database import Base, db_session


class LimiteMedido(Base):
    __tablename__ = 'limites_medidos'

    id = Column(Integer, primary_key=True)
    geometria = Column(String(255), nullable=False, index=True)
    janela_min = Column(Integer, nullable=False)
    janela_max = Column(Integer, nullable=False)
    K = Column(Integer, nullable=False)
    L = Column(Integer, nullable=False)
    M = Column(Integer, nullable=False)
    estavel = Column(Boolean, default=True)
    data_medicao = Column(DateTime, default=datetime.utcnow)

    def to_dict(self):
        return {
            'geometria': self.geometria,
            'janela': [self.janela_min, self.janela_max],
            'K': self.K,
            'L': self.L,
            'M': self.M,
            'estavel': self.estavel,
        }


class ExecucaoVerificacao(Base):
    __tablename__ = 'execucoes_verificacao'

    id = Column(Integer, primary_key=True)
    suite = Column(String(50), nullable=False)
    config_digest = Column(String(64), nullable=False)
    aprovados = Column(Integer, default=0)
    falhas = Column(Integer, default=0)
    inconclusivos = Column(Integer, default=0)
    relatorio = Column(Text)  # JSON do relatorio completo
    data_execucao = Column(DateTime, default=datetime.utcnow)

    @property
    def sucesso(self):
        return self.falhas == 0


def registrar_limites(geometria, bounds):
    """Grava limites medidos (algebra.structure.Bounds) de uma geometria."""
    registro = LimiteMedido(
        geometria=geometria.key,
        janela_min=bounds.window[0],
        janela_max=bounds.window[1],
        K=bounds.K,
        L=bounds.L,
        M=bounds.M,
        estavel=bounds.stable,
    )
    db_session.add(registro)
    db_session.commit()
    return registro


def buscar_limites(geometria):
    """Medicao mais recente da geometria, ou None."""
    return (db_session.query(LimiteMedido)
            .filter_by(geometria=geometria.key)
            .order_by(LimiteMedido.id.desc())
            .first())


def registrar_execucao(suite, config_digest, registros):
    """Grava uma execucao de verify a partir das linhas do relatorio (dicts)."""
    contagem = {'PASS': 0, 'FAIL': 0, 'INCONCLUSIVE': 0}
    for r in registros:
        contagem[r['status']] += 1
    execucao = ExecucaoVerificacao(
        suite=suite,
        config_digest=config_digest,
        aprovados=contagem['PASS'],
        falhas=contagem['FAIL'],
        inconclusivos=contagem['INCONCLUSIVE'],
        relatorio=json.dumps(registros, sort_keys=True),
    )
    db_session.add(execucao)
    db_session.commit()
    return execucao
