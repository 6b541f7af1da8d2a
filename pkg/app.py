import logging
import sys

import click

from commands import base, cociclos, estrutura, exportacao, fermions, verificacao
from config import log_level
from models.database import db_session

MODULOS = (base, estrutura, cociclos, fermions, verificacao, exportacao)


def create_app():
    # logs no stderr; o stdout fica reservado ao JSON deterministico
    logging.basicConfig(level=log_level(), stream=sys.stderr,
                        format='%(asctime)s %(levelname)s %(name)s: %(message)s')

    @click.group()
    @click.pass_context
    def app(ctx):
        """Álgebras de Krichever-Novikov de gênero zero com aritmética exata."""
        ctx.call_on_close(db_session.remove)

    for modulo in MODULOS:
        for comando in modulo.comandos:
            app.add_command(comando)
    return app


app = create_app()

if __name__ == '__main__':
    app()
