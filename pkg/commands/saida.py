"""Saída determinística: JSON com chaves ordenadas e tabelas pandas."""
import json

import click
import pandas as pd


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def emit(obj, out=None):
    """Escreve no arquivo `out` ou no stdout."""
    text = dumps(obj) + "\n"
    if out is None:
        click.echo(text, nl=False)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def emit_table(rows, columns):
    frame = pd.DataFrame(rows, columns=columns)
    click.echo(frame.to_string(index=False))
