import json
import logging
from functools import wraps

import click

from algebra.errors import ConfigError, KNError

logger = logging.getLogger(__name__)

# codigos de saida do CLI
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _fail(code, error, message):
    click.echo(json.dumps({"error": error, "message": message}, sort_keys=True, ensure_ascii=False), err=True)
    raise SystemExit(code)


def handle_errors(f):
    """Traduz as excecoes do motor em codigo de saida + corpo JSON no stderr."""
    @wraps(f)
    def decorated(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (ConfigError, click.UsageError) as e:
            _fail(EXIT_USAGE, type(e).__name__, str(e))
        except OSError as e:
            _fail(EXIT_IO, type(e).__name__, str(e))
        except KNError as e:
            if isinstance(e, ValueError):
                _fail(EXIT_USAGE, type(e).__name__, str(e))
            logger.error("verificacao falhou: %s", e)
            _fail(EXIT_CHECK_FAILED, type(e).__name__, str(e))
        except ValueError as e:
            _fail(EXIT_USAGE, type(e).__name__, str(e))
    return decorated
