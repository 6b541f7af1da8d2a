import os

_VERDADEIRO = ('1', 'true', 'sim', 'yes', 'on')


def log_level():
    # KN_LOG_LEVEL: nivel do logger raiz (stderr); padrao WARNING
    return os.environ.get('KN_LOG_LEVEL', 'WARNING').upper()


def record_runs_enabled():
    # KN_RECORD_RUNS: grava as execucoes de verify no banco
    return os.environ.get('KN_RECORD_RUNS', '').lower() in _VERDADEIRO


def database_url():
    return os.environ.get('KN_DATABASE_URL', 'sqlite://')
