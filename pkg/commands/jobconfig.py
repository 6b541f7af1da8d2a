"""Leitura do arquivo JSON de configuração do job (--config)."""
import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Optional, Tuple

from algebra.affine import AlgebraTag, MatrixElement
from algebra.arith import RationalFunction, parse_rational, parse_rational_function
from algebra.basis import BasisIndex, Geometry
from algebra.errors import ConfigError, IndexOutOfRange, InvariantViolation
from algebra.wedge import RepresentationData, WedgeMonomial, normalizing_matrix

# algebra -> (tag, posto)
ALGEBRAS = {
    "gl1": (AlgebraTag.GL1, 1),
    "sl2": (AlgebraTag.SL, 2),
    "gl2": (AlgebraTag.GL, 2),
}

_KNOWN = {"punctures", "weight", "window", "algebra", "r", "dim", "R", "T", "R2", "T2",
          "connection_form", "depth", "charge", "seed", "samples", "params"}


@dataclass(frozen=True)
class JobConfig:
    punctures: Tuple[Fraction, ...] = (Fraction(0),)
    weight: int = 0
    window: Tuple[int, int] = (-2, 2)
    algebra: str = "gl1"
    r: int = 1
    dim: Optional[int] = None
    R: RationalFunction = field(default_factory=lambda: RationalFunction.constant(0))
    T: RationalFunction = field(default_factory=lambda: RationalFunction.constant(0))
    R2: Optional[RationalFunction] = None
    T2: Optional[RationalFunction] = None
    connection_form: Optional[Tuple[Tuple[RationalFunction, ...], ...]] = None
    depth: int = 3
    charge: int = 0
    seed: int = 0
    samples: int = 20
    params: Dict[str, Any] = field(default_factory=dict, compare=False, hash=False)
    source: str = field(default="{}", compare=False, repr=False)

    @property
    def geometry(self) -> Geometry:
        return Geometry(self.punctures)

    @property
    def tag(self) -> AlgebraTag:
        return ALGEBRAS[self.algebra][0]

    @property
    def rank(self) -> int:
        return ALGEBRAS[self.algebra][1]

    @property
    def representation(self) -> RepresentationData:
        return _representation(self)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.source.encode("utf-8")).hexdigest()

    def param(self, name, default=None):
        return self.params.get(name, default)


_REPRESENTATIONS = {}


def _representation(cfg: JobConfig) -> RepresentationData:
    key = (cfg.punctures, cfg.algebra, cfg.r, cfg.dim, cfg.connection_form)
    if key not in _REPRESENTATIONS:
        _REPRESENTATIONS[key] = RepresentationData(
            cfg.geometry, r=cfg.r, dim=cfg.dim or cfg.rank, tag=cfg.tag,
            connection_form=cfg.connection_form, algebra_rank=cfg.rank)
    return _REPRESENTATIONS[key]


def _int(data, name, default):
    value = data.get(name, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"'{name}' deve ser inteiro, recebido {value!r}")
    return value


def _function(data, name, default="0"):
    value = data.get(name, default)
    if value is None:
        return None
    return parse_rational_function(value)


def config_from_dict(data: Dict[str, Any], source: Optional[str] = None) -> JobConfig:
    if not isinstance(data, dict):
        raise ConfigError("a configuração deve ser um objeto JSON")
    unknown = set(data) - _KNOWN
    if unknown:
        raise ConfigError(f"chaves desconhecidas: {sorted(unknown)}")
    punctures = data.get("punctures", ["0"])
    if not isinstance(punctures, list):
        raise ConfigError("'punctures' deve ser uma lista de racionais \"p/q\"")
    punctures = tuple(parse_rational(p) for p in punctures)
    window = data.get("window", [-2, 2])
    if (not isinstance(window, list) or len(window) != 2
            or not all(isinstance(w, int) and not isinstance(w, bool) for w in window)):
        raise ConfigError("'window' deve ser [min, max] inteiros")
    if window[0] > window[1]:
        raise ConfigError(f"janela vazia: {window}")
    algebra = data.get("algebra", "gl1")
    if algebra not in ALGEBRAS:
        raise ConfigError(f"álgebra desconhecida: {algebra!r} (use {sorted(ALGEBRAS)})")
    form = data.get("connection_form")
    if form is not None:
        if not isinstance(form, list) or not all(isinstance(row, list) for row in form):
            raise ConfigError("'connection_form' deve ser uma matriz de strings")
        form = tuple(tuple(parse_rational_function(w) for w in row) for row in form)
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ConfigError("'params' deve ser um objeto")
    dim = data.get("dim")
    if dim is not None and (isinstance(dim, bool) or not isinstance(dim, int)):
        raise ConfigError("'dim' deve ser inteiro")
    cfg = JobConfig(
        punctures=punctures,
        weight=_int(data, "weight", 0),
        window=(window[0], window[1]),
        algebra=algebra,
        r=_int(data, "r", 1),
        dim=dim,
        R=_function(data, "R"),
        T=_function(data, "T"),
        R2=_function(data, "R2", None),
        T2=_function(data, "T2", None),
        connection_form=form,
        depth=_int(data, "depth", 3),
        charge=_int(data, "charge", 0),
        seed=_int(data, "seed", 0),
        samples=_int(data, "samples", 20),
        params=params,
        source=source if source is not None else json.dumps(data, sort_keys=True),
    )
    cfg.geometry  # valida os pontos
    return cfg


def load_config(path: Optional[str]) -> JobConfig:
    """Sem caminho usa a configuração padrão (N = 1, gl(1))."""
    if path is None:
        return config_from_dict({})
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"JSON inválido em {path}: {e}") from e
    return config_from_dict(data, text)


# --- parametros especificos de cada comando ---------------------------------------

def param_index(cfg: JobConfig, name: str, weight: int, default=None) -> BasisIndex:
    """Lê [n, p] (p opcional, padrão 1) de params[name]."""
    value = cfg.param(name, default)
    if value is None:
        raise ConfigError(f"parâmetro obrigatório ausente: params.{name}")
    if isinstance(value, int) and not isinstance(value, bool):
        value = [value]
    if (not isinstance(value, list) or not 1 <= len(value) <= 2
            or not all(isinstance(v, int) and not isinstance(v, bool) for v in value)):
        raise ConfigError(f"params.{name} deve ser [n] ou [n, p], recebido {value!r}")
    n, p = (value + [1])[:2]
    if not 1 <= p <= len(cfg.punctures):
        raise IndexOutOfRange(f"params.{name}: ponto {p} fora de 1..{len(cfg.punctures)}")
    return BasisIndex(weight, n, p)


def param_matrix(cfg: JobConfig, name: str = "x") -> MatrixElement:
    value = cfg.param(name)
    if value is None:
        return normalizing_matrix(cfg.representation)
    if not isinstance(value, list) or not all(isinstance(row, list) for row in value):
        raise ConfigError(f"params.{name} deve ser uma matriz de racionais \"p/q\"")
    return MatrixElement([[parse_rational(v) for v in row] for row in value], cfg.tag)


def param_monomial(cfg: JobConfig, name: str = "monomial") -> WedgeMonomial:
    """{"charge": c, "prefix": [...]}; sem o parâmetro usa o vácuo da carga do job."""
    value = cfg.param(name)
    if value is None:
        return WedgeMonomial.vacuum(cfg.charge)
    if not isinstance(value, dict) or set(value) - {"charge", "prefix"}:
        raise ConfigError(f"params.{name} deve ser {{\"charge\": c, \"prefix\": [...]}}")
    prefix = value.get("prefix", [])
    if not isinstance(prefix, list) or not all(isinstance(i, int) and not isinstance(i, bool) for i in prefix):
        raise ConfigError(f"params.{name}.prefix deve ser uma lista de inteiros")
    try:
        return WedgeMonomial(value.get("charge", cfg.charge), tuple(prefix))
    except InvariantViolation as e:
        raise ConfigError(str(e)) from e
