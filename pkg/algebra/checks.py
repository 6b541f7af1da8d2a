"""Veredictos e registros das verificações."""
import enum
from dataclasses import dataclass, field
from typing import Any, Optional


class Status(enum.Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class IdentityReport:
    """Resultado de uma identidade conferida em amostras; verdadeiro se valeu em todas."""

    holds: bool
    witness: Optional[Any] = None
    checked: int = 0

    def __bool__(self):
        return self.holds


@dataclass
class CheckRecord:
    name: str
    status: Status
    witness: Any = None
    details: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "name": self.name,
            "status": self.status.value,
            "witness": self.witness,
            "details": self.details,
        }


def status_of(ok: bool) -> Status:
    return Status.PASS if ok else Status.FAIL


@dataclass(frozen=True)
class ScalarReport:
    """Operador conferido como múltiplo escalar da identidade num conjunto de amostras."""

    status: Status
    scalar: Optional[Any] = None
    witness: Optional[Any] = None
    checked: int = 0

    def __bool__(self):
        return self.status is Status.PASS
