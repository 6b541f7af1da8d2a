"""Hierarquia de exceções do motor de álgebras KN."""


class KNError(Exception):
    """Erro base de todo o pacote."""


class ConfigError(KNError, ValueError):
    pass


class IndexOutOfRange(KNError, ValueError):
    pass


class WeightMismatch(KNError, ValueError):
    pass


class GeometryMismatch(KNError, ValueError):
    pass


class SupportViolation(KNError, ValueError):
    """Polo fora do conjunto de pontos marcados."""


class ShapeMismatch(KNError, ValueError):
    pass


class UnknownVariant(KNError, ValueError):
    pass


class InvariantViolation(KNError):
    """Uma identidade que deveria valer exatamente falhou."""


class AlmostGradingViolation(InvariantViolation):
    pass


class NonScalarDefect(InvariantViolation):
    pass


class ChargeMixing(InvariantViolation):
    pass


class CriticalLevel(KNError):
    """Nível crítico c + kappa = 0: Sugawara não está definido."""


class SingularDiagonal(KNError):
    def __init__(self, k, message=None):
        self.k = k
        super().__init__(message or f"diagonal nula em k={k}")


class TruncationInsufficient(KNError):
    pass
