class WcoError(Exception):
    """Base class for every error raised by wcolab."""


class PoleHit(WcoError, ArithmeticError):
    pass


class NotSelfMap(WcoError, ValueError):
    pass


class BadFixedPoint(WcoError, ValueError):
    pass


class BadTranslation(WcoError, ValueError):
    pass


class NotParabolic(WcoError):
    pass


class NotAutomorphism(WcoError):
    pass


class IndexBeyondStoredWeights(WcoError, IndexError):
    pass


class PointNotInDisk(WcoError, ValueError):
    pass


class ConvergenceRadiusTooSmall(WcoError, ArithmeticError):
    pass


class TailTooLarge(WcoError, ArithmeticError):
    pass


class BlockTooLarge(WcoError, ValueError):
    pass


class NotHermitian(WcoError, ValueError):
    pass


class HypothesesNotMet(WcoError):
    pass


class NotParabolicNonAutomorphism(WcoError):
    pass


class NotApplicable(WcoError):
    pass


class WrongMapClass(WcoError):
    pass


class ZeroNearContour(WcoError, ArithmeticError):
    pass


class NonIntegralWinding(WcoError, ArithmeticError):
    pass


class PowerIterationStalled(WcoError, ArithmeticError):
    """Power iteration ran out of steps; ``estimate`` is the last lower bound and ``vector`` its iterate."""

    def __init__(self, estimate, vector) -> None:
        self.estimate = estimate
        self.vector = vector
        super().__init__(f"power iteration stalled after {estimate.iterations} steps at {estimate.value:.12g}")


class SchemaError(WcoError, ValueError):
    """A scenario document does not match the schema; ``path`` names the field."""

    def __init__(self, path: str, message: str) -> None:
        self.path = path
        super().__init__(f"{path}: {message}")


class ConfigError(WcoError, ValueError):
    pass


class UnboundedSymbol(WcoError, ValueError):
    pass
