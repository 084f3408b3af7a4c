"""Exception hierarchy shared by every hclab module."""


class HCLabError(Exception):
    """Base class for all hclab errors."""


class NonConvergenceError(HCLabError):
    pass


class NonFiniteError(HCLabError):
    pass


class DivergenceSuspected(HCLabError):
    """Raised when an improper integral looks divergent."""


class InsufficientPoints(HCLabError):
    pass


class NonPositiveProfile(HCLabError):
    pass


class NonFiniteSphereConstant(HCLabError):
    pass


class NonIntegrable(HCLabError):
    pass


class ParamOutOfRange(HCLabError):
    pass


class UndefinedAtOrigin(HCLabError):
    pass


class DivergentNorm(HCLabError):
    pass


class NonIntegrableOnBall(HCLabError):
    pass


class DivergentPointValue(HCLabError):
    pass


class NonRadialInput(HCLabError):
    pass


class HypothesisViolated(HCLabError):
    pass


class ConfigParseError(HCLabError):
    pass
