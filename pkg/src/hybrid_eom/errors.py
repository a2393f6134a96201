"""Exception types raised by the simulator."""


class SimulationError(Exception):
    """Base class for all errors raised by hybrid_eom."""


class ParameterError(SimulationError, ValueError):
    pass


class NonPositiveRate(ParameterError):
    pass


class SigmaZOutOfRange(ParameterError):
    pass


class NegativeCoupling(ParameterError):
    pass


class NumericalError(SimulationError, ArithmeticError):
    pass


class NoConvergence(NumericalError):
    pass


class DegenerateLeadingCoefficient(NumericalError):
    pass


class DegeneratePoles(NumericalError):
    pass


class PoleHit(NumericalError):
    pass


class NonRealResult(NumericalError):
    pass


class InconsistentRoot(NumericalError):
    pass


class ImaginaryPrediction(NumericalError):
    pass


class TooFewPoints(SimulationError, ValueError):
    pass


class NotBistable(SimulationError):
    pass
