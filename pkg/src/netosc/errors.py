"""Exception hierarchy shared by every netosc module."""


class NetOscError(Exception):
    """Base class for all errors raised by netosc."""


# graph construction / matrix derivation
class GraphError(NetOscError, ValueError):
    pass


class IndexOutOfRange(GraphError):
    pass


class NonPositiveWeight(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class SelfLoop(GraphError):
    pass


class TooFewNodes(GraphError):
    pass


class ZeroDegreeNode(GraphError):
    pass


class NotSymmetric(NetOscError, ValueError):
    pass


class DimensionMismatch(NetOscError, ValueError):
    pass


class NonDiagonalSqrtD(NetOscError, ValueError):
    pass


# integration
class NonFiniteBlowup(NetOscError, ArithmeticError):
    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


class KernelVelocity(NetOscError, ValueError):
    pass


class TooFewSamples(NetOscError, ValueError):
    pass


# echo-chamber analysis
class AmplitudeUnderflow(NetOscError, ValueError):
    pass


class NonPositiveParameter(NetOscError, ValueError):
    pass


class NonPositiveDegree(NonPositiveParameter):
    pass


class NoLockWindow(NetOscError, ValueError):
    pass


# configuration
class ParseError(NetOscError, ValueError):
    pass


class ValidationError(NetOscError, ValueError):
    def __init__(self, field, constraint):
        self.field = field
        self.constraint = constraint
        super().__init__(f"{field}: {constraint}")
