"""Exception hierarchy for realtheta."""


class RealThetaError(Exception):
    """Base class for all errors raised by this package."""


class InadmissibleType(RealThetaError, ValueError):
    """A real or topological type violates its admissibility constraints."""


class NotSymmetric(RealThetaError, ValueError):
    pass


class DimensionMismatch(RealThetaError, ValueError):
    pass


class NotUnimodular(RealThetaError, ValueError):
    pass


class CongruenceViolated(RealThetaError, ValueError):
    """``a M a^T`` is not congruent to ``M`` modulo 2."""


class NotSymplectic(RealThetaError, ValueError):
    pass


class TypeMismatch(RealThetaError, ValueError):
    """Objects attached to different real types were combined."""


class NotInSiegel(RealThetaError, ValueError):
    """Matrix is not in the Siegel upper-half space (or the requested real subspace)."""


class SamplingExhausted(RealThetaError, RuntimeError):
    def __init__(self, message, cap=None, seed=None):
        super().__init__(message)
        self.cap = cap
        self.seed = seed


class DiasymmetricInput(RealThetaError, ValueError):
    """Operation only defined for orthosymmetric (epsilon == 1) types."""


class RadiusCapHit(RealThetaError, RuntimeError):
    """Truncation radius needed for the requested tolerance exceeds the cap.

    ``value`` carries the best available :class:`~realtheta.theta.ThetaValue`
    (with its honest error bound) when raised from an evaluation routine.
    """

    def __init__(self, message, radius=None, bound=None, value=None):
        super().__init__(message)
        self.radius = radius
        self.bound = bound
        self.value = value


class RealityViolated(RealThetaError, ArithmeticError):
    """A value that must be real came out with a significant imaginary part."""


class InvalidQ(RealThetaError, ValueError):
    pass


class PreconditionViolated(RealThetaError, ValueError):
    pass


class NonIntegralDoubledRealPart(RealThetaError, ValueError):
    pass


class NotStandardForm(RealThetaError, ValueError):
    """Critical-type input whose doubled real part is not the standard reflection matrix."""


class CriterionNotApplicable(RealThetaError, ValueError):
    """The real-points criterion needs more data (or a larger genus) than supplied."""
