"""Exception types raised by sepkit."""


class SepkitError(ValueError):
    """Base class for input and contract violations."""


class NotHermitian(SepkitError):
    pass


class DimMismatch(SepkitError):
    pass


class InvalidDensity(SepkitError):
    """Matrix is not a unit-trace positive semidefinite operator."""


class WeightError(SepkitError):
    pass


class NotNormalized(SepkitError):
    pass


class BadRank(SepkitError):
    pass


class NotCP(SepkitError):
    pass


class NotHermitianPreserving(SepkitError):
    pass


class WitnessIsPSD(SepkitError):
    """No non-CP certificate exists: the witness operator is positive semidefinite."""


class DegenerateBlocks(SepkitError):
    pass


class DimCap(SepkitError):
    """Problem size exceeds the desk-scale cap of the separable-set optimizer."""


class NoConvergence(RuntimeError):
    pass
