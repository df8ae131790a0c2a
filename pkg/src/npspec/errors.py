"""Exception hierarchy shared by every module."""


class NPSpecError(Exception):
    """Base class for all library errors."""


class DomainError(NPSpecError, ValueError):
    pass


class DegenerateCurve(NPSpecError):
    pass


class OutOfStrip(NPSpecError):
    pass


class CoincidentPoints(NPSpecError):
    pass


class PoleEncountered(NPSpecError):
    pass


class NotMeanZero(NPSpecError, ValueError):
    pass


class DimensionMismatch(NPSpecError, ValueError):
    pass


class TrivialEigNotFound(NPSpecError):
    pass


class NonRealSpectrum(NPSpecError):
    pass


class IndefiniteForm(NPSpecError):
    pass


class UnsupportedKind(NPSpecError):
    pass


class DegenerateSeries(NPSpecError):
    pass


class RootFindingFailure(NPSpecError):
    pass


class InsufficientDecay(NPSpecError):
    pass


class InsufficientRange(NPSpecError):
    pass


class TooFewPairs(NPSpecError):
    pass
