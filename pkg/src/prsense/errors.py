"""Exception and warning types raised across the package."""


class PrsenseError(Exception):
    """Base class for all errors raised by prsense."""


class ConfigurationError(PrsenseError, ValueError):
    """A parameter combination that cannot be simulated."""


class UnsupportedBandError(ConfigurationError):
    """Carrier frequency lies outside both FR1 and FR2."""


class PatternError(ConfigurationError):
    """Comb size / symbol count pair not listed in the PRS mapping table."""


class DegenerateInputError(PrsenseError, ValueError):
    """Estimator input carries no information (e.g. an all-zero column)."""


class DivisionHazardError(PrsenseError, ValueError):
    """Transmitted reference symbol too small to divide by."""


class UndefinedBoundError(PrsenseError, ValueError):
    """Closed-form bound undefined for the requested dimensions."""


class SingularFisherError(UndefinedBoundError):
    """Fisher information matrix is singular; parameters not observable."""


class BandWarning(UserWarning):
    """Carrier outside the nominal 5G frequency ranges."""


class StandardsWarning(UserWarning):
    """Configuration simulates fine but is not 3GPP conformant."""


class AmbiguityWarning(UserWarning):
    """Target lies outside the unambiguous range or velocity interval."""


class ApproximationWarning(UserWarning):
    """Closed-form bound used outside its large-M, large-N regime."""


class TrialError(PrsenseError):
    """A Monte Carlo trial failed; ``seed`` reproduces it."""

    def __init__(self, message: str, seed: tuple[int, ...]):
        super().__init__(f"{message} (trial seed {list(seed)})")
        self.seed = seed
