"""Typed failures shared across the library and echoed by the CLI."""


class HarmapError(Exception):
    """Base class; `code` is the stable machine-readable identifier."""

    code = "Error"

    def __init__(self, message: str, **details):
        super().__init__(message)
        self.details = details


class NotAMap(HarmapError):
    """Polynomial triple does not define a map (all zero, or common zero)."""

    code = "NotAMap"


class NotFull(HarmapError):
    """Map image lies in a projective line (or point); construction needs fullness."""

    code = "NotFull"


class NearSingular(HarmapError):
    """Float evaluation hit a zero of the lift; retry with a perturbed point."""

    code = "NearSingular"


class IntegrationFailure(HarmapError):
    """Quadrature refinement did not converge well enough to snap integers."""

    code = "IntegrationFailure"


class SamplingFailure(HarmapError):
    """Stratum sampler exhausted its attempt cap."""

    code = "SamplingFailure"


class PathFailure(HarmapError):
    """A path step could not be repaired within the retry cap."""

    code = "PathFailure"


class IndeterminateRank(HarmapError):
    """No clear singular-value gap; refusing to guess a numerical rank."""

    code = "IndeterminateRank"
