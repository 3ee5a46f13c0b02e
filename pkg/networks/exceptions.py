"""
Exceptions for the Networks Application.
Every failure a domain operation can report derives from NetworkError, so
the management commands can translate them into exit codes in one place.
"""


class NetworkError(Exception):
    """Base class for all toolkit errors."""

    # Exit code used by the management commands
    exit_code = 1


# NETWORK CORE


class GraphNotRealizable(NetworkError):
    """The graph has one-cycles or two-cycles."""

    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(f"graph is not realizable: {verdict}")


class SignContradiction(NetworkError):
    """An eigenvalue sign disagrees with the role the cycle assigns it."""

    def __init__(self, node, direction, role, value):
        self.node = node
        self.direction = direction
        self.role = role
        self.value = value
        super().__init__(
            f"eigenvalue at node {node} in direction {direction} is {value},"
            f" which contradicts role {role}"
        )


# MAP ALGEBRA


class NonPositiveExpanding(NetworkError):
    """The expanding eigenvalue of a local map is not positive."""


class SectionMismatch(NetworkError):
    """Maps were chained across cross-sections that do not match."""


class NonPositiveInput(NetworkError):
    """Monomial maps are only defined on the positive orthant."""


# SWITCHING ANALYSIS


class DegenerateCusp(NetworkError):
    """A cusp with exponent 1 is neither thin nor thick."""


class Assumption1Violated(NetworkError):
    """The incoming plane is not carried into the outgoing plane."""


class EmptyRegion(NetworkError):
    """A region that must be nonempty failed verification."""


# BOWTIE DYNAMICS


class ParameterSignError(NetworkError):
    """An eigenvalue magnitude in a table is not positive."""


class AssumptionViolation(NetworkError):
    """The Bowtie table violates e23 > e24."""


class NotInFirstTurnSet(NetworkError):
    """The point does not take even one turn around the cycle."""


class PreconditionViolation(NetworkError):
    """An operation was called outside its domain."""


# SIMULATION


class StepFailure(NetworkError):
    """The integrator could not reach the requested tolerance."""


class Blowup(NetworkError):
    """The trajectory left the bounded region around the unit sphere."""


class NoEvents(NetworkError):
    """The trajectory never entered a neighbourhood of an equilibrium."""


class ItineraryError(NetworkError):
    """Recorded visits are not connected by network edges."""


# COMMAND LINE


class SpecParseError(NetworkError):
    """A specification file could not be parsed."""

    exit_code = 2

    def __init__(self, errors):
        # errors is a list of (line number or None, message)
        self.errors = list(errors)
        lines = []
        for line, message in self.errors:
            prefix = f"line {line}: " if line else ""
            lines.append(f"{prefix}{message}")
        super().__init__("; ".join(lines))


class WiringMismatch(NetworkError):
    """The network does not have the wiring an analysis expects."""

    def __init__(self, analysis, expected, found):
        self.expected = sorted(expected)
        self.found = sorted(found)
        super().__init__(
            f"{analysis} analysis expects edges {self.expected},"
            f" found {self.found}"
        )
