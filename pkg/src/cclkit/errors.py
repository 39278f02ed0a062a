"""Exception types shared across the toolkit."""


class CclError(Exception):
    """Base class for all cclkit errors."""


class GraphValidationError(CclError):
    """A graph violates a structural invariant (node kinds, edge shapes, ...)."""


class ParseError(CclError):
    """A text document (graph or plant format) could not be parsed.

    Carries the 1-based line and column of the offending token.
    """

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnknownNodeError(CclError):
    """An operation referenced a node id that does not exist in the graph."""


class GraphCycleError(CclError):
    """An operation that requires an acyclic function/setpoint subgraph hit a cycle."""


class NoTargetsError(CclError):
    """Analysis produced no candidate sensors: there is nothing to attack."""


class MissingHistoryError(CclError):
    """A min/max value strategy was requested without usable sensor history."""


class TableFormatError(CclError):
    """A CSV table (shutdown times or sensor history) is malformed."""


class PlantValidationError(CclError):
    """A plant description is structurally valid as a graph but cannot be simulated."""


class SimulationDivergenceError(CclError):
    """The simulated state became non-finite; the configured dynamics diverge."""
