"""Exception types shared across the package."""


class SnnError(Exception):
    """Base class for all package-specific errors."""


class MalformedInput(SnnError):
    """Input spike schedule does not match the input layer."""


class NonFiringOutput(SnnError):
    """At least one output neuron produced no spike."""


class TopologyMismatch(SnnError):
    """Sample dimensions do not match the network topology."""


class ParseError(SnnError):
    """A data file contains an unparseable cell."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class EmptyDataset(SnnError):
    """No usable rows after cleaning."""


class ClassTooSmall(SnnError):
    """A class has too few samples for a stratified split."""


class MalformedCase(SnnError):
    """A record does not have the expected number of values."""


class MissingDataset(SnnError):
    """A required dataset file is not present."""


class ConfigError(SnnError):
    """A configuration file or value is invalid."""


class RuntimeFailure(SnnError):
    """An experiment could not produce any result."""
