"""Exception types shared across the package."""


class SgentropyError(Exception):
    """Base class for all package errors."""


class DatasetFormatError(SgentropyError):
    """Malformed or missing input data (dataset files, price CSVs)."""


class ContractError(SgentropyError):
    """A caller violated an operation precondition."""


class DomainError(SgentropyError):
    """Physically or numerically invalid parameter combination."""


class ConvergenceError(SgentropyError):
    """An iterative solver hit its iteration cap before converging."""


class OracleSizeError(ContractError):
    """Graph too large for exhaustive enumeration."""
