from typing import Optional


class AddressNetworkError(Exception):
    """Base class for every error raised by the toolkit."""

    exit_status = 1


class ConfigError(AddressNetworkError):
    exit_status = 1


class DataValidationError(AddressNetworkError, ValueError):
    exit_status = 3


class RecordValidationError(DataValidationError):
    """A single input row failed validation."""

    def __init__(self, message: str, line_number: Optional[int] = None, source: Optional[str] = None):
        self.line_number = line_number
        self.source = source
        where = []
        if source:
            where.append(source)
        if line_number is not None:
            where.append(f"row {line_number}")
        prefix = f"{':'.join(where)}: " if where else ""
        super().__init__(f"{prefix}{message}")


class FieldCountError(RecordValidationError):
    pass


class ValueFieldError(RecordValidationError):
    pass


class TimestampFieldError(RecordValidationError):
    pass


class CoinbaseInputError(RecordValidationError):
    pass


class MissingAddressError(RecordValidationError):
    pass


class InputDecodeError(RecordValidationError):
    """The file is not UTF-8 text or its compressed stream is corrupt."""


class TransactionGroupError(DataValidationError):
    pass


class BlockOrderError(TransactionGroupError):
    """Rows arrive out of block order, so a block cannot be closed while streaming."""


class FlowContractError(DataValidationError):
    pass


class SnapshotContractError(DataValidationError):
    pass


class LedgerError(DataValidationError):
    pass


class LabelFileError(DataValidationError):
    pass


class InfeasibleConfigError(DataValidationError):
    pass


class UndefinedMetricError(AddressNetworkError, ArithmeticError):
    """The statistic has no value on this input (distinct from any real result)."""

    exit_status = 3


class EmptyInputError(UndefinedMetricError):
    pass


class DegenerateDistributionError(UndefinedMetricError):
    """All values are zero, so a relative measure has no denominator."""


class InsufficientGraphError(UndefinedMetricError):
    """The graph is too small for the statistic (|V| < 2, |E| < 2)."""
