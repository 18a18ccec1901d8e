from dataclasses import dataclass
from datetime import datetime, timezone
from decimal import Decimal, InvalidOperation
from functools import lru_cache
from typing import Optional

from .. import MAX_SATOSHI
from ..utils.errors import (
    CoinbaseInputError,
    FieldCountError,
    MissingAddressError,
    TimestampFieldError,
    ValueFieldError,
)

COLUMNS = (
    "block_number",
    "transaction_id",
    "is_coinbase",
    "input_address_id",
    "output_address_id",
    "value",
    "timestamp",
)
COLUMN_ALIASES = {
    "input_address": "input_address_id",
    "output_address": "output_address_id",
}
TIMESTAMP_FORMAT = "%Y-%m-%d %H:%M:%S UTC"

_TRUE = {"1", "true", "t"}
_FALSE = {"0", "false", "f"}
COINBASE_FLAGS = {**{t: True for t in _TRUE}, **{f: False for f in _FALSE}}


@dataclass(frozen=True)
class TransactionRecord:
    """One row of a chain extract (one leg of a transaction)."""

    block_number: int
    transaction_id: str
    is_coinbase: bool
    input_address: Optional[str]
    output_address: Optional[str]
    value: int  # satoshi
    timestamp: datetime

    @property
    def is_input_leg(self) -> bool:
        return not self.is_coinbase and self.output_address is None

    @property
    def is_pair_leg(self) -> bool:
        return not self.is_coinbase and self.output_address is not None


def parse_value(text: str, line_number: Optional[int] = None, source: Optional[str] = None) -> int:
    """Parse an integer satoshi amount, allowing exact scientific notation."""
    try:
        amount = Decimal(text.strip())
    except InvalidOperation:
        raise ValueFieldError(f"value {text!r} is not a number", line_number, source) from None
    if not amount.is_finite() or amount != amount.to_integral_value():
        raise ValueFieldError(f"value {text!r} is not an integer satoshi amount", line_number, source)
    if amount < 0:
        raise ValueFieldError(f"value {text!r} is negative", line_number, source)
    if amount > MAX_SATOSHI:
        raise ValueFieldError(f"value {text!r} exceeds the total supply", line_number, source)
    return int(amount)


def parse_timestamp(text: str, line_number: Optional[int] = None, source: Optional[str] = None) -> datetime:
    try:
        parsed = datetime.strptime(text.strip(), TIMESTAMP_FORMAT)
    except ValueError:
        raise TimestampFieldError(
            f"timestamp {text!r} is not 'YYYY-MM-DD HH:MM:SS UTC'", line_number, source
        ) from None
    return parsed.replace(tzinfo=timezone.utc)


@lru_cache(maxsize=4096)
def format_timestamp(value: datetime) -> str:
    return value.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_record(
    line: str,
    delimiter: str = ",",
    line_number: Optional[int] = None,
    source: Optional[str] = None,
) -> TransactionRecord:
    """Parse and validate one delimited row in extract column order."""
    fields = line.rstrip("\r\n").split(delimiter)
    if len(fields) != len(COLUMNS):
        raise FieldCountError(
            f"expected {len(COLUMNS)} fields, found {len(fields)}", line_number, source
        )
    block_text, tx_id, coinbase_text, input_address, output_address, value_text, ts_text = (
        f.strip() for f in fields
    )

    try:
        block_number = int(block_text)
    except ValueError:
        raise ValueFieldError(f"block_number {block_text!r} is not an integer", line_number, source) from None
    if block_number < 0:
        raise ValueFieldError(f"block_number {block_number} is negative", line_number, source)
    if not tx_id:
        raise ValueFieldError("transaction_id is empty", line_number, source)

    flag = coinbase_text.lower()
    if flag in _TRUE:
        is_coinbase = True
    elif flag in _FALSE:
        is_coinbase = False
    else:
        raise ValueFieldError(f"is_coinbase {coinbase_text!r} is not 0/1", line_number, source)

    value = parse_value(value_text, line_number, source)
    timestamp = parse_timestamp(ts_text, line_number, source)

    input_address = input_address or None
    output_address = output_address or None
    if is_coinbase:
        if input_address is not None:
            raise CoinbaseInputError(
                f"coinbase row carries input address {input_address!r}", line_number, source
            )
        if output_address is None:
            raise MissingAddressError("coinbase row has no output address", line_number, source)
    elif input_address is None:
        raise MissingAddressError("non-coinbase row has no input address", line_number, source)

    return TransactionRecord(
        block_number=block_number,
        transaction_id=tx_id,
        is_coinbase=is_coinbase,
        input_address=input_address,
        output_address=output_address,
        value=value,
        timestamp=timestamp,
    )


def serialize_record(record: TransactionRecord, delimiter: str = ",") -> str:
    return delimiter.join(
        (
            str(record.block_number),
            record.transaction_id,
            "1" if record.is_coinbase else "0",
            record.input_address or "",
            record.output_address or "",
            str(record.value),
            format_timestamp(record.timestamp),
        )
    )


def header_line(delimiter: str = ",") -> str:
    return delimiter.join(COLUMNS)
