import csv
import gzip
import itertools
import logging
import lzma
import zlib
from typing import Iterable, Iterator, List, Sequence

import numpy as np
import pandas as pd
from tqdm import tqdm

from .. import MAX_SATOSHI
from ..utils.errors import FieldCountError, InputDecodeError, RecordValidationError
from ..utils.storage import open_text
from .records import (
    COINBASE_FLAGS,
    COLUMN_ALIASES,
    COLUMNS,
    TIMESTAMP_FORMAT,
    TransactionRecord,
    parse_record,
    parse_value,
)

logger = logging.getLogger(__name__)

CHUNK_ROWS = 200_000

# what a broken text encoding or a damaged compressed stream raises while reading
DECODE_ERRORS = (UnicodeDecodeError, EOFError, lzma.LZMAError, zlib.error, gzip.BadGzipFile)

# layout of a leg frame: one row per extract row, addresses still as keys
LEG_FRAME_COLUMNS = ("block", "tx", "coinbase", "input", "output", "value", "ts")

_EXTRA = "_extra"


def detect_delimiter(header: str) -> str:
    return "\t" if "\t" in header else ","


def _check_header(header: str, delimiter: str, source: str) -> None:
    names = [COLUMN_ALIASES.get(n.strip().lower(), n.strip().lower()) for n in header.split(delimiter)]
    if tuple(names) != COLUMNS:
        raise FieldCountError(
            f"header {header.strip()!r} does not match columns {','.join(COLUMNS)}",
            1,
            source,
        )


def read_records(path: str, progress: bool = False) -> Iterator[TransactionRecord]:
    """Stream validated records from a headed, optionally compressed extract."""
    line_number = 0
    try:
        with open_text(path) as f:
            header = f.readline()
            if not header:
                logger.warning("Input %s is empty", path)
                return
            line_number = 1
            delimiter = detect_delimiter(header)
            _check_header(header, delimiter, path)
            rows = tqdm(f, desc=f"reading {path}", unit=" rows", disable=None if progress else True)
            for line_number, line in enumerate(rows, 2):
                if not line.strip():
                    continue
                yield parse_record(line, delimiter, line_number, path)
    except DECODE_ERRORS as e:
        # text is decoded in blocks, so the failing row is the first one not yet read
        raise InputDecodeError(f"cannot decode input ({e})", line_number + 1, path) from e


def read_many(paths, progress: bool = False) -> Iterator[TransactionRecord]:
    for path in paths:
        logger.info("Reading %s", path)
        yield from read_records(path, progress=progress)


class _Irregular(Exception):
    """A chunk the vectorised checks cannot vouch for."""


def _frame_of(rows: List[tuple]) -> pd.DataFrame:
    frame = pd.DataFrame.from_records(rows, columns=list(LEG_FRAME_COLUMNS))
    frame["block"] = frame["block"].astype(np.int64)
    frame["coinbase"] = frame["coinbase"].astype(bool)
    frame["value"] = frame["value"].astype(np.int64)
    frame["ts"] = pd.to_datetime(frame["ts"])
    return frame


def leg_frames(records: Iterable[TransactionRecord], chunk_rows: int = CHUNK_ROWS) -> Iterator[pd.DataFrame]:
    """Parsed records regrouped into leg frames of at most `chunk_rows` rows."""
    rows: List[tuple] = []
    for record in records:
        rows.append(
            (
                record.block_number,
                record.transaction_id,
                record.is_coinbase,
                record.input_address or "",
                record.output_address or "",
                record.value,
                record.timestamp.replace(tzinfo=None),
            )
        )
        if len(rows) == chunk_rows:
            yield _frame_of(rows)
            rows = []
    if rows:
        yield _frame_of(rows)


def _values(column: pd.Series) -> np.ndarray:
    parsed = pd.to_numeric(column, errors="coerce")
    if parsed.dtype.kind in "iu":
        values = parsed.to_numpy()
    else:
        # scientific notation and friends go through the exact decimal parser
        try:
            values = np.array([parse_value(text) for text in column.tolist()], dtype=np.int64)
        except RecordValidationError as e:
            raise _Irregular(str(e)) from e
    if (values < 0).any() or (values > MAX_SATOSHI).any():
        raise _Irregular("value out of range")
    return values.astype(np.int64)


def _blocks(column: pd.Series) -> np.ndarray:
    parsed = pd.to_numeric(column, errors="coerce")
    if parsed.dtype.kind not in "iu" or (parsed < 0).any():
        raise _Irregular("block_number is not a non-negative integer")
    return parsed.to_numpy().astype(np.int64)


def _timestamps(column: pd.Series) -> np.ndarray:
    codes, uniques = pd.factorize(column)
    parsed = pd.to_datetime(pd.Series(uniques).str.strip(), format=TIMESTAMP_FORMAT, errors="coerce")
    if parsed.isna().any():
        raise _Irregular("unparsable timestamp")
    return parsed.to_numpy()[codes]


def _checked_chunk(chunk: pd.DataFrame) -> pd.DataFrame:
    if chunk[_EXTRA].notna().any() or chunk[list(COLUMNS)].isna().to_numpy().any():
        raise _Irregular("rows with the wrong field count")

    flags = chunk["is_coinbase"].map(COINBASE_FLAGS)
    if flags.isna().any():
        raise _Irregular("unrecognised is_coinbase flag")
    coinbase = flags.to_numpy(dtype=bool)
    if (chunk["transaction_id"] == "").any():
        raise _Irregular("empty transaction_id")

    inputs = chunk["input_address_id"]
    outputs = chunk["output_address_id"]
    has_input = (inputs != "").to_numpy()
    has_output = (outputs != "").to_numpy()
    if ((coinbase & has_input) | (coinbase & ~has_output) | (~coinbase & ~has_input)).any():
        raise _Irregular("address columns do not fit the coinbase flag")

    return pd.DataFrame(
        {
            "block": _blocks(chunk["block_number"]),
            "tx": chunk["transaction_id"].to_numpy(dtype=object),
            "coinbase": coinbase,
            "input": inputs.to_numpy(dtype=object),
            "output": outputs.to_numpy(dtype=object),
            "value": _values(chunk["value"]),
            "ts": _timestamps(chunk["timestamp"]),
        }
    )


def _parsed_chunks(path: str, chunk_rows: int) -> Iterator[pd.DataFrame]:
    try:
        with open_text(path) as f:
            header = f.readline()
            if not header:
                logger.warning("Input %s is empty", path)
                return
            delimiter = detect_delimiter(header)
            _check_header(header, delimiter, path)
            reader = pd.read_csv(
                f,
                sep=delimiter,
                header=None,
                names=list(COLUMNS) + [_EXTRA],
                dtype=str,
                keep_default_na=False,
                na_values=[],
                quoting=csv.QUOTE_NONE,
                skipinitialspace=True,
                chunksize=chunk_rows,
                engine="c",
            )
            with reader:
                for chunk in reader:
                    yield _checked_chunk(chunk)
    except (pd.errors.ParserError, *DECODE_ERRORS) as e:
        raise _Irregular(str(e)) from e


def read_leg_frames(path: str, chunk_rows: int = CHUNK_ROWS, progress: bool = False) -> Iterator[pd.DataFrame]:
    """
    Validated legs of one extract in column batches.

    pandas parses the chunks. From the first chunk the vectorised checks do
    not accept, the rest of the file goes through the row parser, which
    raises the exact row error or yields the same frames.
    """
    done = 0
    bar = tqdm(desc=f"reading {path}", unit=" rows", disable=None if progress else True)
    try:
        for frame in _parsed_chunks(path, chunk_rows):
            done += len(frame)
            bar.update(len(frame))
            yield frame
        return
    except _Irregular as e:
        logger.info("%s: %s; row parser takes over after %d rows", path, e, done)
    finally:
        bar.close()
    remaining = itertools.islice(read_records(path), done, None)
    yield from leg_frames(remaining, chunk_rows)


def read_many_frames(paths: Sequence[str], chunk_rows: int = CHUNK_ROWS, progress: bool = False) -> Iterator[pd.DataFrame]:
    for path in paths:
        logger.info("Reading %s", path)
        yield from read_leg_frames(path, chunk_rows, progress)
