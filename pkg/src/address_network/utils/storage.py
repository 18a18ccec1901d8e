import bz2
import gzip
import io
import lzma
import os
from typing import IO, Iterable

_OPENERS = {
    ".gz": gzip.open,
    ".bz2": bz2.open,
    ".xz": lzma.open,
}


def open_text(path: str, mode: str = "rt") -> IO[str]:
    """Open a text file, decompressing transparently by extension."""
    opener = _OPENERS.get(os.path.splitext(path)[1].lower())
    if opener is not None:
        return opener(path, mode, encoding="utf-8", newline="")
    return io.open(path, mode, encoding="utf-8", newline="")


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path


def write_lines(path: str, lines: Iterable[str]) -> None:
    """Write newline-terminated lines with a fixed \n terminator."""
    with io.open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in lines:
            f.write(line)
            f.write("\n")
