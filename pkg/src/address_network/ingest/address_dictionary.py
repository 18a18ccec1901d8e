import io
import logging
import os
import threading
from typing import Dict, Iterable, List, Optional

from ..utils.errors import DataValidationError

logger = logging.getLogger(__name__)


class AddressDictionary:
    """
    Bijective address key -> dense integer ID table.

    IDs are handed out in first-seen order. When backed by a file, every new
    assignment is appended as an "id<TAB>key" line so that later runs share
    the same ID space.
    """

    def __init__(self, path: Optional[str] = None):
        self._ids: Dict[str, int] = {}
        self._keys: List[str] = []
        self._lock = threading.Lock()
        self._pending: List[str] = []
        self.path = path
        if path and os.path.exists(path):
            self._load(path)

    @property
    def next_id(self) -> int:
        return len(self._keys)

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, key: str) -> bool:
        return key in self._ids

    def intern(self, key: str) -> int:
        """Return the ID for key, assigning the next ID on first sight."""
        if not key:
            raise DataValidationError("cannot intern an empty address key")
        found = self._ids.get(key)
        if found is not None:
            return found
        with self._lock:
            # first writer wins
            found = self._ids.get(key)
            if found is not None:
                return found
            new_id = len(self._keys)
            self._keys.append(key)
            self._ids[key] = new_id
            self._pending.append(f"{new_id}\t{key}")
            return new_id

    def intern_many(self, keys: Iterable[str]) -> List[int]:
        """IDs for `keys`, new keys assigned in iteration order."""
        ids = self._ids
        with self._lock:
            result = []
            for key in keys:
                found = ids.get(key)
                if found is None:
                    if not key:
                        raise DataValidationError("cannot intern an empty address key")
                    found = len(self._keys)
                    self._keys.append(key)
                    ids[key] = found
                    self._pending.append(f"{found}\t{key}")
                result.append(found)
        return result

    def lookup(self, key: str) -> Optional[int]:
        return self._ids.get(key)

    def reverse(self, address_id: int) -> str:
        return self._keys[address_id]

    def keys(self) -> Iterable[str]:
        return iter(self._keys)

    def flush(self) -> int:
        """Append pending assignments to the backing file; returns lines written."""
        if not self.path:
            return 0
        with self._lock:
            pending, self._pending = self._pending, []
        if not pending:
            return 0
        directory = os.path.dirname(self.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with io.open(self.path, "a", encoding="utf-8", newline="\n") as f:
            for line in pending:
                f.write(line)
                f.write("\n")
        logger.debug("Appended %d address assignments to %s", len(pending), self.path)
        return len(pending)

    def _load(self, path: str) -> None:
        with io.open(path, "r", encoding="utf-8") as f:
            for line_number, line in enumerate(f, 1):
                line = line.rstrip("\n")
                if not line:
                    continue
                id_text, sep, key = line.partition("\t")
                if not sep or not key:
                    raise DataValidationError(f"{path}: row {line_number}: expected 'id<TAB>key'")
                try:
                    address_id = int(id_text)
                except ValueError:
                    raise DataValidationError(f"{path}: row {line_number}: bad id {id_text!r}") from None
                if address_id != len(self._keys) or key in self._ids:
                    raise DataValidationError(
                        f"{path}: row {line_number}: dictionary is not dense and bijective"
                    )
                self._ids[key] = address_id
                self._keys.append(key)
        logger.info("Loaded %d addresses from %s", len(self._keys), path)


def intern_address(dictionary: AddressDictionary, key: str) -> int:
    return dictionary.intern(key)
