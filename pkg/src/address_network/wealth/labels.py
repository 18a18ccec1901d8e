import io
from typing import Callable, Dict, Iterable, List, NamedTuple, Optional

from ..utils.errors import LabelFileError
from .rich_sets import RichSet


class LabeledMember(NamedTuple):
    year: int
    kind: str
    rank: int
    address: int
    value: int
    label: str


def read_labels(path: Optional[str]) -> Dict[int, str]:
    """Tab-separated 'address_id<TAB>label' lines; '#' starts a comment."""
    labels: Dict[int, str] = {}
    if not path:
        return labels
    with io.open(path, "r", encoding="utf-8") as f:
        for line_number, line in enumerate(f, 1):
            text = line.rstrip("\r\n")
            if not text.strip() or text.lstrip().startswith("#"):
                continue
            id_text, sep, name = text.partition("\t")
            if not sep or not name.strip():
                raise LabelFileError(f"{path}: row {line_number}: expected 'address_id<TAB>label'")
            try:
                address = int(id_text)
            except ValueError:
                raise LabelFileError(f"{path}: row {line_number}: bad address id {id_text!r}") from None
            if address in labels:
                raise LabelFileError(f"{path}: row {line_number}: duplicate label for address {address}")
            labels[address] = name.strip()
    return labels


def label_rich_sets(
    sets: Iterable[RichSet],
    labels: Dict[int, str],
    fallback: Callable[[int], str] = str,
) -> List[LabeledMember]:
    """Flatten rich sets into ranked rows; unlabeled addresses get `fallback(address)`."""
    rows = []
    for rich in sets:
        for rank, (address, value) in enumerate(rich.members, 1):
            rows.append(LabeledMember(rich.year, rich.kind, rank, address, value, labels.get(address) or fallback(address)))
    return rows
