from .address_dictionary import AddressDictionary, intern_address
from .assembler import TransactionAssembler, assemble_transactions
from .batches import assemble_batch, complete_blocks, stream_batches
from .reader import leg_frames, read_leg_frames, read_many, read_many_frames, read_records
from .records import TransactionRecord, parse_record, serialize_record

__all__ = [
    "AddressDictionary",
    "intern_address",
    "TransactionAssembler",
    "assemble_transactions",
    "assemble_batch",
    "complete_blocks",
    "stream_batches",
    "leg_frames",
    "read_leg_frames",
    "read_many",
    "read_many_frames",
    "read_records",
    "TransactionRecord",
    "parse_record",
    "serialize_record",
]
