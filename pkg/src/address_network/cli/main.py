"""
address-network command line.

    address-network run --input chain.csv --years 2009-2023 --out bundle/
    address-network synth --seed 1 --years 15 --tx-per-year 100000 --out chain.csv

Exit status: 0 success, 1 configuration error, 2 I/O error, 3 data validation error.
"""
import argparse
import logging
import sys
from typing import List, Optional

from pydantic import ValidationError

from .. import __version__
from ..schemas.network_schemas import SynthConfig
from ..synth import write_chain
from ..utils.errors import AddressNetworkError, ConfigError
from ..utils.logging_setup import configure_logging
from .config import build_run_config
from .pipeline import run_pipeline

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2


class _Parser(argparse.ArgumentParser):
    """Usage errors are configuration errors, not argparse's status 2."""

    def error(self, message: str):
        raise ConfigError(f"{self.prog}: {message}")


def _flag(parser: argparse.ArgumentParser, name: str, help: str) -> None:
    parser.add_argument(name, action="store_const", const=True, default=None, help=help)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="address-network", description="Address-network reconstruction and wealth dynamics.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", parser_class=_Parser)
    commands.required = True

    run = commands.add_parser("run", help="build yearly snapshots and write the report bundle")
    run.add_argument("--config", help="key=value run configuration; flags override it")
    run.add_argument("--input", dest="inputs", action="append", help="chain extract (repeatable)")
    run.add_argument("--years", help="START-END (inclusive) or a single year")
    run.add_argument("--dust-threshold", type=int, help="quanta; edges with w1 at or below are dropped")
    _flag(run, "--no-filter", "skip the dust filter")
    _flag(run, "--keep-self-loops", "keep self-loops in the analysed snapshots")
    run.add_argument("--top-k", type=int, help="rich-set size")
    run.add_argument("--top-percent", type=float, help="top fraction for concentration metrics")
    run.add_argument("--clustering-sample", type=int, help="nodes sampled for average clustering")
    run.add_argument("--seed", type=int, help="seed for clustering sampling")
    run.add_argument("--labels", help="address_id<TAB>label file for the rich-set report")
    run.add_argument("--out", help="output directory")
    run.add_argument("--threads", type=int, help="worker threads for per-year metrics")
    run.add_argument("--partitions", type=int, help="spill partitions for out-of-core aggregation")
    run.add_argument("--dictionary", help="persistent address dictionary (default: <out>/address_dictionary.tsv)")
    _flag(run, "--directed-assortativity", "also report out/in directed assortativity")
    _flag(run, "--clustering-exclude-low-degree", "average clustering over degree >= 2 nodes only")
    _flag(run, "--unweighted-ranking", "rank top nodes by edge count instead of w2")
    _flag(run, "--wealth-unfiltered", "feed the ledgers with the unfiltered snapshots")
    _flag(run, "--wealth-only", "skip the per-year graph metrics; wealth series, growth and coverage only")
    _flag(run, "--write-snapshots", "also write each year's filtered snapshot under <out>/snapshots/")
    run.add_argument("--chunk-rows", type=int, help="rows parsed per input chunk")

    synth = commands.add_parser("synth", help="write a deterministic synthetic chain extract")
    synth.add_argument("--out", required=True, help="output CSV path")
    synth.add_argument("--seed", type=int)
    synth.add_argument("--start-year", type=int)
    synth.add_argument("--years", type=int, help="number of years")
    synth.add_argument("--tx-per-year", type=int)
    synth.add_argument("--blocks-per-year", type=int)
    synth.add_argument("--address-growth", type=float)
    synth.add_argument("--attachment", choices=["uniform", "preferential"])
    synth.add_argument("--dust-fraction", type=float)
    synth.add_argument("--fee-rate", type=float)
    synth.add_argument("--block-reward", type=int, help="satoshi")
    synth.add_argument("--halving-interval", type=int, help="blocks")
    return parser


def _run(args: argparse.Namespace) -> None:
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    cfg = build_run_config(args.config, overrides)
    run_pipeline(cfg)


def _synth(args: argparse.Namespace) -> None:
    values = {k: v for k, v in vars(args).items() if k not in ("command", "out") and v is not None}
    write_chain(SynthConfig(**values), args.out)


def main(argv: Optional[List[str]] = None) -> int:
    configure_logging()
    try:
        args = build_parser().parse_args(argv)
        if args.command == "run":
            _run(args)
        else:
            _synth(args)
    except AddressNetworkError as e:
        logger.error("%s", e)
        return e.exit_status
    except ValidationError as e:
        logger.error("Invalid configuration: %s", e)
        return EXIT_CONFIG
    except OSError as e:
        logger.error("I/O error: %s", e)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
