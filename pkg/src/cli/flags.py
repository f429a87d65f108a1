import argparse
from pathlib import Path


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in an unsigned 64-bit integer, got {text}")
    return value


def add_common_flags(parser: argparse.ArgumentParser, config_required: bool = True) -> None:
    parser.add_argument("--config", type=Path, required=config_required, help="TOML run configuration")
    parser.add_argument("--out", type=Path, default=None, help="output directory (CSV files and results database)")
    parser.add_argument("--seed", type=_u64, default=None, help="overrides the configured seed")
    parser.add_argument("--threads", type=_positive_int, default=None, help="worker processes")
