import argparse
import sys
from collections.abc import Sequence
from typing import Optional

from src.cli.dependencies import setup_dependencies
from src.cli.routers import setup_routers
from src.common.exceptions import ToolkitError
from src.core.logger import logger
from src.core.settings import PROJECT_NAME, PROJECT_VERSION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="python -m src",
        description="Closed magnetic geodesics on cylinders: search, indices, Mane critical values.",
    )
    parser.add_argument("--version", action="version", version=f"{PROJECT_NAME} {PROJECT_VERSION}")
    setup_routers(parser)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logger.info("Running %s", args.command)
    try:
        deps = setup_dependencies(args)
        return args.handler(deps, args)
    except ToolkitError as exc:
        logger.error("%s failed: %s", args.command, exc)
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
