import argparse

from src.cli.routers import dynamics, mane, orbits, report


def setup_routers(parser: argparse.ArgumentParser) -> None:
    subparsers = parser.add_subparsers(dest="command", required=True)
    for router in (dynamics, orbits, mane, report):
        router.register(subparsers)
