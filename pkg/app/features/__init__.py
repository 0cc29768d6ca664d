"""Регистрация команд командной строки."""

import argparse

from .check.router import setup_parser as setup_check
from .compute.router import setup_parser as setup_compute
from .geodesic.router import setup_parser as setup_geodesic
from .selftest.router import setup_parser as setup_selftest


def setup_routers(subparsers, common: argparse.ArgumentParser) -> None:
    commands = [
        setup_compute,
        setup_geodesic,
        setup_check,
        setup_selftest,
    ]

    for setup in commands:
        setup(subparsers, common)


__all__ = ["setup_routers"]
