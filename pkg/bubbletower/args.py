# Copyright 2022 Michael Hansen
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU Affero General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU Affero General Public License for more details.
#
# You should have received a copy of the GNU Affero General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.
#

import argparse
import typing
from pathlib import Path

from xdgenvpy import XDG

from .const import VERSION

_DIR = Path(__file__).parent
_REPO_DIR = _DIR.parent

COMMANDS = (
    "check",
    "critical",
    "cpi",
    "spread",
    "certify",
    "homology",
    "flow",
    "bubble_energy",
)


def get_args(argv: typing.Optional[typing.Sequence[str]] = None) -> argparse.Namespace:
    """Get command-line arguments"""
    parser = argparse.ArgumentParser(prog="bubbletower")
    parser.add_argument(
        "command",
        choices=COMMANDS,
        help="Analysis to run",
    )
    add_shared_args(parser)
    args = parser.parse_args(argv)

    # Convert to paths
    args.config = [Path(p) for p in args.config]
    args.system_data_dir = Path(args.system_data_dir)
    args.user_cache_dir = Path(args.user_cache_dir)
    if args.out is not None:
        args.out = Path(args.out)

    return args


def add_shared_args(parser: argparse.ArgumentParser):
    """Add shared command-line arguments"""
    xdg = XDG()

    parser.add_argument(
        "--config",
        required=True,
        action="append",
        help="Path to TOML configuration file",
    )
    parser.add_argument("--out", help="Directory where reports are written")
    parser.add_argument(
        "--seed", type=int, help="Random seed recorded in every output"
    )
    parser.add_argument(
        "--quad-level", type=int, help="Override variational.quadrature_level"
    )
    parser.add_argument(
        "--no-cache",
        action="store_true",
        help="Do not read or write cached quadrature rules and constants",
    )

    parser.add_argument(
        "--system-data-dir",
        default=_REPO_DIR / "data",
        help="Path to directory with the shipped corpus",
    )
    parser.add_argument(
        "--user-cache-dir",
        default=Path(xdg.XDG_CACHE_HOME) / "bubbletower" / VERSION,
        help="Path to version-keyed cache directory",
    )

    parser.add_argument(
        "--debug", action="store_true", help="Print DEBUG messages to the console"
    )
