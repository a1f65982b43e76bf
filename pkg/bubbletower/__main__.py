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
import logging
import typing
from pathlib import Path

from .args import get_args
from .cli.const import Command, RunContext
from .cli.report import failure_report, write_outputs
from .config import config_hash, load_configs, validate_config
from .const import DEFAULT_CONFIG_PATH, AnalysisError, ExitCode, InputError
from .utils import load_class

_LOGGER = logging.getLogger(__package__)

DEFAULT_OUTPUT_DIR = Path("reports")


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    args = get_args(argv)

    if args.debug:
        logging.basicConfig(level=logging.DEBUG)
    else:
        logging.basicConfig(level=logging.INFO)

    _LOGGER.debug(args)

    context: typing.Optional[RunContext] = None
    try:
        output_dir = args.out if args.out is not None else DEFAULT_OUTPUT_DIR

        # Load default config first
        config = load_configs(
            [DEFAULT_CONFIG_PATH] + args.config,
            system_data_dir=args.system_data_dir,
            user_cache_dir=args.user_cache_dir,
            output_dir=output_dir,
            required=args.config,
        )
        apply_overrides(config, args)
        validate_config(config)
        _LOGGER.debug(config)

        cli_config = config.get("cli", {})
        context = RunContext(
            command=args.command,
            output_dir=Path(cli_config.get("output_dir", output_dir)),
            seed=int(cli_config.get("seed", 0)),
            config_hash=config_hash(config),
            system_data_dir=args.system_data_dir,
            cache_dir=None if cli_config.get("no_cache", False) else args.user_cache_dir,
            quad_level=args.quad_level,
        )

        command_class = load_class(cli_config["commands"][args.command])
        _LOGGER.debug("Loading command (%s)", command_class)
        command = typing.cast(Command, command_class(config, context))
        _LOGGER.info("Command loaded (%s)", command_class)

        report = command.run()
    except InputError as err:
        _LOGGER.error("Input error: %s", err)
        return ExitCode.INPUT_ERROR
    except KeyError as err:
        _LOGGER.error("Missing config key: %s", err)
        return ExitCode.INPUT_ERROR
    except AnalysisError as err:
        _LOGGER.error("Analysis failed: %s", err)
        if context is not None:
            write_outputs(failure_report(args.command, err), context)

        return ExitCode.FAIL

    assert context is not None
    write_outputs(report, context)

    return ExitCode.PASS if report.passed else ExitCode.FAIL


def apply_overrides(
    config: typing.Dict[str, typing.Any], args: argparse.Namespace
) -> None:
    """Command-line flags win over config files"""
    cli_config = config.setdefault("cli", {})
    if args.out is not None:
        cli_config["output_dir"] = str(args.out)

    if args.seed is not None:
        cli_config["seed"] = args.seed

    if args.no_cache:
        cli_config["no_cache"] = True

    if args.quad_level is not None:
        config.setdefault("variational", {})["quadrature_level"] = args.quad_level


def run():
    """Console script entry point"""
    raise SystemExit(main())


if __name__ == "__main__":
    run()
