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
import typing
from abc import ABC, abstractmethod
from enum import IntEnum
from pathlib import Path

_DIR = Path(__file__).parent

DEFAULT_CONFIG_PATH = _DIR / "bubbletower.toml"

VERSION = "0.1.0"


class ExitCode(IntEnum):
    """Process exit codes of the command-line front end"""

    PASS = 0
    """Analysis ran and every check passed"""

    FAIL = 1
    """Analysis ran but a check or certification was denied"""

    INPUT_ERROR = 2
    """Configuration or input files could not be used"""


class InputError(ValueError):
    """Malformed or inconsistent input (exit code 2)"""


class AnalysisError(RuntimeError):
    """Analysis-level failure on valid input (exit code 1)"""


class ConfigurableComponent(ABC):
    """Base class for all analysis components"""

    def __init__(
        self,
        root_config: typing.Dict[str, typing.Any],
        config_extra_path: typing.Optional[str] = None,
    ):
        self.root_config = root_config

        # "x.y.z" -> ["x", "y", "z"]
        config_path_parts = self.config_path().split(".")
        if config_extra_path:
            config_path_parts.extend(config_extra_path.split("."))

        # Locate config section from root
        self.config = self.root_config
        for path_part in config_path_parts:
            if path_part not in self.config:
                raise InputError(f"Missing config section: {self.config_path()}")

            self.config = self.config[path_part]

    @classmethod
    @abstractmethod
    def config_path(cls) -> str:
        """Dotted path in config object where "x.y" means config["x"]["y"]"""
