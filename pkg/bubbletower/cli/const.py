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
from abc import abstractmethod
from dataclasses import dataclass, field
from pathlib import Path

from bubbletower.const import ConfigurableComponent


@dataclass
class RunContext:
    """Settings shared by every command of one run"""

    command: str
    output_dir: Path
    seed: int
    config_hash: str
    system_data_dir: Path
    cache_dir: typing.Optional[Path] = None
    """None when caching is disabled"""

    quad_level: typing.Optional[int] = None
    """Command-line override of variational.quadrature_level"""


@dataclass
class Table:
    """CSV output with a fixed header"""

    header: typing.List[str]
    rows: typing.List[typing.List[typing.Any]] = field(default_factory=list)


@dataclass
class Report:
    """Result document of one command"""

    command: str
    passed: bool
    sections: typing.Dict[str, typing.Any] = field(default_factory=dict)
    tables: typing.Dict[str, Table] = field(default_factory=dict)
    """CSV name (without extension) -> table"""


class Command(ConfigurableComponent):
    """Base class for analysis commands"""

    def __init__(
        self,
        root_config: typing.Dict[str, typing.Any],
        context: RunContext,
        config_extra_path: typing.Optional[str] = None,
    ):
        super().__init__(root_config, config_extra_path=config_extra_path)
        self.context = context

    @abstractmethod
    def run(self) -> Report:
        """Run the analysis and return its report"""
