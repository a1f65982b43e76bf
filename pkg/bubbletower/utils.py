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

import importlib
import os
import tempfile
import typing
from pathlib import Path

from .const import InputError


def load_class(class_path: str) -> typing.Any:
    last_dot = class_path.rfind(".")
    if last_dot < 0:
        raise InputError(f"Not a dotted class path: {class_path}")

    module_name, class_name = class_path[:last_dot], class_path[last_dot + 1 :]
    try:
        module = importlib.import_module(module_name)
        class_object = getattr(module, class_name)
    except (ImportError, AttributeError) as err:
        raise InputError(f"Cannot load class {class_path}: {err}") from err

    return class_object


def write_atomic(path: typing.Union[str, Path], text: str) -> Path:
    """Write text to a temporary file beside path, then rename over it"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, temp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as temp_file:
            temp_file.write(text)

        os.replace(temp_name, path)
    except BaseException:
        Path(temp_name).unlink(missing_ok=True)
        raise

    return path
