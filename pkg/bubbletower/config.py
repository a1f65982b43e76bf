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

import collections
import hashlib
import logging
import typing
from pathlib import Path

import toml
from jinja2 import Environment, FileSystemLoader, TemplateError

from .const import InputError

_LOGGER = logging.getLogger(__package__)

# Section -> keys that must hold positive numbers
POSITIVE_KEYS: typing.Dict[str, typing.Tuple[str, ...]] = {
    "func_core": (
        "gradient_tolerance",
        "merge_tolerance",
        "degeneracy_tolerance",
        "grid_resolution",
    ),
    "variational": ("quadrature_level",),
    "flow": ("tolerance", "horizon", "c1", "c2", "c3", "b"),
}


def load_configs(
    config_paths: typing.Iterable[typing.Union[str, Path]],
    system_data_dir: typing.Union[str, Path],
    user_cache_dir: typing.Union[str, Path],
    output_dir: typing.Union[str, Path],
    required: typing.Optional[typing.Collection[typing.Union[str, Path]]] = None,
) -> typing.Dict[str, typing.Any]:
    """Load, render, and merge TOML configs in order (later files win)"""
    config: typing.Dict[str, typing.Any] = {}
    system_data_dir = Path(system_data_dir).absolute()
    user_cache_dir = Path(user_cache_dir).absolute()
    output_dir = Path(output_dir).absolute()
    required_paths = {Path(p) for p in (required or [])}

    for config_path in config_paths:
        config_path = Path(config_path)
        if not config_path.is_file():
            if config_path in required_paths:
                raise InputError(f"Missing config file: {config_path}")

            _LOGGER.warning("Skipping missing config %s", config_path)
            continue

        _LOGGER.debug("Loading config %s", config_path)

        # Pre-process with jinja2
        template_env = Environment(
            loader=FileSystemLoader(config_path.parent),
            trim_blocks=True,
            lstrip_blocks=True,
        )

        try:
            template = template_env.get_template(config_path.name)
            new_config = toml.loads(
                template.render(
                    system_data_dir=system_data_dir,
                    user_cache_dir=user_cache_dir,
                    output_dir=output_dir,
                    config_dir=config_path.parent.absolute(),
                )
            )
        except (TemplateError, toml.TomlDecodeError) as err:
            raise InputError(f"Invalid config {config_path}: {err}") from err

        recursive_update(config, new_config)

    return config


def recursive_update(
    base_dict: typing.Dict[typing.Any, typing.Any],
    new_dict: typing.Mapping[typing.Any, typing.Any],
) -> None:
    """Recursively overwrites values in base dictionary with values from new dictionary"""
    for k, v in new_dict.items():
        if isinstance(v, collections.abc.Mapping) and (k in base_dict):
            recursive_update(base_dict[k], v)
        else:
            base_dict[k] = v


def validate_config(config: typing.Mapping[str, typing.Any]) -> None:
    """Check that tolerances and sizes are positive"""
    for section_name, keys in POSITIVE_KEYS.items():
        section = config.get(section_name, {})
        for key in keys:
            if key not in section:
                continue

            value = section[key]
            if (not isinstance(value, (int, float))) or (value <= 0):
                raise InputError(
                    f"Config value {section_name}.{key} must be positive (got {value!r})"
                )


def config_hash(config: typing.Mapping[str, typing.Any]) -> str:
    """SHA-256 of the canonical TOML dump of a merged config"""
    canonical = toml.dumps(_sorted_mapping(config))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _sorted_mapping(value: typing.Any) -> typing.Any:
    if isinstance(value, collections.abc.Mapping):
        return {k: _sorted_mapping(value[k]) for k in sorted(value)}

    if isinstance(value, list):
        return [_sorted_mapping(v) for v in value]

    return value
