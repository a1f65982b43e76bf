"""spread: spreading and spread validation, class partition and sigma."""
import logging
import typing
from pathlib import Path

from bubbletower.const import InputError
from bubbletower.spread import (
    Spread,
    SpreadFile,
    load_flags_file,
    load_spread_file,
    partition,
    sigma,
    validate_spread,
)

from .const import Command, Report, Table

_LOGGER = logging.getLogger(__name__)


def load_spread_inputs(
    config: typing.Mapping[str, typing.Any],
) -> typing.Tuple[SpreadFile, typing.Optional[typing.Dict[str, bool]]]:
    """Spread file and optional oracle flags named in the spread section"""
    file_name = config.get("file", "")
    if not file_name:
        raise InputError("Set spread.file")

    path = Path(file_name)
    if not path.is_file():
        raise InputError(f"Missing spread file: {path}")

    _LOGGER.debug("Loading spread (%s)", path)
    spread_file = load_spread_file(path)

    flags: typing.Optional[typing.Dict[str, bool]] = None
    flags_name = config.get("flags", "")
    if flags_name:
        flags_path = Path(flags_name)
        if flags_path.is_file():
            flags = load_flags_file(flags_path)
        else:
            _LOGGER.warning("Skipping missing flags file %s", flags_path)

    return spread_file, flags


def strip_map_rows(spread: Spread) -> typing.List[typing.List[typing.Any]]:
    return [
        [" ".join(str(p) for p in sorted(subset)), strip]
        for subset, strip in sorted(
            spread.strip_map.items(), key=lambda item: (item[1], sorted(item[0]))
        )
    ]


class SpreadCommand(Command):
    @classmethod
    def config_path(cls) -> str:
        return "spread"

    def run(self) -> Report:
        spread_file, flags = load_spread_inputs(self.config)
        audit = validate_spread(
            spread_file.members,
            spread_file.ladder,
            spread_file.fixed_indices,
            spread_file.n,
            spread_file.energy_constant,
        )

        sections: typing.Dict[str, typing.Any] = {
            "spread": {
                "n": spread_file.n,
                "num_members": len(spread_file.members),
                "num_strips": spread_file.ladder.num_strips,
                "fixed_indices": list(spread_file.fixed_indices),
                "passed": audit.passed,
                "messages": audit.messages,
                "violated_subset": audit.violated_subset,
                "violated_member": audit.violated_member,
            }
        }
        tables: typing.Dict[str, Table] = {}

        if audit.passed:
            spread = Spread(
                n=spread_file.n,
                ladder=spread_file.ladder,
                fixed_indices=spread_file.fixed_indices,
                members=list(spread_file.members),
                strip_map=audit.strip_map,
                energy_constant=spread_file.energy_constant,
            )
            tables["strip_map"] = Table(header=["subset", "strip"], rows=strip_map_rows(spread))

            class_partition = partition(spread)
            sections["classes"] = [
                {
                    "strip": spread_class.strip,
                    "signature": sorted(spread_class.signature),
                    "members": spread_class.members,
                }
                for spread_class in class_partition.classes
            ]

            if flags is not None:
                energy_cap = float(self.config.get("energy_cap", spread.ladder.max_upper))
                sections["sigma"] = {
                    "energy_cap": energy_cap,
                    "value": sigma(class_partition, flags, energy_cap),
                }

        _LOGGER.info("Spread validated (passed=%s)", audit.passed)

        return Report(
            command=self.context.command,
            passed=audit.passed,
            sections=sections,
            tables=tables,
        )
