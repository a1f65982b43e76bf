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

import logging
import typing
from pathlib import Path

import toml

from .const import (
    MAX_SUBSET_POINTS,
    LadderError,
    Spread,
    SpreadAudit,
    SpreadMember,
    StripLadder,
    Subset,
)

_LOGGER = logging.getLogger(__name__)


def _check_parameters(n: int, fixed_indices: typing.Sequence[int], ladder: StripLadder):
    if n < 3:
        raise LadderError(f"Spreads need n >= 3 (got {n})")

    if list(fixed_indices) != sorted(set(fixed_indices)):
        raise LadderError(f"Fixed indices must increase strictly: {list(fixed_indices)}")

    for index in fixed_indices:
        if not 1 <= index <= ladder.num_strips:
            raise LadderError(f"Fixed index {index} outside the ladder")

    if len(fixed_indices) > MAX_SUBSET_POINTS:
        raise LadderError(
            f"m = {len(fixed_indices)} exceeds the subset cap {MAX_SUBSET_POINTS}"
        )


def _subsets(m: int) -> typing.Iterator[Subset]:
    for mask in range(1, 1 << m):
        yield frozenset(j + 1 for j in range(m) if mask & (1 << j))


def _subset_key(subset: Subset) -> typing.Tuple[int, ...]:
    return tuple(sorted(subset))


def validate_spreading(
    member: SpreadMember,
    ladder: StripLadder,
    fixed_indices: typing.Sequence[int],
    n: int,
    energy_constant: float = 1.0,
) -> SpreadAudit:
    """Conditions (i)-(iv) for one member; fills the member's strip map"""
    _check_parameters(n, fixed_indices, ladder)
    spread = Spread(
        n=n,
        ladder=ladder,
        fixed_indices=tuple(fixed_indices),
        members=[member],
        strip_map={},
        energy_constant=energy_constant,
    )

    # (i) Laplacian separated from zero at critical points
    for j, laplacian in enumerate(member.laplacians):
        if laplacian == 0:
            return SpreadAudit(
                passed=False,
                messages=[f"{member.label}: Laplacian vanishes at critical point {j}"],
                violated_member=member.label,
            )

    # (ii) number of non-minimal critical points
    ordered = member.ordered_points()
    m = len(fixed_indices)
    if len(ordered) != m:
        return SpreadAudit(
            passed=False,
            messages=[
                f"{member.label}: {len(ordered)} non-minimal critical point(s), expected {m}"
            ],
            violated_member=member.label,
        )

    # (iii) singleton strips at the fixed indices
    for position, strip in enumerate(fixed_indices, start=1):
        energy = spread.subset_energy(member, [position])
        low, high = ladder.bounds(strip)
        if not low <= energy <= high:
            return SpreadAudit(
                passed=False,
                messages=[
                    f"{member.label}: point {position} has energy {energy} "
                    f"outside strip {strip} [{low}, {high}]"
                ],
                violated_subset=(position,),
                violated_member=member.label,
            )

    # (iv) every subset lands in some strip
    strip_map: typing.Dict[Subset, int] = {}
    for subset in _subsets(m):
        energy = spread.subset_energy(member, subset)
        strip = ladder.strip_of(energy)
        if strip is None:
            return SpreadAudit(
                passed=False,
                messages=[
                    f"{member.label}: subset {_subset_key(subset)} has energy {energy} "
                    "between strips"
                ],
                violated_subset=_subset_key(subset),
                violated_member=member.label,
            )

        strip_map[subset] = strip

    return SpreadAudit(passed=True, strip_map=strip_map)


def validate_spread(
    members: typing.Sequence[SpreadMember],
    ladder: StripLadder,
    fixed_indices: typing.Sequence[int],
    n: int,
    energy_constant: float = 1.0,
) -> SpreadAudit:
    """Condition (v): the strip of every subset is the same for all members"""
    if not members:
        raise LadderError("Spread has no members")

    labels = [member.label for member in members]
    if len(set(labels)) != len(labels):
        raise LadderError(f"Duplicate member labels: {labels}")

    reference: typing.Optional[typing.Dict[Subset, int]] = None
    reference_label = ""
    for member in members:
        audit = validate_spreading(member, ladder, fixed_indices, n, energy_constant)
        if not audit.passed:
            return audit

        if reference is None:
            reference = audit.strip_map
            reference_label = member.label
            continue

        for subset in _subsets(len(fixed_indices)):
            if audit.strip_map[subset] != reference[subset]:
                return SpreadAudit(
                    passed=False,
                    messages=[
                        f"Subset {_subset_key(subset)} lies in strip "
                        f"{reference[subset]} for {reference_label} "
                        f"but in strip {audit.strip_map[subset]} for {member.label}"
                    ],
                    violated_subset=_subset_key(subset),
                    violated_member=member.label,
                )

    assert reference is not None

    # A strip determines its subset
    by_strip: typing.Dict[int, Subset] = {}
    for subset, strip in sorted(reference.items(), key=lambda item: _subset_key(item[0])):
        if strip in by_strip:
            return SpreadAudit(
                passed=False,
                messages=[
                    f"Subsets {_subset_key(by_strip[strip])} and {_subset_key(subset)} "
                    f"share strip {strip}"
                ],
                violated_subset=_subset_key(subset),
            )

        by_strip[strip] = subset

    return SpreadAudit(passed=True, strip_map=dict(reference))


def build_spread(
    members: typing.Sequence[SpreadMember],
    ladder: StripLadder,
    fixed_indices: typing.Sequence[int],
    n: int,
    energy_constant: float = 1.0,
) -> Spread:
    """Validate and return a spread; raises LadderError with the first violation"""
    audit = validate_spread(members, ladder, fixed_indices, n, energy_constant)
    if not audit.passed:
        raise LadderError("; ".join(audit.messages))

    return Spread(
        n=n,
        ladder=ladder,
        fixed_indices=tuple(fixed_indices),
        members=list(members),
        strip_map=audit.strip_map,
        energy_constant=energy_constant,
    )


# -----------------------------------------------------------------------------


class SpreadFile(typing.NamedTuple):
    n: int
    ladder: StripLadder
    fixed_indices: typing.Tuple[int, ...]
    members: typing.List[SpreadMember]
    energy_constant: float


def load_spread_file(path: typing.Union[str, Path]) -> SpreadFile:
    """Read a TOML spread description"""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as spread_file:
            data = toml.load(spread_file)
    except (OSError, toml.TomlDecodeError) as err:
        raise LadderError(f"Cannot read spread file {path}: {err}") from err

    try:
        ladder = StripLadder(
            lower=tuple(float(v) for v in data["ladder"]["lower"]),
            upper=tuple(float(v) for v in data["ladder"]["upper"]),
        )
        members = [
            SpreadMember(
                label=str(member["label"]),
                values=tuple(float(v) for v in member["values"]),
                laplacians=tuple(float(v) for v in member["laplacians"]),
                morse_indices=tuple(int(v) for v in member["morse_indices"]),
                expression=member.get("expression"),
            )
            for member in data["members"]
        ]

        return SpreadFile(
            n=int(data["n"]),
            ladder=ladder,
            fixed_indices=tuple(int(i) for i in data["fixed_indices"]),
            members=members,
            energy_constant=float(data.get("energy_constant", 1.0)),
        )
    except KeyError as err:
        raise LadderError(f"Missing key {err} in spread file {path}") from err


def load_flags_file(path: typing.Union[str, Path]) -> typing.Dict[str, bool]:
    """Read solvability oracle flags ([solvable] label = true/false)"""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as flags_file:
            data = toml.load(flags_file)
    except (OSError, toml.TomlDecodeError) as err:
        raise LadderError(f"Cannot read flags file {path}: {err}") from err

    flags = data.get("solvable", {})
    _LOGGER.debug("Loaded %s solvability flag(s) from %s", len(flags), path)

    return {str(label): bool(value) for label, value in flags.items()}
