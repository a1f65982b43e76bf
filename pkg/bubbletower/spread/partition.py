"""Signature classes of a spread, their strip order, and the sigma index."""
import logging
import typing

from .const import (
    ClassPartition,
    LadderError,
    PartitionError,
    Spread,
    SpreadClass,
    Subset,
)

_LOGGER = logging.getLogger(__name__)


def partition(spread: Spread) -> ClassPartition:
    """Group members by signature and order classes by the strip of mu"""
    by_signature: typing.Dict[Subset, typing.List[str]] = {}
    mu_strips: typing.Dict[str, int] = {}

    for member in spread.members:
        mu = spread.mu(member)
        strip = spread.ladder.strip_of(mu)
        if strip is None:
            raise PartitionError(f"mu({member.label}) = {mu} lies between strips")

        mu_strips[member.label] = strip
        by_signature.setdefault(member.signature, []).append(member.label)

    # Equal signature <=> mu in a common strip
    members = spread.members
    for i, first in enumerate(members):
        for second in members[i + 1 :]:
            same_signature = first.signature == second.signature
            same_strip = mu_strips[first.label] == mu_strips[second.label]
            if same_signature != same_strip:
                raise PartitionError(
                    f"Members {first.label} and {second.label}: "
                    f"equal signature is {same_signature} but equal mu strip is {same_strip}"
                )

    classes = [
        SpreadClass(
            signature=signature,
            members=labels,
            strip=mu_strips[labels[0]],
        )
        for signature, labels in by_signature.items()
    ]
    classes.sort(key=lambda c: c.strip)
    _LOGGER.debug("Partitioned %s member(s) into %s class(es)", len(members), len(classes))

    return ClassPartition(classes=classes)


def sigma(
    class_partition: ClassPartition,
    solvable: typing.Mapping[str, bool],
    energy_cap: float,
) -> int:
    """Strip index of the highest class holding a member with no known solution.

    A member counts as solvable only when its flag says a solution with
    J <= energy_cap exists. Returns 0 when every member is solvable.
    """
    if energy_cap <= 0:
        raise LadderError(f"Energy cap must be positive (got {energy_cap})")

    unsolved = [
        spread_class.strip
        for spread_class in class_partition.classes
        if not all(solvable.get(label, False) for label in spread_class.members)
    ]

    return max(unsolved, default=0)
