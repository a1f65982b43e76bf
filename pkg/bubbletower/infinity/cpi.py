"""Pure critical points at infinity built from C-(K).

Every nonempty subset S of C-(K) (or every single point in the low dimensional
mode) gives one critical point at infinity with

    energy = c * (sum_{x in S} K(x)^(-(n-2)/2))^(2/n)
    index  = (|S| - 1) + sum_{x in S} (n - m(K, x))
"""
import itertools
import logging
import math
import typing

import networkx as nx

from .const import (
    CPI,
    MAX_ENUMERATED,
    CancellationPair,
    CatalogMode,
    CatalogPoint,
    CriticalCatalog,
    InfinityError,
    StructurePoint,
    catalog_mode,
)

_LOGGER = logging.getLogger(__name__)


def negative_set(catalog: CriticalCatalog) -> typing.List[CatalogPoint]:
    """C-(K): critical points with negative Laplacian, in catalog order"""
    return [p for p in catalog.points if p.laplacian < 0]


def cpi_energy(values: typing.Iterable[float], n: int, energy_constant: float) -> float:
    total = math.fsum(v ** (-(n - 2) / 2.0) for v in values)
    return energy_constant * total ** (2.0 / n)


def cpi_index(morse_indexes: typing.Sequence[int], n: int) -> int:
    return (len(morse_indexes) - 1) + sum(n - m for m in morse_indexes)


def _mask_members(mask: int, size: int) -> typing.List[int]:
    return [j for j in range(size) if mask & (1 << j)]


def make_cpi(
    points: typing.Sequence[CatalogPoint], mask: int, n: int, energy_constant: float
) -> CPI:
    members = [points[j] for j in _mask_members(mask, len(points))]
    return CPI(
        mask=mask,
        members=tuple(p.label for p in members),
        energy=cpi_energy((p.value for p in members), n, energy_constant),
        index=cpi_index([p.morse_index for p in members], n),
    )


def enumerate_cpi(catalog: CriticalCatalog, energy_constant: float) -> typing.List[CPI]:
    """All pure CPIs sorted by (energy, mask)"""
    negatives = negative_set(catalog)
    if catalog.mode == CatalogMode.SINGLE_BUBBLE:
        masks: typing.Iterable[int] = [1 << j for j in range(len(negatives))]
    else:
        if len(negatives) > MAX_ENUMERATED:
            raise InfinityError(
                f"|C-(K)| = {len(negatives)} exceeds the enumeration cap {MAX_ENUMERATED}"
            )

        masks = range(1, 1 << len(negatives))

    cpis = [make_cpi(negatives, mask, catalog.n, energy_constant) for mask in masks]
    cpis.sort(key=lambda c: (c.energy, c.mask))
    _LOGGER.debug("Enumerated %s CPI(s)", len(cpis))

    return cpis


def mu_max(catalog: CriticalCatalog, energy_constant: float) -> float:
    """Maximal pure CPI energy"""
    negatives = negative_set(catalog)
    if not negatives:
        raise InfinityError("C-(K) is empty")

    if catalog.mode == CatalogMode.SINGLE_BUBBLE:
        return max(cpi_energy([p.value], catalog.n, energy_constant) for p in negatives)

    # Energy increases under inclusion
    return cpi_energy((p.value for p in negatives), catalog.n, energy_constant)


def index_count(catalog: CriticalCatalog) -> int:
    """Sum of (-1)^index over all pure CPIs"""
    negatives = negative_set(catalog)
    n = catalog.n
    if catalog.mode == CatalogMode.SINGLE_BUBBLE:
        return sum((-1) ** (n - p.morse_index) for p in negatives)

    if len(negatives) > MAX_ENUMERATED:
        return index_count_closed_form([p.morse_index for p in negatives], n)

    count = 0
    for mask in range(1, 1 << len(negatives)):
        members = _mask_members(mask, len(negatives))
        count += (-1) ** cpi_index([negatives[j].morse_index for j in members], n)

    return count


def index_count_closed_form(morse_indexes: typing.Sequence[int], n: int) -> int:
    """1 - prod(1 - (-1)^(n - m)), the subset sum without enumeration"""
    product = 1
    for m in morse_indexes:
        product *= 1 - (-1) ** (n - m)

    return 1 - product


# -----------------------------------------------------------------------------


def nonexistence_candidates(
    n: int, structure: typing.Sequence[StructurePoint]
) -> typing.List[typing.FrozenSet[str]]:
    """C-(K) assignments whose index count equals 1.

    Maxima of K always have negative Laplacian and minima positive, whatever
    the forced flag says. Every other point is free unless forced.
    """
    mode = catalog_mode(n)
    fixed_in: typing.List[StructurePoint] = []
    free: typing.List[StructurePoint] = []

    for point in structure:
        forced = point.forced
        if point.morse_index == n:
            forced = True
        elif point.morse_index == 0:
            forced = False

        if forced is None:
            free.append(point)
        elif forced:
            fixed_in.append(point)

    candidates: typing.List[typing.FrozenSet[str]] = []
    for choice in itertools.product((False, True), repeat=len(free)):
        members = fixed_in + [p for p, chosen in zip(free, choice) if chosen]
        if not members:
            continue

        catalog = CriticalCatalog(
            n=n,
            points=[
                CatalogPoint(
                    label=p.label, value=1.0, morse_index=p.morse_index, laplacian=-1.0
                )
                for p in members
            ],
        )
        assert catalog.mode == mode
        if index_count(catalog) == 1:
            candidates.append(frozenset(p.label for p in members))

    candidates.sort(key=lambda c: (len(c), sorted(c)))
    return candidates


# -----------------------------------------------------------------------------


def cpi_lattice(cpis: typing.Sequence[CPI]) -> nx.DiGraph:
    """Hasse diagram of CPIs ordered by subset inclusion"""
    graph = nx.DiGraph()
    masks = {c.mask for c in cpis}
    graph.add_nodes_from(sorted(masks))

    for mask in masks:
        bit = 1
        while bit <= mask:
            if (mask & bit) and ((mask ^ bit) in masks):
                graph.add_edge(mask ^ bit, mask)

            bit <<= 1

    return graph


def boolean_lattice(size: int) -> nx.DiGraph:
    """Hasse diagram of the nonempty subsets of a size-element set"""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(1, 1 << size))
    for mask in range(1, 1 << size):
        for j in range(size):
            bit = 1 << j
            if (mask & bit) and (mask != bit):
                graph.add_edge(mask ^ bit, mask)

    return graph


def is_power_set_lattice(cpis: typing.Sequence[CPI], size: int) -> bool:
    return nx.is_isomorphic(cpi_lattice(cpis), boolean_lattice(size))


def cancellation_pairs(
    catalog: CriticalCatalog, maximum_label: str, energy_constant: float = 1.0
) -> typing.List[CancellationPair]:
    """Pair every CPI without the maximum y with the one that adds y"""
    if catalog.mode != CatalogMode.HIGH_DIM:
        raise InfinityError("Cancellation pairing needs the n >= 5 mode")

    negatives = negative_set(catalog)
    labels = [p.label for p in negatives]
    if maximum_label not in labels:
        raise InfinityError(f"{maximum_label} is not in C-(K)")

    maximum = negatives[labels.index(maximum_label)]
    if maximum.morse_index != catalog.n:
        raise InfinityError(f"{maximum_label} is not a maximum of K")

    if len(negatives) > MAX_ENUMERATED:
        raise InfinityError(
            f"|C-(K)| = {len(negatives)} exceeds the enumeration cap {MAX_ENUMERATED}"
        )

    bit = 1 << labels.index(maximum_label)
    pairs: typing.List[CancellationPair] = []
    for mask in range(1, 1 << len(negatives)):
        if mask & bit:
            continue

        pairs.append(
            CancellationPair(
                without=make_cpi(negatives, mask, catalog.n, energy_constant),
                with_maximum=make_cpi(negatives, mask | bit, catalog.n, energy_constant),
            )
        )

    return pairs
