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

from bubbletower.infinity import (
    MAX_ENUMERATED,
    CatalogMode,
    StructurePoint,
    cancellation_pairs,
    enumerate_cpi,
    index_count,
    index_count_closed_form,
    is_power_set_lattice,
    mu_max,
    negative_set,
    nonexistence_candidates,
)

from .const import Command, Report, Table
from .inputs import build_catalog, energy_constant, load_run_candidate, search

_LOGGER = logging.getLogger(__name__)


class CpiCommand(Command):
    """Critical points at infinity, mu(K), index count and non-existence candidates"""

    @classmethod
    def config_path(cls) -> str:
        return "infinity"

    def run(self) -> Report:
        candidate = load_run_candidate(self.root_config)
        points = search(candidate, self.root_config).points
        catalog = build_catalog(candidate, points, self.root_config)
        constant = energy_constant(self.root_config, self.context, candidate.n)
        negatives = negative_set(catalog)
        notes: typing.List[str] = []

        sections: typing.Dict[str, typing.Any] = {
            "catalog": {
                "n": catalog.n,
                "mode": catalog.mode,
                "energy_constant": constant,
                "negative_set": [p.label for p in negatives],
                # Pure CPIs are the whole picture only without solutions
                "conditional_on": "no critical points of J_K",
            },
        }
        tables: typing.Dict[str, Table] = {}

        enumerable = (catalog.mode == CatalogMode.SINGLE_BUBBLE) or (
            len(negatives) <= MAX_ENUMERATED
        )
        if enumerable:
            cpis = enumerate_cpi(catalog, constant)
            table = Table(header=["members", "energy", "index"])
            for cpi in cpis:
                table.rows.append([" ".join(cpi.members), repr(cpi.energy), cpi.index])

            tables["cpi"] = table
            sections["cpi"] = [
                {"members": list(cpi.members), "energy": cpi.energy, "index": cpi.index}
                for cpi in cpis
            ]

            if catalog.mode == CatalogMode.HIGH_DIM:
                sections["catalog"]["power_set_lattice"] = is_power_set_lattice(
                    cpis, len(negatives)
                )
        else:
            notes.append(
                f"|C-(K)| = {len(negatives)} exceeds {MAX_ENUMERATED}; CPI table skipped"
            )

        sections["catalog"]["mu_max"] = mu_max(catalog, constant)
        sections["catalog"]["index_count"] = index_count(catalog)
        if catalog.mode == CatalogMode.HIGH_DIM:
            sections["catalog"]["index_count_closed_form"] = index_count_closed_form(
                [p.morse_index for p in negatives], catalog.n
            )

        free_points = [p for p in catalog.points if 0 < p.morse_index < catalog.n]
        if len(free_points) <= MAX_ENUMERATED:
            structure = [
                StructurePoint(label=p.label, morse_index=p.morse_index)
                for p in catalog.points
            ]
            candidates = nonexistence_candidates(catalog.n, structure)
            sections["nonexistence"] = {
                "num_candidates": len(candidates),
                "candidates": [sorted(c) for c in candidates],
            }
        else:
            notes.append(f"{len(free_points)} free point(s); non-existence search skipped")

        maximum_label = self.config.get("cancellation_maximum")
        if maximum_label and (catalog.mode == CatalogMode.HIGH_DIM):
            pairs = cancellation_pairs(catalog, str(maximum_label), constant)
            sections["cancellation"] = {
                "maximum": maximum_label,
                "num_pairs": len(pairs),
                "index_shift_ok": all(
                    pair.with_maximum.index == pair.without.index + 1 for pair in pairs
                ),
            }

        sections["notes"] = notes
        _LOGGER.info("CPI analysis done (%s negative point(s))", len(negatives))

        return Report(
            command=self.context.command, passed=True, sections=sections, tables=tables
        )
