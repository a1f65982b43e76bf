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

import numpy as np

from bubbletower.const import InputError
from bubbletower.flow import (
    FlowConstants,
    IntegratorSettings,
    ensemble,
    monitor_invariants,
    perturbed_start,
    trajectory_header,
    trajectory_rows,
)
from bubbletower.flow.shadow import DEFAULT_MONOTONE_TOLERANCE, DEFAULT_V_BOUND_FACTOR
from bubbletower.func_core import CandidateFunction

from .const import Command, Report, Table
from .inputs import build_catalog, load_run_candidate, search

_LOGGER = logging.getLogger(__name__)


class FlowCommand(Command):
    """Shadow-flow ensemble near a critical point with invariant monitors"""

    @classmethod
    def config_path(cls) -> str:
        return "flow"

    def _start_point(self, candidate: CandidateFunction) -> typing.Tuple[str, np.ndarray]:
        if "start_point" in self.config:
            return "start_point", np.asarray(self.config["start_point"], dtype=float)

        start_label = self.config.get("start_label")
        if not start_label:
            raise InputError("Set flow.start_point or flow.start_label")

        points = search(candidate, self.root_config).points
        catalog = build_catalog(candidate, points, self.root_config)
        for catalog_point, point in zip(catalog.points, points):
            if catalog_point.label == start_label:
                return str(start_label), point.location

        raise InputError(f"No critical point labeled {start_label}")

    def run(self) -> Report:
        candidate = load_run_candidate(self.root_config)
        constants = FlowConstants.from_config(self.config)
        settings = IntegratorSettings.from_config(self.config)
        horizon = float(self.config.get("horizon", 50.0))

        start_name, start_point = self._start_point(candidate)
        if start_point.shape != (candidate.n + 1,):
            raise InputError(f"Start point must have {candidate.n + 1} coordinates")

        rng = np.random.default_rng(self.context.seed)
        ensemble_size = int(self.config.get("ensemble_size", 1))
        starts = [
            perturbed_start(
                start_point,
                offset=float(self.config.get("offset", 1e-4)),
                lam=float(self.config.get("lambda0", 3.0)),
                v_norm_sq=float(self.config.get("v0", 0.0)) ** 2,
                rng=rng,
            )
            for _ in range(ensemble_size)
        ]

        trajectories = ensemble(starts, candidate, constants, horizon, settings)
        monotone_tolerance = float(
            self.config.get("monotone_tolerance", DEFAULT_MONOTONE_TOLERANCE)
        )
        v_bound_factor = float(self.config.get("v_bound_factor", DEFAULT_V_BOUND_FACTOR))

        runs = []
        tables: typing.Dict[str, Table] = {}
        passed = True
        for i, trajectory in enumerate(trajectories):
            monitor = monitor_invariants(
                trajectory,
                candidate,
                constants,
                monotone_tolerance=monotone_tolerance,
                v_bound_factor=v_bound_factor,
            )
            passed = passed and monitor.passed
            runs.append(
                {
                    "start": starts[i].a,
                    "stop_reason": trajectory.stop_reason,
                    "final_time": float(trajectory.times[-1]),
                    "final_a": trajectory.a[-1],
                    "lambda_initial": monitor.lambda_initial,
                    "lambda_final": monitor.lambda_final,
                    "error_estimate": trajectory.error_estimate,
                    "num_steps": trajectory.num_steps,
                    "rejected_steps": trajectory.rejected_steps,
                    "monotone_applicable": monitor.monotone_applicable,
                    "monotone_ok": monitor.monotone_ok,
                    "v_bound_ok": monitor.v_bound_ok,
                    "v_bound_constant": monitor.v_bound_constant,
                    "transient_time": monitor.transient_time,
                    "estimated_transient": monitor.estimated_transient,
                    "concentration_ok": monitor.concentration_ok,
                    "passed": monitor.passed,
                    "messages": monitor.messages,
                }
            )
            tables[f"trajectory_{i}"] = Table(
                header=trajectory_header(candidate.n),
                rows=trajectory_rows(trajectory, candidate, monotone_tolerance),
            )

        _LOGGER.info("Integrated %s trajectory(ies) (passed=%s)", len(trajectories), passed)

        return Report(
            command=self.context.command,
            passed=passed,
            sections={
                "flow": {
                    "start": start_name,
                    "horizon": horizon,
                    "constants": {
                        "c1": constants.c1,
                        "c2": constants.c2,
                        "c3": constants.c3,
                        "b": constants.b,
                        "coupling": constants.coupling,
                    },
                },
                "runs": runs,
            },
            tables=tables,
        )
