"""bubble_energy: J_K along bubble sweeps and expansion sign fits."""
import logging
import typing

import numpy as np

from bubbletower.func_core.sphere import normalize
from bubbletower.variational import (
    bubble_energy,
    expansion_sign_check,
    limit_energy,
    subcritical_approach,
)

from .const import Command, Report, Table
from .inputs import build_catalog, load_run_candidate, quadrature_level, search

_LOGGER = logging.getLogger(__name__)

DEFAULT_CONCENTRATIONS = (4.0, 8.0, 16.0, 32.0)


class BubbleEnergyCommand(Command):
    @classmethod
    def config_path(cls) -> str:
        return "variational"

    def run(self) -> Report:
        candidate = load_run_candidate(self.root_config)
        level = quadrature_level(self.root_config, self.context)
        concentrations = [
            float(c) for c in self.config.get("concentrations", DEFAULT_CONCENTRATIONS)
        ]

        points = search(candidate, self.root_config).points
        catalog = build_catalog(candidate, points, self.root_config)
        centers: typing.List[typing.Tuple[str, np.ndarray, typing.Optional[int]]] = [
            (p.label, point.location, i)
            for i, (p, point) in enumerate(zip(catalog.points, points))
        ]
        for i, center in enumerate(self.config.get("centers", [])):
            centers.append((f"c{i}", normalize(np.asarray(center, dtype=float)), None))

        sweep = Table(header=["center", "lambda", "energy", "error_estimate", "limit"])
        tables: typing.Dict[str, Table] = {"bubble_energy": sweep}
        for label, location, _ in centers:
            limit = limit_energy(candidate, location)
            plot = Table(header=["inverse_lambda_sq", "excess"])
            for concentration in concentrations:
                energy, error_estimate = bubble_energy(candidate, location, concentration, level)
                sweep.rows.append(
                    [label, repr(concentration), repr(energy), repr(error_estimate), repr(limit)]
                )
                plot.rows.append([repr(concentration**-2.0), repr(energy - limit)])

            tables[f"plot_{label}"] = plot

        sections: typing.Dict[str, typing.Any] = {
            "sweep": {
                "quadrature_level": level,
                "concentrations": concentrations,
                "centers": [label for label, _, _ in centers],
            }
        }

        passed = True
        if candidate.spec.is_high_dim and len(concentrations) >= 3:
            fits = []
            for label, _, index in centers:
                if index is None:
                    continue

                fit = expansion_sign_check(candidate, points[index], concentrations, level)
                passed = passed and fit.consistent
                fits.append(
                    {
                        "center": label,
                        "laplacian": fit.laplacian,
                        "coefficient": fit.coefficient,
                        "intercept": fit.intercept,
                        "stderr": fit.stderr,
                        "t_statistic": fit.t_statistic,
                        "sign": fit.sign,
                        "expected_sign": fit.expected_sign,
                        "consistent": fit.consistent,
                    }
                )

            sections["expansion"] = fits

        taus = [float(t) for t in self.config.get("taus", [])]
        if taus:
            subcritical = Table(header=["center", "tau", "lambda", "energy"])
            for label, location, _ in centers:
                for tau, concentration, energy in subcritical_approach(
                    candidate, location, taus, level
                ):
                    subcritical.rows.append([label, repr(tau), repr(concentration), repr(energy)])

            tables["subcritical"] = subcritical

        _LOGGER.info("Bubble energies computed at %s center(s)", len(centers))

        return Report(
            command=self.context.command, passed=passed, sections=sections, tables=tables
        )
