"""homology: chain-complex homology, deformation scenarios, heart existence."""
import logging
import typing
from pathlib import Path

from bubbletower.const import InputError
from bubbletower.topology import (
    Theorem2Error,
    deformation_scheme_check,
    euler_characteristic,
    homology,
    load_complex_file,
    load_scenario_file,
    theorem2_certify,
    validate_complex,
)

from .const import Command, Report
from .inputs import build_catalog, energy_constant, load_run_candidate, search

_LOGGER = logging.getLogger(__name__)


def _existing(path_text: str, what: str) -> Path:
    path = Path(path_text)
    if not path.is_file():
        raise InputError(f"Missing {what}: {path}")

    return path


class HomologyCommand(Command):
    @classmethod
    def config_path(cls) -> str:
        return "topology"

    def run(self) -> Report:
        sections: typing.Dict[str, typing.Any] = {}
        passed = True

        complex_name = self.config.get("complex", "")
        heart_complex = None
        if complex_name:
            heart_complex = load_complex_file(_existing(complex_name, "chain complex"))
            check = validate_complex(heart_complex)
            sections["complex"] = {
                "generators": {
                    str(degree): labels
                    for degree, labels in sorted(heart_complex.generators.items())
                },
                "valid": check.ok,
                "betti": homology(heart_complex),
                "euler_characteristic": euler_characteristic(heart_complex),
            }
            _LOGGER.info("Homology computed (%s)", sections["complex"]["betti"])

        scenarios = []
        for scenario_name in self.config.get("scenarios", []):
            scenario = load_scenario_file(_existing(scenario_name, "scenario"))
            conclusion = deformation_scheme_check(scenario)
            scenarios.append(
                {
                    "file": scenario_name,
                    "event": conclusion.event.label,
                    "window": list(conclusion.window),
                    "betti_below": conclusion.betti_below,
                    "betti_above": conclusion.betti_above,
                    "changed_degree": conclusion.changed_degree,
                    "contradicted": conclusion.contradicted,
                }
            )

        sections["scenarios"] = scenarios

        if self.config.get("theorem2", False):
            if heart_complex is None:
                raise InputError("topology.theorem2 needs topology.complex")

            candidate = load_run_candidate(self.root_config)
            points = search(candidate, self.root_config).points
            catalog = build_catalog(candidate, points, self.root_config)
            constant = energy_constant(self.root_config, self.context, candidate.n)
            try:
                result = theorem2_certify(catalog, heart_complex, constant)
                sections["theorem2"] = {
                    "certified": True,
                    "roles": result.roles,
                    "negative_set": result.negative_set,
                    "energy_constant": constant,
                    "energy_bound": result.energy_bound,
                    "betti_sublevel": result.betti_sublevel,
                    "betti_injected": result.betti_injected,
                    "mismatch_degree": result.mismatch_degree,
                }
            except Theorem2Error as err:
                passed = False
                sections["theorem2"] = {"certified": False, "violations": err.violations}

        return Report(command=self.context.command, passed=passed, sections=sections)
