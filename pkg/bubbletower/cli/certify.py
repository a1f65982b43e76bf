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

from bubbletower.const import InputError
from bubbletower.spread import (
    DEFAULT_SLACK_MARGIN,
    Certificate,
    CertificationError,
    build_spread,
    comparison_certify,
    partition,
    subcritical_slack_check,
    theorem1_certify,
)

from .const import Command, Report
from .spread import load_spread_inputs

_LOGGER = logging.getLogger(__name__)


def certificate_section(certificate: Certificate) -> typing.Dict[str, typing.Any]:
    return {
        "granted": True,
        "kind": certificate.kind,
        "energy_bound": certificate.energy_bound,
        "window": list(certificate.window) if certificate.window else None,
        "exempt_class": certificate.exempt_class,
        "conditional_on": certificate.conditional_on,
        "audit": certificate.audit,
    }


def denied_section(kind: str, err: CertificationError) -> typing.Dict[str, typing.Any]:
    return {
        "granted": False,
        "kind": kind,
        "condition": err.condition,
        "message": str(err),
    }


class CertifyCommand(Command):
    """Class certificate with its exempt class and pairwise comparison windows"""

    @classmethod
    def config_path(cls) -> str:
        return "spread"

    def run(self) -> Report:
        spread_file, flags = load_spread_inputs(self.config)
        spread = build_spread(
            spread_file.members,
            spread_file.ladder,
            spread_file.fixed_indices,
            spread_file.n,
            spread_file.energy_constant,
        )
        class_partition = partition(spread)

        try:
            kappa_low = float(self.config["kappa_low"])
            kappa_high = float(self.config["kappa_high"])
        except KeyError as err:
            raise InputError(f"Missing spread.{err.args[0]}") from err

        sections: typing.Dict[str, typing.Any] = {}
        granted = True

        try:
            certificate = theorem1_certify(
                spread, class_partition, kappa_low, kappa_high, solvable=flags
            )
            sections["theorem1"] = certificate_section(certificate)
        except CertificationError as err:
            granted = False
            sections["theorem1"] = denied_section("theorem1", err)

        margin = float(self.config.get("slack_margin", DEFAULT_SLACK_MARGIN))
        comparisons = []
        for comparison in self.config.get("comparisons", []):
            try:
                upper = spread.member(str(comparison["upper"]))
                lower = spread.member(str(comparison["lower"]))
                kappa_prev = float(comparison["kappa_prev"])
                kappa_sigma = float(comparison["kappa_sigma"])
            except KeyError as err:
                raise InputError(f"Missing spread.comparisons key {err}") from err

            energy_cap = comparison.get("energy_cap")
            try:
                certificate = comparison_certify(
                    upper,
                    lower,
                    kappa_prev,
                    kappa_sigma,
                    spread,
                    class_partition,
                    kappa_low,
                    kappa_high,
                    energy_cap=None if energy_cap is None else float(energy_cap),
                )
                entry = certificate_section(certificate)
                slack = subcritical_slack_check(
                    upper,
                    lower,
                    kappa_prev,
                    kappa_sigma,
                    spread,
                    class_partition,
                    kappa_low,
                    kappa_high,
                    margin=margin,
                )
                entry["subcritical_slack"] = slack is not None
            except CertificationError as err:
                granted = False
                entry = denied_section("comparison", err)

            entry["upper"] = upper.label
            entry["lower"] = lower.label
            comparisons.append(entry)

        sections["comparisons"] = comparisons
        _LOGGER.info("Certification done (granted=%s)", granted)

        return Report(command=self.context.command, passed=granted, sections=sections)
