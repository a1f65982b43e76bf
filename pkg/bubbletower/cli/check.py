"""check: parse a candidate and audit its admissibility."""
import logging

from bubbletower.func_core import check_admissibility

from .const import Command, Report
from .inputs import grid_resolution, load_run_candidate, tolerances

_LOGGER = logging.getLogger(__name__)


class CheckCommand(Command):
    """Positivity, Morse property and Laplacian separation of one candidate"""

    @classmethod
    def config_path(cls) -> str:
        return "func_core"

    def run(self) -> Report:
        candidate = load_run_candidate(self.root_config, validate=False)
        admissibility = check_admissibility(
            candidate,
            grid_resolution=grid_resolution(self.root_config),
            tolerances=tolerances(self.root_config),
        )
        _LOGGER.info("Admissibility checked (passed=%s)", admissibility.passed)

        return Report(
            command=self.context.command,
            passed=admissibility.passed,
            sections={
                "candidate": {
                    "expression": candidate.text,
                    "n": candidate.n,
                    "patched": candidate.is_patched,
                },
                "admissibility": {
                    "positive": admissibility.positive,
                    "morse": admissibility.morse,
                    "laplacian_separated": admissibility.laplacian_separated,
                    "margin": admissibility.margin,
                    "min_value": admissibility.min_value,
                    "index_counts": {
                        str(m): count for m, count in sorted(admissibility.index_counts.items())
                    },
                    "euler_sum": admissibility.euler_sum,
                    "euler_expected": admissibility.euler_expected,
                    "morse_inequalities": admissibility.morse_inequalities,
                    "messages": admissibility.messages,
                },
            },
        )
