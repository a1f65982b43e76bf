"""critical: critical point catalog with indices and Laplacian signs."""
import logging

from .const import Command, Report, Table
from .inputs import build_catalog, critical_point_row, load_run_candidate, search

_LOGGER = logging.getLogger(__name__)


class CriticalCommand(Command):
    @classmethod
    def config_path(cls) -> str:
        return "func_core"

    def run(self) -> Report:
        candidate = load_run_candidate(self.root_config)
        result = search(candidate, self.root_config)
        catalog = build_catalog(candidate, result.points, self.root_config)
        _LOGGER.info("Found %s critical point(s)", len(result.points))

        rows = [
            critical_point_row(catalog_point.label, point)
            for catalog_point, point in zip(catalog.points, result.points)
        ]

        n = candidate.n
        table = Table(
            header=["label"]
            + [f"x{i + 1}" for i in range(n + 1)]
            + ["value", "morse_index", "inverse_index", "laplacian"]
        )
        for row in rows:
            table.rows.append(
                [row["label"]]
                + [repr(float(x)) for x in row["location"]]
                + [
                    repr(float(row["value"])),
                    row["morse_index"],
                    row["inverse_index"],
                    repr(float(row["laplacian"])),
                ]
            )

        return Report(
            command=self.context.command,
            passed=True,
            sections={
                "candidate": {
                    "expression": candidate.text,
                    "n": n,
                    "patched": candidate.is_patched,
                },
                "search": {
                    "num_seeds": result.num_seeds,
                    "num_unconverged": len(result.unconverged),
                    "num_points": len(result.points),
                },
                "critical_points": rows,
            },
            tables={"critical_points": table},
        )
