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
import re
import typing
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .const import CandidateError, ExpressionError, SphereSpec, SurgeryPatch
from .expression import (
    Expression,
    ParseMetadata,
    evaluate,
    max_coordinate,
    parse_expression,
)
from .jets import Jet
from .patch import patch_jet
from .sphere import fibonacci_sphere, product_grid, tangent_frames

_LOGGER = logging.getLogger(__name__)

HEADER_PATTERN = re.compile(r"^dim\s*=\s*(\d+)$")


@dataclass(frozen=True)
class CandidateFunction:
    """Positive function K on S^n: a parsed expression plus surgery patches"""

    spec: SphereSpec
    expression: Expression
    text: str
    patches: typing.Tuple[SurgeryPatch, ...] = ()

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def is_patched(self) -> bool:
        return len(self.patches) > 0

    @property
    def base(self) -> "CandidateFunction":
        """Unpatched expression"""
        return replace(self, patches=())

    def with_patch(self, patch: SurgeryPatch) -> "CandidateFunction":
        return replace(self, patches=self.patches + (patch,))

    def jet(self, points: np.ndarray, order: int = 2) -> Jet:
        """Ambient jet of K at points (N, n+1)"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        variables = Jet.variables(points, order=order)

        with np.errstate(divide="ignore", invalid="ignore"):
            result = evaluate(self.expression, variables)

        if not isinstance(result, Jet):
            # Constant expression
            result = Jet.constant(float(result), variables[0])

        for patch in self.patches:
            result = result + patch_jet(patch, points, order=order)

        return result

    def values(self, points: np.ndarray) -> np.ndarray:
        """K at points without derivatives"""
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if self.patches:
            return self.jet(points, order=0).value

        with np.errstate(divide="ignore", invalid="ignore"):
            result = evaluate(self.expression, list(points.T))

        return np.broadcast_to(np.asarray(result, dtype=float), (len(points),)).copy()

    def __call__(self, point: np.ndarray) -> float:
        return float(self.values(np.asarray(point, dtype=float)[None, :])[0])


# -----------------------------------------------------------------------------


def parse_candidate(
    text: str,
    spec: SphereSpec,
    validate: bool = True,
    metadata: typing.Optional[ParseMetadata] = None,
) -> CandidateFunction:
    """Parse a rational expression in x1..x{n+1} into a candidate on S^n"""
    expression = parse_expression(text, spec.ambient_dim, metadata=metadata)
    if max_coordinate(expression) >= spec.ambient_dim:
        raise ExpressionError(f"Dimension mismatch in '{text}' for S^{spec.n}")

    candidate = CandidateFunction(spec=spec, expression=expression, text=text.strip())
    if validate:
        validate_positive(candidate)

    return candidate


def load_candidate_file(
    path: typing.Union[str, Path], validate: bool = True
) -> CandidateFunction:
    """Read a corpus file: `dim=<n>` header, # comments, one expression line"""
    path = Path(path)
    dimension: typing.Optional[int] = None
    expression_line: typing.Optional[typing.Tuple[int, str]] = None

    with open(path, "r", encoding="utf-8") as candidate_file:
        for line_number, line in enumerate(candidate_file, start=1):
            line = line.split("#", maxsplit=1)[0].strip()
            if not line:
                continue

            if dimension is None:
                header_match = HEADER_PATTERN.match(line)
                if header_match is None:
                    raise ExpressionError(
                        f"Expected 'dim=<n>' header (file={path}, line={line_number})"
                    )

                dimension = int(header_match.group(1))
                continue

            if expression_line is not None:
                raise ExpressionError(
                    f"Only one expression per file (file={path}, line={line_number})"
                )

            expression_line = (line_number, line)

    if (dimension is None) or (expression_line is None):
        raise ExpressionError(f"No expression in {path}")

    line_number, text = expression_line
    _LOGGER.debug("Loaded candidate from %s: %s", path, text)

    return parse_candidate(
        text,
        SphereSpec(dimension),
        validate=validate,
        metadata=ParseMetadata(file_name=str(path), line_number=line_number),
    )


def validation_points(n: int) -> np.ndarray:
    if n == 2:
        return fibonacci_sphere(2000)

    points, _ = product_grid(n, 6 if n <= 4 else 4)
    return points


def validate_positive(candidate: CandidateFunction) -> float:
    """Check K > 0 and finite on a sample of the sphere, return min value"""
    values = candidate.values(validation_points(candidate.n))
    if not np.all(np.isfinite(values)):
        raise CandidateError(
            f"'{candidate.text}' is not finite on S^{candidate.n} (division by zero)"
        )

    min_value = float(np.min(values))
    if min_value <= 0:
        raise CandidateError(
            f"'{candidate.text}' is not positive on S^{candidate.n} (min {min_value})"
        )

    return min_value


# -----------------------------------------------------------------------------


def _as_batch(points: np.ndarray) -> typing.Tuple[np.ndarray, bool]:
    points = np.asarray(points, dtype=float)
    single = points.ndim == 1
    return np.atleast_2d(points), single


def _check_unit(points: np.ndarray) -> None:
    norms = np.linalg.norm(points, axis=1)
    if np.any(np.abs(norms - 1.0) > 1e-9):
        raise ValueError("Points must lie on the unit sphere")


def intrinsic_gradient(candidate: CandidateFunction, points: np.ndarray) -> np.ndarray:
    """P_T grad K as ambient tangent vectors"""
    batch, single = _as_batch(points)
    _check_unit(batch)
    jet = candidate.jet(batch, order=1)
    assert jet.gradient is not None
    radial = np.einsum("ij,ij->i", jet.gradient, batch)
    gradient = jet.gradient - radial[:, None] * batch

    return gradient[0] if single else gradient


def laplace_beltrami(
    candidate: CandidateFunction, points: np.ndarray
) -> typing.Union[float, np.ndarray]:
    """Delta_S f = Delta f - d^2f/dr^2 - n df/dr from the ambient extension"""
    batch, single = _as_batch(points)
    _check_unit(batch)
    jet = candidate.jet(batch, order=2)
    assert (jet.gradient is not None) and (jet.hessian is not None)

    ambient_laplacian = np.trace(jet.hessian, axis1=1, axis2=2)
    radial_second = np.einsum("ij,ijk,ik->i", batch, jet.hessian, batch)
    radial_first = np.einsum("ij,ij->i", jet.gradient, batch)
    laplacian = ambient_laplacian - radial_second - candidate.n * radial_first

    return float(laplacian[0]) if single else laplacian


def intrinsic_hessian(
    candidate: CandidateFunction,
    points: np.ndarray,
    frames: typing.Optional[np.ndarray] = None,
) -> np.ndarray:
    """F^T (D^2 f - <grad f, p> I) F in the deterministic tangent frame F"""
    batch, single = _as_batch(points)
    _check_unit(batch)
    if frames is None:
        frames = tangent_frames(batch)

    jet = candidate.jet(batch, order=2)
    assert (jet.gradient is not None) and (jet.hessian is not None)
    radial = np.einsum("ij,ij->i", jet.gradient, batch)
    hessian = np.einsum("iaj,iab,ibk->ijk", frames, jet.hessian, frames)
    hessian -= radial[:, None, None] * np.eye(candidate.n)[None, :, :]

    # Symmetrize rounding noise
    hessian = 0.5 * (hessian + hessian.transpose(0, 2, 1))

    return hessian[0] if single else hessian
