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
from pathlib import Path

import numpy as np
import toml

from . import gf2
from .const import ChainComplex, ComplexCheck, ComplexError

_LOGGER = logging.getLogger(__name__)

Chain = typing.Union[typing.Sequence[str], np.ndarray]


def validate_complex(cc: ChainComplex) -> ComplexCheck:
    """Check that every boundary of a boundary vanishes"""
    for degree in range(2, cc.max_degree + 1):
        composite = gf2.matmul(cc.boundary(degree - 1), cc.boundary(degree))
        bad_columns = np.nonzero(composite.any(axis=0))[0]
        if bad_columns.size > 0:
            label = cc.generators[degree][int(bad_columns[0])]
            return ComplexCheck(
                ok=False,
                message=f"boundary of boundary of {label} is nonzero",
                violating_generator=label,
            )

    return ComplexCheck(ok=True)


def homology(cc: ChainComplex) -> typing.List[int]:
    """Betti numbers over GF(2) in degrees 0..max_degree"""
    ranks = {
        degree: gf2.rank(cc.boundary(degree)) for degree in range(0, cc.max_degree + 2)
    }

    return [
        cc.rank(degree) - ranks[degree] - ranks[degree + 1]
        for degree in range(0, cc.max_degree + 1)
    ]


def euler_characteristic(cc: ChainComplex) -> int:
    return cc.euler_characteristic


def chain_vector(cc: ChainComplex, degree: int, chain: Chain) -> np.ndarray:
    """GF(2) coordinate vector of a chain given as labels or as a vector"""
    size = cc.rank(degree)
    if isinstance(chain, np.ndarray):
        vector = gf2.as_gf2(chain).reshape(-1)
        if vector.size != size:
            raise ComplexError(
                f"Chain has {vector.size} coefficient(s), degree {degree} has {size} generator(s)"
            )

        return vector

    vector = np.zeros(size, dtype=np.uint8)
    labels = cc.generators.get(degree, [])
    for label in chain:
        if label not in labels:
            raise ComplexError(f"{label} is not a generator in degree {degree}")

        vector[labels.index(label)] ^= 1

    return vector


def attach_cell(
    cc: ChainComplex,
    dim: int,
    label: str,
    boundary: Chain = (),
) -> ChainComplex:
    """Add one generator of degree dim whose boundary is a (dim - 1)-cycle"""
    if dim < 0:
        raise ComplexError(f"Cannot attach a cell of dimension {dim}")

    if label in cc.labels:
        raise ComplexError(f"Generator {label} already exists")

    if dim == 0:
        column = np.zeros(0, dtype=np.uint8)
        if len(boundary) > 0:
            raise ComplexError("A 0-cell has no boundary")
    else:
        column = chain_vector(cc, dim - 1, boundary)
        if dim == 1 and int(column.sum()) % 2:
            # Augmentation: a 1-cell has two endpoints or none
            raise ComplexError(
                f"Boundary of 1-cell {label} has odd weight {int(column.sum())}"
            )

        if dim >= 2:
            image = gf2.matmul(cc.boundary(dim - 1), column.reshape(-1, 1))
            if image.any():
                raise ComplexError(
                    f"Attaching chain of {label} is not a cycle in degree {dim - 1}"
                )

    generators = {degree: list(labels) for degree, labels in cc.generators.items()}
    generators.setdefault(dim, []).append(label)

    boundaries = {degree: matrix.copy() for degree, matrix in cc.boundaries.items()}
    boundaries[dim] = np.hstack([cc.boundary(dim), column.reshape(-1, 1)])
    upper = cc.boundary(dim + 1)
    boundaries[dim + 1] = np.vstack([upper, np.zeros((1, upper.shape[1]), dtype=np.uint8)])

    _LOGGER.debug("Attached %s-cell %s", dim, label)

    return ChainComplex(generators=generators, boundaries=boundaries)


def restrict(cc: ChainComplex, labels: typing.Iterable[str]) -> ChainComplex:
    """Sub-complex spanned by labels, which must be closed under the boundary"""
    keep = set(labels)
    unknown = keep - set(cc.labels)
    if unknown:
        raise ComplexError(f"Unknown generator(s): {sorted(unknown)}")

    indices = {
        degree: [j for j, label in enumerate(names) if label in keep]
        for degree, names in cc.generators.items()
    }

    for degree, names in cc.generators.items():
        if degree == 0:
            continue

        matrix = cc.boundary(degree)
        dropped_rows = [
            i for i in range(matrix.shape[0]) if i not in indices.get(degree - 1, [])
        ]
        for j in indices[degree]:
            if matrix[dropped_rows, j].any():
                raise ComplexError(
                    f"Boundary of {names[j]} leaves the generators {sorted(keep)}"
                )

    generators = {
        degree: [cc.generators[degree][j] for j in kept] for degree, kept in indices.items()
    }
    boundaries = {
        degree: cc.boundary(degree)[np.ix_(indices.get(degree - 1, []), indices[degree])]
        for degree in indices
        if degree > 0
    }

    return ChainComplex(generators=generators, boundaries=boundaries)


def minimal_complex(degree_labels: typing.Iterable[typing.Tuple[int, str]]) -> ChainComplex:
    """Generators with zero boundaries"""
    generators: typing.Dict[int, typing.List[str]] = {}
    for degree, label in degree_labels:
        generators.setdefault(degree, []).append(label)

    return ChainComplex(generators=generators)


# -----------------------------------------------------------------------------


def parse_complex(data: typing.Mapping[str, typing.Any], source: str = "") -> ChainComplex:
    """Build a complex from [degrees.<k>] tables.

    Each table has generators = [...] and an optional boundary table mapping a
    generator to a bitstring over the generators one degree lower.
    """
    where = f" in {source}" if source else ""
    try:
        degrees = {
            int(degree): block for degree, block in data.get("degrees", {}).items()
        }
    except ValueError as err:
        raise ComplexError(f"Degree keys must be integers{where}") from err

    generators = {
        degree: [str(label) for label in block.get("generators", [])]
        for degree, block in degrees.items()
    }

    boundaries: typing.Dict[int, np.ndarray] = {}
    for degree, block in sorted(degrees.items()):
        rows = generators.get(degree - 1, [])
        matrix = np.zeros((len(rows), len(generators[degree])), dtype=np.uint8)
        for label, bits in block.get("boundary", {}).items():
            if label not in generators[degree]:
                raise ComplexError(
                    f"Boundary given for unknown generator {label} in degree {degree}{where}"
                )

            bits = str(bits).strip()
            if (len(bits) != len(rows)) or (set(bits) - {"0", "1"}):
                raise ComplexError(
                    f"Boundary of {label} must be a bitstring of length {len(rows)}{where}"
                )

            matrix[:, generators[degree].index(label)] = [int(bit) for bit in bits]

        if degree > 0:
            boundaries[degree] = matrix

    return ChainComplex(generators=generators, boundaries=boundaries)


def load_complex_file(path: typing.Union[str, Path]) -> ChainComplex:
    """Load and validate a TOML chain complex"""
    path = Path(path)
    _LOGGER.debug("Loading chain complex (%s)", path)
    try:
        with open(path, "r", encoding="utf-8") as complex_file:
            data = toml.load(complex_file)
    except (OSError, toml.TomlDecodeError) as err:
        raise ComplexError(f"Cannot read chain complex {path}: {err}") from err

    cc = parse_complex(data, source=str(path))
    check = validate_complex(cc)
    if not check.ok:
        raise ComplexError(f"{path}: {check.message}")

    return cc
