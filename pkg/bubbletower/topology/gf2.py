"""Dense GF(2) linear algebra on uint8 matrices."""
import typing

import numpy as np


def as_gf2(matrix: typing.Any) -> np.ndarray:
    return np.asarray(matrix, dtype=np.uint8) % 2


def row_echelon(matrix: typing.Any) -> typing.Tuple[np.ndarray, typing.List[int]]:
    """Row-reduce over GF(2) with XOR row operations.

    Returns (reduced matrix, pivot columns).
    """
    reduced = as_gf2(matrix).copy()
    if reduced.ndim != 2:
        raise ValueError(f"Expected a matrix, got shape {reduced.shape}")

    num_rows, num_cols = reduced.shape
    pivot_cols: typing.List[int] = []
    pivot_row = 0

    for col in range(num_cols):
        if pivot_row >= num_rows:
            break

        candidates = np.nonzero(reduced[pivot_row:, col])[0]
        if candidates.size == 0:
            continue

        found = pivot_row + int(candidates[0])
        if found != pivot_row:
            reduced[[pivot_row, found]] = reduced[[found, pivot_row]]

        below = np.nonzero(reduced[pivot_row + 1 :, col])[0] + pivot_row + 1
        reduced[below] ^= reduced[pivot_row]

        pivot_cols.append(col)
        pivot_row += 1

    return reduced, pivot_cols


def rank(matrix: typing.Any) -> int:
    """Rank over GF(2); empty matrices have rank 0"""
    matrix = as_gf2(matrix)
    if matrix.size == 0:
        return 0

    _, pivot_cols = row_echelon(matrix)
    return len(pivot_cols)


def matmul(left: typing.Any, right: typing.Any) -> np.ndarray:
    """Product over GF(2)"""
    product = as_gf2(left).astype(np.int64) @ as_gf2(right).astype(np.int64)
    return (product % 2).astype(np.uint8)
