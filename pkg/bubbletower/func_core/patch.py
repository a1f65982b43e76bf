"""Closed-form blend terms added by Laplacian surgery."""
import typing

import numpy as np

from .const import SurgeryPatch
from .jets import Jet, arccos_jet, dot_jet, smoothstep_jet


def patch_jet(patch: SurgeryPatch, points: np.ndarray, order: int = 2) -> Jet:
    """(1 - eta(rho / delta)) * sum_j d_j <x, e_j>^2 with rho = d(x, x0)"""
    points = np.atleast_2d(points)
    quadric = quadric_jet(patch, points, order=order)

    cosine = dot_jet(points, patch.center, order=order)
    blend = Jet.constant(1.0, cosine)

    # Inside the delta ball the blend is identically 1
    outside = cosine.value < np.cos(patch.radius)
    if np.any(outside):
        rho = arccos_jet(cosine.subset(outside))
        eta = smoothstep_jet(rho * (1.0 / patch.radius))
        blend.assign(outside, 1.0 - eta)

    return blend * quadric


def quadric_jet(patch: SurgeryPatch, points: np.ndarray, order: int = 2) -> Jet:
    shifts = patch.shifts
    terms: typing.Optional[Jet] = None
    for j, shift in enumerate(shifts):
        if shift == 0.0:
            continue

        coordinate = dot_jet(points, patch.directions[:, j], order=order)
        term = (coordinate * coordinate) * float(shift)
        terms = term if terms is None else terms + term

    if terms is None:
        return Jet.constant(0.0, dot_jet(points, patch.center, order=order))

    return terms
