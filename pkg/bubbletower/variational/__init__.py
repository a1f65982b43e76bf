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

from .bubble import (
    bubble,
    bubble_gradient,
    bubble_laplacian,
    bubble_residual,
    bubble_values,
)
from .const import (
    Bubble,
    DiscreteFunction,
    EnergyError,
    ExpansionFit,
    ExpansionFitError,
    ExpansionRow,
    QuadratureError,
    QuadratureRule,
    conformal_constant,
    critical_exponent,
    scalar_curvature,
    yamabe_sphere,
)
from .energy import (
    bubble_energy,
    cpi_energy_constant,
    discretize,
    energy_JK,
    energy_JK_subcritical,
    expansion_sign_check,
    fit_expansion,
    gradient_JK,
    limit_energy,
    subcritical_approach,
)
from .quadrature import build_quadrature, bubble_quadrature, max_concentration
