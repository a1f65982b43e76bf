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

from .candidate import (
    CandidateFunction,
    intrinsic_gradient,
    intrinsic_hessian,
    laplace_beltrami,
    load_candidate_file,
    parse_candidate,
    validate_positive,
)
from .const import (
    AdmissibilityReport,
    CandidateError,
    CriticalPoint,
    CriticalPointError,
    DegeneracyError,
    ExpressionError,
    SphereSpec,
    SurgeryAdmissibilityError,
    SurgeryError,
    SurgeryPatch,
    Tolerances,
)
from .critical import (
    CriticalSearch,
    check_admissibility,
    classify_point,
    find_critical_points,
    search_critical_points,
)
from .surgery import SurgeryReport, laplacian_surgery, make_patch, verify_surgery
