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

from .certify import (
    DEFAULT_SLACK_MARGIN,
    PinchingResult,
    comparison_certify,
    pinching,
    subcritical_slack_check,
    theorem1_certify,
)
from .const import (
    Certificate,
    CertificateKind,
    CertificationError,
    ClassPartition,
    LadderError,
    PartitionError,
    Spread,
    SpreadAudit,
    SpreadClass,
    SpreadMember,
    StripLadder,
)
from .partition import partition, sigma
from .spreading import (
    SpreadFile,
    build_spread,
    load_flags_file,
    load_spread_file,
    validate_spread,
    validate_spreading,
)
