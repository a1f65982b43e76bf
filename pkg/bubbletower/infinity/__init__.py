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

from .const import (
    CPI,
    MAX_ENUMERATED,
    CancellationPair,
    CatalogMode,
    CatalogPoint,
    CriticalCatalog,
    InfinityError,
    StructurePoint,
    catalog_mode,
)
from .cpi import (
    boolean_lattice,
    cancellation_pairs,
    cpi_energy,
    cpi_index,
    cpi_lattice,
    enumerate_cpi,
    index_count,
    index_count_closed_form,
    is_power_set_lattice,
    mu_max,
    negative_set,
    nonexistence_candidates,
)
