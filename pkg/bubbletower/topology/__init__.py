"""Chain complexes over GF(2), the deformation scheme, and heart existence."""
from .complex import (
    attach_cell,
    chain_vector,
    euler_characteristic,
    homology,
    load_complex_file,
    minimal_complex,
    parse_complex,
    restrict,
    validate_complex,
)
from .const import (
    ChainComplex,
    ComplexCheck,
    ComplexError,
    CriticalEvent,
    FiltrationScenario,
    ScenarioError,
    SchemeConclusion,
    Theorem2Error,
    Theorem2Report,
)
from .scheme import (
    comparison_scenario,
    deformation_scheme_check,
    load_scenario_file,
    scenario_violations,
)
from .theorem2 import HEART_ROLES, heart_roles, theorem2_certify
