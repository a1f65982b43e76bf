"""Single-bubble shadow flow and its concentration monitors."""
from .const import (
    FlowConstants,
    FlowError,
    IntegratorSettings,
    MonitorReport,
    ShadowState,
    ShadowStateError,
    StopReason,
    Trajectory,
)
from .shadow import (
    concentration_quantity,
    ensemble,
    integrate,
    monitor_invariants,
    perturbed_start,
    shadow_rhs,
    trajectory_header,
    trajectory_rows,
)
