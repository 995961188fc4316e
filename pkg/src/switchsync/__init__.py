"""Guaranteed master/slave synchronization of switched chaotic systems.

The package synthesizes one state-feedback controller that keeps a slave
copy of the unified chaotic family locked to a free-running master no
matter how the family's parameter switches inside [0, 1], certifies the
gain with a common quadratic Lyapunov function over a 32-vertex polytopic
cover, and reproduces the standard switching scenarios (step, sinusoid,
chirp, random, random initial conditions, controller on/off gating).
"""

from .errors import (
    DivergenceError,
    InfeasibleError,
    InvalidInputError,
    SingularMatrixError,
)
from .experiments import (
    RunMetrics,
    Scenario,
    TrajectoryRecord,
    run_scenario,
    scenario_preset,
    write_metrics_json,
    write_trajectory_csv,
)
from .linalg import invert, is_positive_definite, matmul, sym_eigenvalues, transpose
from .polytope import EntryInterval, convex_combination, entry_intervals, enumerate_vertices
from .signals import (
    SwitchingSignal,
    chirp_source,
    constant,
    random_source,
    sampled_hold,
    sine_source,
    square_wave,
    step_schedule,
)
from .synthesis import (
    GainCertificate,
    LmiProblem,
    VerificationReport,
    alpha_grid_margins,
    assemble_lmi,
    certificate_from_gains,
    load_certificate,
    lyapunov_value,
    problem_for_alpha_range,
    recover_gains,
    save_certificate,
    solve_feasibility,
    verify_certificate,
)
from .system import (
    closed_loop_error_rhs,
    control_law,
    coupled_rhs,
    distribution_matrix,
    drift,
    error_matrix,
    linear_error_matrix,
    rk4_integrate,
    sync_error_norm,
)

__version__ = "0.1.0"
