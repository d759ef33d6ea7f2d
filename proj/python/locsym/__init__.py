"""Invariant non-local currents and local symmetry analysis of 1D scatterers."""

from ._core import (  # noqa: F401
    ConfigError,
    Error,
    Incidence,
    Interval,
    InvalidArgument,
    InvariantPair,
    PhysicsError,
    PotentialProfile,
    ScatteringState,
    Slab,
    SymmetryTransform,
    ZeroCurrentError,
    bloch_phase,
    bloch_phase_of_cell,
    cls_decompose,
    detect,
    eigenvalue_check,
    invariant_pair,
    map_field,
    q_at,
    qtilde_at,
    run_command,
    solve_scattering,
    sum_rule_residual,
    superpose,
    symmetry_set,
    unit_cell_half_trace,
)

__version__ = "0.1.0"
