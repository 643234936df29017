"""Matrix information geometry detectors for nonhomogeneous clutter."""

from ._core import (
    NumericError,
    ValidationError,
    arithmetic_mean,
    build_hpd_observation,
    canonical_config,
    clutter_cov,
    dlog_kernel,
    gen_training,
    geometric_mean,
    learn_projection,
    measures,
    read_matrices,
    run_bench,
    run_distances,
    run_gen_training,
    run_sweep,
    sq_dist,
    steering,
    write_matrices,
)

__all__ = [
    "NumericError",
    "ValidationError",
    "arithmetic_mean",
    "build_hpd_observation",
    "canonical_config",
    "clutter_cov",
    "dlog_kernel",
    "gen_training",
    "geometric_mean",
    "learn_projection",
    "measures",
    "read_matrices",
    "run_bench",
    "run_distances",
    "run_gen_training",
    "run_sweep",
    "sq_dist",
    "steering",
    "write_matrices",
]
