"""Linear looped-transformer simulator.

A looped linear-attention layer applied to the prompt [[X, y], [q^T, alpha]]
updates only the query row, and that row tracks gradient descent on the
least-squares loss: q^(t) = -alpha * theta^(t).  This package exposes the
simulator, the gradient-descent oracle, the theoretical error ceilings, and
the verification checks that tie them together.
"""

from looptf._core import (
    BoundReport,
    EquivalenceReport,
    GdTrajectory,
    LoopTrajectory,
    SpectralSummary,
    TaskInstance,
    attention_closed_form,
    attention_general,
    check_attention_oracle,
    check_bound,
    check_equivalence,
    condition_number,
    experiment_csv,
    least_squares,
    load_task,
    make_task,
    prediction_error,
    run_gd,
    run_loops,
    save_task,
    spectral_norm,
    sym_eig_extremes,
    task_from_json,
    task_to_json,
    theoretical_param_bound,
    theoretical_prediction_bound,
)

__all__ = [
    "BoundReport",
    "EquivalenceReport",
    "GdTrajectory",
    "LoopTrajectory",
    "SpectralSummary",
    "TaskInstance",
    "attention_closed_form",
    "attention_general",
    "check_attention_oracle",
    "check_bound",
    "check_equivalence",
    "condition_number",
    "experiment_csv",
    "least_squares",
    "load_task",
    "make_task",
    "prediction_error",
    "run_gd",
    "run_loops",
    "save_task",
    "spectral_norm",
    "sym_eig_extremes",
    "task_from_json",
    "task_to_json",
    "theoretical_param_bound",
    "theoretical_prediction_bound",
]
