"""Discrete-time QHD simulation toolkit: corpus access, the split-step
evolution engine, classical baselines, and best-of-k evaluation."""

from ._qhdsim import (
    best_of_k,
    evaluate,
    list_functions,
    run_lfmsgd,
    run_qhd,
    run_subgrad,
    subgradient,
)

__all__ = [
    "best_of_k",
    "evaluate",
    "list_functions",
    "run_lfmsgd",
    "run_qhd",
    "run_subgrad",
    "subgradient",
]
