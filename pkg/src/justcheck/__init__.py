"""Justness, fairness and liveness checking for component-labelled CCS."""

from .ccs import Action, TAU, parse, check_guarded, derive_transitions, explore
from .clts import CLTS, Transition, validate, concurrent, component_tasks, enabled_nonblocking, export_dot
from .runs import Run, classify
from .liveness import Criterion, Verdict, check_liveness, find_counterexample, check_full_fairness, liveness_matrix
from .bisim import strong_bisimilar, quotient
from .catalog import load_example

__version__ = "0.1.0"
