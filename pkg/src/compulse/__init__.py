"""Composite pulse sequences on a driven two-level system: construction, profiles, phase solving, decoherence."""

__version__ = "0.1.0"

from .noise import NoiseParams, noisy_transition_probability
from .scan import GridSpec, ProfileRecord, profile_metrics, scan_1d, scan_2d
from .sequences import (
    Family,
    Sequence,
    bb,
    bb_phases,
    nb,
    nb_phases,
    pb_b_of_n,
    pb_n_of_b,
    single_pi,
    theta_bb,
    theta_nb,
    theta_pb,
    universal,
)
from .solver import ExpansionPoint, SolveProblem, SolveResult, objective, profile_equivalent, solve
from .su2 import ErrorPoint, Pulse, Unitary2, compose, pulse_propagator, transition_probability

__all__ = [
    "ErrorPoint",
    "ExpansionPoint",
    "Family",
    "GridSpec",
    "NoiseParams",
    "ProfileRecord",
    "Pulse",
    "Sequence",
    "SolveProblem",
    "SolveResult",
    "Unitary2",
    "bb",
    "bb_phases",
    "compose",
    "nb",
    "nb_phases",
    "noisy_transition_probability",
    "objective",
    "pb_b_of_n",
    "pb_n_of_b",
    "profile_equivalent",
    "profile_metrics",
    "pulse_propagator",
    "scan_1d",
    "scan_2d",
    "single_pi",
    "solve",
    "theta_bb",
    "theta_nb",
    "theta_pb",
    "transition_probability",
    "universal",
]
