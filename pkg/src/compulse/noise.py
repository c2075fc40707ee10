"""Decoherence and readout error on top of the ideal pulse propagators.

Each pulse is applied as its exact unitary followed by an amplitude-damping
channel (``gamma_1 = 1 - exp(-tau/T1)``) and a pure-dephasing channel whose
rate is ``1/T2 - 1/(2 T1)``. With ``tau/T1 ~ 5e-4`` per pulse the splitting
error is far below anything visible in a profile.
"""

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from . import kernels
from .su2 import ErrorPoint, pulse_propagator

try:
    import tomllib
except ImportError:  # python < 3.11
    import tomli as tomllib

# Calibration values of the single-transmon device used as the reference setup.
DEFAULT_T1 = 203.44e-6
DEFAULT_T2 = 301.91e-6
DEFAULT_PULSE_DURATION = 100e-9
DEFAULT_READOUT_ERROR = 0.0357
TRANSMON_ANHARMONICITY_HZ = -0.34719e9  # metadata only; leakage is not modelled


@dataclass(frozen=True)
class NoiseParams:
    """Times in seconds. ``pulse_duration`` is the length of a nominal pi pulse.

    ``readout_error`` is the probability of reading 1 when the qubit is in 0;
    ``readout_error_down`` (reading 0 from 1) defaults to the same value.
    """

    t1: float = DEFAULT_T1
    t2: float = DEFAULT_T2
    pulse_duration: float = DEFAULT_PULSE_DURATION
    readout_error: float = DEFAULT_READOUT_ERROR
    readout_error_down: float = None

    def __post_init__(self):
        if self.readout_error_down is None:
            object.__setattr__(self, "readout_error_down", self.readout_error)
        for name in ("t1", "t2", "pulse_duration"):
            v = float(getattr(self, name))
            if not v > 0 or math.isnan(v):
                raise ValueError(f"{name} must be positive, got {v}")
            object.__setattr__(self, name, v)
        if self.t2 > 2.0 * self.t1:
            raise ValueError(f"T2 ({self.t2}) cannot exceed 2*T1 ({2 * self.t1})")
        if math.isinf(self.pulse_duration):
            raise ValueError("pulse_duration must be finite")
        for name in ("readout_error", "readout_error_down"):
            r = float(getattr(self, name))
            if not 0.0 <= r < 0.5:
                raise ValueError(f"{name} must lie in [0, 0.5), got {r}")
            object.__setattr__(self, name, r)

    @classmethod
    def noiseless(cls):
        return cls(t1=math.inf, t2=math.inf, readout_error=0.0)

    @property
    def dephasing_rate(self):
        return 1.0 / self.t2 - 0.5 / self.t1

    @classmethod
    def from_mapping(cls, doc):
        """Build from a config section. Keys: t1_us, t2_us, pulse_duration_ns, readout_error, readout_error_down."""
        known = {"t1_us", "t2_us", "pulse_duration_ns", "readout_error", "readout_error_down"}
        unknown = set(doc) - known
        if unknown:
            raise ValueError(f"unknown noise keys: {', '.join(sorted(unknown))}")
        kw = {}
        if "t1_us" in doc:
            kw["t1"] = float(doc["t1_us"]) * 1e-6
        if "t2_us" in doc:
            kw["t2"] = float(doc["t2_us"]) * 1e-6
        if "pulse_duration_ns" in doc:
            kw["pulse_duration"] = float(doc["pulse_duration_ns"]) * 1e-9
        for key in ("readout_error", "readout_error_down"):
            if key in doc:
                kw[key] = float(doc[key])
        return cls(**kw)

    @classmethod
    def from_file(cls, path):
        """Read a JSON or TOML file; a ``[noise]`` table is used if present."""
        path = Path(path)
        text = path.read_text()
        doc = json.loads(text) if path.suffix == ".json" else tomllib.loads(text)
        return cls.from_mapping(doc.get("noise", doc))


def readout_map(p, error_up, error_down=None):
    """Measured excitation probability: ``p (1 - r_down) + (1 - p) r_up``."""
    if error_down is None:
        error_down = error_up
    return p * (1.0 - error_down) + (1.0 - p) * error_up


@dataclass(frozen=True)
class MeasuredProbability:
    """A probability that has already been through the readout map; it cannot be mapped again."""

    value: float
    readout_applied: bool = field(default=True, init=False)


def apply_readout(p, params):
    if isinstance(p, MeasuredProbability):
        raise ValueError("readout error has already been applied to this probability")
    return MeasuredProbability(float(readout_map(p, params.readout_error, params.readout_error_down)))


# --- channels as Kraus operators (used for validation and as a reference path)


def amplitude_damping_kraus(gamma):
    return [
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=np.complex128),
        np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=np.complex128),
    ]


def dephasing_kraus(lam):
    return [
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - lam)]], dtype=np.complex128),
        np.array([[0.0, 0.0], [0.0, math.sqrt(lam)]], dtype=np.complex128),
    ]


def pulse_kraus(tau, params):
    """Kraus operators of the per-pulse decoherence (amplitude damping, then dephasing)."""
    gamma = -math.expm1(-tau / params.t1)
    lam = -math.expm1(-2.0 * params.dephasing_rate * tau)
    return [b @ a for b in dephasing_kraus(lam) for a in amplitude_damping_kraus(gamma)]


def kraus_completeness_error(ops):
    total = sum(k.conj().T @ k for k in ops)
    return float(np.abs(total - np.eye(2)).max())


def apply_kraus(rho, ops):
    return sum(k @ rho @ k.conj().T for k in ops)


def check_density(rho, tol=1e-10):
    """Raise unless ``rho`` is a 2x2 Hermitian, unit-trace, positive semidefinite matrix."""
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.shape != (2, 2):
        raise ValueError("density matrix must be 2x2")
    if np.abs(rho - rho.conj().T).max() > tol:
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > 1e-12:
        raise ValueError(f"density matrix trace is {np.trace(rho).real!r}")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise ValueError("density matrix is not positive semidefinite")
    return rho


def evolve_density(seq, error, params):
    """Reference (Kraus) evolution of |0><0| through ``seq``; returns the final density matrix."""
    rho = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=np.complex128)
    for pulse in seq.pulses:
        u = pulse_propagator(pulse, error).matrix
        rho = u @ rho @ u.conj().T
        rho = apply_kraus(rho, pulse_kraus(pulse.duration_fraction * params.pulse_duration, params))
    return rho


def excited_population(seq, eps, delta, params):
    """Pre-readout excited-state population on a grid (vectorised)."""
    taus = seq.durations * params.pulse_duration
    return kernels.noisy_excited(seq.areas, seq.phases, taus, eps, delta, params.t1, params.t2)


def noisy_profile(seq, eps, delta, params):
    """Measured excitation probability on a grid: decoherence, then readout error once."""
    p = np.clip(excited_population(seq, eps, delta, params), 0.0, 1.0)
    return readout_map(p, params.readout_error, params.readout_error_down)


def noisy_transition_probability(seq, error=ErrorPoint(), params=NoiseParams()):
    p = noisy_profile(seq, np.array([error.epsilon]), np.array([error.delta]), params)
    return float(p[0])


def default_params(**overrides):
    return replace(NoiseParams(), **overrides)
