"""Single-pulse propagators, their products, and transition probabilities.

Units: the nominal Rabi frequency is 1 and a pulse of nominal area ``A``
(radians) lasts ``A/pi`` reference durations. Pulse areas and phases are
stored in units of pi so that tabulated values survive serialisation
bit-exactly.
"""

import cmath
import math
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

PROB_TOL = 1e-9


def wrap_pi_units(x):
    """Reduce a phase in units of pi to [0, 2)."""
    y = float(x) % 2.0
    return 0.0 if y >= 2.0 else y


@dataclass(frozen=True)
class Pulse:
    """Rectangular pulse at the nominal Rabi frequency.

    ``area_pi`` and ``phase_pi`` are in units of pi; the phase is wrapped to
    [0, 2). ``duration_fraction`` is the duration relative to a nominal pi
    pulse and always equals ``area_pi``.
    """

    area_pi: float
    phase_pi: float = 0.0
    duration_fraction: float = field(init=False, repr=False)

    def __post_init__(self):
        area = float(self.area_pi)
        if not (math.isfinite(area) and area > 0.0):
            raise ValueError(f"pulse area must be positive and finite, got {self.area_pi!r}")
        if not math.isfinite(float(self.phase_pi)):
            raise ValueError(f"pulse phase must be finite, got {self.phase_pi!r}")
        object.__setattr__(self, "area_pi", area)
        object.__setattr__(self, "phase_pi", wrap_pi_units(self.phase_pi))
        object.__setattr__(self, "duration_fraction", area)

    @property
    def area(self):
        return self.area_pi * math.pi

    @property
    def phase(self):
        return self.phase_pi * math.pi


@dataclass(frozen=True)
class ErrorPoint:
    """Relative Rabi-frequency error ``epsilon`` and detuning ``delta`` in units of the nominal Rabi frequency."""

    epsilon: float = 0.0
    delta: float = 0.0

    def __post_init__(self):
        eps, d = float(self.epsilon), float(self.delta)
        if not (math.isfinite(eps) and math.isfinite(d)):
            raise ValueError("error point must be finite")
        if eps < -1.0:
            raise ValueError(f"epsilon must be >= -1 (zero field), got {eps}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "delta", d)


def _as_complex(z, name):
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{name} is not finite: {z!r}")
    return z


@dataclass(frozen=True)
class Unitary2:
    """A 2x2 complex matrix ``[[a11, a12], [a21, a22]]``, intended to be unitary.

    Unitarity is not enforced on construction; call :meth:`check` or
    :meth:`unitarity_error` when it matters.
    """

    a11: complex
    a12: complex
    a21: complex
    a22: complex

    def __post_init__(self):
        for name in ("a11", "a12", "a21", "a22"):
            object.__setattr__(self, name, _as_complex(getattr(self, name), name))

    @classmethod
    def identity(cls):
        return cls(1, 0, 0, 1)

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self):
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=np.complex128)

    def dagger(self):
        c = lambda z: z.conjugate()  # noqa: E731
        return Unitary2(c(self.a11), c(self.a21), c(self.a12), c(self.a22))

    def conj(self):
        return Unitary2(self.a11.conjugate(), self.a12.conjugate(), self.a21.conjugate(), self.a22.conjugate())

    def __matmul__(self, other):
        if not isinstance(other, Unitary2):
            return NotImplemented
        return Unitary2(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def det(self):
        return self.a11 * self.a22 - self.a12 * self.a21

    def unitarity_error(self):
        """Largest entry of ``|U^dagger U - I|`` together with ``||det U| - 1|``."""
        m = self.matrix
        dev = np.abs(m.conj().T @ m - np.eye(2)).max()
        return max(float(dev), abs(abs(self.det()) - 1.0))

    def check(self, tol=1e-12):
        err = self.unitarity_error()
        if err > tol:
            raise ValueError(f"matrix is not unitary: deviation {err:.3e} > {tol:.1e}")
        return self


def pulse_propagator(pulse, error=ErrorPoint()):
    """Exact propagator of one rectangular pulse.

    The Hamiltonian is ``H = 1/2 [[-D, W e^{i phi}], [W e^{-i phi}, D]]`` with
    ``W = (1 + epsilon) * Omega_0`` and ``D = delta * Omega_0``, applied for the
    pulse duration. At zero error a phase-0 pi pulse maps |0> to -i|1>.
    """
    if error.epsilon < -1.0:
        raise ValueError("epsilon must be >= -1")
    om = 1.0 + error.epsilon
    d = error.delta
    w = math.hypot(om, d)
    h = 0.5 * pulse.area * w
    c = math.cos(h)
    s = math.sin(h) / w if w > 0.0 else 0.5 * pulse.area
    e_plus = cmath.exp(1j * pulse.phase)
    return Unitary2(
        complex(c, s * d),
        -1j * s * om * e_plus,
        -1j * s * om * e_plus.conjugate(),
        complex(c, -s * d),
    )


def compose(unitaries):
    """Total propagator ``U_N ... U_1`` for propagators listed in application order."""
    unitaries = list(unitaries)
    if not unitaries:
        raise ValueError("cannot compose an empty list of propagators")
    return reduce(lambda acc, u: u @ acc, unitaries[1:], unitaries[0])


def transition_probability(u):
    """``|a21|^2``, clamped to [0, 1] after a sanity check on the excess."""
    p = abs(u.a21) ** 2
    if p > 1.0 + PROB_TOL or not math.isfinite(p):
        raise ValueError(f"transition probability {p!r} exceeds 1 beyond tolerance; propagator is not unitary")
    return min(max(p, 0.0), 1.0)


def infidelity(u):
    """``1 - p`` evaluated as ``|a11|^2``, which keeps full relative precision near p = 1."""
    return min(abs(u.a11) ** 2, 1.0)


def sequence_propagator(pulses, error=ErrorPoint()):
    return compose(pulse_propagator(p, error) for p in pulses)
