"""Composite pulse sequences: broadband, narrowband, passband, universal and theta families."""

import enum
import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import tables
from .su2 import ErrorPoint, Pulse, infidelity, sequence_propagator, transition_probability, wrap_pi_units


class Family(enum.Enum):
    BB = "bb"
    NB = "nb"
    PB_BofN = "pb-bn"
    PB_NofB = "pb-nb"
    UNIVERSAL = "universal"
    THETA_BB = "theta-bb"
    THETA_NB = "theta-nb"
    THETA_PB = "theta-pb"
    SINGLE = "single"
    CUSTOM = "custom"


PI_FAMILIES = frozenset({Family.BB, Family.NB, Family.PB_BofN, Family.PB_NofB, Family.UNIVERSAL, Family.SINGLE})
THETA_FAMILIES = frozenset({Family.THETA_BB, Family.THETA_NB, Family.THETA_PB})


@dataclass(frozen=True)
class Sequence:
    pulses: tuple
    family: Family
    target_p: float = 1.0
    label: str = ""

    def __post_init__(self):
        pulses = tuple(self.pulses)
        if not pulses:
            raise ValueError("a sequence needs at least one pulse")
        if not all(isinstance(p, Pulse) for p in pulses):
            raise TypeError("pulses must be Pulse instances")
        if not 0.0 <= self.target_p <= 1.0:
            raise ValueError(f"target_p must lie in [0, 1], got {self.target_p}")
        object.__setattr__(self, "pulses", pulses)
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "target_p", float(self.target_p))

    @property
    def n_pulses(self):
        return len(self.pulses)

    @property
    def areas(self):
        """Nominal areas in radians."""
        return np.array([p.area for p in self.pulses])

    @property
    def phases(self):
        """Phases in radians, in [0, 2 pi)."""
        return np.array([p.phase for p in self.pulses])

    @property
    def phases_pi(self):
        return tuple(p.phase_pi for p in self.pulses)

    @property
    def durations(self):
        """Durations in units of the nominal pi-pulse duration."""
        return np.array([p.duration_fraction for p in self.pulses])

    def propagator(self, error=ErrorPoint()):
        return sequence_propagator(self.pulses, error)

    def probability(self, epsilon=0.0, delta=0.0):
        return transition_probability(self.propagator(ErrorPoint(epsilon, delta)))

    def infidelity(self, epsilon=0.0, delta=0.0):
        return infidelity(self.propagator(ErrorPoint(epsilon, delta)))

    def to_dict(self):
        return {
            "label": self.label,
            "family": self.family.value,
            "target_p": self.target_p,
            "pulses": [{"area_pi_units": p.area_pi, "phase_pi_units": p.phase_pi} for p in self.pulses],
        }

    def to_json(self):
        # repr-based float output: shortest string that round-trips exactly
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, doc):
        try:
            pulses = tuple(Pulse(float(p["area_pi_units"]), float(p["phase_pi_units"])) for p in doc["pulses"])
            return cls(pulses, Family(doc.get("family", "custom")), float(doc.get("target_p", 1.0)), str(doc.get("label", "")))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed sequence document: {exc}") from exc

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _check_odd(n, name="N"):
    if isinstance(n, bool) or int(n) != n or n < 3 or n % 2 == 0:
        raise ValueError(f"{name} must be an odd integer >= 3, got {n!r}")
    return int(n)


def _wrap_fraction(x):
    return float(Fraction(x) % 2)


def bb_phases(n):
    """Broadband phases ``k (k-1) / N`` (units of pi) for k = 1..N."""
    n = _check_odd(n)
    return [_wrap_fraction(Fraction(k * (k - 1), n)) for k in range(1, n + 1)]


def nb_phases(n):
    """Narrowband phases (units of pi): ``k/N`` for even k, ``-(k-1)/N`` for odd k."""
    n = _check_odd(n)
    return [_wrap_fraction(Fraction(k, n) if k % 2 == 0 else Fraction(-(k - 1), n)) for k in range(1, n + 1)]


def _pi_sequence(phases, family, label):
    return Sequence(tuple(Pulse(1.0, ph) for ph in phases), family, 1.0, label)


def bb(n):
    return _pi_sequence(bb_phases(n), Family.BB, f"BB{n}")


def nb(n):
    return _pi_sequence(nb_phases(n), Family.NB, f"NB{n}")


def single_pi():
    return _pi_sequence([0.0], Family.SINGLE, "single")


def pb_b_of_n(n_outer, n_inner):
    """Broadband sequence of narrowband blocks; even-numbered blocks run in reverse pulse order."""
    n_outer = _check_odd(n_outer, "N_outer")
    n_inner = _check_odd(n_inner, "N_inner")
    beta = [Fraction(k * (k - 1), n_outer) for k in range(1, n_outer + 1)]
    nu = [Fraction(k, n_inner) if k % 2 == 0 else Fraction(-(k - 1), n_inner) for k in range(1, n_inner + 1)]
    phases = []
    for k, b in enumerate(beta, start=1):
        block = [_wrap_fraction(x + b) for x in nu]
        if k % 2 == 0:
            block.reverse()
        phases.extend(block)
    return _pi_sequence(phases, Family.PB_BofN, f"B{n_outer}(N{n_inner})")


def pb_n_of_b(n_outer, n_inner):
    """Narrowband sequence of broadband blocks."""
    n_outer = _check_odd(n_outer, "N_outer")
    n_inner = _check_odd(n_inner, "N_inner")
    nu = [Fraction(k, n_outer) if k % 2 == 0 else Fraction(-(k - 1), n_outer) for k in range(1, n_outer + 1)]
    beta = [Fraction(k * (k - 1), n_inner) for k in range(1, n_inner + 1)]
    phases = [_wrap_fraction(x + v) for v in nu for x in beta]
    return _pi_sequence(phases, Family.PB_NofB, f"N{n_outer}(B{n_inner})")


def universal(label):
    try:
        phases = tables.UNIVERSAL[label]
    except KeyError:
        raise KeyError(f"unknown universal sequence {label!r}; valid labels: {', '.join(tables.UNIVERSAL)}") from None
    return _pi_sequence([_wrap_fraction(ph) for ph in phases], Family.UNIVERSAL, label)


def _p_key(p):
    try:
        pf = float(p)
    except (TypeError, ValueError):
        raise ValueError(f"target probability must be a number, got {p!r}") from None
    key = f"{pf:.1f}"
    if key not in tables.TARGET_PS or abs(pf - float(key)) > 1e-9:
        raise ValueError(f"target probability must be one of {', '.join(tables.TARGET_PS)}, got {p!r}")
    return key


def theta_areas(n):
    """Area pattern (units of pi) of A B ... B A: half-pi ends, pi interior."""
    if n < 2:
        raise ValueError("a theta sequence has at least two pulses")
    return [0.5] + [1.0] * (n - 2) + [0.5]


def _theta_sequence(phases, family, p, label, areas=None):
    areas = theta_areas(len(phases)) if areas is None else areas
    pulses = tuple(Pulse(a, float(ph)) for a, ph in zip(areas, phases))
    return Sequence(pulses, family, float(p), label)


def theta_bb(n, p):
    key = _p_key(p)
    if (n, key) not in tables.THETA_BB:
        raise ValueError(f"no broadband theta sequence with N={n}; available N: {tables.THETA_BB_COLUMNS}")
    return _theta_sequence(tables.THETA_BB[(n, key)], Family.THETA_BB, key, f"thetaBB{n}(p={key})")


def theta_nb(n, p):
    key = _p_key(p)
    if (n, key) not in tables.THETA_NB:
        raise ValueError(f"no narrowband theta sequence with N={n}; available N: {tables.THETA_NB_COLUMNS}")
    return _theta_sequence(tables.THETA_NB[(n, key)], Family.THETA_NB, key, f"thetaNB{n}(p={key})")


def twin_phase(p):
    """Twinning phase ``2 arccos(sqrt(p))`` in units of pi."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("p must lie in [0, 1]")
    return 2.0 * math.acos(math.sqrt(p)) / math.pi


def theta_pb(n_half, p):
    """Passband theta pulse: the p = 0.5 narrowband half followed by its reverse shifted by the twinning phase."""
    key = _p_key(p)
    if n_half not in tables.THETA_PB_HALF_SIZES:
        raise ValueError(f"passband half-length must be one of {tables.THETA_PB_HALF_SIZES}, got {n_half!r}")
    half = [float(x) for x in tables.THETA_NB[(n_half, tables.THETA_PB_HALF_ROW)]]
    shift = twin_phase(float(key))
    phases = half + [ph + shift for ph in reversed(half)]
    areas = theta_areas(n_half) * 2  # the half is palindromic in area, so its reverse has the same pattern
    return _theta_sequence(phases, Family.THETA_PB, key, f"thetaPB{2 * n_half}(p={key})", areas)


def build(family, n=None, inner_n=None, p=None, label=None):
    """Resolve a family selector to exactly one constructor call."""
    fam = Family(family)
    if fam is Family.BB:
        return bb(_need(n, "n"))
    if fam is Family.NB:
        return nb(_need(n, "n"))
    if fam is Family.PB_BofN:
        return pb_b_of_n(_need(n, "n"), _need(inner_n, "inner_n"))
    if fam is Family.PB_NofB:
        return pb_n_of_b(_need(n, "n"), _need(inner_n, "inner_n"))
    if fam is Family.UNIVERSAL:
        return universal(_need(label, "label"))
    if fam is Family.THETA_BB:
        return theta_bb(_need(n, "n"), _need(p, "p"))
    if fam is Family.THETA_NB:
        return theta_nb(_need(n, "n"), _need(p, "p"))
    if fam is Family.THETA_PB:
        return theta_pb(_need(n, "n"), _need(p, "p"))
    if fam is Family.SINGLE:
        return single_pi()
    raise ValueError("custom sequences are loaded from a file, not built from a selector")


def _need(value, name):
    if value is None:
        raise ValueError(f"this family needs --{name.replace('_', '-')}")
    return value


def catalogue():
    """Human-readable list of every buildable selector."""
    return {
        "single": ["single"],
        "bb": ["any odd N >= 3"],
        "nb": ["any odd N >= 3"],
        "pb-bn": ["any odd N, inner N >= 3"],
        "pb-nb": ["any odd N, inner N >= 3"],
        "universal": list(tables.UNIVERSAL),
        "theta-bb": [f"N={n}" for n in tables.THETA_BB_COLUMNS] + [f"p={p}" for p in tables.TARGET_PS],
        "theta-nb": [f"N={n}" for n in tables.THETA_NB_COLUMNS] + [f"p={p}" for p in tables.TARGET_PS],
        "theta-pb": [f"N={n} (half length)" for n in tables.THETA_PB_HALF_SIZES] + [f"p={p}" for p in tables.TARGET_PS],
    }
