"""Recover composite phases by cancelling low-order terms of p(epsilon).

The residual vector for a problem with ``m`` conditions is::

    [p(0) - target,  c_1, c_2, ..., c_{2(m-1)}]            expansion at zero error
    [p(0) - target,  c_2, c_4, ..., c_{2(m-1)}]            expansion at zero field

where ``c_k`` is the k-th Taylor coefficient of ``p(eps0 + x / pi)`` in ``x``,
i.e. of the transition probability expanded in the area error (radians) of a
nominal pi pulse. At zero field the odd coefficients vanish identically
(flipping the sign of the Rabi frequency is a global phase shift), and
``p(-1) = 0`` always, so the target condition is imposed at zero error in
both cases.

Coefficients come from exact truncated-series propagation by default;
``method="richardson"`` uses Richardson-extrapolated central differences
instead and is only accurate for low orders.
"""

import enum
import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import least_squares

from . import kernels
from .sequences import theta_areas
from .su2 import wrap_pi_units

CONVERGED_TOL = 1e-8
FD_STEPS = (1e-2, 5e-3)


class ExpansionPoint(enum.Enum):
    AT_ZERO_ERROR = "zero-error"
    AT_ZERO_FIELD = "zero-field"

    @property
    def epsilon(self):
        return 0.0 if self is ExpansionPoint.AT_ZERO_ERROR else -1.0


@dataclass(frozen=True)
class SolveProblem:
    """Phase-solving problem over a fixed area template (units of pi); the first phase is gauged to 0."""

    template: tuple
    target_p: float
    expansion_point: ExpansionPoint
    n_conditions: int

    def __post_init__(self):
        template = tuple(float(a) for a in self.template)
        if len(template) < 2 or any(a <= 0 for a in template):
            raise ValueError("template needs at least two positive areas")
        object.__setattr__(self, "template", template)
        object.__setattr__(self, "expansion_point", ExpansionPoint(self.expansion_point))
        if not 0.0 <= self.target_p <= 1.0:
            raise ValueError("target_p must lie in [0, 1]")
        if not 1 <= self.n_conditions <= len(template) - 1:
            raise ValueError(f"n_conditions must be between 1 and {len(template) - 1} (free phases), got {self.n_conditions}")

    @classmethod
    def theta(cls, n_pulses, target_p, expansion_point, n_conditions=None):
        """A_0 B ... B A template (half-pi ends, pi interior)."""
        return cls(tuple(theta_areas(n_pulses)), target_p, expansion_point, n_pulses - 1 if n_conditions is None else n_conditions)

    @classmethod
    def pi_pulses(cls, n_pulses, expansion_point, n_conditions=None):
        return cls((1.0,) * n_pulses, 1.0, expansion_point, n_pulses - 1 if n_conditions is None else n_conditions)

    @property
    def n_pulses(self):
        return len(self.template)

    @property
    def areas(self):
        return np.array(self.template) * math.pi

    @property
    def orders(self):
        top = 2 * (self.n_conditions - 1)
        if self.expansion_point is ExpansionPoint.AT_ZERO_ERROR:
            return list(range(1, top + 1))
        return list(range(2, top + 1, 2))

    @property
    def n_residuals(self):
        return 1 + len(self.orders)

    def to_dict(self):
        return {
            "template_area_pi_units": list(self.template),
            "target_p": self.target_p,
            "expansion_point": self.expansion_point.value,
            "n_conditions": self.n_conditions,
            "gauge": "first phase fixed to 0",
        }


@dataclass(frozen=True)
class SolveResult:
    phases: tuple  # units of pi, first entry 0
    residual_norm: float
    iterations: int
    converged: bool
    seed: int = 0
    start_index: int = 0
    restarts: int = 1
    converged_starts: int = field(default=0, compare=False)

    def report(self, problem):
        doc = {"problem": problem.to_dict(), **asdict(self)}
        doc["phases_pi_units"] = list(doc.pop("phases"))
        return doc

    def report_json(self, problem):
        return json.dumps(self.report(problem), indent=2) + "\n"


def _full_phases(free_pi):
    return np.concatenate([[0.0], np.asarray(free_pi, dtype=np.float64)])


def fd_taylor_coefficients(areas, phases, eps0, orders, steps=FD_STEPS):
    """Taylor coefficients of p(eps0 + x/pi) in x from Richardson-extrapolated central differences."""
    h1, h2 = steps
    ratio2 = (h1 / h2) ** 2

    def prob(e):
        _, a21 = kernels.state_column(areas, phases, np.atleast_1d(e), np.zeros(1))
        return np.abs(a21) ** 2

    out = []
    for k in orders:
        d = []
        for h in (h1, h2):
            nodes = eps0 + (k / 2.0 - np.arange(k + 1)) * h
            w = np.array([(-1) ** j * math.comb(k, j) for j in range(k + 1)], dtype=np.float64)
            d.append(float(w @ prob(nodes)) / h**k)
        deriv = (ratio2 * d[1] - d[0]) / (ratio2 - 1.0)
        out.append(deriv / math.factorial(k) / math.pi**k)
    return np.array(out)


def objective(problem, phases, method="taylor"):
    """Residual vector for free phases ``phases`` (units of pi, length n_pulses - 1)."""
    phases = np.asarray(phases, dtype=np.float64)
    if phases.shape != (problem.n_pulses - 1,):
        raise ValueError(f"expected {problem.n_pulses - 1} free phases, got {phases.shape}")
    areas = problem.areas
    ph = _full_phases(phases) * math.pi
    orders = problem.orders
    eps0 = problem.expansion_point.epsilon
    p0 = kernels.taylor_probability(areas, ph, 0.0, 0)[0]
    if not orders:
        return np.array([p0 - problem.target_p])
    if method == "taylor":
        c = kernels.taylor_probability(areas, ph, eps0, orders[-1])
        scaled = np.array([c[k] / math.pi**k for k in orders])
    elif method == "richardson":
        scaled = fd_taylor_coefficients(areas, ph, eps0, orders)
    else:
        raise ValueError(f"unknown derivative method {method!r}")
    return np.concatenate([[p0 - problem.target_p], scaled])


def residual_norm(problem, phases_pi, method="taylor"):
    """Residual norm for a full phase list (units of pi); the list is re-gauged so its first entry is 0."""
    phases_pi = np.asarray(phases_pi, dtype=np.float64)
    free = phases_pi[1:] - phases_pi[0]
    return float(np.linalg.norm(objective(problem, free, method)))


def solve(problem, n_restarts=64, seed=0, max_nfev=4000):
    """Multi-start Levenberg-Marquardt over uniformly random initial phases.

    Never raises on non-convergence; the best start is returned with
    ``converged=False``. The winner is the lowest residual norm, ties going to
    the earliest start.
    """
    if n_restarts < 1:
        raise ValueError("n_restarts must be >= 1")
    rng = np.random.default_rng(seed)
    starts = rng.uniform(0.0, 2.0, size=(n_restarts, problem.n_pulses - 1))
    method = "lm" if problem.n_residuals >= problem.n_pulses - 1 else "trf"
    fun = lambda x: objective(problem, x)  # noqa: E731

    best = None
    n_ok = 0
    for i, x0 in enumerate(starts):
        try:
            sol = least_squares(fun, x0, method=method, xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=max_nfev)
        except (ValueError, np.linalg.LinAlgError):
            continue
        norm = float(np.linalg.norm(sol.fun))
        if not math.isfinite(norm):
            continue
        n_ok += norm < CONVERGED_TOL
        if best is None or norm < best[0]:
            best = (norm, i, sol.x, int(sol.nfev))

    if best is None:
        nan_phases = (0.0,) + (math.nan,) * (problem.n_pulses - 1)
        return SolveResult(nan_phases, math.inf, 0, False, seed, -1, n_restarts, 0)
    norm, idx, x, nfev = best
    phases = (0.0,) + tuple(wrap_pi_units(v) for v in x)
    return SolveResult(phases, norm, nfev, norm < CONVERGED_TOL, seed, idx, n_restarts, n_ok)


def discover_condition_count(phases_pi, template, target_p, expansion_point, tol=1e-3):
    """Largest condition count (1 .. n-1) whose residual norm stays below ``tol``; 0 if none does."""
    best = 0
    for m in range(1, len(template)):
        problem = SolveProblem(tuple(template), target_p, expansion_point, m)
        if residual_norm(problem, phases_pi) < tol:
            best = m
        else:
            break
    return best


def _domain_points(domain):
    if isinstance(domain, np.ndarray):
        return domain.astype(np.float64).ravel()
    pts = [np.linspace(lo, hi, n) for lo, hi, n in domain]
    return np.concatenate(pts)


def profile_distance(phases_a, phases_b, template, domain):
    """Sup-norm distance between the resonant profiles of two phase lists on ``domain``.

    ``domain`` is an array of epsilon values or a list of ``(lo, hi, points)`` intervals.
    """
    eps = _domain_points(domain)
    areas = np.asarray(template, dtype=np.float64) * math.pi
    pa = np.abs(kernels.state_column(areas, np.asarray(phases_a) * math.pi, eps, np.zeros(1))[1]) ** 2
    pb = np.abs(kernels.state_column(areas, np.asarray(phases_b) * math.pi, eps, np.zeros(1))[1]) ** 2
    return float(np.max(np.abs(pa - pb)))


def profile_equivalent(phases_a, phases_b, template, domain, tol):
    """Solutions are compared by what they do, not by their phases (which are far from unique)."""
    if len(phases_a) != len(template) or len(phases_b) != len(template):
        raise ValueError("both phase lists must match the template length")
    return profile_distance(phases_a, phases_b, template, domain) <= tol


# Equivalence domains used when checking recovered solutions against tabulated ones.
BB_DOMAIN = [(-0.3, 0.3, 121)]
NB_DOMAIN = [(-1.0, -0.7, 61), (-0.1, 0.1, 41)]
