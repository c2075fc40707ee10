"""Excitation profiles over Rabi-error and detuning grids, plus simple profile metrics."""

import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .noise import noisy_profile

REFINE_STRENGTH = 8.0


@dataclass(frozen=True)
class GridSpec:
    """Axis ranges and point counts.

    A single-point axis sits at the midpoint of its range, so the defaults
    give delta = 0 for 1-D scans. ``refine="center"`` replaces the uniform
    epsilon axis by ``c + r sinh(s u) / sinh(s)`` (``u`` uniform in [-1, 1],
    ``c``/``r`` the range centre/half-width, ``s`` = :data:`REFINE_STRENGTH`),
    which keeps the endpoints and concentrates points near the centre.
    """

    eps_min: float = -1.0
    eps_max: float = 1.0
    eps_points: int = 201
    delta_min: float = -1.0
    delta_max: float = 1.0
    delta_points: int = 1
    refine: str = "none"

    def __post_init__(self):
        if self.eps_min < -1.0:
            raise ValueError("eps_min must be >= -1")
        for lo, hi, n, axis in ((self.eps_min, self.eps_max, self.eps_points, "eps"), (self.delta_min, self.delta_max, self.delta_points, "delta")):
            if int(n) != n or n < 1:
                raise ValueError(f"{axis}_points must be a positive integer")
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"{axis} range must be finite")
            if n > 1 and not hi > lo:
                raise ValueError(f"{axis}_max must exceed {axis}_min when {axis}_points > 1")
        if self.refine not in ("none", "center"):
            raise ValueError(f"refine must be 'none' or 'center', got {self.refine!r}")

    @property
    def eps_axis(self):
        if self.eps_points == 1:
            return np.array([0.5 * (self.eps_min + self.eps_max)])
        if self.refine == "center":
            u = np.linspace(-1.0, 1.0, self.eps_points)
            c = 0.5 * (self.eps_max + self.eps_min)
            r = 0.5 * (self.eps_max - self.eps_min)
            axis = c + r * np.sinh(REFINE_STRENGTH * u) / math.sinh(REFINE_STRENGTH)
            axis[0], axis[-1] = self.eps_min, self.eps_max
            return axis
        return np.linspace(self.eps_min, self.eps_max, self.eps_points)

    @property
    def delta_axis(self):
        if self.delta_points == 1:
            return np.array([0.5 * (self.delta_min + self.delta_max)])
        return np.linspace(self.delta_min, self.delta_max, self.delta_points)

    @classmethod
    def parse_axis(cls, text):
        """Parse ``"a:b:points"``."""
        try:
            a, b, n = text.split(":")
            return float(a), float(b), int(n)
        except ValueError:
            raise ValueError(f"grid must look like 'min:max:points', got {text!r}") from None


@dataclass(frozen=True)
class ProfileRecord:
    epsilon: float
    delta: float
    probability_ideal: float
    probability_noisy: float = None


def _ideal(seq, eps, delta):
    a11, a21 = kernels.state_column(seq.areas, seq.phases, eps, delta)
    p = np.abs(a21) ** 2
    if p.size and p.max() > 1.0 + 1e-9:
        raise ArithmeticError("probability above 1: propagation lost unitarity")
    return np.clip(p, 0.0, 1.0)


def evaluate(seq, eps, delta, noise=None):
    """Vectorised core shared by the scans: ideal (and optionally noisy) probabilities per point."""
    eps = np.asarray(eps, dtype=np.float64)
    delta = np.asarray(delta, dtype=np.float64)
    ideal = _ideal(seq, eps, delta)
    noisy = noisy_profile(seq, eps, delta, noise) if noise is not None else None
    return ideal, noisy


def _records(eps, delta, ideal, noisy):
    if noisy is None:
        return [ProfileRecord(float(e), float(d), float(p)) for e, d, p in zip(eps, delta, ideal)]
    return [ProfileRecord(float(e), float(d), float(p), float(q)) for e, d, p, q in zip(eps, delta, ideal, noisy)]


def scan_1d(seq, grid=GridSpec(), noise=None):
    """One record per epsilon point, in axis order."""
    if grid.delta_points != 1:
        raise ValueError("a 1-D scan needs delta_points == 1")
    eps = grid.eps_axis
    delta = np.full_like(eps, grid.delta_axis[0])
    return _records(eps, delta, *evaluate(seq, eps, delta, noise))


def scan_2d(seq, grid=GridSpec(eps_points=101, delta_points=101), noise=None):
    """Row-major records: delta is the outer (slow) index, epsilon the inner one."""
    if seq is None or not getattr(seq, "pulses", ()):
        raise ValueError("scan_2d needs a non-empty sequence")
    eps_axis, delta_axis = grid.eps_axis, grid.delta_axis
    eps, delta = np.meshgrid(eps_axis, delta_axis)
    eps, delta = eps.ravel(), delta.ravel()
    return _records(eps, delta, *evaluate(seq, eps, delta, noise))


def as_arrays(records, noisy=False):
    eps = np.array([r.epsilon for r in records])
    if noisy:
        p = np.array([r.probability_noisy for r in records], dtype=np.float64)
    else:
        p = np.array([r.probability_ideal for r in records])
    return eps, p


# ---------------------------------------------------------------------------
# metrics


@dataclass(frozen=True)
class ProfileMetrics:
    peak: float
    peak_epsilon: float
    fwhm_eps: float
    flat_top_level: float
    flat_top_width: float
    wing_level: float
    degenerate: bool = False
    truncated: bool = False


def _crossing(x0, y0, x1, y1, level):
    if y1 == y0:
        return x0
    return x0 + (level - y0) * (x1 - x0) / (y1 - y0)


def _extent_above(eps, p, centre, level):
    """Interpolated [left, right] edges of the contiguous run around ``centre`` with p >= level."""
    n = len(p)
    i = centre
    while i > 0 and p[i - 1] >= level:
        i -= 1
    j = centre
    while j < n - 1 and p[j + 1] >= level:
        j += 1
    left = eps[0] if i == 0 else _crossing(eps[i - 1], p[i - 1], eps[i], p[i], level)
    right = eps[-1] if j == n - 1 else _crossing(eps[j], p[j], eps[j + 1], p[j + 1], level)
    return left, right, i == 0 or j == n - 1


def fwhm(eps, p):
    """Full width at half maximum of the lobe containing the peak; 0 for an all-zero profile."""
    eps, p = np.asarray(eps), np.asarray(p)
    k = int(np.argmax(p))
    if p[k] <= 0.0:
        return 0.0
    left, right, _ = _extent_above(eps, p, k, 0.5 * p[k])
    return float(right - left)


def flat_top_width(eps, p, level):
    """Width of the region around the peak where p >= level (0 if the peak is below level)."""
    eps, p = np.asarray(eps), np.asarray(p)
    k = int(np.argmax(p))
    if p[k] < level:
        return 0.0
    left, right, _ = _extent_above(eps, p, k, level)
    return float(right - left)


def central_lobe(eps, p):
    """Index bounds of the peak's lobe: walk outwards while p keeps decreasing."""
    p = np.asarray(p)
    k = int(np.argmax(p))
    i = k
    while i > 0 and p[i - 1] <= p[i]:
        i -= 1
    j = k
    while j < len(p) - 1 and p[j + 1] <= p[j]:
        j += 1
    return i, j


def wing_level(eps, p):
    """Largest p outside the central lobe (0 if the lobe spans the grid)."""
    p = np.asarray(p)
    i, j = central_lobe(eps, p)
    outside = np.concatenate([p[:i], p[j + 1 :]])
    return float(outside.max()) if outside.size else 0.0


def max_outside(eps, p, half_width):
    """Largest p with |eps| > half_width."""
    eps, p = np.asarray(eps), np.asarray(p)
    sel = np.abs(eps) > half_width
    return float(p[sel].max()) if sel.any() else 0.0


def profile_metrics(records, flat_top_level=0.99, noisy=False):
    if len(records) < 3:
        raise ValueError("profile metrics need at least three points")
    eps, p = as_arrays(records, noisy)
    order = np.argsort(eps, kind="stable")
    eps, p = eps[order], p[order]
    k = int(np.argmax(p))
    if p[k] <= 0.0:
        return ProfileMetrics(0.0, float(eps[k]), 0.0, flat_top_level, 0.0, 0.0, degenerate=True)
    _, _, truncated = _extent_above(eps, p, k, 0.5 * p[k])
    return ProfileMetrics(
        peak=float(p[k]),
        peak_epsilon=float(eps[k]),
        fwhm_eps=fwhm(eps, p),
        flat_top_level=flat_top_level,
        flat_top_width=flat_top_width(eps, p, flat_top_level),
        wing_level=wing_level(eps, p),
        truncated=truncated,
    )


def robust_fraction(records, level=0.9, noisy=False):
    """Fraction of grid points whose probability exceeds ``level``."""
    _, p = as_arrays(records, noisy)
    return float(np.mean(p > level))


# ---------------------------------------------------------------------------
# CSV


def _fmt(x):
    return f"{x:.12g}"


def format_csv(records):
    """``epsilon,delta,p_ideal[,p_noisy]`` with 12 significant digits, one row per record."""
    noisy = any(r.probability_noisy is not None for r in records)
    buf = io.StringIO()
    buf.write("epsilon,delta,p_ideal,p_noisy\n" if noisy else "epsilon,delta,p_ideal\n")
    for r in records:
        row = [_fmt(r.epsilon), _fmt(r.delta), _fmt(r.probability_ideal)]
        if noisy:
            row.append(_fmt(r.probability_noisy))
        buf.write(",".join(row) + "\n")
    return buf.getvalue()


def read_csv(text):
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    if header[:3] != ["epsilon", "delta", "p_ideal"]:
        raise ValueError(f"unexpected CSV header {lines[0]!r}")
    out = []
    for line in lines[1:]:
        vals = [float(v) for v in line.split(",")]
        out.append(ProfileRecord(*vals))
    return out
