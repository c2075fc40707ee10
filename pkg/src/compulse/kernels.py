"""Hot loops: pulse-by-pulse propagation over grids of (epsilon, delta) points.

Every kernel exists twice. The ``*_jit`` variants are numba-compiled and
parallel over grid points; the ``*_numpy`` variants vectorise over grid points
and loop over pulses in Python. The unsuffixed names are bound to one of them
at import time according to ``COMPULSE_BACKEND``.

Conventions shared by all kernels (dimensionless units, nominal Rabi
frequency = 1, a pulse of nominal area ``A`` rotates by ``A`` on resonance)::

    W     = sqrt((1 + eps)**2 + delta**2)
    h     = A * W / 2
    U     = [[cos h + i s delta,   -i s (1+eps) e^{+i phi}],
             [-i s (1+eps) e^{-i phi},   cos h - i s delta]],   s = sin(h) / W

Areas and phases are passed in radians. The initial state is |0>, so only the
first column of the total propagator is ever needed.
"""

import math

import numpy as np

from ._jit import USE_NUMBA, njit, prange


def _pulse_trig(areas, phases):
    areas = np.ascontiguousarray(areas, dtype=np.float64)
    phases = np.ascontiguousarray(phases, dtype=np.float64)
    if areas.shape != phases.shape or areas.ndim != 1:
        raise ValueError("areas and phases must be 1-D arrays of equal length")
    return areas, np.cos(phases), np.sin(phases)


def _grid(eps, delta):
    eps = np.ascontiguousarray(eps, dtype=np.float64).ravel()
    delta = np.ascontiguousarray(delta, dtype=np.float64).ravel()
    if delta.size == 1 and eps.size != 1:
        delta = np.full_like(eps, delta[0])
    if eps.shape != delta.shape:
        raise ValueError("eps and delta must have the same number of points")
    return eps, delta


# ---------------------------------------------------------------------------
# coherent propagation


def state_column_numpy(areas, phases, eps, delta):
    areas, cphi, sphi = _pulse_trig(areas, phases)
    eps, delta = _grid(eps, delta)
    om = 1.0 + eps
    w = np.sqrt(om * om + delta * delta)
    safe_w = np.where(w > 0.0, w, 1.0)
    c0 = np.ones_like(eps, dtype=np.complex128)
    c1 = np.zeros_like(eps, dtype=np.complex128)
    for k in range(areas.size):
        h = 0.5 * areas[k] * w
        c = np.cos(h)
        s = np.where(w > 0.0, np.sin(h) / safe_w, 0.5 * areas[k])
        e_plus = cphi[k] + 1j * sphi[k]
        u11 = c + 1j * s * delta
        u22 = c - 1j * s * delta
        u12 = -1j * s * om * e_plus
        u21 = -1j * s * om * np.conj(e_plus)
        c0, c1 = u11 * c0 + u12 * c1, u21 * c0 + u22 * c1
    return c0, c1


@njit(parallel=True)
def _state_column_kernel(areas, cphi, sphi, eps, delta, out0, out1):
    npts = eps.shape[0]
    npulse = areas.shape[0]
    for i in prange(npts):
        om = 1.0 + eps[i]
        d = delta[i]
        w = math.sqrt(om * om + d * d)
        # (re, im) of the two amplitudes
        ar, ai, br, bi = 1.0, 0.0, 0.0, 0.0
        for k in range(npulse):
            h = 0.5 * areas[k] * w
            c = math.cos(h)
            s = math.sin(h) / w if w > 0.0 else 0.5 * areas[k]
            sd = s * d
            so = s * om
            # u12 = -i so e^{+i phi} = so*(sin phi - i cos phi)
            # u21 = -i so e^{-i phi} = so*(-sin phi - i cos phi)
            u12r = so * sphi[k]
            u12i = -so * cphi[k]
            u21r = -so * sphi[k]
            u21i = -so * cphi[k]
            nar = c * ar - sd * ai + u12r * br - u12i * bi
            nai = c * ai + sd * ar + u12r * bi + u12i * br
            nbr = u21r * ar - u21i * ai + c * br + sd * bi
            nbi = u21r * ai + u21i * ar + c * bi - sd * br
            ar, ai, br, bi = nar, nai, nbr, nbi
        out0[i] = complex(ar, ai)
        out1[i] = complex(br, bi)


def state_column_jit(areas, phases, eps, delta):
    areas, cphi, sphi = _pulse_trig(areas, phases)
    eps, delta = _grid(eps, delta)
    out0 = np.empty(eps.shape, dtype=np.complex128)
    out1 = np.empty(eps.shape, dtype=np.complex128)
    _state_column_kernel(areas, cphi, sphi, eps, delta, out0, out1)
    return out0, out1


# ---------------------------------------------------------------------------
# open-system propagation (unitary pulse, then T1 and pure dephasing channels)


def _decay_factors(taus, t1, t2):
    taus = np.ascontiguousarray(taus, dtype=np.float64)
    keep = np.exp(-taus / t1)  # 1 - gamma_1
    coh = np.exp(-taus / t2)  # total coherence factor sqrt(1-gamma_1) * exp(-gamma_phi tau)
    return keep, coh


def noisy_excited_numpy(areas, phases, taus, eps, delta, t1, t2):
    areas, cphi, sphi = _pulse_trig(areas, phases)
    eps, delta = _grid(eps, delta)
    keep, coh = _decay_factors(taus, t1, t2)
    om = 1.0 + eps
    w = np.sqrt(om * om + delta * delta)
    safe_w = np.where(w > 0.0, w, 1.0)
    r00 = np.ones_like(eps)
    r11 = np.zeros_like(eps)
    r10 = np.zeros_like(eps, dtype=np.complex128)
    for k in range(areas.size):
        h = 0.5 * areas[k] * w
        c = np.cos(h)
        s = np.where(w > 0.0, np.sin(h) / safe_w, 0.5 * areas[k])
        e_plus = cphi[k] + 1j * sphi[k]
        u11 = c + 1j * s * delta
        u22 = c - 1j * s * delta
        u12 = -1j * s * om * e_plus
        u21 = -1j * s * om * np.conj(e_plus)
        r01 = np.conj(r10)
        # rho' = U rho U^dagger, element by element
        t00 = u11 * r00 + u12 * r10
        t01 = u11 * r01 + u12 * r11
        t10 = u21 * r00 + u22 * r10
        t11 = u21 * r01 + u22 * r11
        n00 = (t00 * np.conj(u11) + t01 * np.conj(u12)).real
        n11 = (t10 * np.conj(u21) + t11 * np.conj(u22)).real
        n10 = t10 * np.conj(u11) + t11 * np.conj(u12)
        r00 = n00 + (1.0 - keep[k]) * n11
        r11 = keep[k] * n11
        r10 = coh[k] * n10
    return r11


@njit(parallel=True)
def _noisy_kernel(areas, cphi, sphi, keep, coh, eps, delta, out):
    npts = eps.shape[0]
    npulse = areas.shape[0]
    for i in prange(npts):
        om = 1.0 + eps[i]
        d = delta[i]
        w = math.sqrt(om * om + d * d)
        r00 = 1.0
        r11 = 0.0
        r10 = 0j
        for k in range(npulse):
            h = 0.5 * areas[k] * w
            c = math.cos(h)
            s = math.sin(h) / w if w > 0.0 else 0.5 * areas[k]
            e_plus = complex(cphi[k], sphi[k])
            u11 = complex(c, s * d)
            u22 = complex(c, -s * d)
            u12 = -1j * s * om * e_plus
            u21 = -1j * s * om * e_plus.conjugate()
            r01 = r10.conjugate()
            t00 = u11 * r00 + u12 * r10
            t01 = u11 * r01 + u12 * r11
            t10 = u21 * r00 + u22 * r10
            t11 = u21 * r01 + u22 * r11
            n00 = (t00 * u11.conjugate() + t01 * u12.conjugate()).real
            n11 = (t10 * u21.conjugate() + t11 * u22.conjugate()).real
            n10 = t10 * u11.conjugate() + t11 * u12.conjugate()
            r00 = n00 + (1.0 - keep[k]) * n11
            r11 = keep[k] * n11
            r10 = coh[k] * n10
        out[i] = r11


def noisy_excited_jit(areas, phases, taus, eps, delta, t1, t2):
    areas, cphi, sphi = _pulse_trig(areas, phases)
    eps, delta = _grid(eps, delta)
    keep, coh = _decay_factors(taus, t1, t2)
    out = np.empty(eps.shape, dtype=np.float64)
    _noisy_kernel(areas, cphi, sphi, keep, coh, eps, delta, out)
    return out


# ---------------------------------------------------------------------------
# Taylor coefficients of p(eps0 + x) in x, on resonance
#
# Each pulse factorises as U(eps0) exp(-i x (A/2) n.sigma), and the second
# factor has the exact series sum_k (-i A/2)^k / k! n^k with n^2 = 1. Pushing
# truncated series of the state vector through the sequence gives the
# coefficients of a21(x) exactly; p = a21 * conj(a21) term by term.


def _jet_factors(areas, order):
    k = np.arange(order + 1)
    fact = np.array([math.factorial(int(j)) for j in k], dtype=np.float64)
    # (-i theta)^k / k!  for theta = A/2, as separate real magnitudes and i-powers
    mags = (0.5 * areas[:, None]) ** k[None, :] / fact[None, :]
    ipow = (-1j) ** k
    return mags * ipow[None, :]


def taylor_probability_numpy(areas, phases, eps0, order):
    areas, cphi, sphi = _pulse_trig(areas, phases)
    coef = _jet_factors(areas, order)
    psi0 = np.zeros(order + 1, dtype=np.complex128)
    psi1 = np.zeros(order + 1, dtype=np.complex128)
    psi0[0] = 1.0
    a = 1.0 + eps0
    for k in range(areas.size):
        e_plus = cphi[k] + 1j * sphi[k]
        ch = math.cos(0.5 * areas[k] * a)
        sh = math.sin(0.5 * areas[k] * a)
        # n = [[0, e+], [e-, 0]]; even powers of n are 1, odd powers are n
        even = coef[k].copy()
        even[1::2] = 0.0
        odd = coef[k] - even
        # J_j = U0 (even_j + odd_j n), with U0 = ch - i sh n
        # apply (even + odd n) first, then U0
        q0 = np.convolve(even, psi0)[: order + 1] + e_plus * np.convolve(odd, psi1)[: order + 1]
        q1 = np.convolve(even, psi1)[: order + 1] + np.conj(e_plus) * np.convolve(odd, psi0)[: order + 1]
        psi0 = ch * q0 - 1j * sh * e_plus * q1
        psi1 = ch * q1 - 1j * sh * np.conj(e_plus) * q0
    return np.convolve(psi1, np.conj(psi1))[: order + 1].real


@njit
def _taylor_kernel(areas, cphi, sphi, coef, eps0, out):
    order = coef.shape[1] - 1
    n = order + 1
    psi0 = np.zeros(n, dtype=np.complex128)
    psi1 = np.zeros(n, dtype=np.complex128)
    q0 = np.zeros(n, dtype=np.complex128)
    q1 = np.zeros(n, dtype=np.complex128)
    psi0[0] = 1.0
    a = 1.0 + eps0
    for k in range(areas.shape[0]):
        ep = complex(cphi[k], sphi[k])
        em = ep.conjugate()
        ch = math.cos(0.5 * areas[k] * a)
        sh = math.sin(0.5 * areas[k] * a)
        for m in range(n):
            s0 = 0j
            s1 = 0j
            for j in range(m + 1):
                c = coef[k, j]
                if j % 2 == 0:
                    s0 += c * psi0[m - j]
                    s1 += c * psi1[m - j]
                else:
                    s0 += c * ep * psi1[m - j]
                    s1 += c * em * psi0[m - j]
            q0[m] = s0
            q1[m] = s1
        for m in range(n):
            psi0[m] = ch * q0[m] - 1j * sh * ep * q1[m]
            psi1[m] = ch * q1[m] - 1j * sh * em * q0[m]
    for m in range(n):
        acc = 0.0
        for j in range(m + 1):
            acc += (psi1[j] * psi1[m - j].conjugate()).real
        out[m] = acc


def taylor_probability_jit(areas, phases, eps0, order):
    areas, cphi, sphi = _pulse_trig(areas, phases)
    coef = np.ascontiguousarray(_jet_factors(areas, order))
    out = np.empty(order + 1, dtype=np.float64)
    _taylor_kernel(areas, cphi, sphi, coef, float(eps0), out)
    return out


if USE_NUMBA:
    state_column = state_column_jit
    noisy_excited = noisy_excited_jit
    taylor_probability = taylor_probability_jit
else:
    state_column = state_column_numpy
    noisy_excited = noisy_excited_numpy
    taylor_probability = taylor_probability_numpy
