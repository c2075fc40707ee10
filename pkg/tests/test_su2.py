import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compulse.su2 import (
    ErrorPoint,
    Pulse,
    Unitary2,
    compose,
    infidelity,
    pulse_propagator,
    sequence_propagator,
    transition_probability,
    wrap_pi_units,
)
from oracles import expm_pulse

areas = st.floats(0.01, 4.0)
phases = st.floats(0.0, 2.0)
epsilons = st.floats(-1.0, 2.0)
deltas = st.floats(-3.0, 3.0)


def test_perfect_pi_pulse():
    u = pulse_propagator(Pulse(1.0, 0.0))
    assert transition_probability(u) == pytest.approx(1.0, abs=1e-15)
    # phase-0 pi pulse sends |0> to -i|1>
    assert u.a21 == pytest.approx(-1j, abs=1e-15)


def test_zero_field_is_identity():
    u = pulse_propagator(Pulse(1.0, 0.3), ErrorPoint(-1.0, 0.0))
    assert np.allclose(u.matrix, np.eye(2), atol=1e-15)


def test_half_pi_pulse():
    assert transition_probability(pulse_propagator(Pulse(0.5))) == pytest.approx(0.5, abs=1e-15)


def test_detuned_pi_pulse_matches_expm():
    # independent value: |a21|^2 = sin^2(pi/sqrt2) / 2 at delta = 1
    expected = math.sin(math.pi / math.sqrt(2)) ** 2 / 2
    assert expected == pytest.approx(0.3165638355103539, abs=1e-15)
    u = pulse_propagator(Pulse(1.0), ErrorPoint(0.0, 1.0))
    assert transition_probability(u) == pytest.approx(expected, abs=1e-14)
    assert abs(expm_pulse(math.pi, 0.0, 0.0, 1.0)[1, 0]) ** 2 == pytest.approx(expected, abs=1e-12)


def test_compose_examples():
    u = pulse_propagator(Pulse(0.7, 0.3), ErrorPoint(0.1, 0.2))
    assert compose([u]) == u
    assert compose([u, u.dagger()]).unitarity_error() < 1e-12
    assert np.allclose(compose([u, u.dagger()]).matrix, np.eye(2), atol=1e-12)
    half = pulse_propagator(Pulse(0.5))
    assert transition_probability(compose([half, half])) == pytest.approx(1.0, abs=1e-15)
    with pytest.raises(ValueError):
        compose([])


def test_compose_order_is_last_pulse_leftmost():
    a = pulse_propagator(Pulse(0.5, 0.0))
    b = pulse_propagator(Pulse(1.0, 0.5))
    assert np.allclose(compose([a, b]).matrix, b.matrix @ a.matrix, atol=1e-15)


def test_transition_probability_examples():
    assert transition_probability(Unitary2.identity()) == 0.0
    # two half-pi pulses, second shifted by 0.7952 pi: p = cos^2(phi/2)
    u = sequence_propagator([Pulse(0.5, 0.0), Pulse(0.5, 0.7952)])
    assert transition_probability(u) == pytest.approx(math.cos(0.7952 * math.pi / 2) ** 2, abs=1e-14)
    assert transition_probability(u) == pytest.approx(0.1, abs=2e-4)


def test_probability_above_one_is_rejected():
    bad = Unitary2(0.0, 0.0, 1.001, 0.0)
    with pytest.raises(ValueError):
        transition_probability(bad)
    assert transition_probability(Unitary2(0.0, 0.0, 1.0 + 1e-12, 0.0)) == 1.0


def test_invalid_inputs():
    with pytest.raises(ValueError):
        Pulse(0.0)
    with pytest.raises(ValueError):
        Pulse(1.0, math.nan)
    with pytest.raises(ValueError):
        ErrorPoint(-1.5, 0.0)
    with pytest.raises(ValueError):
        Unitary2(math.inf, 0, 0, 1)


def test_phase_wrapping():
    assert wrap_pi_units(-2 / 3) == pytest.approx(4 / 3)
    assert wrap_pi_units(2.0) == 0.0
    assert 0.0 <= wrap_pi_units(-1e-18) < 2.0
    assert Pulse(1.0, 11 / 6 + 2).phase_pi == pytest.approx(11 / 6)
    assert Pulse(0.5).duration_fraction == 0.5


@settings(max_examples=10_000, deadline=None)
@given(areas, phases, epsilons, deltas)
def test_unitarity(a, ph, e, d):
    u = pulse_propagator(Pulse(a, ph), ErrorPoint(e, d))
    assert u.unitarity_error() < 1e-12
    assert abs(abs(u.det()) - 1.0) < 1e-12
    assert 0.0 <= transition_probability(u) <= 1.0


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(areas, phases), min_size=1, max_size=8), epsilons)
def test_conjugation_symmetry(pulses, e):
    err = ErrorPoint(e, 0.0)
    fwd = sequence_propagator([Pulse(a, ph) for a, ph in pulses], err)
    neg = sequence_propagator([Pulse(a, -ph) for a, ph in pulses], err)
    assert transition_probability(neg) == pytest.approx(transition_probability(fwd), abs=1e-14)
    # on resonance each factor becomes sz conj(U) sz, and the sz pairs cancel inside the product
    sz = np.diag([1.0, -1.0])
    assert np.allclose(neg.matrix, sz @ fwd.matrix.conj() @ sz, atol=1e-13)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(areas, phases), min_size=1, max_size=8), epsilons, deltas)
def test_phase_negation_with_detuning_flips_delta(pulses, e, d):
    fwd = sequence_propagator([Pulse(a, ph) for a, ph in pulses], ErrorPoint(e, -d))
    neg = sequence_propagator([Pulse(a, -ph) for a, ph in pulses], ErrorPoint(e, d))
    assert transition_probability(neg) == pytest.approx(transition_probability(fwd), abs=1e-13)


def test_closed_form_against_matrix_exponential():
    rng = np.random.default_rng(20240531)
    for _ in range(100):
        a = rng.uniform(0.05, 3.0) * math.pi
        ph = rng.uniform(0, 2 * math.pi)
        e = rng.uniform(-1, 1)
        d = rng.uniform(-2, 2)
        u = pulse_propagator(Pulse(a / math.pi, ph / math.pi), ErrorPoint(e, d))
        assert np.abs(u.matrix - expm_pulse(a, ph, e, d)).max() < 1e-10


def test_infidelity_is_leftover_ground_population():
    u = pulse_propagator(Pulse(1.0), ErrorPoint(0.1, 0.0))
    assert infidelity(u) == pytest.approx(1.0 - transition_probability(u), abs=1e-15)


def test_unitary_check_and_algebra():
    u = pulse_propagator(Pulse(0.3, 1.1), ErrorPoint(0.2, -0.4))
    assert u.check() is u
    assert np.allclose((u @ u.dagger()).matrix, np.eye(2), atol=1e-14)
    assert Unitary2.from_matrix(u.matrix) == u
    bad = Unitary2(1.0, 1.0, 0.0, 1.0)
    with pytest.raises(ValueError):
        bad.check()
