import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compulse import noise, scan
from compulse import sequences as S
from compulse.noise import NoiseParams
from compulse.scan import GridSpec
from compulse.su2 import ErrorPoint
from oracles import kraus_profile


def test_defaults():
    p = NoiseParams()
    assert (p.t1, p.t2, p.pulse_duration, p.readout_error) == (203.44e-6, 301.91e-6, 100e-9, 0.0357)
    assert p.readout_error_down == p.readout_error
    assert p.dephasing_rate > 0


@pytest.mark.parametrize(
    "kw",
    [dict(t1=-1.0), dict(t2=0.0), dict(t1=1e-4, t2=3e-4), dict(readout_error=0.5), dict(readout_error=-0.01), dict(pulse_duration=math.inf), dict(t1=math.nan)],
)
def test_invalid_params(kw):
    with pytest.raises(ValueError):
        NoiseParams(**kw)


def test_readout_of_perfect_transfer():
    assert noise.readout_map(1.0, 0.0357) == pytest.approx(0.9643, abs=1e-15)
    assert noise.readout_map(0.0, 0.0357) == pytest.approx(0.0357, abs=1e-15)


def test_readout_cannot_be_applied_twice():
    params = NoiseParams()
    once = noise.apply_readout(1.0, params)
    assert once.readout_applied
    with pytest.raises(ValueError):
        noise.apply_readout(once, params)
    # applying the affine map twice would give a different number
    assert noise.readout_map(once.value, 0.0357) != pytest.approx(once.value)


@settings(max_examples=200, deadline=None)
@given(st.floats(1e-12, 1e-3), st.floats(1e-6, 1e-2), st.floats(0.5, 2.0))
def test_kraus_completeness(tau, t1, ratio):
    params = NoiseParams(t1=t1, t2=min(ratio * t1, 2 * t1), readout_error=0.0)
    ops = noise.pulse_kraus(tau, params)
    assert noise.kraus_completeness_error(ops) < 1e-12


def test_channel_keeps_density_valid():
    rng = np.random.default_rng(3)
    params = NoiseParams()
    for _ in range(50):
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        rho = np.outer(v, v.conj())
        out = noise.apply_kraus(rho, noise.pulse_kraus(rng.uniform(0, 1e-5), params))
        noise.check_density(out)


def test_check_density_rejects():
    with pytest.raises(ValueError):
        noise.check_density(np.eye(2))
    with pytest.raises(ValueError):
        noise.check_density(np.array([[1.2, 0], [0, -0.2]]))
    with pytest.raises(ValueError):
        noise.check_density(np.array([[0.5, 0.5], [0.1, 0.5]]))


@pytest.mark.parametrize("seq", [S.bb(5), S.nb(15), S.theta_pb(4, 0.3), S.universal("U9b")], ids=lambda s: s.label)
def test_noiseless_limit(seq):
    quiet = NoiseParams.noiseless()
    for e, d in [(0.0, 0.0), (0.2, 0.1), (-0.6, -0.3)]:
        ideal = seq.probability(e, d)
        assert noise.noisy_transition_probability(seq, ErrorPoint(e, d), quiet) == pytest.approx(ideal, abs=1e-12)
        assert noise.evolve_density(seq, ErrorPoint(e, d), quiet)[1, 1].real == pytest.approx(ideal, abs=1e-12)


@pytest.mark.parametrize("seq", [S.nb(3), S.bb(9), S.theta_nb(8, 0.6), S.pb_n_of_b(3, 3)], ids=lambda s: s.label)
def test_fast_path_matches_kraus_oracle(seq):
    # exaggerated decoherence so the comparison is sensitive
    params = NoiseParams(t1=2e-6, t2=3e-6, readout_error=0.02)
    eps = np.linspace(-0.8, 0.8, 9)
    fast = noise.noisy_profile(seq, eps, np.zeros_like(eps), params)
    taus = seq.durations * params.pulse_duration
    ref = [kraus_profile(seq.areas, seq.phases, taus, e, params.t1, params.t2, 0.02) for e in eps]
    assert np.abs(fast - np.array(ref)).max() < 1e-12
    for e, r in zip(eps, ref):
        rho = noise.check_density(noise.evolve_density(seq, ErrorPoint(e, 0.0), params))
        assert noise.readout_map(rho[1, 1].real, 0.02) == pytest.approx(r, abs=1e-12)


def test_nb_peaks_fall_with_length():
    params = NoiseParams()
    peaks = []
    for n in (15, 75, 225, 1001):
        recs = scan.scan_1d(S.nb(n), GridSpec(-0.05, 0.05, 201), params)
        peaks.append(max(r.probability_noisy for r in recs))
    assert all(a > b for a, b in zip(peaks, peaks[1:]))


def test_nb1001_direction():
    params = NoiseParams()
    recs = scan.scan_1d(S.nb(1001), GridSpec(-1, 1, 2001, refine="center"), params)
    eps, ideal = scan.as_arrays(recs)
    _, noisy = scan.as_arrays(recs, noisy=True)
    assert noisy.max() < ideal.max()
    wings = np.abs(eps) > 0.1
    assert noisy[wings].max() > ideal[wings].max()
    assert noisy[wings].min() > ideal[wings].max()


def test_params_from_files(tmp_path):
    j = tmp_path / "n.json"
    j.write_text(json.dumps({"t1_us": 100, "t2_us": 150, "pulse_duration_ns": 50, "readout_error": 0.01}))
    p = NoiseParams.from_file(j)
    assert (p.t1, p.t2, p.pulse_duration, p.readout_error) == pytest.approx((100e-6, 150e-6, 50e-9, 0.01))
    t = tmp_path / "n.toml"
    t.write_text("[noise]\nt1_us = 180.0\nreadout_error = 0.0\nreadout_error_down = 0.1\n")
    q = NoiseParams.from_file(t)
    assert q.t1 == pytest.approx(180e-6) and q.readout_error_down == 0.1 and q.t2 == 301.91e-6
    bad = tmp_path / "bad.toml"
    bad.write_text("t3_us = 1\n")
    with pytest.raises(ValueError, match="t3_us"):
        NoiseParams.from_file(bad)


def test_asymmetric_readout():
    assert noise.readout_map(1.0, 0.0, 0.1) == pytest.approx(0.9)
    assert noise.readout_map(0.0, 0.05, 0.1) == pytest.approx(0.05)
