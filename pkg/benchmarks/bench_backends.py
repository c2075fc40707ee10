"""Time the numba kernels against their pure-numpy twins.

    python benchmarks/bench_backends.py [--repeat 5] [--json out.json]

Both variants are called directly, so the COMPULSE_BACKEND flag does not
matter here. The first jit call (compilation or cache load) is excluded.
"""

import argparse
import json
import platform
import time

import numpy as np

from compulse import kernels, sequences
from compulse._jit import HAVE_NUMBA
from compulse.noise import NoiseParams


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    nb1001 = sequences.nb(1001)
    u25 = sequences.universal("U25a")
    pb = sequences.theta_pb(8, 0.5)
    eps_1d = np.linspace(-1, 1, 2001)
    zeros_1d = np.zeros_like(eps_1d)
    e2, d2 = np.meshgrid(np.linspace(-1, 1, 101), np.linspace(-1, 1, 101))
    e2, d2 = e2.ravel(), d2.ravel()
    noise = NoiseParams()

    def ideal(seq, eps, delta):
        return lambda variant: variant(seq.areas, seq.phases, eps, delta)

    def noisy(seq, eps, delta):
        taus = seq.durations * noise.pulse_duration
        return lambda variant: variant(seq.areas, seq.phases, taus, eps, delta, noise.t1, noise.t2)

    def jet(seq, order):
        return lambda variant: variant(seq.areas, seq.phases, -1.0, order)

    state = (kernels.state_column_numpy, kernels.state_column_jit)
    dens = (kernels.noisy_excited_numpy, kernels.noisy_excited_jit)
    taylor = (kernels.taylor_probability_numpy, kernels.taylor_probability_jit)
    return [
        ("ideal NB1001, 2001 pts", state, ideal(nb1001, eps_1d, zeros_1d)),
        ("ideal U25a, 101x101", state, ideal(u25, e2, d2)),
        ("noisy NB1001, 2001 pts", dens, noisy(nb1001, eps_1d, zeros_1d)),
        ("noisy U25a, 101x101", dens, noisy(u25, e2, d2)),
        ("taylor jet PB16, order 14", taylor, jet(pb, 14)),
    ]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json", help="also write the timings here")
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")

    rows = []
    for name, (np_fn, jit_fn), call in cases():
        call(jit_fn)  # compile or load from cache
        ref, fast = call(np_fn), call(jit_fn)
        diff = max(float(np.max(np.abs(np.asarray(a) - np.asarray(b)))) for a, b in zip(np.atleast_2d(ref), np.atleast_2d(fast)))
        t_np = best_of(lambda: call(np_fn), args.repeat)
        t_jit = best_of(lambda: call(jit_fn), args.repeat)
        rows.append({"case": name, "numpy_s": t_np, "numba_s": t_jit, "speedup": t_np / t_jit, "max_abs_diff": diff})

    print(f"{'case':<28}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}{'max |diff|':>12}")
    for r in rows:
        print(f"{r['case']:<28}{1e3 * r['numpy_s']:>12.2f}{1e3 * r['numba_s']:>12.2f}{r['speedup']:>9.1f}{r['max_abs_diff']:>12.1e}")
    if args.json:
        meta = {"python": platform.python_version(), "numpy": np.__version__, "machine": platform.machine()}
        with open(args.json, "w") as fh:
            json.dump({"meta": meta, "rows": rows}, fh, indent=1)


if __name__ == "__main__":
    main()
