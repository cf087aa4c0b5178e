"""Benchmark the numba kernel backend against the pure-numpy fallback.

The backend is fixed at import time by WILLMORE_KERNELS, so this script
re-executes itself once per backend and compares:

    python3 benchmarks/bench_kernels.py [--grid N] [--repeat K]

Workloads: dense grid evaluation of the conformal density kk-bar of the
compact example surface (the energy-quadrature hot loop) and the full
two-chart Willmore energy.
"""

import argparse
import json
import os
import subprocess
import sys
import time


def run_one_backend(grid: int, repeat: int) -> dict:
    import numpy as np

    from willmore import gallery, kernels
    from willmore.moebius import frame_from_lift, willmore_energy

    md = frame_from_lift(gallery.polynomial_lift_of_pedal_r6())
    density = md.kkbar.value  # BiRat hot object

    xs = np.linspace(-1.0, 1.0, grid)
    z = (xs[None, :] + 1j * xs[:, None]).ravel()

    kernels.birat_grid(density, z[:16])  # warm up (jit compile)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        kernels.birat_grid(density, z)
        times.append(time.perf_counter() - t0)

    t0 = time.perf_counter()
    res = willmore_energy(md, grid=grid)
    energy_time = time.perf_counter() - t0

    return {
        "backend": kernels.backend(),
        "grid": grid,
        "points": int(z.size),
        "grid_eval_best_s": min(times),
        "energy_s": energy_time,
        "energy_W": res["W"],
    }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--grid", type=int, default=512)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.worker:
        print(json.dumps(run_one_backend(args.grid, args.repeat)))
        return 0

    results = []
    for backend in ("numba", "numpy"):
        env = dict(os.environ, WILLMORE_KERNELS=backend)
        out = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--worker",
             "--grid", str(args.grid), "--repeat", str(args.repeat)],
            env=env, capture_output=True, text=True)
        if out.returncode != 0:
            print(out.stderr, file=sys.stderr)
            return 1
        results.append(json.loads(out.stdout.strip().splitlines()[-1]))

    nb, np_ = results
    assert abs(nb["energy_W"] - np_["energy_W"]) < 1e-9, "backends disagree"
    print(f"grid {nb['grid']}x{nb['grid']} ({nb['points']} points), "
          f"best of {args.repeat}")
    print(f"{'backend':>8} {'grid eval':>12} {'energy':>12}")
    for r in results:
        print(f"{r['backend']:>8} {r['grid_eval_best_s']:>11.4f}s "
              f"{r['energy_s']:>11.4f}s")
    speed = np_["grid_eval_best_s"] / nb["grid_eval_best_s"]
    print(f"numba speedup on the grid-eval hot loop: {speed:.2f}x "
          f"(energies agree to {abs(nb['energy_W'] - np_['energy_W']):.1e})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
