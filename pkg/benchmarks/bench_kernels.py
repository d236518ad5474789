"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--number 2000]

Kernel timings call both modules directly. The end-to-end rows re-run this
script in a subprocess with BESSELINE_PURE=1 so the whole package uses the
fallback.
"""
import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np


def kernel_cases(mod, rng):
    nus = rng.uniform(0, 10, 64).tolist()
    xs = np.exp(rng.uniform(-3, 4, 64)).tolist()
    pts = list(zip(nus, xs))

    def k():
        for nu, x in pts:
            mod.bessel_k_scaled(nu, x)

    def i():
        for nu, x in pts:
            mod.bessel_i_scaled(nu, x)

    def panel():
        mod.gk15_k(1.0, 2.0, 1.5, 2.0, 0.25, -0.75)

    return {"bessel_k (64 calls)": k, "bessel_i (64 calls)": i, "gk15 panel": panel}


def end_to_end():
    import besseline
    from besseline import Params, integral_k
    from besseline.quadrature import integral_i_sweep
    from besseline.verification import logspace

    xs = logspace(1e-3, 50.0, 40)
    cases = {
        "integral_k single": lambda: integral_k(Params(1.0, 0.5, 0.25, 2.0)),
        "integral_i sweep (40 x)": lambda: integral_i_sweep(2.5, 0.5, 0.25, xs),
    }
    out = {}
    for name, fn in cases.items():
        t = timeit.Timer(fn)
        n, _ = t.autorange()
        out[name] = min(t.repeat(3, n)) / n
    return besseline.BACKEND, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=200)
    ap.add_argument("--e2e-only", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.e2e_only:
        backend, res = end_to_end()
        print(json.dumps({"backend": backend, "times": res}))
        return

    from besseline import _fallback
    try:
        from besseline import _kernels
    except ImportError:
        sys.exit("compiled extension not built; run: pip install -e . --no-build-isolation")

    rng = np.random.default_rng(0)
    fast = kernel_cases(_kernels, rng)
    rng = np.random.default_rng(0)
    slow = kernel_cases(_fallback, rng)
    print(f"{'case':28s} {'compiled':>12s} {'python':>12s} {'speedup':>8s}")
    for name in fast:
        tc = min(timeit.repeat(fast[name], number=args.number, repeat=args.repeat)) / args.number
        tp = min(timeit.repeat(slow[name], number=args.number, repeat=args.repeat)) / args.number
        print(f"{name:28s} {tc * 1e6:10.2f}us {tp * 1e6:10.2f}us {tp / tc:7.1f}x")

    rows = {}
    for pure in ("0", "1"):
        env = dict(os.environ, BESSELINE_PURE=pure)
        proc = subprocess.run([sys.executable, __file__, "--e2e-only"], env=env,
                              capture_output=True, text=True, check=True)
        doc = json.loads(proc.stdout)
        rows[doc["backend"]] = doc["times"]
    for name in rows["compiled"]:
        tc, tp = rows["compiled"][name], rows["python"][name]
        print(f"{name:28s} {tc * 1e6:10.1f}us {tp * 1e6:10.1f}us {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
