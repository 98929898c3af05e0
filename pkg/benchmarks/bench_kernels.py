"""Compare the compiled and pure-Python kernel backends.

    python benchmarks/bench_kernels.py [--repeat 3] [--k 4] [--truncation 5]

Each backend runs in a fresh interpreter (the backend is fixed at import);
results are checked to be identical before timings are reported.
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, random, sys, time
from symlie import kernels
from symlie.core import AlgebraContext, dumps_element
from symlie.lie import bch
from symlie.models import circuit_model
from symlie.verify import bch_triples
from symlie.solver import full_invariant_mc

k, n, repeat = map(int, sys.argv[1:4])


def best(fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


ctx = AlgebraContext.of([("x", 0), ("y", 0), ("z", 0)], n)
rng = random.Random(1)
pairs = [t[:2] for t in bch_triples(rng, ctx, 20)]
t_bch, prods = best(lambda: [bch(p, q) for p, q in pairs])
t_inv, res = best(lambda: full_invariant_mc(circuit_model(k, n)))
print(json.dumps({
    "backend": kernels.BACKEND,
    "bch_20_pairs": t_bch,
    "invariant_mc": t_inv,
    "digest": [dumps_element(p) for p in prods[:3]] + [dumps_element(res.omega)],
}))
"""


def run(backend, args):
    env = dict(os.environ, SYMLIE_KERNELS=backend)
    out = subprocess.run(
        [sys.executable, "-c", WORKER, str(args.k), str(args.truncation), str(args.repeat)],
        env=env, check=True, capture_output=True, text=True,
    )
    return json.loads(out.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k", type=int, default=4)
    ap.add_argument("--truncation", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    fast = run("cython", args)
    slow = run("python", args)
    if fast["backend"] != "cython":
        print("compiled kernels not available; only the Python backend was timed")
    if fast["digest"] != slow["digest"]:
        sys.exit("backends disagree")
    print(f"{'workload':<28}{'python':>10}{fast['backend']:>10}{'speedup':>10}")
    for key, label in (("bch_20_pairs", f"20 BCH products, N={args.truncation}"),
                       ("invariant_mc", f"invariant MC, k={args.k} N={args.truncation}")):
        print(f"{label:<28}{slow[key]:>9.3f}s{fast[key]:>9.3f}s{slow[key] / fast[key]:>9.2f}x")


if __name__ == "__main__":
    main()
