"""Compare the compiled prime-field kernel with the pure-Python fallback.

    python3 benchmarks/bench_ffkernel.py [--repeat N] [--seed S]

Kernel timings call both implementations directly on the same inputs and
check they agree.  The end-to-end row runs an exhaustive King check in a
subprocess, once per backend (``QUIVSTAB_PURE`` forces the fallback).
"""
import argparse
import os
import random
import subprocess
import sys
import timeit

from quivstab import _ffkernel_py as pure

try:
    from quivstab import _ffkernel as compiled
except ImportError:
    compiled = None

END_TO_END = """
from quivstab.kingrep import QuiverRep, check_semistable, all_reps_ff
from quivstab.linalg import Field
from quivstab.quiver import Quiver
import time
q = Quiver(3, ((1, 2), (2, 3)))
F = Field(2)
t0 = time.perf_counter()
n = 0
for rep in all_reps_ff(q, F, {1: 2, 2: 2, 3: 2}):
    check_semistable(rep, {(1, 2): 1, (2, 3): 1})
    n += 1
    if n == 400:
        break
print(time.perf_counter() - t0)
"""


def random_rows(rng, nrows, ncols, p):
    return [[rng.randrange(p) for _ in range(ncols)] for _ in range(nrows)]


def bench_kernel(repeat, seed):
    rng = random.Random(seed)
    cases = [(n, p) for p in (2, 7, 101) for n in (6, 12, 24)]
    print(f"{'case':<18}{'pure (ms)':>12}{'compiled (ms)':>15}{'speedup':>10}")
    for n, p in cases:
        mats = [random_rows(rng, n, n, p) for _ in range(20)]
        if compiled is not None:
            for m in mats:
                assert pure.rref_mod(m, n, p) == compiled.rref_mod(m, n, p)

        def run(mod):
            for m in mats:
                mod.rref_mod(m, n, p)

        label = f"rref {n}x{n} F_{p}"
        t_pure = min(timeit.repeat(lambda: run(pure), number=1, repeat=repeat)) * 1e3
        if compiled is None:
            print(f"{label:<18}{t_pure:12.3f}{'n/a':>15}{'-':>10}")
            continue
        t_comp = min(timeit.repeat(lambda: run(compiled), number=1, repeat=repeat)) * 1e3
        print(f"{label:<18}{t_pure:12.3f}{t_comp:15.3f}{t_pure / t_comp:10.1f}x")


def bench_end_to_end():
    times = {}
    for name, extra in (("pure", {"QUIVSTAB_PURE": "1"}), ("compiled", {})):
        env = {k: v for k, v in os.environ.items() if k != "QUIVSTAB_PURE"}
        env.update(extra)
        out = subprocess.run([sys.executable, "-c", END_TO_END], env=env,
                             capture_output=True, text=True, check=True)
        times[name] = float(out.stdout.strip())
    print("\nking-check, 400 reps of 1->2->3 over F_2, dims (2,2,2):")
    for name, t in times.items():
        print(f"  {name:<9}{t:8.3f} s")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--skip-end-to-end", action="store_true")
    args = ap.parse_args()
    print(f"compiled kernel available: {compiled is not None}\n")
    bench_kernel(args.repeat, args.seed)
    if not args.skip_end_to_end:
        bench_end_to_end()


if __name__ == "__main__":
    main()
