"""Time each kernel under the numba and numpy backends.

    python benchmarks/bench_kernels.py [--repeat 5]

The numba column excludes compilation (one warm-up call first).  Search
kernels have no vectorized form, so their numpy column is the same loop
run by the interpreter.
"""
import argparse
import time

import numpy as np

from quasicrypt import kernels
from quasicrypt.keedwell import cyclic_group, keedwell_cyclic


def best_of(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    k199 = keedwell_cyclic(199, 2, 100).table
    k41 = keedwell_cyclic(41, 2, 21).table
    k13 = keedwell_cyclic(13, 2, 7).table
    ldiv, rdiv = kernels.divisions(k199)
    j = ldiv[k199[:, 0], 0]
    ident = np.arange(199)
    # identities that hold force a full scan
    c199 = cyclic_group(199).table
    c41 = cyclic_group(41).table
    jobs = [
        ("latin_violation n=199", "latin_violation", (k199,)),
        ("cip_check n=199", "cip_check", (k199, ldiv, rdiv, 1)),
        ("wip_violation n=199", "wip_violation", (k199, j)),
        ("aip_violation n=199", "aip_violation", (k199, j)),
        ("flexible_violation n=199", "flexible_violation", (c199,)),
        ("associative_violation n=41", "associative_violation", (c41,)),
        ("isotopism_violation n=199", "isotopism_violation", (k199, k199, ident, ident, ident)),
        ("morphism_search n=41", "morphism_search", (k41, k41, True)),
        ("morphism_search n=13", "morphism_search", (k13, k13, True)),
        ("reduced_latin_squares n=5", "reduced_latin_squares", (5,)),
    ]
    backends = [name for name in ("numba", "numpy") if name in kernels.BACKENDS]
    print(f"{'kernel':32s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for label, name, fargs in jobs:
        row = [best_of(getattr(kernels.BACKENDS[b], name), fargs, args.repeat) for b in backends]
        speed = row[1] / row[0] if len(row) == 2 and row[0] > 0 else float("nan")
        print(f"{label:32s}" + "".join(f"{t * 1e3:10.3f}ms" for t in row) + f"{speed:9.1f}x")


if __name__ == "__main__":
    main()
