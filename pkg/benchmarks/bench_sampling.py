"""Compare the NumPy and compiled sampling kernels.

    python benchmarks/bench_sampling.py --shots 1000000 --repeat 3
"""

import argparse
import time

import numpy as np

from photonstats import kernels
from photonstats.detection_sim import _sampling_cdf
from photonstats.fockspace import add_vacuum, make_coherent, make_thermal

CASES = {
    "coherent(1)": (make_coherent(1.0), 1.0, False),
    "coherent(1) eta=0.5 split": (make_coherent(1.0), 0.5, True),
    "thermal(5) eta=0.8": (make_thermal(5.0), 0.8, False),
    "vacuum 0.9 + coherent(0.3)": (add_vacuum(make_coherent(0.3), 0.9), 1.0, False),
}


def best_time(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--shots", type=int, default=1_000_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)

    backends = kernels.available_backends()
    if "compiled" not in backends:
        print("compiled extension not built; only the python backend is timed")
    print(f"{'case':30s}" + "".join(f"{b:>12s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, (dist, eta, split) in CASES.items():
        cdf = _sampling_cdf(dist)
        results, times = {}, {}
        for b in backends:
            run = lambda: kernels.draw_counts(cdf, args.seed, 0, args.shots, eta, split, b)
            times[b] = best_time(run, args.repeat)
            results[b] = run()
        if len(backends) > 1 and not np.array_equal(results["python"], results["compiled"]):
            raise SystemExit(f"{name}: backends disagree")
        line = f"{name:30s}" + "".join(f"{times[b]:11.3f}s" for b in backends)
        if len(backends) > 1:
            line += f"{times['python'] / times['compiled']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
