"""Time the compiled integer kernels against their pure-Python twins.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

Both backends are imported side by side (the package itself selects one at
import time; see ``hassett.kernels``), each workload runs on identical
inputs, and results are checked equal before a timing is reported.
"""

from __future__ import annotations

import argparse
import random
import time

from hassett import _purekern

try:
    from hassett import _fastkern
except ImportError:  # pragma: no cover - build-environment dependent
    _fastkern = None


def _best_of(repeat: int, fn, *args) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def _workloads(rng: random.Random):
    # signature-style enumeration: values around cap/4 so subsets of sizes
    # 2..5 fall under the cap and pruning has real work to do
    for n in (14, 18, 20):
        scaled = [rng.randint(1, 100) for _ in range(n)]
        yield (
            f"enumerate_small_subsets n={n}",
            "enumerate_small_subsets",
            (scaled, sum(scaled) // 4),
        )
    # admissibility-style window decisions: a batch of narrow intervals
    pools = [[rng.randint(1, 60) for _ in range(18)] for _ in range(200)]

    def window_batch(impl):
        hits = 0
        for pool in pools:
            total = sum(pool)
            for lo in range(total // 3, total // 3 + 12):
                if impl.find_subset_in_interval(pool, lo, lo + 3, 2) != -1:
                    hits += 1
        return hits

    yield ("find_subset_in_interval 200x12 windows", window_batch, None)
    # group closure: full symmetric group on 8 symbols from adjacent swaps
    degree = 8
    gens = []
    for k in range(degree - 1):
        perm = list(range(degree))
        perm[k], perm[k + 1] = perm[k + 1], perm[k]
        gens.append(tuple(perm))
    yield (
        f"close_permutations S{degree}",
        "close_permutations",
        (gens, degree, 50_000),
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--repeat", type=int, default=3, help="take the best of this many runs"
    )
    parser.add_argument("--seed", type=int, default=20260817)
    args = parser.parse_args()

    backends = [("pure", _purekern)]
    if _fastkern is not None:
        backends.append(("fast", _fastkern))
    else:
        print("compiled backend not built; timing the pure backend only")

    header = f"{'workload':44s}" + "".join(f"{name:>12s}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10s}"
    print(header)
    print("-" * len(header))

    for label, op, op_args in _workloads(random.Random(args.seed)):
        times = []
        results = []
        for _, impl in backends:
            if callable(op):
                elapsed, result = _best_of(args.repeat, op, impl)
            else:
                elapsed, result = _best_of(args.repeat, getattr(impl, op), *op_args)
            times.append(elapsed)
            results.append(result)
        if len(results) == 2 and results[0] != results[1]:
            raise SystemExit(f"backend results differ on {label!r}")
        row = f"{label:44s}" + "".join(f"{t * 1000:10.2f}ms" for t in times)
        if len(times) == 2:
            row += f"{times[0] / times[1]:9.1f}x"
        print(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
