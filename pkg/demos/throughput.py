"""Millions of complex divisions per second for every algorithm.

Run: python demos/throughput.py [size] [reps]
"""

import sys

from compdiv import ALGORITHMS
from compdiv.experiments import BENCH_REPS, BENCH_SIZE, bench_dataset, run_bench

size = int(sys.argv[1]) if len(sys.argv) > 1 else BENCH_SIZE
reps = int(sys.argv[2]) if len(sys.argv) > 2 else BENCH_REPS
data = bench_dataset(size, 0)
for alg in ALGORITHMS:
    r = run_bench(alg, size, reps, dataset=data)
    print(f"{alg.value:>9}  {r.mcdps:7.1f} MCDPS  checksum {r.checksum!r}")
