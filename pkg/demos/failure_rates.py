"""Failure probabilities on random power-of-two operands.

Every algorithm sees the same operand stream; a trial fails when either
part is not correctly rounded.  Run: python demos/failure_rates.py [N] [seed]
"""

import sys

from compdiv import ALGORITHMS
from compdiv.experiments import estimate_failures

n = int(sys.argv[1]) if len(sys.argv) > 1 else 20_000
seed = int(sys.argv[2]) if len(sys.argv) > 2 else 1

print(f"N = {n}, seed = {seed}")
for est in sorted(estimate_failures(ALGORITHMS, n, seed), key=lambda e: -e.p_hat):
    print(f"{est.algorithm.value:>9}  p = {est.p_hat:.2e}  95% CI [{est.ci_low:.2e}, {est.ci_high:.2e}]")
