"""The rare case where the robust algorithm returns 0 instead of alpha.

The exact imaginary part of this quotient lies just above half the smallest
subnormal, so it rounds to -alpha; the robust algorithm (like every other
algorithm here) produces zero.  Run: python demos/robust_rare_failure.py
"""

from fractions import Fraction

from compdiv import oracle_divide, robust_divide
from compdiv.experiments import search_robust_alpha_witness
from compdiv.oracle import exact_quotient

k, x, y = search_robust_alpha_witness(seed=1)
print(f"first witness in the seed-1 stream: trial {k}")
print("x =", x, " y =", y)
_, qf = exact_quotient(x, y)
ratio = -qf / Fraction(1, 2**1075)
print(f"|exact imaginary part| = (alpha/2) * (1 + {float(ratio - 1):.3e})")
print("correctly rounded:", oracle_divide(x, y))
print("robust:           ", robust_divide(x, y))
