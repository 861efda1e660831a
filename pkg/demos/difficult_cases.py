"""Walk through the ten difficult divisions.

For each case, print the correctly rounded quotient and what every algorithm
returns, with its bits of accuracy.  Run: python demos/difficult_cases.py
"""

from compdiv import ALGORITHMS, complex_accuracy, divide
from compdiv.corpus import load_corpus


def show(z):
    return f"{z.real:+.6e} {z.imag:+.6e}i"


for case in load_corpus():
    print(f"case {case.id}: ({show(case.x)}) / ({show(case.y)})")
    print(f"  {case.note}")
    print(f"  {'exact':>9}  {show(case.expected)}")
    for alg in ALGORITHMS:
        z = divide(alg, case.x, case.y)
        bits = complex_accuracy(z, case.expected).min_bits
        print(f"  {alg.value:>9}  {show(z)}  {bits:2d} bits")
    print()
