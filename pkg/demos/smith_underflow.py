"""Why Smith's method loses the imaginary part of case 3, and how the
improved algorithm gets it back.  Run: python demos/smith_underflow.py
"""

from compdiv.algorithms import improved_trace, smith_trace
from compdiv.corpus import load_corpus
from compdiv.fpkit import format_hexfloat as hx

case = {c.id: c for c in load_corpus()}[3]
print("x =", case.x, " y =", case.y)

s = smith_trace(case.x, case.y)
print("\nSmith:")
print("  r = d/c       =", hx(s["r"]), "(2**-1354 is far below the smallest subnormal)")
print("  f = (b - a*r)/den =", hx(s["f"]))

t = improved_trace(case.x, case.y)
print("\nImproved (r == 0 branch, b/c computed first):")
print("  t     =", hx(t["t"]))
print("  num_f =", hx(t["num_f"]))
print("  f     =", hx(t["f"]), " expected", hx(case.expected.imag))
