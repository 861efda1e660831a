"""Correctly rounded complex division.

Both parts of ``(a + ib) / (c + id)`` are evaluated exactly over the
rationals and each is rounded once to the nearest binary64, ties to even,
with gradual underflow and IEEE overflow to infinity.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = [
    "ExactRational",
    "OracleError",
    "round_rational_to_binary64",
    "round_ratio",
    "exact_quotient",
    "oracle_divide",
    "to_scaled_int",
]

# Fraction keeps numerator/denominator in lowest terms with a positive
# denominator, which is all the exact type has to promise.
ExactRational = Fraction

_MANT = 53
_EMIN = -1022
_QMIN = _EMIN - _MANT + 1  # exponent of the subnormal quantum, -1074
_OVERFLOW = 1 << 1024


class OracleError(ValueError):
    pass


def round_ratio(num, den):
    """Nearest binary64 to ``num / den`` (integers, ``den > 0``), ties to even."""
    if den <= 0:
        raise ValueError("denominator must be positive")
    if num == 0:
        return 0.0
    negative = num < 0
    num = abs(num)
    # 2**e <= num/den < 2**(e+1)
    e = num.bit_length() - den.bit_length()
    if e >= 0:
        if num < (den << e):
            e -= 1
    elif (num << -e) < den:
        e -= 1
    q = max(e, _EMIN) - _MANT + 1
    if q >= 0:
        m, rem = divmod(num, den << q)
        twice, divisor = rem << 1, den << q
    else:
        m, rem = divmod(num << -q, den)
        twice, divisor = rem << 1, den
    if twice > divisor or (twice == divisor and m & 1):
        m += 1
    # m <= 2**53 here, so m * 2**q is exact unless it leaves the range
    if q >= 0 and (m << q) >= _OVERFLOW:
        value = math.inf
    else:
        value = math.ldexp(float(m), q)
    return -value if negative else value


def round_rational_to_binary64(q):
    q = Fraction(q)
    return round_ratio(q.numerator, q.denominator)


def to_scaled_int(x):
    """Exact integer ``x * 2**1074`` for a finite binary64 ``x``."""
    num, den = float(x).as_integer_ratio()
    return num << (1074 - (den.bit_length() - 1))


def _check(x, y):
    x = complex(x)
    y = complex(y)
    parts = (x.real, x.imag, y.real, y.imag)
    if not all(math.isfinite(v) for v in parts):
        raise OracleError(f"non-finite operand in ({x!r}) / ({y!r})")
    if y == 0:
        raise OracleError("division by zero")
    return parts


def exact_quotient(x, y):
    """The exact real and imaginary parts of ``x / y`` as rationals."""
    a, b, c, d = (to_scaled_int(v) for v in _check(x, y))
    den = c * c + d * d
    return Fraction(a * c + b * d, den), Fraction(b * c - a * d, den)


def oracle_divide(x, y):
    """Correctly rounded ``x / y`` for finite ``x`` and finite nonzero ``y``."""
    # The common 2**1074 scale of all four parts cancels in the quotients.
    a, b, c, d = (to_scaled_int(v) for v in _check(x, y))
    den = c * c + d * d
    return complex(round_ratio(a * c + b * d, den), round_ratio(b * c - a * d, den))
