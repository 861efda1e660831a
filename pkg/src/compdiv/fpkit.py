"""Binary64 helpers: format constants, the bits-of-accuracy metric, the
counter-based operand sampler and a strict hexadecimal float syntax."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

__all__ = [
    "FloatFormat",
    "BINARY64",
    "EXACT",
    "AccuracyResult",
    "InvalidReferenceError",
    "HexFloatError",
    "bits_of_accuracy",
    "complex_accuracy",
    "SampledOperands",
    "sample_operands",
    "sample_batch",
    "EXPONENT_MIN",
    "EXPONENT_MAX",
    "parse_hexfloat",
    "format_hexfloat",
    "float_to_bits",
    "bits_to_float",
    "same_bits",
]


@dataclass(frozen=True)
class FloatFormat:
    radix: int
    precision: int
    exponent_bits: int
    e_min: int
    e_max: int
    omega: float
    mu: float
    alpha: float
    eps: float
    unit_roundoff: float


BINARY64 = FloatFormat(
    radix=2,
    precision=53,
    exponent_bits=11,
    e_min=-1022,
    e_max=1023,
    omega=(2.0 - 2.0**-52) * 2.0**1023,
    mu=2.0**-1022,
    alpha=2.0**-1074,
    eps=2.0**-52,
    unit_roundoff=2.0**-53,
)


def float_to_bits(x):
    return int(np.float64(x).view(np.uint64))


def bits_to_float(n):
    return float(np.uint64(n).view(np.float64))


def same_bits(x, y):
    """Bitwise equality of two binary64 values (NaN payloads included)."""
    return float_to_bits(x) == float_to_bits(y)


# ---------------------------------------------------------------------------
# accuracy
# ---------------------------------------------------------------------------


class _Exact:
    """Relative error marker for a computed value equal to the reference."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "EXACT"

    def __reduce__(self):
        return (_Exact, ())


EXACT = _Exact()


class InvalidReferenceError(ValueError):
    """The expected value handed to the accuracy metric is NaN."""


@dataclass(frozen=True)
class AccuracyResult:
    re_bits: int
    im_bits: int
    re_relerr: object
    im_relerr: object

    @property
    def min_bits(self):
        return min(self.re_bits, self.im_bits)


def _floor_neg_log2(num, den):
    # floor(-log2(num/den)) for positive integers, computed exactly
    k = den.bit_length() - num.bit_length()
    if k >= 0:
        if (num << k) > den:
            k -= 1
    elif num > (den << -k):
        k -= 1
    return k


def bits_of_accuracy(computed, expected):
    """Correct leading bits of ``computed`` relative to ``expected``.

    Returns ``(bits, relerr)`` with ``bits`` in ``[0, 53]``.  An exact match
    (signed zeros compare equal) gives ``(53, EXACT)``.  NaN results, wrong
    infinities, nonzero values against a zero reference and zero against a
    nonzero reference score 0 bits with ``relerr = inf``.  The floor of ``-log2`` is taken on the exact
    rational relative error, so no rounding can move a value across a bit
    boundary.
    """
    computed = float(computed)
    expected = float(expected)
    if math.isnan(expected):
        raise InvalidReferenceError("expected value is NaN")
    if computed == expected:
        return 53, EXACT
    if (math.isnan(computed) or math.isinf(computed) or math.isinf(expected)
            or expected == 0.0 or computed == 0.0):
        return 0, math.inf
    diff = abs(Fraction(computed) - Fraction(expected))
    rel = diff / abs(Fraction(expected))
    bits = _floor_neg_log2(rel.numerator, rel.denominator)
    try:
        relerr = float(rel)
    except OverflowError:
        relerr = math.inf
    return max(0, min(53, bits)), relerr


def complex_accuracy(computed, expected):
    computed = complex(computed)
    expected = complex(expected)
    re_bits, re_err = bits_of_accuracy(computed.real, expected.real)
    im_bits, im_err = bits_of_accuracy(computed.imag, expected.imag)
    return AccuracyResult(re_bits, im_bits, re_err, im_err)


# ---------------------------------------------------------------------------
# operand sampler
# ---------------------------------------------------------------------------

EXPONENT_MIN = -1074
EXPONENT_MAX = 1023
_N_EXPONENTS = EXPONENT_MAX - EXPONENT_MIN + 1  # 2098


@dataclass(frozen=True)
class SampledOperands:
    a: float
    b: float
    c: float
    d: float
    signs: tuple
    exponents: tuple
    trial_index: int
    seed: int

    @property
    def x(self):
        return complex(self.a, self.b)

    @property
    def y(self):
        return complex(self.c, self.d)


def _raw_words(seed, start, count):
    # Philox4x64 is counter-based: block k depends only on (key, k), so the
    # four words of trial k are fixed whatever batch they are drawn in.
    bitgen = np.random.Philox(key=np.uint64(seed & (2**64 - 1)), counter=start)
    words = bitgen.random_raw(4 * count)
    return np.asarray(words, dtype=np.uint64).reshape(count, 4)


def _decode(words):
    signs = np.where((words & np.uint64(1)) == 0, 1, -1).astype(np.int64)
    # top 52 bits times 2098 (< 2**12) fits in 64 bits; the shift keeps the
    # integer part of u * 2098 for u uniform on [0, 1)
    top = words >> np.uint64(12)
    exps = ((top * np.uint64(_N_EXPONENTS)) >> np.uint64(52)).astype(np.int64) + EXPONENT_MIN
    return signs, exps


def sample_batch(seed, start, count):
    """Operands of trials ``start .. start+count-1`` as four float64 arrays.

    Every component is ``s * 2**n`` with ``s`` uniform on {-1, +1} and ``n``
    uniform on {-1074, ..., 1023}.  Returns ``(a, b, c, d, signs, exponents)``.
    """
    if count < 0 or start < 0:
        raise ValueError("start and count must be non-negative")
    if count == 0:
        empty = np.empty(0)
        return empty, empty, empty, empty, np.empty((0, 4), np.int64), np.empty((0, 4), np.int64)
    words = _raw_words(seed, start, count)
    signs, exps = _decode(words)
    values = signs * np.ldexp(1.0, exps)
    return values[:, 0], values[:, 1], values[:, 2], values[:, 3], signs, exps


def sample_operands(seed, trial_index):
    a, b, c, d, signs, exps = sample_batch(seed, trial_index, 1)
    return SampledOperands(
        float(a[0]),
        float(b[0]),
        float(c[0]),
        float(d[0]),
        tuple(int(s) for s in signs[0]),
        tuple(int(n) for n in exps[0]),
        trial_index,
        seed,
    )


# ---------------------------------------------------------------------------
# hexadecimal floats
# ---------------------------------------------------------------------------


class HexFloatError(ValueError):
    pass


_HEX_RE = re.compile(
    r"[+-]?0x(?:[0-9a-f]+(?:\.[0-9a-f]*)?|\.[0-9a-f]+)p[+-]?[0-9]+",
    re.IGNORECASE,
)
_SPECIAL = {"inf": math.inf, "+inf": math.inf, "-inf": -math.inf,
            "nan": math.nan, "+nan": math.nan, "-nan": math.nan}


def parse_hexfloat(text):
    """Parse ``[sign]0x<hex>[.<hex>]p<exp>``, ``inf``, ``-inf`` or ``nan``."""
    token = text.strip()
    special = _SPECIAL.get(token.lower())
    if special is not None:
        return special
    if not _HEX_RE.fullmatch(token):
        raise HexFloatError(f"malformed hex-float literal: {token!r}")
    try:
        return float.fromhex(token)
    except OverflowError:
        raise HexFloatError(f"hex-float literal out of binary64 range: {token!r}") from None


def format_hexfloat(x):
    """Shortest normalized hex form, e.g. ``0x1p-1074``, ``-0x1.8p3``, ``0x0p0``."""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    sign = "-" if math.copysign(1.0, x) < 0 else ""
    if x == 0.0:
        return f"{sign}0x0p0"
    mant, exp = math.frexp(abs(x))  # mant in [0.5, 1)
    # integer significand with the leading 1 at bit 52; exact for subnormals too
    sig = int(mant * 2**53)
    exp -= 1
    frac = sig - (1 << 52)
    digits = f"{frac:013x}".rstrip("0")
    body = f"0x1.{digits}" if digits else "0x1"
    return f"{sign}{body}p{exp}"
