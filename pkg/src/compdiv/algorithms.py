"""Complex division algorithms evaluated strictly in binary64.

Every kernel takes the four real parts ``(a, b, c, d)`` of ``x = a + ib`` and
``y = c + id`` and returns ``(e, f)`` with ``x / y = e + if``.  Kernels are
compiled with numba using the numpy error model, so division by zero and
overflow produce Inf/NaN instead of raising.  No fused multiply-add and no
reassociation is allowed (numba never enables fast-math unless asked).

The uncompiled bodies stay reachable through ``kernel.py_func``; fed with
``numpy.float64`` scalars under ``numpy.errstate(all="ignore")`` they give an
independent interpreted evaluation of the same operation sequence.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from numba import njit

from .fpkit import BINARY64

__all__ = [
    "AlgorithmId",
    "ALGORITHMS",
    "KERNELS",
    "divide",
    "divide_arrays",
    "naive_divide",
    "smith_divide",
    "stewart_divide",
    "annex_g_divide",
    "li_divide",
    "priest_divide",
    "improved_divide",
    "robust_divide",
    "smith_trace",
    "naive_trace",
    "improved_trace",
    "interpreted_divide",
]

OMEGA = BINARY64.omega
MU = BINARY64.mu
EPS = BINARY64.eps

# robust / Li upscaling: Be = B / eps**2 with B = 2, applied below UN*B/eps
ROBUST_B = 2.0
ROBUST_BE = ROBUST_B / (EPS * EPS)
UPSCALE_LIMIT = MU * ROBUST_B / EPS
HALF_OMEGA = OMEGA / 2.0
LI_FACTOR = 16.0

_jit = njit(cache=True, error_model="numpy")


class AlgorithmId(str, Enum):
    NAIVE = "naive"
    SMITH = "smith"
    STEWART = "stewart"
    ANNEX_G = "annex_g"
    LI = "li"
    PRIEST = "priest"
    IMPROVED = "improved"
    ROBUST = "robust"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            known = ", ".join(a.value for a in cls)
            raise ValueError(f"unknown algorithm {name!r} (known: {known})") from None


ALGORITHMS = tuple(AlgorithmId)


# ---------------------------------------------------------------------------
# kernels
# ---------------------------------------------------------------------------


@_jit
def _naive(a, b, c, d):
    den = c * c + d * d
    e = (a * c + b * d) / den
    f = (b * c - a * d) / den
    return e, f


@_jit
def _smith(a, b, c, d):
    if abs(d) <= abs(c):
        r = d / c
        den = c + d * r
        e = (a + b * r) / den
        f = (b - a * r) / den
    else:
        r = c / d
        den = c * r + d
        e = (a * r + b) / den
        f = (b * r - a) / den
    return e, f


@_jit
def _prod3(t1, t2, c, s):
    # t1 * t2 / c, pairing the largest-magnitude factor of {t1, t2, 1/c} with
    # the smallest one first.  s = 1/c is only compared, never multiplied:
    # the pairs involving 1/c are formed as a division by c so an overflowing
    # reciprocal cannot poison a representable product.  Ties go to the
    # first-listed factor.
    m1 = abs(t1)
    m2 = abs(t2)
    m3 = abs(s)
    if m1 >= m2 and m1 >= m3:
        if m2 <= m3:
            return (t1 * t2) / c
        return t2 * (t1 / c)
    if m2 >= m3:
        if m1 <= m3:
            return (t2 * t1) / c
        return t1 * (t2 / c)
    if m1 <= m2:
        return t2 * (t1 / c)
    return t1 * (t2 / c)


@_jit
def _stewart_kernel(a, b, c, d):
    s = 1.0 / c
    r = d / c
    t = 1.0 / (c + d * r)
    e = (a + _prod3(b, d, c, s)) * t
    f = (b - _prod3(a, d, c, s)) * t
    return e, f


@_jit
def _stewart(a, b, c, d):
    if abs(d) <= abs(c):
        return _stewart_kernel(a, b, c, d)
    e, f = _stewart_kernel(b, a, d, c)
    return e, -f


@_jit
def _annex_g(a, b, c, d):
    m = max(abs(c), abs(d))
    ilogbw = 0
    finite_logb = m != 0.0 and m - m == 0.0
    if finite_logb:
        ilogbw = math.frexp(m)[1] - 1
        c = np.ldexp(c, -ilogbw)
        d = np.ldexp(d, -ilogbw)
    denom = c * c + d * d
    x = np.ldexp((a * c + b * d) / denom, -ilogbw)
    y = np.ldexp((b * c - a * d) / denom, -ilogbw)
    if x != x and y != y:
        a_nan = a != a
        b_nan = b != b
        a_inf = abs(a) == np.inf
        b_inf = abs(b) == np.inf
        c_fin = c - c == 0.0
        d_fin = d - d == 0.0
        if denom == 0.0 and (not a_nan or not b_nan):
            x = np.copysign(np.inf, c) * a
            y = np.copysign(np.inf, c) * b
        elif (a_inf or b_inf) and c_fin and d_fin:
            a = np.copysign(1.0 if a_inf else 0.0, a)
            b = np.copysign(1.0 if b_inf else 0.0, b)
            x = np.inf * (a * c + b * d)
            y = np.inf * (b * c - a * d)
        elif m == np.inf and a - a == 0.0 and b - b == 0.0:
            c = np.copysign(1.0 if abs(c) == np.inf else 0.0, c)
            d = np.copysign(1.0 if abs(d) == np.inf else 0.0, d)
            x = 0.0 * (a * c + b * d)
            y = 0.0 * (b * c - a * d)
    return x, y


@_jit
def _li(a, b, c, d):
    ab = max(abs(a), abs(b))
    cd = max(abs(c), abs(d))
    s = 1.0
    if ab >= OMEGA / LI_FACTOR:
        a = a / LI_FACTOR
        b = b / LI_FACTOR
        s = s * LI_FACTOR
    if cd >= OMEGA / LI_FACTOR:
        c = c / LI_FACTOR
        d = d / LI_FACTOR
        s = s / LI_FACTOR
    if ab <= UPSCALE_LIMIT:
        a = a * ROBUST_BE
        b = b * ROBUST_BE
        s = s / ROBUST_BE
    if cd <= UPSCALE_LIMIT:
        c = c * ROBUST_BE
        d = d * ROBUST_BE
        s = s * ROBUST_BE
    e, f = _smith(a, b, c, d)
    return e * s, f * s


@_jit
def _priest_scale(c, d):
    # Power of two near |c + id|**(-3/4) from integer exponent arithmetic:
    # with 2**E <= max(|c|, |d|) < 2**(E+1), s = 2**-ceil(3 (E+1) / 4).
    m = max(abs(c), abs(d))
    if m == 0.0 or not (m - m == 0.0):
        return 1.0
    e = math.frexp(m)[1] - 1
    return np.ldexp(1.0, -((3 * e + 6) >> 2))


@_jit
def _priest(a, b, c, d):
    s = _priest_scale(c, d)
    c = c * s
    d = d * s
    t = 1.0 / (c * c + d * d)
    c = c * s
    d = d * s
    e = (a * c + b * d) * t
    f = (b * c - a * d) * t
    return e, f


@_jit
def _improved_internal(a, b, c, d):
    r = d / c
    t = 1.0 / (c + d * r)
    if r != 0.0:
        e = (a + b * r) * t
        f = (b - a * r) * t
    else:
        e = (a + d * (b / c)) * t
        f = (b - d * (a / c)) * t
    return e, f


@_jit
def _improved(a, b, c, d):
    if abs(d) <= abs(c):
        return _improved_internal(a, b, c, d)
    e, f = _improved_internal(b, a, d, c)
    return e, -f


@_jit
def _internal_compreal(a, b, c, d, r, t):
    if r != 0.0:
        br = b * r
        if br != 0.0:
            e = (a + br) * t
        else:
            e = a * t + (b * t) * r
    else:
        e = (a + d * (b / c)) * t
    return e


@_jit
def _robust_subinternal(a, b, c, d):
    r = d / c
    t = 1.0 / (c + d * r)
    e = _internal_compreal(a, b, c, d, r, t)
    f = _internal_compreal(b, -a, c, d, r, t)
    return e, f


@_jit
def _robust_internal(a, b, c, d):
    if abs(d) <= abs(c):
        return _robust_subinternal(a, b, c, d)
    e, f = _robust_subinternal(b, a, d, c)
    return e, -f


@_jit
def _robust_scaled(a, b, c, d, ab, cd):
    s = 1.0
    if ab >= HALF_OMEGA:
        a = a / 2.0
        b = b / 2.0
        s = s * 2.0
    if cd >= HALF_OMEGA:
        c = c / 2.0
        d = d / 2.0
        s = s / 2.0
    if ab <= UPSCALE_LIMIT:
        a = a * ROBUST_BE
        b = b * ROBUST_BE
        s = s / ROBUST_BE
    if cd <= UPSCALE_LIMIT:
        c = c * ROBUST_BE
        d = d * ROBUST_BE
        s = s * ROBUST_BE
    e, f = _robust_internal(a, b, c, d)
    return e * s, f * s


@_jit
def _robust(a, b, c, d):
    ab = max(abs(a), abs(b))
    cd = max(abs(c), abs(d))
    if ab < HALF_OMEGA and cd < HALF_OMEGA and ab > UPSCALE_LIMIT and cd > UPSCALE_LIMIT:
        # none of the four scalings applies and S stays 1
        return _robust_internal(a, b, c, d)
    return _robust_scaled(a, b, c, d, ab, cd)

KERNELS = {
    AlgorithmId.NAIVE: _naive,
    AlgorithmId.SMITH: _smith,
    AlgorithmId.STEWART: _stewart,
    AlgorithmId.ANNEX_G: _annex_g,
    AlgorithmId.LI: _li,
    AlgorithmId.PRIEST: _priest,
    AlgorithmId.IMPROVED: _improved,
    AlgorithmId.ROBUST: _robust,
}


# ---------------------------------------------------------------------------
# array drivers
# ---------------------------------------------------------------------------


def _make_loop(kernel):
    @_jit
    def loop(a, b, c, d, e, f):
        for i in range(a.shape[0]):
            e[i], f[i] = kernel(a[i], b[i], c[i], d[i])

    return loop


# One compiled loop per kernel so the kernel is inlined by LLVM rather than
# dispatched through a function pointer.
_LOOPS = {alg: _make_loop(k) for alg, k in KERNELS.items()}


def divide_arrays(alg, a, b, c, d):
    """Divide ``(a + ib) / (c + id)`` elementwise; returns ``(e, f)`` arrays."""
    alg = AlgorithmId.parse(alg)
    a, b, c, d = (np.ascontiguousarray(v, dtype=np.float64) for v in (a, b, c, d))
    e = np.empty_like(a)
    f = np.empty_like(a)
    _LOOPS[alg](a, b, c, d, e, f)
    return e, f


# ---------------------------------------------------------------------------
# scalar API
# ---------------------------------------------------------------------------


def divide(alg, x, y):
    """Return ``x / y`` as computed by algorithm ``alg``, as a Python complex.

    Components of the result are exactly what the binary64 evaluation of the
    algorithm produced; NaN and Inf are legitimate outputs.
    """
    kernel = KERNELS[AlgorithmId.parse(alg)]
    x = complex(x)
    y = complex(y)
    e, f = kernel(x.real, x.imag, y.real, y.imag)
    return complex(e, f)


def naive_divide(x, y):
    return divide(AlgorithmId.NAIVE, x, y)


def smith_divide(x, y):
    return divide(AlgorithmId.SMITH, x, y)


def stewart_divide(x, y):
    return divide(AlgorithmId.STEWART, x, y)


def annex_g_divide(x, y):
    return divide(AlgorithmId.ANNEX_G, x, y)


def li_divide(x, y):
    return divide(AlgorithmId.LI, x, y)


def priest_divide(x, y):
    return divide(AlgorithmId.PRIEST, x, y)


def improved_divide(x, y):
    return divide(AlgorithmId.IMPROVED, x, y)


def robust_divide(x, y):
    return divide(AlgorithmId.ROBUST, x, y)


def interpreted_divide(alg, x, y):
    """Evaluate the uncompiled kernel body on numpy float64 scalars."""
    kernel = KERNELS[AlgorithmId.parse(alg)].py_func
    x = complex(x)
    y = complex(y)
    parts = [np.float64(v) for v in (x.real, x.imag, y.real, y.imag)]
    with np.errstate(all="ignore"):
        e, f = kernel(*parts)
    return complex(float(e), float(f))


# ---------------------------------------------------------------------------
# instrumented traces
# ---------------------------------------------------------------------------


def _parts(x, y):
    x = complex(x)
    y = complex(y)
    return tuple(np.float64(v) for v in (x.real, x.imag, y.real, y.imag))


def naive_trace(x, y):
    """Intermediates of the textbook formula: ``den``, ``e``, ``f``."""
    a, b, c, d = _parts(x, y)
    with np.errstate(all="ignore"):
        den = c * c + d * d
        e = (a * c + b * d) / den
        f = (b * c - a * d) / den
    return {"den": float(den), "e": float(e), "f": float(f)}


def smith_trace(x, y):
    """Intermediates of Smith's method, including the branch taken."""
    a, b, c, d = _parts(x, y)
    with np.errstate(all="ignore"):
        if abs(d) <= abs(c):
            branch = "d<=c"
            r = d / c
            den = c + d * r
            e = (a + b * r) / den
            f = (b - a * r) / den
        else:
            branch = "d>c"
            r = c / d
            den = c * r + d
            e = (a * r + b) / den
            f = (b * r - a) / den
    return {"branch": branch, "r": float(r), "den": float(den), "e": float(e), "f": float(f)}


def improved_trace(x, y):
    """Intermediates of the improved algorithm (``r``, ``t``, the numerators)."""
    a, b, c, d = _parts(x, y)
    swapped = not abs(d) <= abs(c)
    if swapped:
        a, b, c, d = b, a, d, c
    with np.errstate(all="ignore"):
        r = d / c
        t = 1.0 / (c + d * r)
        if r != 0.0:
            num_e = a + b * r
            num_f = b - a * r
        else:
            num_e = a + d * (b / c)
            num_f = b - d * (a / c)
        e = num_e * t
        f = num_f * t
    if swapped:
        f = -f
    return {
        "swapped": swapped,
        "r": float(r),
        "t": float(t),
        "num_e": float(num_e),
        "num_f": float(num_f),
        "e": float(e),
        "f": float(f),
    }
