"""Shared oracle checks for the unit and acceptance suites."""

import math
from fractions import Fraction

import numpy as np

from compdiv.fpkit import same_bits
from compdiv.oracle import exact_quotient, oracle_divide

OMEGA = np.finfo(np.float64).max
OVERFLOW_EDGE = Fraction(OMEGA) + Fraction(2) ** 970  # Omega plus half an ulp


def is_nearest(q, r):
    """|q - r| <= |q - r'| for both binary64 neighbours r' of r, ties to even."""
    if math.isinf(r):
        return abs(q) >= OVERFLOW_EDGE and (q > 0) == (r > 0)
    err = abs(q - Fraction(r))
    for n in (float(np.nextafter(r, -np.inf)), float(np.nextafter(r, np.inf))):
        if math.isinf(n):
            continue
        other = abs(q - Fraction(n))
        if other < err:
            return False
        if other == err and (int(np.float64(r).view(np.uint64)) & 1):
            return False
    return True


def random_quadruples(n, seed):
    """Random-significand operands; the first half in a moderate exponent range."""
    rng = np.random.default_rng(seed)
    sig = rng.uniform(1.0, 2.0, (4, n))
    exps = rng.integers(-1074, 1024, (4, n))
    exps[:, : n // 2] = rng.integers(-300, 300, (4, n // 2))
    vals = np.ldexp(sig, exps) * rng.choice([-1.0, 1.0], (4, n))
    return np.where(np.isinf(vals), OMEGA, vals)


def neighbour_violations(a, b, c, d):
    bad = 0
    for i in range(a.size):
        x, y = complex(a[i], b[i]), complex(c[i], d[i])
        qe, qf = exact_quotient(x, y)
        z = oracle_divide(x, y)
        bad += (not is_nearest(qe, z.real)) + (not is_nearest(qf, z.imag))
    return bad


def symmetry_violations(a, b, c, d, seed):
    """(conjugation violations, power-of-two scaling violations, scaled pairs checked)."""
    rng = np.random.default_rng(seed)
    conj_bad = scale_bad = checked = 0
    for i in range(a.size):
        x, y = complex(a[i], b[i]), complex(c[i], d[i])
        z = oracle_divide(x, y)
        zc = oracle_divide(x.conjugate(), y.conjugate())
        conj_bad += not (same_bits(zc.real, z.real) and same_bits(zc.imag, -z.imag))
        s = 2.0 ** int(rng.integers(-60, 61))
        orig = (a[i], b[i], c[i], d[i])
        with np.errstate(over="ignore"):
            parts = [float(np.float64(v) * s) for v in orig]
        # only scalings that keep every component normal (or zero) and finite
        if all(math.isfinite(p) and (v == 0 or abs(p) >= 2.0**-1022) and p / s == v for p, v in zip(parts, orig)):
            checked += 1
            zs = oracle_divide(complex(parts[0], parts[1]), complex(parts[2], parts[3]))
            scale_bad += not (same_bits(zs.real, z.real) and same_bits(zs.imag, z.imag))
    return conj_bad, scale_bad, checked
