import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from compdiv.fpkit import (
    BINARY64,
    EXACT,
    EXPONENT_MAX,
    EXPONENT_MIN,
    HexFloatError,
    InvalidReferenceError,
    bits_of_accuracy,
    bits_to_float,
    complex_accuracy,
    float_to_bits,
    format_hexfloat,
    parse_hexfloat,
    sample_batch,
    sample_operands,
    same_bits,
)

ALPHA = 2.0**-1074


# --- format constants -------------------------------------------------------


def test_binary64_constants():
    f = BINARY64
    assert (f.radix, f.precision, f.exponent_bits, f.e_min, f.e_max) == (2, 53, 11, -1022, 1023)
    assert f.omega == np.finfo(np.float64).max
    assert f.mu == np.finfo(np.float64).tiny == 2.0**-1022
    assert f.alpha == ALPHA
    assert f.eps == np.finfo(np.float64).eps
    assert f.unit_roundoff == f.eps / 2
    assert f.alpha == 2.0 ** (1 - f.precision) * f.mu


def test_alpha_from_eps_u_omega_within_one_ulp():
    f = BINARY64
    # evaluated exactly then rounded once; alpha = 4 eps / ((1 - u) Omega)
    q = 4 * Fraction(f.eps) / ((1 - Fraction(f.unit_roundoff)) * Fraction(f.omega))
    from compdiv.oracle import round_rational_to_binary64

    r = round_rational_to_binary64(q)
    assert abs(float_to_bits(r) - float_to_bits(f.alpha)) <= 1


# --- accuracy ---------------------------------------------------------------


def test_exact_match_is_53():
    assert bits_of_accuracy(2.0**346, 2.0**346) == (53, EXACT)


def test_zero_against_nonzero_reference():
    assert bits_of_accuracy(0.0, 2.0**-1008) == (0, math.inf)


def test_one_ulp_at_point_six():
    bits, rel = bits_of_accuracy(0.6000000000000001, 0.6)
    assert bits == 52
    assert rel == pytest.approx(1.85e-16, rel=1e-2)


def test_signed_zero_and_infinities():
    assert bits_of_accuracy(-0.0, 0.0) == (53, EXACT)
    assert bits_of_accuracy(math.inf, math.inf) == (53, EXACT)
    assert bits_of_accuracy(-math.inf, math.inf) == (0, math.inf)
    assert bits_of_accuracy(1.0, math.inf) == (0, math.inf)
    assert bits_of_accuracy(math.nan, 1.0) == (0, math.inf)
    assert bits_of_accuracy(math.inf, 1.0)[0] == 0
    assert bits_of_accuracy(1.0, 0.0) == (0, math.inf)


def test_nan_reference_rejected():
    with pytest.raises(InvalidReferenceError):
        bits_of_accuracy(1.0, math.nan)
    with pytest.raises(InvalidReferenceError):
        complex_accuracy(1 + 1j, complex(1.0, math.nan))


def test_exact_relative_error_on_bit_boundary():
    # relerr exactly 2**-10 must give 10, a hair more must give 9
    assert bits_of_accuracy(1.0 + 2.0**-10, 1.0)[0] == 10
    assert bits_of_accuracy(1.0 + 2.0**-10 + 2.0**-52, 1.0)[0] == 9
    assert bits_of_accuracy(3.0, 1.0)[0] == 0


def test_complex_accuracy_examples():
    z = complex(2.0**-1023, -(2.0**-1023))
    assert complex_accuracy(z, z).min_bits == 53
    assert complex_accuracy(complex(1.43e104, 0.0), complex(2.0**346, -(2.0**-1008))).min_bits == 0
    expected = complex(0.6, 0.2)
    off = complex(np.nextafter(0.6, 1.0), 0.2)
    res = complex_accuracy(off, expected)
    assert (res.re_bits, res.im_bits, res.min_bits) == (52, 53, 52)
    assert res.im_relerr is EXACT


@given(st.floats(allow_nan=False, allow_infinity=False), st.floats(allow_nan=False, allow_infinity=False))
def test_accuracy_symmetric_under_negation(c, e):
    assert bits_of_accuracy(c, e) == bits_of_accuracy(-c, -e)


@given(st.floats(min_value=1e-300, max_value=1e300))
def test_accuracy_non_increasing_as_perturbation_grows(x):
    seq = []
    for k in range(52, 0, -1):
        with np.errstate(all="ignore"):
            y = float(np.float64(x) * (1.0 + 2.0**-k))
        seq.append(bits_of_accuracy(y, x)[0])
    assert all(a >= b for a, b in zip(seq, seq[1:]))
    assert bits_of_accuracy(x, x)[0] == 53


# --- sampler ------------------------------------------------------------------


def test_sampler_deterministic():
    assert sample_operands(42, 0) == sample_operands(42, 0)
    assert sample_operands(42, 0) != sample_operands(42, 1)
    assert sample_operands(42, 0) != sample_operands(43, 0)


def test_batch_matches_single_draws():
    a, b, c, d, signs, exps = sample_batch(7, 1000, 50)
    for i in (0, 17, 49):
        s = sample_operands(7, 1000 + i)
        assert (s.a, s.b, s.c, s.d) == (a[i], b[i], c[i], d[i])
        assert s.signs == tuple(signs[i]) and s.exponents == tuple(exps[i])
    # split batches agree with one batch
    joined = np.concatenate([sample_batch(7, 1000, 20)[0], sample_batch(7, 1020, 30)[0]])
    assert np.array_equal(joined, a)


def test_sampled_values_are_signed_powers_of_two():
    a, b, c, d, signs, exps = sample_batch(3, 0, 20000)
    vals = np.concatenate([a, b, c, d])
    assert np.all(np.isfinite(vals)) and np.all(vals != 0)
    mags = np.abs(vals)
    assert mags.min() >= ALPHA and mags.max() <= 2.0**1023
    m, _ = np.frexp(mags)
    assert np.all(m == 0.5)
    assert np.array_equal(vals, np.concatenate([(signs * np.ldexp(1.0, exps))[:, j] for j in range(4)]))
    assert exps.min() >= EXPONENT_MIN and exps.max() <= EXPONENT_MAX
    assert set(np.unique(signs)) == {-1, 1}


def test_exponent_histogram_uniform():
    n = 100_000
    _, _, _, _, signs, exps = sample_batch(12345, 0, n)
    for j in range(4):
        counts = np.bincount(exps[:, j] - EXPONENT_MIN, minlength=2098)
        expected = n / 2098
        # per-bin 5 sigma and a global chi-square within 5 sigma of its mean
        assert np.all(np.abs(counts - expected) <= 5 * math.sqrt(expected))
        chi2 = float(((counts - expected) ** 2 / expected).sum())
        assert abs(chi2 - 2097) <= 5 * math.sqrt(2 * 2097)
        pos = int(np.count_nonzero(signs[:, j] == 1))
        assert abs(pos - n / 2) <= 5 * math.sqrt(n / 4)


# --- hex floats ---------------------------------------------------------------


def test_hex_examples():
    assert parse_hexfloat("0x1.0p1023") == 2.0**1023
    assert parse_hexfloat("0x1.0p-1074") == ALPHA
    assert format_hexfloat(ALPHA) == "0x1p-1074"
    assert format_hexfloat(1.5) == "0x1.8p0"
    assert format_hexfloat(-0.0) == "-0x0p0"
    assert format_hexfloat(0.0) == "0x0p0"
    assert format_hexfloat(math.inf) == "inf"
    assert format_hexfloat(-math.inf) == "-inf"
    assert format_hexfloat(math.nan) == "nan"
    assert format_hexfloat(BINARY64.omega) == "0x1.fffffffffffffp1023"
    assert parse_hexfloat("-inf") == -math.inf
    assert math.isnan(parse_hexfloat("nan"))
    assert same_bits(parse_hexfloat("-0x0p0"), -0.0)


@pytest.mark.parametrize("bad", ["", "1.0", "0x", "0x1.8", "0xp3", "0x1.gp0", "0x1p", "0x1p1e3", "infinity", "0x1p1024"])
def test_hex_rejects_malformed(bad):
    with pytest.raises(HexFloatError) as info:
        parse_hexfloat(bad)
    assert repr(bad.strip()) in str(info.value)


def test_hex_round_trip_random_bit_patterns():
    rng = np.random.default_rng(2024)
    bits = rng.integers(0, 2**64, size=200_000, dtype=np.uint64, endpoint=False)
    # bias towards subnormals, zeros and the extremes of the range
    bits[:1000] &= np.uint64(0x800FFFFFFFFFFFFF)
    bits[1000:1100] = np.arange(100, dtype=np.uint64)
    bits[1100:1200] = np.uint64(0x7FEFFFFFFFFFFFFF) - np.arange(100, dtype=np.uint64)
    for w in bits.tolist():
        x = bits_to_float(w)
        y = parse_hexfloat(format_hexfloat(x))
        if math.isnan(x):
            assert math.isnan(y)
        else:
            assert float_to_bits(y) == w


@settings(max_examples=500)
@given(st.floats(allow_nan=False))
def test_hex_round_trip_hypothesis(x):
    assert same_bits(parse_hexfloat(format_hexfloat(x)), x)
