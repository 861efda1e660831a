"""Monte-Carlo failure rates, the underflow-lemma sweep and the throughput
benchmark."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .algorithms import KERNELS, AlgorithmId, divide_arrays
from .fpkit import BINARY64, bits_of_accuracy, format_hexfloat, sample_batch
from .oracle import round_ratio, to_scaled_int

__all__ = [
    "FailureEstimate",
    "BenchResult",
    "Prop1Report",
    "DEFAULT_TRIALS",
    "BENCH_SIZE",
    "BENCH_REPS",
    "wald_interval",
    "score_trials",
    "estimate_failure",
    "estimate_failures",
    "estimate_robust_quality",
    "check_proposition1",
    "proposition1_boundary_sweep",
    "run_bench",
    "search_robust_alpha_witness",
    "FAILURE_CSV_HEADER",
    "BENCH_CSV_HEADER",
]

DEFAULT_TRIALS = 100_000
BENCH_SIZE = 1_574_802
BENCH_REPS = 10
Z95 = 1.96

ALPHA = BINARY64.alpha
OMEGA = BINARY64.omega


# ---------------------------------------------------------------------------
# failure estimates
# ---------------------------------------------------------------------------


def wald_interval(t, n):
    """``(p_hat, variance, low, high)`` of the 95% Wald interval, clamped to [0, 1]."""
    p = t / n
    var = p * (1.0 - p) / n
    half = Z95 * math.sqrt(var)
    return p, var, max(0.0, p - half), min(1.0, p + half)


@dataclass(frozen=True)
class FailureEstimate:
    algorithm: AlgorithmId
    n: int
    t: int
    p_hat: float
    variance: float
    ci_low: float
    ci_high: float
    fail_threshold_bits: int
    seed: int

    @classmethod
    def from_counts(cls, algorithm, t, n, fail_threshold_bits, seed):
        if n < 1:
            raise ValueError("need at least one trial")
        if not 0 <= t <= n:
            raise ValueError("failure count outside [0, N]")
        p, var, lo, hi = wald_interval(t, n)
        return cls(AlgorithmId.parse(algorithm), n, t, p, var, lo, hi, fail_threshold_bits, seed)

    def overlaps(self, low, high):
        return self.ci_low <= high and low <= self.ci_high

    def csv_row(self):
        return ",".join(
            [
                self.algorithm.value,
                str(self.n),
                str(self.t),
                format_hexfloat(self.p_hat),
                format_hexfloat(self.ci_low),
                format_hexfloat(self.ci_high),
                str(self.fail_threshold_bits),
                str(self.seed),
            ]
        )

    def as_dict(self):
        return {
            "algo": self.algorithm.value,
            "N": self.n,
            "T": self.t,
            "p_hat": format_hexfloat(self.p_hat),
            "ci_low": format_hexfloat(self.ci_low),
            "ci_high": format_hexfloat(self.ci_high),
            "threshold_bits": self.fail_threshold_bits,
            "seed": self.seed,
        }


FAILURE_CSV_HEADER = "algo,N,T,p_hat,ci_low,ci_high,threshold_bits,seed"


def _min_bits(e, f, ze, zf):
    # NaN or Inf against a finite reference scores 0 inside bits_of_accuracy
    return min(bits_of_accuracy(e, ze)[0], bits_of_accuracy(f, zf)[0])


def _score_chunk(args):
    seed, start, count, algs = args
    a, b, c, d, _, _ = sample_batch(seed, start, count)
    ze = np.empty(count)
    zf = np.empty(count)
    for i in range(count):
        ia, ib, ic, id_ = (to_scaled_int(v) for v in (a[i], b[i], c[i], d[i]))
        den = ic * ic + id_ * id_
        ze[i] = round_ratio(ia * ic + ib * id_, den)
        zf[i] = round_ratio(ib * ic - ia * id_, den)
    out = {}
    for alg in algs:
        e, f = divide_arrays(alg, a, b, c, d)
        bits = np.full(count, 53, dtype=np.int8)
        # +0 == -0 and every exact hit skips the rational scoring
        for i in np.nonzero(~((e == ze) & (f == zf)))[0]:
            bits[i] = _min_bits(e[i], f[i], ze[i], zf[i])
        out[alg] = bits
    return out


def _chunks(n, jobs):
    pieces = max(1, jobs) * 4 if jobs > 1 else 1
    size = -(-n // pieces)
    return [(s, min(size, n - s)) for s in range(0, n, size)]


def score_trials(algorithms, n, seed, jobs=1):
    """Per-trial min-of-parts accuracy for each algorithm on the shared stream.

    Returns ``{AlgorithmId: int8 array of length n}``.  Trial ``k`` always sees
    the operands of ``sample_operands(seed, k)``, so the result does not depend
    on ``jobs``.
    """
    if n < 1:
        raise ValueError("need at least one trial")
    algs = [AlgorithmId.parse(a) for a in algorithms]
    tasks = [(seed, s, c, algs) for s, c in _chunks(n, jobs)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_score_chunk, tasks))
    else:
        parts = [_score_chunk(t) for t in tasks]
    return {alg: np.concatenate([p[alg] for p in parts]) for alg in algs}


def _check_threshold(bits):
    if not 1 <= bits <= 53:
        raise ValueError(f"fail_threshold_bits must be in [1, 53], got {bits}")


def estimate_failures(algorithms, n=DEFAULT_TRIALS, seed=1, fail_threshold_bits=53, jobs=1):
    """One :class:`FailureEstimate` per algorithm, all over the same operands."""
    _check_threshold(fail_threshold_bits)
    scores = score_trials(algorithms, n, seed, jobs)
    return [
        FailureEstimate.from_counts(alg, int(np.count_nonzero(bits < fail_threshold_bits)), n, fail_threshold_bits, seed)
        for alg, bits in scores.items()
    ]


def estimate_failure(alg, n=DEFAULT_TRIALS, seed=1, fail_threshold_bits=53, jobs=1):
    return estimate_failures([alg], n, seed, fail_threshold_bits, jobs)[0]


def estimate_robust_quality(n=DEFAULT_TRIALS, seed=1, jobs=1):
    """``(below_52, not_exact)`` estimates for the robust algorithm."""
    bits = score_trials([AlgorithmId.ROBUST], n, seed, jobs)[AlgorithmId.ROBUST]
    below = FailureEstimate.from_counts(AlgorithmId.ROBUST, int(np.count_nonzero(bits < 52)), n, 52, seed)
    inexact = FailureEstimate.from_counts(AlgorithmId.ROBUST, int(np.count_nonzero(bits < 53)), n, 53, seed)
    return below, inexact


# ---------------------------------------------------------------------------
# underflow lemma: fl(d/c) < alpha and fl(b/c) < alpha imply b*d/c < alpha
# ---------------------------------------------------------------------------


@dataclass
class Prop1Report:
    samples: int
    premises_held: int
    counterexamples: int
    witnesses: list = field(default_factory=list)


def _prop1_fails(b, c, d):
    # exact |b*d/c| < alpha  <=>  |B*D| < |C| with X = x * 2**1074
    return abs(to_scaled_int(b) * to_scaled_int(d)) >= abs(to_scaled_int(c))


def _prop1_premises(b, c, d):
    with np.errstate(all="ignore"):
        return (np.abs(d) <= np.abs(c)) & (np.abs(d / c) < ALPHA) & (np.abs(b / c) < ALPHA)


def _prop1_draw(rng, n):
    """Mixed sampling of (b, c, d) concentrated where both premises are tight."""
    third = n // 3
    sizes = (third, third, n - 2 * third)
    out = []
    # 1. pure powers of two, b and d at or below alpha * c
    k = sizes[0]
    nc = rng.integers(1, 1024, k)
    nb = rng.integers(-1074, nc - 1073)
    nd = rng.integers(-1074, nc - 1073)
    out.append((np.ldexp(1.0, nb), np.ldexp(1.0, nc), np.ldexp(1.0, nd)))
    # 2. random significands with b, d within a factor 4 of alpha * c
    k = sizes[1]
    c = np.ldexp(rng.uniform(1.0, 2.0, k), rng.integers(0, 1024, k))
    with np.errstate(all="ignore"):
        c = np.minimum(c, OMEGA)
        b = c * ALPHA * rng.uniform(0.25, 4.0, k)
        d = c * ALPHA * rng.uniform(0.25, 4.0, k)
    out.append((b, c, d))
    # 3. log-uniform magnitudes over the whole range, b and d below c
    k = sizes[2]
    c = np.minimum(np.exp2(rng.uniform(-1074.0, 1024.0, k)), OMEGA)
    b = np.maximum(np.exp2(rng.uniform(-1074.0, 1024.0, k)), ALPHA)
    d = np.maximum(np.minimum(c * rng.uniform(0.0, 1.0, k), c), ALPHA)
    out.append((b, c, d))
    b, c, d = (np.concatenate(parts) for parts in zip(*out))
    signs = rng.choice([-1.0, 1.0], size=(3, n))
    return b * signs[0], c * signs[1], d * signs[2]


def check_proposition1(samples=1_000_000, seed=0, max_witnesses=10):
    """Look for (b, c, d) with |d| <= |c|, fl(d/c) < alpha, fl(b/c) < alpha but
    |b d / c| >= alpha, judged exactly.  The report should show none."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    b, c, d = _prop1_draw(rng, samples)
    held = np.nonzero(_prop1_premises(b, c, d) & (b != 0) & (d != 0))[0]
    report = Prop1Report(samples, int(held.size), 0)
    for i in held:
        if _prop1_fails(b[i], c[i], d[i]):
            report.counterexamples += 1
            if len(report.witnesses) < max_witnesses:
                report.witnesses.append((float(b[i]), float(c[i]), float(d[i])))
    return report


def proposition1_boundary_sweep(steps=3):
    """Deterministic sweep of b and d across ulp neighbours of alpha * c."""
    sig = [1.0, 1.0 + 2.0**-52, 1.5, 2.0 - 2.0**-52]
    report = Prop1Report(0, 0, 0)
    with np.errstate(all="ignore"):
        for nc in range(0, 1024):
            for m in sig:
                c = min(math.ldexp(m, nc), OMEGA)
                near = []
                # fl(v/c) rounds to zero just below alpha*c/2 and to alpha above it
                for centre in (np.float64(c) * ALPHA, np.float64(c) * ALPHA * 0.5):
                    near.append(centre)
                    lo = hi = centre
                    for _ in range(steps):
                        lo = np.nextafter(lo, 0.0)
                        hi = np.nextafter(hi, np.inf)
                        near += [lo, hi]
                near = np.array([v for v in near if v > 0], dtype=np.float64)
                bb, dd = np.meshgrid(near, near)
                bb = bb.ravel()
                dd = dd.ravel()
                cc = np.full(bb.shape, c)
                report.samples += bb.size
                ok = np.nonzero(_prop1_premises(bb, cc, dd))[0]
                report.premises_held += ok.size
                for i in ok:
                    if _prop1_fails(bb[i], c, dd[i]):
                        report.counterexamples += 1
                        report.witnesses.append((float(bb[i]), c, float(dd[i])))
    return report


# ---------------------------------------------------------------------------
# benchmark
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BenchResult:
    algorithm: AlgorithmId
    dataset_size: int
    repetitions: int
    mean_seconds: float
    mcdps: float
    checksum: float
    checksums_stable: bool

    def csv_row(self):
        return ",".join(
            [
                self.algorithm.value,
                str(self.dataset_size),
                str(self.repetitions),
                format_hexfloat(self.mean_seconds),
                format_hexfloat(self.mcdps),
                format_hexfloat(self.checksum),
            ]
        )

    def as_dict(self):
        return {
            "algo": self.algorithm.value,
            "dataset_size": self.dataset_size,
            "reps": self.repetitions,
            "mean_seconds": format_hexfloat(self.mean_seconds),
            "mcdps": format_hexfloat(self.mcdps),
            "checksum": format_hexfloat(self.checksum),
        }


BENCH_CSV_HEADER = "algo,dataset_size,reps,mean_seconds,mcdps,checksum"


def _make_checksum_loop(kernel):
    # The running sum keeps the divisions alive and, being a strict float
    # recurrence, also keeps LLVM from vectorising the loop.
    @njit(cache=True, error_model="numpy")
    def loop(a, b, c, d):
        acc = 0.0
        for i in range(a.shape[0]):
            e, f = kernel(a[i], b[i], c[i], d[i])
            acc += e
            acc += f
        return acc

    return loop


_BENCH_LOOPS = {alg: _make_checksum_loop(k) for alg, k in KERNELS.items()}


def bench_dataset(dataset_size, seed=0):
    rng = np.random.default_rng(seed)
    return tuple(rng.uniform(0.0, 1.0, dataset_size) for _ in range(4))


def run_bench(alg, dataset_size=BENCH_SIZE, repetitions=BENCH_REPS, seed=0, dataset=None):
    """Time ``repetitions`` passes over a dataset uniform in [0, 1] after one warm-up."""
    if dataset_size < 1:
        raise ValueError("dataset_size must be >= 1")
    if repetitions < 1:
        raise ValueError("repetitions must be >= 1")
    alg = AlgorithmId.parse(alg)
    a, b, c, d = bench_dataset(dataset_size, seed) if dataset is None else dataset
    loop = _BENCH_LOOPS[alg]
    reference = loop(a, b, c, d)
    times = []
    sums = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        sums.append(loop(a, b, c, d))
        times.append(time.perf_counter() - t0)
    mean = sum(times) / repetitions
    stable = all(s == reference or (s != s and reference != reference) for s in sums)
    return BenchResult(alg, dataset_size, repetitions, mean, dataset_size / mean / 1e6, reference, stable)


# ---------------------------------------------------------------------------
# rare robust failure search
# ---------------------------------------------------------------------------


def search_robust_alpha_witness(seed=1, max_trials=DEFAULT_TRIALS, chunk=10_000):
    """First trial of the sampler stream whose correctly rounded result has a
    part equal to +-alpha while the robust algorithm returns zero there.

    Returns ``(trial_index, x, y)`` or None if ``max_trials`` draws hold none.
    """
    from .oracle import oracle_divide

    for start in range(0, max_trials, chunk):
        count = min(chunk, max_trials - start)
        a, b, c, d, _, _ = sample_batch(seed, start, count)
        e, f = divide_arrays(AlgorithmId.ROBUST, a, b, c, d)
        for i in np.nonzero((e == 0.0) | (f == 0.0))[0]:
            x = complex(a[i], b[i])
            y = complex(c[i], d[i])
            z = oracle_divide(x, y)
            if (e[i] == 0.0 and abs(z.real) == ALPHA) or (f[i] == 0.0 and abs(z.imag) == ALPHA):
                return start + int(i), x, y
    return None
