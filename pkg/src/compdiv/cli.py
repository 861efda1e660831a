"""``compdiv`` command line.

Exit status: 0 success, 1 conformance or property failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from decimal import Decimal, InvalidOperation

from . import experiments as ex
from .algorithms import ALGORITHMS, AlgorithmId, divide
from .corpus import CorpusError, load_corpus, load_golden, run_golden
from .fpkit import HexFloatError, complex_accuracy, format_hexfloat, parse_hexfloat
from .oracle import OracleError, oracle_divide

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FORMATS = ("table", "csv", "json")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument parsing helpers
# ---------------------------------------------------------------------------


def parse_real(token):
    """Hex-float literal, or a decimal literal (warned about if inexact)."""
    token = token.strip()
    try:
        return parse_hexfloat(token)
    except HexFloatError as hex_error:
        try:
            exact = Decimal(token)
        except InvalidOperation:
            raise UsageError(str(hex_error)) from None
        if not exact.is_finite():
            raise UsageError(str(hex_error)) from None
        value = float(token)
        if math.isinf(value):
            raise UsageError(f"decimal literal out of binary64 range: {token!r}")
        if Decimal(value) != exact:
            print(
                f"warning: {token} is not exactly representable, using {format_hexfloat(value)}",
                file=sys.stderr,
            )
        return value


def parse_complex(text):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected 're,im', got {text!r}")
    return complex(parse_real(parts[0]), parse_real(parts[1]))


def parse_algos(text, allow_all=True):
    if allow_all and text.strip().lower() == "all":
        return list(ALGORITHMS)
    try:
        return [AlgorithmId.parse(name) for name in text.split(",") if name.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _positive(name, value):
    if value < 1:
        raise UsageError(f"{name} must be >= 1, got {value}")
    return value


def hexpair(z):
    return f"{format_hexfloat(z.real)},{format_hexfloat(z.imag)}"


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_divide(args, out):
    alg = AlgorithmId.parse(args.algo)
    x = parse_complex(args.x)
    y = parse_complex(args.y)
    z = divide(alg, x, y)
    ref = bits = None
    if args.oracle:
        try:
            ref = oracle_divide(x, y)
        except OracleError as exc:
            raise UsageError(str(exc)) from None
        bits = complex_accuracy(z, ref).min_bits
    if args.format == "json":
        rec = {"algo": alg.value, "x": hexpair(x), "y": hexpair(y), "result": hexpair(z)}
        if ref is not None:
            rec.update(oracle=hexpair(ref), min_bits=bits)
        out.write(json.dumps(rec) + "\n")
    elif args.format == "csv":
        head = "algo,x_re,x_im,y_re,y_im,re,im"
        row = [alg.value, hexpair(x), hexpair(y), hexpair(z)]
        if ref is not None:
            head += ",oracle_re,oracle_im,min_bits"
            row += [hexpair(ref), str(bits)]
        out.write(head + "\n" + ",".join(row) + "\n")
    else:
        out.write(hexpair(z) + "\n")
        if ref is not None:
            out.write(f"oracle {hexpair(ref)}  min_bits {bits}\n")
            out.write(f"# {z!r} vs {ref!r}\n")
    return EXIT_OK


def cmd_cases(args, out):
    algos = parse_algos(args.algos)
    try:
        cases = load_corpus(args.corpus)
        golden = load_golden(args.golden)
        cells = run_golden(algos, cases, golden)
    except (OSError, CorpusError) as exc:
        raise UsageError(str(exc)) from None
    failing = [c for c in cells if not c.passed]
    if args.format == "csv":
        out.write("case_id,algo,bits,expected_bits,match\n")
        for c in cells:
            out.write(f"{c.case_id},{c.algorithm.value},{c.bits},{c.expected_bits},{int(c.passed)}\n")
    elif args.format == "json":
        recs = [
            {"case_id": c.case_id, "algo": c.algorithm.value, "bits": c.bits,
             "expected_bits": c.expected_bits, "match": c.passed}
            for c in cells
        ]
        out.write(json.dumps(recs) + "\n")
    else:
        by_case = {}
        for c in cells:
            by_case.setdefault(c.case_id, []).append(c)
        out.write("case " + " ".join(f"{a.value:>9}" for a in algos) + "\n")
        for case_id, row in by_case.items():
            # a trailing '*' marks a cell that disagrees with the golden table
            out.write(f"{case_id:>4} " + " ".join(f"{str(c.bits) + ('' if c.passed else '*'):>9}" for c in row) + "\n")
        out.write(f"{len(cells) - len(failing)}/{len(cells)} cells match\n")
    for c in failing:
        print(f"mismatch: case {c.case_id} {c.algorithm.value}: got {c.bits}, expected {c.expected_bits}",
              file=sys.stderr)
    return EXIT_FAIL if failing else EXIT_OK


def cmd_montecarlo(args, out):
    algos = parse_algos(args.algo)
    _positive("--trials", args.trials)
    _positive("--jobs", args.jobs)
    if not 1 <= args.fail_bits <= 53:
        raise UsageError(f"--fail-bits must be in [1, 53], got {args.fail_bits}")
    ests = ex.estimate_failures(algos, args.trials, args.seed, args.fail_bits, args.jobs)
    if args.format == "csv":
        out.write(ex.FAILURE_CSV_HEADER + "\n")
        for e in ests:
            out.write(e.csv_row() + "\n")
    elif args.format == "json":
        out.write(json.dumps([e.as_dict() for e in ests]) + "\n")
    else:
        out.write(f"{'algo':>9} {'N':>8} {'T':>7} {'p_hat':>10} {'95% CI':>24}\n")
        for e in ests:
            out.write(f"{e.algorithm.value:>9} {e.n:>8} {e.t:>7} {e.p_hat:>10.3e}   [{e.ci_low:.3e}, {e.ci_high:.3e}]\n")
    return EXIT_OK


def cmd_prop1(args, out):
    _positive("--samples", args.samples)
    rnd = ex.check_proposition1(args.samples, args.seed)
    sweep = ex.proposition1_boundary_sweep()
    total = rnd.counterexamples + sweep.counterexamples
    out.write(f"random: {rnd.samples} samples, {rnd.premises_held} satisfy the premises, "
              f"{rnd.counterexamples} counterexamples\n")
    out.write(f"boundary sweep: {sweep.samples} samples, {sweep.premises_held} satisfy the premises, "
              f"{sweep.counterexamples} counterexamples\n")
    for b, c, d in (rnd.witnesses + sweep.witnesses)[:10]:
        out.write(f"witness b={format_hexfloat(b)} c={format_hexfloat(c)} d={format_hexfloat(d)}\n")
    out.write(f"{total} counterexamples\n")
    return EXIT_FAIL if total else EXIT_OK


def cmd_bench(args, out):
    algos = parse_algos(args.algos)
    _positive("--size", args.size)
    _positive("--reps", args.reps)
    data = ex.bench_dataset(args.size, args.seed)
    results = [ex.run_bench(a, args.size, args.reps, args.seed, dataset=data) for a in algos]
    if args.format == "csv":
        out.write(ex.BENCH_CSV_HEADER + "\n")
        for r in results:
            out.write(r.csv_row() + "\n")
    elif args.format == "json":
        out.write(json.dumps([r.as_dict() for r in results]) + "\n")
    else:
        out.write(f"{'algo':>9} {'size':>9} {'reps':>5} {'mean s':>10} {'MCDPS':>8}  checksum\n")
        for r in results:
            out.write(f"{r.algorithm.value:>9} {r.dataset_size:>9} {r.repetitions:>5} "
                      f"{r.mean_seconds:>10.4f} {r.mcdps:>8.1f}  {r.checksum!r}\n")
    unstable = [r.algorithm.value for r in results if not r.checksums_stable]
    if unstable:
        print(f"checksum changed between repetitions: {', '.join(unstable)}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="compdiv", description="Binary64 complex division algorithms and experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def fmt(sp, default="table"):
        sp.add_argument("--format", choices=FORMATS, default=default)

    sp = sub.add_parser("divide", help="divide two complex numbers with one algorithm")
    sp.add_argument("--algo", required=True, choices=[a.value for a in ALGORITHMS])
    sp.add_argument("--x", required=True, help="dividend as re,im")
    sp.add_argument("--y", required=True, help="divisor as re,im")
    sp.add_argument("--oracle", action="store_true", help="also print the correctly rounded quotient")
    fmt(sp)
    sp.set_defaults(func=cmd_divide)

    sp = sub.add_parser("cases", help="score the difficult-case corpus against the golden table")
    sp.add_argument("--algos", default="all")
    sp.add_argument("--corpus", default=None, help="corpus file (default: $COMPDIV_CORPUS or bundled)")
    sp.add_argument("--golden", default=None, help="golden file (default: $COMPDIV_GOLDEN or bundled)")
    fmt(sp)
    sp.set_defaults(func=cmd_cases)

    sp = sub.add_parser("montecarlo", help="estimate failure probabilities on random operands")
    sp.add_argument("--algo", default="all", help="algorithm, comma list or 'all'")
    sp.add_argument("--trials", type=int, default=ex.DEFAULT_TRIALS)
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--fail-bits", type=int, default=53)
    sp.add_argument("--jobs", type=int, default=1)
    fmt(sp)
    sp.set_defaults(func=cmd_montecarlo)

    sp = sub.add_parser("prop1", help="search for counterexamples to the underflow proposition")
    sp.add_argument("--samples", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_prop1)

    sp = sub.add_parser("bench", help="throughput in millions of complex divisions per second")
    sp.add_argument("--algos", default="improved,robust")
    sp.add_argument("--size", type=int, default=ex.BENCH_SIZE)
    sp.add_argument("--reps", type=int, default=ex.BENCH_REPS)
    sp.add_argument("--seed", type=int, default=0)
    fmt(sp)
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"compdiv {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
