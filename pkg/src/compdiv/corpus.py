"""The ten difficult divisions, their text format and the golden bits table.

Corpus file: one case per line, ``id; x_re; x_im; y_re; y_im; z_re; z_im; note``
with every number a hex-float literal.  Golden file: ``case_id; algo; bits``.
Blank lines and lines starting with ``#`` are ignored in both.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .algorithms import ALGORITHMS, AlgorithmId, divide
from .fpkit import HexFloatError, complex_accuracy, format_hexfloat, parse_hexfloat, same_bits
from .oracle import oracle_divide

__all__ = [
    "DivisionCase",
    "CorpusError",
    "GoldenCell",
    "builtin_corpus_path",
    "builtin_golden_path",
    "default_corpus_path",
    "load_corpus",
    "load_golden",
    "dump_corpus",
    "dump_golden",
    "run_golden",
]

CORPUS_ENV = "COMPDIV_CORPUS"
GOLDEN_ENV = "COMPDIV_GOLDEN"


class CorpusError(ValueError):
    pass


@dataclass(frozen=True)
class DivisionCase:
    id: int
    x: complex
    y: complex
    expected: complex
    note: str = ""


@dataclass(frozen=True)
class GoldenCell:
    case_id: int
    algorithm: AlgorithmId
    bits: int
    expected_bits: int

    @property
    def passed(self):
        return self.bits == self.expected_bits


def builtin_corpus_path():
    return Path(resources.files("compdiv") / "data" / "corpus.txt")


def builtin_golden_path():
    return Path(resources.files("compdiv") / "data" / "golden.txt")


def default_corpus_path():
    return Path(os.environ.get(CORPUS_ENV) or builtin_corpus_path())


def default_golden_path():
    return Path(os.environ.get(GOLDEN_ENV) or builtin_golden_path())


def _rows(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            yield lineno, [field.strip() for field in text.split(";")]


def load_corpus(path=None, verify=True):
    """Read a corpus file; with ``verify`` every expected value is re-derived
    with the oracle and must match bit for bit."""
    path = default_corpus_path() if path is None else path
    cases = []
    for lineno, fields in _rows(path):
        if len(fields) < 7:
            raise CorpusError(f"{path}:{lineno}: expected at least 7 ';'-separated fields, got {len(fields)}")
        try:
            case_id = int(fields[0])
            v = [parse_hexfloat(f) for f in fields[1:7]]
        except (ValueError, HexFloatError) as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from None
        note = ";".join(fields[7:]).strip()
        case = DivisionCase(case_id, complex(v[0], v[1]), complex(v[2], v[3]), complex(v[4], v[5]), note)
        if verify:
            z = oracle_divide(case.x, case.y)
            if not (same_bits(z.real, case.expected.real) and same_bits(z.imag, case.expected.imag)):
                raise CorpusError(
                    f"case {case_id}: stored expected {_fmt(case.expected)} "
                    f"differs from oracle {_fmt(z)}"
                )
        cases.append(case)
    return cases


def _fmt(z):
    return f"{format_hexfloat(z.real)},{format_hexfloat(z.imag)}"


def dump_corpus(cases, path):
    lines = ["# id; x_re; x_im; y_re; y_im; z_re; z_im; note"]
    for case in cases:
        nums = [case.x.real, case.x.imag, case.y.real, case.y.imag, case.expected.real, case.expected.imag]
        lines.append("; ".join([str(case.id)] + [format_hexfloat(v) for v in nums] + [case.note]))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_golden(path=None):
    """Golden table as ``{(case_id, AlgorithmId): bits}``."""
    path = default_golden_path() if path is None else path
    table = {}
    for lineno, fields in _rows(path):
        if len(fields) != 3:
            raise CorpusError(f"{path}:{lineno}: expected 'case_id; algo; bits'")
        try:
            key = (int(fields[0]), AlgorithmId.parse(fields[1]))
            bits = int(fields[2])
        except ValueError as exc:
            raise CorpusError(f"{path}:{lineno}: {exc}") from None
        if not 0 <= bits <= 53:
            raise CorpusError(f"{path}:{lineno}: bits {bits} outside [0, 53]")
        table[key] = bits
    return table


def dump_golden(table, path):
    lines = ["# case_id; algo; bits"]
    for (case_id, alg), bits in sorted(table.items(), key=lambda kv: (kv[0][0], ALGORITHMS.index(kv[0][1]))):
        lines.append(f"{case_id}; {alg.value}; {bits}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def run_golden(algorithms=None, cases=None, golden=None):
    """Score every (case, algorithm) pair; returns a list of :class:`GoldenCell`.

    A cell absent from the golden table is an error, not a silent pass.
    """
    algorithms = ALGORITHMS if algorithms is None else [AlgorithmId.parse(a) for a in algorithms]
    cases = load_corpus() if cases is None else cases
    golden = load_golden() if golden is None else golden
    cells = []
    for case in cases:
        for alg in algorithms:
            if (case.id, alg) not in golden:
                raise CorpusError(f"golden table has no entry for case {case.id}, {alg.value}")
            bits = complex_accuracy(divide(alg, case.x, case.y), case.expected).min_bits
            cells.append(GoldenCell(case.id, alg, bits, golden[(case.id, alg)]))
    return cells
