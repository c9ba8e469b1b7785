"""Command-line interface.

Exit codes: 0 success, 1 a check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from stripsym import model as detmodel
from stripsym.decoders import NoSolutionError, make_decoder
from stripsym.families import ALL_FAMILIES, FamilyId, build, chain_stack, table1
from stripsym.model import DetModelParseError, check_strip_symmetric
from stripsym.pauli import (
    DomainAssignment,
    NotBiasShiftingError,
    ParentNotStripSymmetricError,
    PauliString,
    SingleQubitClifford,
    deform_and_check,
)
from stripsym.sim import BENCH_COLUMNS, SIM_COLUMNS, SimConfig, bench, bench_row, fmt, run_sim, sim_rows

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE = 0, 1, 2

STATS_COLUMNS = ("family", "L", "m", "min_dets", "max_dets", "off_block", "non_local", "n_det", "n_fault")
CHECK_COLUMNS = (
    "source",
    "augmented",
    "strip_local",
    "block_diagonal",
    "pair_creating",
    "condition1",
    "condition2",
    "strip_symmetric",
    "one_form",
)
DECODE_COLUMNS = ("decoder", "weight", "correction", "per_strip_weights", "logical_parities")
DEFORM_COLUMNS = ("n_det", "n_fault", "parent_strip_symmetric", "deformed_strip_symmetric", "incidence_equal")

_INT = {"type": "integer"}
_NUM = {"type": "number"}
_BOOL = {"type": "boolean"}
_STR = {"type": "string"}


def _rows_schema(command: str, props: dict) -> dict:
    return {
        "type": "object",
        "required": ["command", "rows"],
        "properties": {
            "command": {"const": command},
            "rows": {
                "type": "array",
                "items": {"type": "object", "required": list(props), "properties": props, "additionalProperties": False},
            },
        },
        "additionalProperties": False,
    }


SCHEMAS = {
    "stats": _rows_schema("stats", {"family": _STR, **{k: _INT for k in STATS_COLUMNS[1:]}}),
    "check": _rows_schema(
        "check",
        {
            "source": _STR,
            **{k: _BOOL for k in CHECK_COLUMNS[1:-1]},
            "one_form": {"type": "array", "items": _BOOL},
        },
    ),
    "decode": _rows_schema(
        "decode",
        {
            "decoder": _STR,
            "weight": _INT,
            "correction": {"type": "string", "pattern": "^[01]*$"},
            "per_strip_weights": {"type": "array", "items": _INT},
            "logical_parities": {"type": "array", "items": _INT},
        },
    ),
    "simulate": _rows_schema(
        "simulate",
        {
            "family": _STR,
            "L": _INT,
            "p": _NUM,
            "shots": _INT,
            "failures": _INT,
            "estimate": _NUM,
            "stderr": _NUM,
            "analytic": _NUM,
        },
    ),
    "bench": _rows_schema(
        "bench",
        {
            "family": _STR,
            "L": {"type": ["integer", "null"]},
            "alpha": _NUM,
            "N": _INT,
            "m": _INT,
            "mono_work": _NUM,
            "strip_work": _NUM,
            "ratio": _NUM,
            "predicted_balanced": _NUM,
            "n_per_strip": {"type": "array", "items": _INT},
            "wall_times": {"type": "object", "additionalProperties": _NUM},
        },
    ),
    "deform": _rows_schema(
        "deform",
        {
            **{k: _INT for k in DEFORM_COLUMNS[:2]},
            **{k: _BOOL for k in DEFORM_COLUMNS[2:]},
            "deformed_detectors": {"type": "array", "items": {"type": "string", "pattern": "^[IXYZ]*$"}},
        },
    ),
    "export": {
        "type": "object",
        "required": ["command", "family", "L", "n_det", "n_strips", "strip_of_detector", "fault_supports"],
        "properties": {
            "command": {"const": "export"},
            "family": _STR,
            "L": _INT,
            "n_det": _INT,
            "n_strips": _INT,
            "strip_of_detector": {"type": "array", "items": _INT},
            "fault_supports": {"type": "array", "items": {"type": "array", "items": _INT}},
        },
        "additionalProperties": False,
    },
}


class UsageError(Exception):
    pass


def _family(text: str) -> FamilyId:
    try:
        return FamilyId.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _families(text: str) -> list[FamilyId]:
    if text.strip().lower() == "all":
        return list(ALL_FAMILIES)
    return [_family(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _emit(args, command: str, columns: Sequence[str], rows: list[dict], csv_rows: list[list[str]] | None = None) -> None:
    if args.format == "json":
        text = json.dumps({"command": command, "rows": rows}, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(columns)
        if csv_rows is None:
            csv_rows = [[_csv_cell(r[c]) for c in columns] for r in rows]
        writer.writerows(csv_rows)
        text = buf.getvalue()
    _write(args, text)


def _write(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_cell(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, float):
        return fmt(v)
    if isinstance(v, (list, tuple)):
        return ";".join(_csv_cell(x) for x in v)
    return str(v)


def _load_source(args):
    """(model, label, logical strips) from --file or --family/--L."""
    if getattr(args, "file", None):
        try:
            return detmodel.read(args.file), str(args.file), ()
        except FileNotFoundError:
            raise UsageError(f"no such file: {args.file}") from None
    if args.family is None or args.L is None:
        raise UsageError("give --file, or both --family and --L")
    fm = build(args.family, args.L)
    return fm.model, f"{fm.family}:{fm.L}", fm.logical_strips


# --- commands ----------------------------------------------------------------


def cmd_stats(args) -> int:
    rows = []
    for fam, L, st in table1(args.families, args.L):
        rows.append({"family": str(fam), "L": L, **dict(zip(STATS_COLUMNS[2:], st.as_tuple()))})
    _emit(args, "stats", STATS_COLUMNS, rows)
    return EXIT_OK


def cmd_check(args) -> int:
    model, label, _ = _load_source(args)
    rep = check_strip_symmetric(model, args.virtual_boundaries)
    row = {
        "source": label,
        "augmented": rep.augmented,
        "strip_local": rep.strip_local,
        "block_diagonal": rep.block_diagonal,
        "pair_creating": rep.pair_creating,
        "condition1": rep.condition1,
        "condition2": rep.condition2,
        "strip_symmetric": rep.strip_symmetric,
        "one_form": list(rep.one_form),
    }
    _emit(args, "check", CHECK_COLUMNS, [row])
    return EXIT_OK if rep.strip_symmetric else EXIT_CHECK_FAILED


def _parse_syndrome(args, n_det: int) -> np.ndarray:
    if args.syndrome is not None and args.defects is not None:
        raise UsageError("give only one of --syndrome and --defects")
    s = np.zeros(n_det, dtype=np.uint8)
    if args.syndrome is not None:
        bits = args.syndrome.strip()
        if len(bits) != n_det or set(bits) - {"0", "1"}:
            raise UsageError(f"--syndrome needs {n_det} characters of 0/1")
        s[:] = [int(b) for b in bits]
    elif args.defects is not None:
        for d in args.defects:
            if not 0 <= d < n_det:
                raise UsageError(f"defect {d} out of range({n_det})")
            s[d] ^= 1
    return s


def cmd_decode(args) -> int:
    model, _, logical = _load_source(args)
    s = _parse_syndrome(args, model.n_det)
    modes = ["monolithic", "stripwise"] if args.decoder == "both" else [args.decoder]
    rows = []
    for mode in modes:
        res = make_decoder(model, mode, logical).decode(s)
        rows.append(
            {
                "decoder": mode,
                "weight": res.weight,
                "correction": str(res.correction),
                "per_strip_weights": list(res.per_strip_weights),
                "logical_parities": list(res.logical_parities),
            }
        )
    _emit(args, "decode", DECODE_COLUMNS, rows)
    if len({r["correction"] for r in rows}) > 1:
        print("decoders disagree", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        cfg = SimConfig(args.family, args.L, tuple(args.p), args.shots, args.seed, args.decoder, args.workers)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    points = run_sim(cfg)
    rows = [
        {
            "family": str(cfg.family),
            "L": cfg.L,
            "p": pt.p,
            "shots": pt.shots,
            "failures": pt.failures,
            "estimate": pt.estimate,
            "stderr": pt.stderr,
            "analytic": pt.analytic,
        }
        for pt in points
    ]
    _emit(args, "simulate", SIM_COLUMNS, rows, sim_rows(str(cfg.family), cfg.L, points))
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.balanced is not None:
        if len(args.balanced) != 2 or min(args.balanced) < 1:
            raise UsageError("--balanced takes M,N: M strips of N detectors")
        m, n = args.balanced
        model, label, L = chain_stack([n + 1] * m), "balanced", None
    else:
        model, label, _ = _load_source(args)
        L = args.L if args.file is None else None
        label = str(args.family) if args.file is None else "file"
    try:
        rep = bench(model, args.alpha, args.repeats)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    row = {
        "family": label,
        "L": L,
        "alpha": rep.alpha,
        "N": rep.N,
        "m": rep.m,
        "mono_work": rep.mono_work,
        "strip_work": rep.strip_work,
        "ratio": rep.measured_ratio,
        "predicted_balanced": rep.predicted_balanced_speedup,
        "n_per_strip": list(rep.n_per_strip),
        "wall_times": rep.wall_times,
    }
    _emit(args, "bench", BENCH_COLUMNS, [row], [bench_row(label, "" if L is None else L, rep)])
    return EXIT_OK


def _read_paulis(path: str) -> tuple[list[PauliString], list[int | None]]:
    try:
        text = Path(path).read_text()
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}") from None
    ops, strips = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            ops.append(PauliString.from_str(line[0]))
            strips.append(int(line[1]) if len(line) > 1 else None)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {exc}") from None
    return ops, strips


def cmd_deform(args) -> int:
    dets, given = _read_paulis(args.detectors)
    n = len(args.qubit_strips)
    if any(d.n_qubits != n for d in dets):
        raise UsageError(f"every detector must act on {n} qubits (one --qubit-strips entry each)")
    n_strips = max(args.qubit_strips) + 1
    if len(args.cliffords) != n_strips:
        raise UsageError(f"--cliffords needs {n_strips} entries, one per strip")
    try:
        cliffs = {j: SingleQubitClifford.parse(c) for j, c in enumerate(args.cliffords)}
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    strip_of_detector = []
    for i, (d, s) in enumerate(zip(dets, given)):
        if s is None:
            touched = {args.qubit_strips[q] for q in d.support()}
            if len(touched) != 1:
                raise UsageError(f"detector {i} ({d}) does not sit inside a single strip; give its strip explicitly")
            s = touched.pop()
        strip_of_detector.append(s)
    axes = None
    if args.parent_axes is not None:
        if len(args.parent_axes) != n_strips:
            raise UsageError(f"--parent-axes needs {n_strips} entries")
        axes = dict(enumerate(args.parent_axes))
    assignment = DomainAssignment(tuple(args.qubit_strips), cliffs)
    try:
        rep = deform_and_check(dets, strip_of_detector, assignment, axes, not args.no_virtual_boundaries)
    except (NotBiasShiftingError, ParentNotStripSymmetricError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    row = {
        "n_det": rep.deformed.n_det,
        "n_fault": rep.deformed.n_fault,
        "parent_strip_symmetric": rep.parent_check.strip_symmetric,
        "deformed_strip_symmetric": rep.strip_symmetric,
        "incidence_equal": rep.incidence_equal,
        "deformed_detectors": [str(d) for d in rep.deformed_detectors],
    }
    _emit(args, "deform", DEFORM_COLUMNS, [row])
    return EXIT_OK if rep.strip_symmetric and rep.incidence_equal else EXIT_CHECK_FAILED


def cmd_export(args) -> int:
    fm = build(args.family, args.L)
    m = fm.model
    if args.format == "json":
        doc = {
            "command": "export",
            "family": str(fm.family),
            "L": fm.L,
            "n_det": m.n_det,
            "n_strips": m.n_strips,
            "strip_of_detector": list(m.strip_of_detector),
            "fault_supports": [list(s) for s in m.fault_supports],
        }
        _write(args, json.dumps(doc, indent=2) + "\n")
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(("fault", "detector", "strip"))
        for f, sup in enumerate(m.fault_supports):
            for d in sup:
                w.writerow((f, d, m.strip_of_detector[d]))
        _write(args, buf.getvalue())
    else:
        _write(args, detmodel.dumps(m, fm.comments()))
    return EXIT_OK


# --- parser ------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, formats=("csv", "json"), default="csv") -> None:
    p.add_argument("--format", choices=formats, default=default)
    p.add_argument("--out", help="write output here instead of standard output")


def _source(p: argparse.ArgumentParser) -> None:
    p.add_argument("--file", help="DETMODEL v1 file")
    p.add_argument("--family", type=_family)
    p.add_argument("--L", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stripsym", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", help="strip statistics for code families")
    p.add_argument("--families", type=_families, default=list(ALL_FAMILIES), help="comma list or 'all'")
    p.add_argument("--L", type=_int_list, default=[3, 4, 5], help="comma list of sizes")
    _common(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("check", help="strip-symmetry and per-strip parity checks")
    _source(p)
    p.add_argument("--virtual-boundaries", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("decode", help="exact ML decoding of one syndrome")
    _source(p)
    p.add_argument("--syndrome", help="0/1 string, one character per detector")
    p.add_argument("--defects", type=_int_list, help="comma list of flipped detectors")
    p.add_argument("--decoder", choices=("monolithic", "stripwise", "both"), default="both")
    _common(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("simulate", help="Monte-Carlo logical error rate")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--L", type=int, required=True)
    p.add_argument("--p", type=_float_list, required=True, help="comma list of physical error rates")
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--decoder", choices=("monolithic", "stripwise"), default="stripwise")
    p.add_argument("--workers", type=int, default=1)
    _common(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bench", help="strip-wise versus monolithic work ratio")
    _source(p)
    p.add_argument("--balanced", type=_int_list, help="M,N: M strips of N detectors each")
    p.add_argument("--alpha", type=float, default=2.0)
    p.add_argument("--repeats", type=int, default=0, help="timed runs of the synthetic workload")
    _common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("deform", help="domain-wise Clifford deformation check")
    p.add_argument("--detectors", required=True, help="file with one Pauli string per line, optional strip index")
    p.add_argument("--qubit-strips", type=_int_list, required=True, help="strip index of each qubit")
    p.add_argument("--cliffords", type=lambda s: s.split(","), required=True, help="I/H/HS per strip")
    p.add_argument("--parent-axes", type=lambda s: s.split(","), help="dominant parent error letter per strip")
    p.add_argument("--no-virtual-boundaries", action="store_true")
    _common(p)
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("export", help="write a family model")
    p.add_argument("--family", type=_family, required=True)
    p.add_argument("--L", type=int, required=True)
    _common(p, ("detmodel", "csv", "json"), "detmodel")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, DetModelParseError, NoSolutionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # bad sizes and similar input problems surface as ValueError from the library
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
