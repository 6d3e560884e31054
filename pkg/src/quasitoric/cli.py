"""Command-line front end.

Usage:
    quasitoric analyze S.json
    quasitoric ctfp S.json (--check J INA | --factor J INA | --search | --glue S2.json J1 J2)
    quasitoric chordal S.json
    quasitoric poset S.json
    quasitoric reparam S.json [--decompose]
    quasitoric mle S.json [--counts C] [--exact | --iterate] [--reparam]
    quasitoric lawrence S.json
    quasitoric slices S.json

Every command takes ``--json`` for machine output and ``--out PATH`` to write
to a file.  Exit codes: 0 success, 2 input error, 3 failed precondition,
4 internal verification failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import __version__
from .chordal import build_graph, ml_degree_one_2way
from .cliques import build_poset, indicator_combination
from .ctfp import SplitSpec, check_frequency_condition, check_swap_condition, factorize, find_ctfp, glue
from .errors import (
    ConditionFailed,
    ConstructionError,
    DecompositionInvariantFailure,
    DimensionMismatch,
    DisconnectedGraph,
    InvalidIndexSet,
    InvalidSplit,
    NonTerminatingRecursion,
    NotDoublyChordal,
    NotTreeError,
    TheoremViolation,
)
from .facial import NO_THREE_WAY, slices_necessary_condition
from .lawrence import OPEN_QUESTION, is_star_forest_same_side, lift_is_ctfp, lift_ml_degree_prediction, modified_lawrence_lift
from .mle import IPSConfig, MLEResult, birch_residual, ips_exact_result, ips_run, max_abs
from .model import IndexSet, build_a_matrix, star_matrix, validate_multipartition
from .reparam import build_bar_matrix, linear_decomposition, verify_internal_ctfp

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_TRIPWIRE = 0, 2, 3, 4


class InputError(Exception):
    pass


class PreconditionError(Exception):
    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    results: dict
    lines: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    wall_time: float = 0.0

    def payload(self) -> dict:
        # wall time stays out of the payload so output is reproducible
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "results": self.results,
            "warnings": self.warnings,
        }


def _color(text: str, code: str) -> str:
    if os.environ.get("QUASITORIC_COLOR", "1") == "0" or not sys.stdout.isatty():
        return text
    return f"\033[{code}m{text}\033[0m"


def _verdict(ok: bool) -> str:
    return _color("yes", "32") if ok else _color("no", "31")


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_index_set(path: str) -> tuple[IndexSet, bytes]:
    raw = _read(path)
    return IndexSet.from_json(raw.decode("utf-8", errors="replace")), raw


def _digest(*blobs: bytes) -> str:
    h = hashlib.sha256()
    for b in blobs:
        h.update(b)
    return h.hexdigest()[:16]


def _parse_axes(text: str) -> frozenset:
    try:
        return frozenset(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise InputError(f"axis list must be comma-separated integers, got {text!r}") from None


def _tuples(S: IndexSet) -> list:
    return [list(t) for t in S.tuples]


def _fmt_tuple(t) -> str:
    return "(" + ",".join(str(x) for x in t) + ")"


def _require_2way(S: IndexSet) -> None:
    if S.k != 2:
        raise InputError(f"this command needs a 2-way index set, got k={S.k}")


def _chordality_payload(S: IndexSet) -> dict:
    result = ml_degree_one_2way(S)
    out = {"doubly_chordal": result.ok}
    if result.witness is not None:
        out["witness"] = result.witness.to_dict()
    return out


def _require_ml1(S: IndexSet) -> None:
    _require_2way(S)
    result = ml_degree_one_2way(S)
    if not result:
        raise PreconditionError(
            f"not ML-degree 1: {result.witness.describe()}", {"witness": result.witness.to_dict()}
        )


def cmd_analyze(args) -> RunReport:
    S, raw = _load_index_set(args.file)
    A = build_a_matrix(S)
    report = validate_multipartition(A)
    res = {
        "k": S.k,
        "dims": list(S.dims),
        "size": len(S),
        "matrix_shape": list(A.shape),
        "multipartition": report.passed,
    }
    lines = [f"k = {S.k}, dims = {list(S.dims)}, |S| = {len(S)}", f"A-matrix: {A.shape[0]} x {A.shape[1]}"]
    lines.append(f"multipartition: {_verdict(report.passed)}")
    if S.k == 2:
        res.update(_chordality_payload(S))
        lines.append(str(star_matrix(S)))
        lines.append(f"doubly chordal: {_verdict(res['doubly_chordal'])}")
        if "witness" in res:
            lines.append(f"witness: {ml_degree_one_2way(S).witness.describe()}")
    return RunReport("analyze", _digest(raw), res, lines)


def cmd_chordal(args) -> RunReport:
    S, raw = _load_index_set(args.file)
    _require_2way(S)
    res = _chordality_payload(S)
    lines = [f"doubly chordal: {_verdict(res['doubly_chordal'])}"]
    if "witness" in res:
        lines.append(f"witness: {ml_degree_one_2way(S).witness.describe()}")
    lines.append(f"rational MLE (ML-degree 1): {_verdict(res['doubly_chordal'])}")
    return RunReport("chordal", _digest(raw), res, lines)


def cmd_ctfp(args) -> RunReport:
    S, raw = _load_index_set(args.file)
    blobs = [raw]
    lines = []
    if args.glue:
        path, j1, j2 = args.glue
        S2, raw2 = _load_index_set(path)
        blobs.append(raw2)
        glued = glue(S, int(j1), S2, int(j2)).S
        res = {"mode": "glue", "result": glued.to_dict()}
        lines = [f"glued index set ({len(glued)} tuples, dims {list(glued.dims)}):"]
        lines += [_fmt_tuple(t) for t in glued]
        return RunReport("ctfp", _digest(*blobs), res, lines)
    if args.search:
        if S.k < 3:
            raise InputError("cTFP search needs k >= 3")
        found = find_ctfp(S)
        res = {"mode": "search", "splits": [spec.to_dict() for spec, _ in found]}
        if found:
            lines = [f"cTFP along {spec}" for spec, _ in found]
        else:
            lines = ["not a cTFP"]
        return RunReport("ctfp", _digest(*blobs), res, lines)
    spec_args = args.check or args.factor
    spec = SplitSpec(int(spec_args[0]), _parse_axes(spec_args[1]))
    spec.validate(S.k)
    if args.check:
        swap = check_swap_condition(S, spec)
        freq = check_frequency_condition(S, spec)
        res = {"mode": "check", "split": spec.to_dict(), "swap": swap.ok, "frequency": freq}
        lines = [f"split {spec}", f"swap condition: {_verdict(swap.ok)}", f"frequency condition: {_verdict(freq)}"]
        if swap.witness:
            s1, s2, missing = swap.witness
            res["witness"] = [list(s1), list(s2), list(missing)]
            lines.append(f"witness: {_fmt_tuple(s1)} and {_fmt_tuple(s2)} in S, {_fmt_tuple(missing)} missing")
        return RunReport("ctfp", _digest(*blobs), res, lines)
    try:
        fact = factorize(S, spec)
    except ConditionFailed as exc:
        raise PreconditionError(str(exc), {"witness": [list(x) for x in exc.witness]}) from None
    res = {"mode": "factor", "split": spec.to_dict(), "S1": fact.S1.to_dict(), "S2": fact.S2.to_dict()}
    lines = [f"split {spec}", "S1: " + " ".join(_fmt_tuple(t) for t in fact.S1)]
    lines.append("S2: " + " ".join(_fmt_tuple(t) for t in fact.S2))
    return RunReport("ctfp", _digest(*blobs), res, lines)


def cmd_poset(args) -> RunReport:
    S, raw = _load_index_set(args.file)
    _require_ml1(S)
    P = build_poset(S)
    res = P.to_dict()
    res["h"] = P.h
    res["indicator_combinations"] = {
        x.label: indicator_combination(S, x.clique).terms() for x in P.intersections
    }
    lines = [f"maximal cliques (h = {P.h}):"]
    lines += [f"  [{d}] {c.label}  level {lv}" for d, (c, lv) in enumerate(zip(P.ground, P.levels))]
    lines.append("covers: " + " ".join(f"{lo}<{hi}" for lo, hi in P.covers))
    lines.append("maximal intersections:")
    for x in P.intersections:
        lines.append(f"  {x.label} = {indicator_combination(S, x.clique)}")
    return RunReport("poset", _digest(raw), res, lines)


def _label_list(rep, labels) -> list[str]:
    return [rep.name(t) for t in labels]


def cmd_reparam(args) -> RunReport:
    S, raw = _load_index_set(args.file)
    _require_ml1(S)
    rep = build_bar_matrix(S)
    internal = verify_internal_ctfp(rep)
    res = rep.to_dict()
    res["h"] = rep.h
    res["levels"] = rep.levels.to_dict()
    res["checks"] = dict(rep.checks)
    res["internal_ctfp"] = {str(r): c.ok for r, c in internal.items()}
    lines = [str(rep.matrix), f"h = {rep.h}"]
    if rep.h == 1:
        lines.append("single level: the reparametrized matrix equals the A-matrix")
    for r, c in internal.items():
        lines.append(f"cTFP at internal position {r}: {_verdict(c.ok)}")
    if not all(c.ok for c in internal.values()):
        raise TheoremViolation("reparametrized matrix failed an internal cTFP check")
    if args.decompose:
        steps = linear_decomposition(rep)
        res["decomposition"] = [
            {
                "r": st.r,
                "T": [_label_list(rep, t) for t in st.T],
                "Tprime": {rep.name(k): v for k, v in sorted(st.Tprime.items())},
                "parts": [
                    {
                        "index": [key[0], key[1]],
                        "G": [_label_list(rep, t) for t in st.G[key]],
                        "H": {rep.name(k): v for k, v in sorted(st.H[key].items())},
                    }
                    for key in sorted(st.G)
                ],
                "checks": st.checks,
            }
            for st in steps
        ]
        for st in steps:
            lines.append(f"step {st.r}: |T| = {len(st.T)}, |T'| = {sum(st.Tprime.values())}, checks pass")
    return RunReport("reparam", _digest(raw), res, lines)


def _load_counts(text: str | None, S: IndexSet, seed: int | None) -> list[Fraction]:
    if text is None:
        return [Fraction(1)] * len(S)
    if text == "random":
        rng = random.Random(seed)
        return [Fraction(rng.randint(1, 20)) for _ in S]
    source = text
    if not text.lstrip().startswith("["):
        source = _read(text).decode()
    try:
        values = json.loads(source)
    except json.JSONDecodeError as exc:
        raise InputError(f"counts are not a JSON array: {exc}") from None
    if not isinstance(values, list) or len(values) != len(S):
        raise InputError(f"expected {len(S)} counts in lexicographic column order")
    try:
        counts = [Fraction(str(v)) for v in values]
    except (ValueError, TypeError):
        raise InputError("counts must be numbers") from None
    if any(c < 0 for c in counts) or sum(counts) <= 0:
        raise InputError("counts must be nonnegative with a positive total")
    return counts


def cmd_mle(args) -> RunReport:
    S, raw = _load_index_set(args.file)
    counts = _load_counts(args.counts, S, args.seed)
    A = build_a_matrix(S)
    M = A
    if args.reparam:
        _require_ml1(S)
        M = build_bar_matrix(S).matrix
    warnings = []
    if args.iterate:
        result = ips_run(M, counts, IPSConfig(max_cycles=args.max_cycles, tolerance=args.tol))
        if not result.converged:
            warnings.append(f"no convergence after {result.cycles} cycles")
        check = max_abs(birch_residual(A, [float(c) for c in counts], result.distribution))
        check_text = f"{check:.12g}"
    else:
        result = ips_exact_result(M, counts)
        check_text = str(max_abs(birch_residual(A, counts, list(result.distribution))))
        if check_text != "0":
            warnings.append("one exact cycle does not reach the MLE for this parametrization")
    if any(c == 0 for c in counts):
        warnings.append("zero counts: the MLE may not exist")
    res = result.to_dict()
    res["parametrization"] = "reparametrized" if args.reparam else "A-matrix"
    res["birch_residual_vs_A"] = check_text
    lines = [
        f"parametrization: {res['parametrization']}",
        f"path: {'exact (one cycle)' if result.exact else 'float'}",
        f"cycles: {result.cycles}",
        f"max |Birch residual| against A_S: {check_text}",
        "distribution:",
    ]
    lines += [f"  {_fmt_tuple(t)}  {p}" for t, p in zip(S.tuples, res["distribution"])]
    return RunReport("mle", _digest(raw, str(counts).encode()), res, lines, warnings)


def cmd_lawrence(args) -> RunReport:
    S, raw = _load_index_set(args.file)
    _require_2way(S)
    lift = modified_lawrence_lift(S)
    is_ctfp = lift_is_ctfp(S)
    star = is_star_forest_same_side(build_graph(S))
    res = {"Sprime": lift.Sprime.to_dict(), "matrix_shape": list(lift.matrix.shape), "ctfp": is_ctfp}
    res["star_forest_side"] = star.side
    lines = ["S' = " + " ".join(_fmt_tuple(t) for t in lift.Sprime)]
    lines.append(f"lift is a cTFP: {_verdict(is_ctfp)}" + ("" if is_ctfp else " (not a cTFP)"))
    try:
        degree = lift_ml_degree_prediction(S)
        res["predicted_ml_degree"] = degree
        lines.append(f"predicted ML-degree of the lift: {degree}")
    except DisconnectedGraph as exc:
        res["predicted_ml_degree"] = None
        lines.append(f"predicted ML-degree of the lift: refused ({exc})")
    warnings = []
    if build_graph(S).is_forest() and not is_ctfp:
        warnings.append(OPEN_QUESTION)
        lines.append(OPEN_QUESTION)
    return RunReport("lawrence", _digest(raw), res, lines, warnings)


def cmd_slices(args) -> RunReport:
    S, raw = _load_index_set(args.file)
    if S.k < 3:
        raise InputError("slices need k >= 3")
    report = slices_necessary_condition(S)
    res = report.to_dict()
    known = S == NO_THREE_WAY
    res["known_counterexample"] = known
    lines = []
    for v in report.verdicts:
        s = v.slice
        state = "empty" if s.empty else ("ok" if v.doubly_chordal else "FAIL")
        lines.append(f"axes ({s.a},{s.b}) fixed {list(s.fixed)}: {state}")
    lines.append(report.notice)
    if known:
        lines.append("this is the no-3-way interaction model: ML-degree 3 although every slice passes")
    return RunReport("slices", _digest(raw), res, lines)


COMMANDS = {
    "analyze": cmd_analyze,
    "ctfp": cmd_ctfp,
    "chordal": cmd_chordal,
    "poset": cmd_poset,
    "reparam": cmd_reparam,
    "mle": cmd_mle,
    "lawrence": cmd_lawrence,
    "slices": cmd_slices,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--out", metavar="PATH", help="write output to PATH instead of stdout")
    common.add_argument("--seed", type=int, default=None, help="seed for random counts")

    parser = argparse.ArgumentParser(prog="quasitoric", description="Quasi-independence model toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("analyze", "chordal", "poset", "lawrence", "slices"):
        p = sub.add_parser(name, parents=[common])
        p.add_argument("file")

    p = sub.add_parser("ctfp", parents=[common])
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--check", nargs=2, metavar=("J", "INA"))
    mode.add_argument("--factor", nargs=2, metavar=("J", "INA"))
    mode.add_argument("--search", action="store_true")
    mode.add_argument("--glue", nargs=3, metavar=("FILE2", "J1", "J2"))

    p = sub.add_parser("reparam", parents=[common])
    p.add_argument("file")
    p.add_argument("--decompose", action="store_true")

    p = sub.add_parser("mle", parents=[common])
    p.add_argument("file")
    p.add_argument("--counts", help="JSON array, file path, or 'random'")
    path = p.add_mutually_exclusive_group()
    path.add_argument("--exact", action="store_true", help="one exact IPS cycle (default)")
    path.add_argument("--iterate", action="store_true", help="float IPS to tolerance")
    p.add_argument("--reparam", action="store_true", help="use the reparametrized matrix")
    p.add_argument("--max-cycles", type=int, default=10000)
    p.add_argument("--tol", type=float, default=1e-10)
    return parser


def _render(report: RunReport, as_json: bool) -> str:
    if as_json:
        return json.dumps(report.payload(), indent=2, sort_keys=True) + "\n"
    lines = list(report.lines) + [f"warning: {w}" for w in report.warnings if w not in report.lines]
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        report = COMMANDS[args.command](args)
    except (InputError, InvalidIndexSet, InvalidSplit, DimensionMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (PreconditionError, NotDoublyChordal, NotTreeError, NonTerminatingRecursion) as exc:
        print(f"error: {exc}", file=sys.stderr)
        if args.json and isinstance(exc, PreconditionError):
            print(json.dumps({"command": args.command, "error": str(exc), **exc.payload}, sort_keys=True))
        return EXIT_PRECONDITION
    except (TheoremViolation, DecompositionInvariantFailure, ConstructionError, AssertionError) as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return EXIT_TRIPWIRE
    report.wall_time = time.perf_counter() - start
    text = _render(report, args.json)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
