"""Command-line surface: document format, verdict pipeline, reports, exit codes."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .affine import decide_closed
from .automaton import (Automaton, Configuration, expand_to_simple, normalize_neighborhood,
                        split_word_key, validate)
from .border import border_vectors
from .evolution import (DEFAULT_ORACLE_LIMIT, OracleScaleError, Superposition, step,
                        truncated_column_gram, truncated_row_norm)
from .numerics import DEFAULT_TOLERANCE, Tolerance
from .transfer import apply_word, build_transfer_operators, row_norm_squared

UNITARY = "UNITARY"
NOT_UNITARY = "NOT_UNITARY"
NOT_WELL_FORMED = "NOT_WELL_FORMED"
INVALID_INPUT = "INVALID_INPUT"

EXIT_CODES = {UNITARY: 0, NOT_UNITARY: 1, NOT_WELL_FORMED: 2, INVALID_INPUT: 3}

WELL_FORMEDNESS_CAVEAT = "assumed (oracle evidence only)"


class DocumentError(ValueError):
    """The input file cannot be turned into an automaton."""


# -- document format ----------------------------------------------------------


def load_document(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}: not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise DocumentError(f"{path}: top level must be a JSON object")
    return doc


def document_to_automaton(doc: dict) -> Automaton:
    for key in ("states", "quiescent", "neighborhood", "rules"):
        if key not in doc:
            raise DocumentError(f"missing required key {key!r}")
    states = doc["states"]
    if (not isinstance(states, list) or not states
            or not all(isinstance(s, str) and s and not any(ch.isspace() for ch in s)
                       for s in states)):
        raise DocumentError("'states' must be a non-empty list of non-empty "
                            "whitespace-free strings")
    neighborhood = doc["neighborhood"]
    if (not isinstance(neighborhood, list) or not neighborhood
            or not all(isinstance(o, int) for o in neighborhood)):
        raise DocumentError("'neighborhood' must be a non-empty list of integers")
    rules = doc["rules"]
    if not isinstance(rules, dict):
        raise DocumentError("'rules' must be an object mapping words to amplitude maps")
    for word, amps in rules.items():
        if not isinstance(amps, dict):
            raise DocumentError(f"rule {word!r}: value must be an object")
        for y, pair in amps.items():
            if (not isinstance(pair, list) or len(pair) != 2
                    or not all(isinstance(x, (int, float)) for x in pair)):
                raise DocumentError(
                    f"rule {word!r}, state {y!r}: amplitude must be a [re, im] pair")
    try:
        return Automaton.build(states, doc["quiescent"], neighborhood, rules)
    except ValueError as e:
        raise DocumentError(str(e)) from None


def automaton_to_document(a: Automaton) -> dict:
    multi = any(len(s) > 1 for s in a.alphabet)
    sep = " " if multi else ""
    rules: dict[str, dict[str, list[float]]] = {}
    for code in range(a.alphabet_size**a.r):
        word = sep.join(a.symbol(s) for s in a.decode_word(code, a.r))
        amps = {}
        for y in range(a.alphabet_size):
            z = a.table[code, y]
            if z != 0.0:
                amps[a.symbol(y)] = [float(z.real), float(z.imag)]
        if amps:
            rules[word] = amps
    return {
        "states": list(a.alphabet),
        "quiescent": a.quiescent,
        "neighborhood": list(a.neighborhood.offsets),
        "rules": rules,
    }


def word_label(a: Automaton, letters) -> str:
    sep = " " if any(len(s) > 1 for s in a.alphabet) else ""
    return sep.join(a.symbol(x) for x in letters)


def parse_word_arg(a: Automaton, text: str) -> tuple[int, ...]:
    """A word of arbitrary length given as symbols (spaces optional when all
    symbols are single characters); empty string means the empty word."""
    text = text.strip()
    if not text:
        return ()
    if any(ch.isspace() for ch in text):
        parts = text.split()
    elif all(len(s) == 1 for s in a.alphabet):
        parts = list(text)
    else:
        parts = [text]
    try:
        return tuple(a.index(s) for s in parts)
    except ValueError as e:
        raise DocumentError(str(e)) from None


def parse_config_arg(a: Automaton, text: str) -> Configuration:
    """Cell assignments as comma-separated index:state pairs, e.g. '-1:b,0:b'."""
    text = text.strip()
    if not text:
        return Configuration.empty()
    items = {}
    for chunk in text.split(","):
        chunk = chunk.strip()
        if ":" not in chunk:
            raise DocumentError(f"bad cell assignment {chunk!r}; expected index:state")
        pos, _, sym = chunk.partition(":")
        try:
            i = int(pos)
        except ValueError:
            raise DocumentError(f"bad cell index {pos!r}") from None
        try:
            items[i] = a.index(sym.strip())
        except ValueError as e:
            raise DocumentError(str(e)) from None
    return Configuration.from_items(items)


def config_label(a: Automaton, c: Configuration) -> str:
    if not c.cells:
        return "{}"
    return "{" + ",".join(f"{i}:{a.symbol(s)}" for i, s in c.cells) + "}"


# -- verdict pipeline ---------------------------------------------------------


@dataclass
class CheckReport:
    verdict: str
    states: int = 0
    neighborhood: tuple[int, ...] = ()
    r: int = 0
    size_n: int = 0
    expansion_factor: float = 1.0
    expanded_neighborhood: tuple[int, ...] | None = None
    well_formedness: str = WELL_FORMEDNESS_CAVEAT
    borders_l: dict[str, float | str] | None = None
    borders_r: dict[str, float | str] | None = None
    inner_lr: float | None = None
    witness_word: str | None = None
    closure_dimension: int | None = None
    closure_iterations: int | None = None
    gram: dict | None = None
    problems: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    timings: dict[str, float] | None = None

    @property
    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "exit_code": self.exit_code,
            "automaton": {
                "states": self.states,
                "neighborhood": list(self.neighborhood),
                "r": self.r,
                "size_n": self.size_n,
                "expansion_factor": self.expansion_factor,
                "expanded_neighborhood": (list(self.expanded_neighborhood)
                                          if self.expanded_neighborhood else None),
            },
            "well_formedness": self.well_formedness,
            "borders": None if self.borders_l is None else {
                "l": self.borders_l,
                "r": self.borders_r,
                "inner_lr": self.inner_lr,
            },
            "closure": None if self.closure_dimension is None else {
                "dimension": self.closure_dimension,
                "iterations": self.closure_iterations,
            },
            "witness_word": self.witness_word,
            "gram": self.gram,
            "problems": self.problems,
            "notes": self.notes,
            "timings": self.timings,
        }


def _border_dict(a: Automaton, vec: np.ndarray) -> dict[str, float | str]:
    out: dict[str, float | str] = {}
    for i, v in enumerate(vec):
        label = word_label(a, a.decode_word(i, a.r - 1))
        out[label] = "inf" if np.isinf(v) else float(v)
    return out


def _gram_dict(a: Automaton, report, threshold: float) -> dict:
    worst = None
    if report.worst_pair is not None:
        worst = [config_label(a, report.worst_pair[0]), config_label(a, report.worst_pair[1])]
    return {
        "window": list(report.window),
        "columns": report.columns,
        "max_norm_deviation": report.max_norm_deviation,
        "max_offdiag": report.max_offdiag,
        "worst_pair": worst,
        "passed": report.passed(threshold),
    }


def run_check(a: Automaton, tol: Tolerance = DEFAULT_TOLERANCE,
              gram_window: tuple[int, int] | None = None,
              oracle_limit: int = DEFAULT_ORACLE_LIMIT,
              with_timings: bool = False) -> CheckReport:
    """Full decision pipeline for one automaton."""
    t0 = time.perf_counter()
    timings: dict[str, float] = {}
    report = CheckReport(
        verdict=INVALID_INPUT,
        states=a.alphabet_size,
        neighborhood=a.neighborhood.offsets,
        r=a.r,
        size_n=a.size_n,
        expansion_factor=a.expansion_factor,
    )

    validation = validate(a, tol)
    report.notes.extend(validation.notes)
    if not validation.ok:
        report.problems.extend(validation.messages())
        return report

    if a.alphabet_size == 1:
        report.verdict = UNITARY
        report.notes.append("single-state alphabet: the evolution operator is the identity")
        return report

    work = expand_to_simple(a)
    if work is not a:
        report.expanded_neighborhood = work.neighborhood.offsets
        report.notes.append(
            f"expanded neighborhood {list(a.neighborhood.offsets)} to "
            f"{list(work.neighborhood.offsets)} (expansion factor {a.expansion_factor:.6g})")
    work = normalize_neighborhood(work)

    if work.r == 1:
        local = work.table.T
        dev = max(
            float(np.max(np.abs(local.conj().T @ local - np.eye(work.alphabet_size)))),
            float(np.max(np.abs(local @ local.conj().T - np.eye(work.alphabet_size)))),
        )
        if dev <= tol.membership_rel:
            report.verdict = UNITARY
        else:
            report.verdict = NOT_WELL_FORMED
            report.problems.append(
                f"r=1 local matrix is not unitary (deviation {dev:.3g}); at r=1 "
                f"norm preservation and unitarity coincide")
        report.well_formedness = "decided directly (r=1 local matrix check)"
        return report

    if gram_window is not None:
        gram = truncated_column_gram(work, gram_window, tol, oracle_limit)
        report.gram = _gram_dict(work, gram, tol.membership_rel)
        if not gram.passed(tol.membership_rel):
            report.verdict = NOT_WELL_FORMED
            report.problems.append(
                f"column check failed on window {list(gram_window)}: "
                f"max norm deviation {gram.max_norm_deviation:.3g}, "
                f"max off-diagonal {gram.max_offdiag:.3g}")
            return report
        report.well_formedness = (
            f"oracle-checked on window [{gram_window[0]}, {gram_window[1]}] (partial check)")
    timings["setup"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    borders = border_vectors(work, tol)
    timings["borders"] = time.perf_counter() - t1
    report.borders_l = _border_dict(work, borders.l)
    report.borders_r = _border_dict(work, borders.r)
    if borders.any_infinite:
        report.verdict = NOT_WELL_FORMED
        names = [f"{side}[{word_label(work, work.decode_word(i, work.r - 1))!r}]"
                 for side, i in borders.infinite_indices()]
        report.problems.append(
            "infinite border component(s) " + ", ".join(names)
            + ": the automaton cannot be norm-preserving")
        if with_timings:
            report.timings = timings
        return report
    inner = borders.inner()
    report.inner_lr = inner
    if abs(inner - 1.0) > tol.membership_rel:
        report.verdict = NOT_WELL_FORMED
        report.problems.append(
            f"<l|r> = {inner:.12g} differs from 1: the automaton cannot be norm-preserving")
        if with_timings:
            report.timings = timings
        return report

    t2 = time.perf_counter()
    ops = build_transfer_operators(work)
    verdict = decide_closed(borders.l, borders.r, ops, tol)
    timings["closure"] = time.perf_counter() - t2
    report.closure_dimension = verdict.final_dimension
    report.closure_iterations = verdict.iterations
    if verdict.closed:
        report.verdict = UNITARY
    else:
        report.verdict = NOT_UNITARY
        report.witness_word = word_label(work, verdict.witness_word)
        value = row_norm_squared(ops, borders.l, borders.r,
                                 Configuration.from_word(verdict.witness_word))
        report.problems.append(
            f"row spelled by witness word {report.witness_word!r} has squared norm "
            f"{value:.12g}, not 1")
    timings["total"] = time.perf_counter() - t0
    if with_timings:
        report.timings = timings
    return report


# -- rendering ----------------------------------------------------------------


def _print_json(data: dict) -> None:
    print(json.dumps(data, sort_keys=True, indent=2))


def _render_check_text(report: CheckReport) -> None:
    print(f"verdict: {report.verdict}")
    print(f"automaton: {report.states} states, neighborhood {list(report.neighborhood)}, "
          f"r={report.r}, n={report.size_n}")
    print(f"expansion factor: {report.expansion_factor:.6g}")
    print(f"well-formedness: {report.well_formedness}")
    if report.borders_l is not None:
        print(f"l: {report.borders_l}")
        print(f"r: {report.borders_r}")
    if report.inner_lr is not None:
        print(f"<l|r> = {report.inner_lr:.12g}")
    if report.closure_dimension is not None:
        print(f"closure: dimension {report.closure_dimension}, "
              f"iterations {report.closure_iterations}")
    if report.witness_word is not None:
        print(f"witness word: {report.witness_word!r}")
    if report.gram is not None:
        print(f"column check: max norm deviation {report.gram['max_norm_deviation']:.3g}, "
              f"max off-diagonal {report.gram['max_offdiag']:.3g}")
    for p in report.problems:
        print(f"problem: {p}")
    for n in report.notes:
        print(f"note: {n}")
    if report.timings is not None:
        for k, v in report.timings.items():
            print(f"timing {k}: {v * 1000:.1f} ms")


# -- subcommands ----------------------------------------------------------------


def _load(path: str) -> Automaton:
    return document_to_automaton(load_document(path))


def _prepare(a: Automaton, tol: Tolerance) -> Automaton:
    """Validate and bring to contiguous zero-anchored form, or raise."""
    validation = validate(a, tol)
    if not validation.ok:
        raise DocumentError("; ".join(validation.messages()))
    return normalize_neighborhood(expand_to_simple(a))


def cmd_check(args, tol: Tolerance) -> int:
    a = _load(args.path)
    window = (0, args.window - 1) if args.window else None
    report = run_check(a, tol, gram_window=window, oracle_limit=args.oracle_limit,
                       with_timings=args.timings)
    if args.format == "json":
        _print_json(report.to_dict())
    else:
        _render_check_text(report)
    return report.exit_code


def cmd_borders(args, tol: Tolerance) -> int:
    a = _prepare(_load(args.path), tol)
    if a.r < 2:
        raise DocumentError("border vectors require a neighborhood of size at least 2; "
                            "use 'check', which handles r=1 directly")
    borders = border_vectors(a, tol)
    l = _border_dict(a, borders.l)
    r = _border_dict(a, borders.r)
    inner = None if borders.any_infinite else borders.inner()
    if args.format == "json":
        _print_json({"l": l, "r": r, "inner_lr": inner,
                     "any_infinite": borders.any_infinite})
    else:
        print(f"l: {l}")
        print(f"r: {r}")
        if inner is not None:
            print(f"<l|r> = {inner:.12g}")
        else:
            print("<l|r> undefined: infinite component present")
    return 0


def cmd_oracle(args, tol: Tolerance) -> int:
    a = normalize_neighborhood(expand_to_simple(_load(args.path)))
    report = truncated_column_gram(a, (0, args.window - 1), tol, args.oracle_limit)
    passed = report.passed(tol.membership_rel)
    if args.format == "json":
        _print_json({**_gram_dict(a, report, tol.membership_rel),
                     "label": "partial check"})
    else:
        print(f"columns: {report.columns} (support in [0, {args.window - 1}])")
        print(f"max norm deviation: {report.max_norm_deviation:.3g}")
        print(f"max off-diagonal:   {report.max_offdiag:.3g}")
        if report.worst_pair is not None and not passed:
            print(f"worst pair: {config_label(a, report.worst_pair[0])} / "
                  f"{config_label(a, report.worst_pair[1])}")
        print(f"{'PASS' if passed else 'FAIL'} (partial check at tolerance "
              f"{tol.membership_rel:g})")
    return 0 if passed else 2


def cmd_rownorm(args, tol: Tolerance) -> int:
    a = _prepare(_load(args.path), tol)
    if a.r < 2:
        raise DocumentError("row norms via transfer operators require r >= 2")
    borders = border_vectors(a, tol)
    if borders.any_infinite:
        print("border vectors have infinite components; automaton is not norm-preserving",
              file=sys.stderr)
        return 2
    word = parse_word_arg(a, args.word)
    ops = build_transfer_operators(a)
    value = float(apply_word(ops, word, borders.l) @ borders.r)
    d = Configuration.from_word(word)
    lo, hi = d.idom()
    if lo > hi:
        lo, hi = 0, 0
    pad = max(0, (args.oracle_limit - (hi - lo + 1)) // 2)
    window = (lo - pad, hi + pad)
    truncated = truncated_row_norm(a, d, window, args.oracle_limit)
    if args.format == "json":
        _print_json({"word": word_label(a, word), "row_norm_squared": value,
                     "truncated_window": list(window), "truncated": truncated})
    else:
        print(f"<M_word l | r> = {value:.12g}")
        print(f"truncated lower bound on window [{window[0]}, {window[1]}]: {truncated:.12g}")
    return 0


def cmd_step(args, tol: Tolerance) -> int:
    a = _prepare(_load(args.path), tol)
    u = Superposition.pure(parse_config_arg(a, args.config))
    for _ in range(args.steps):
        u = step(a, u, tol, args.oracle_limit)
    ordered = sorted(u.items(), key=lambda cz: (-abs(cz[1]), cz[0].cells))
    if args.format == "json":
        _print_json({
            "terms": [{"config": {str(i): a.symbol(s) for i, s in c.cells},
                       "re": z.real, "im": z.imag, "magnitude": abs(z)}
                      for c, z in ordered],
            "norm": u.norm(),
        })
    else:
        for c, z in ordered:
            print(f"{z.real:+.9f}{z.imag:+.9f}i  {config_label(a, c)}")
        print(f"norm: {u.norm():.6f}")
    return 0


# -- entry point --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; exit code 2 means NOT_WELL_FORMED
    here, so usage problems are remapped to the invalid-input code."""

    def error(self, message):
        self.exit(EXIT_CODES[INVALID_INPUT], f"{self.prog}: error: {message}\n")


def _env_tolerance() -> float | None:
    raw = os.environ.get("LQCA_TOLERANCE")
    if raw is None or raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise DocumentError(f"LQCA_TOLERANCE={raw!r} is not a number") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("path", help="automaton document (JSON)")
    common.add_argument("--tolerance", type=float, default=None,
                        help="membership tolerance; other thresholds scale with it "
                             "(default 1e-8, or LQCA_TOLERANCE)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--oracle-limit", type=int, default=DEFAULT_ORACLE_LIMIT,
                        help="max brute-force window width in cells")

    parser = _Parser(prog="lqca",
                     description="Decide whether a linear quantum cellular automaton "
                                 "is unitary.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common],
                       help="full unitarity verdict (exit 0/1/2/3)")
    p.add_argument("--window", type=int, default=None,
                   help="attach column-orthonormality evidence for supports in "
                        "[0, W-1]")
    p.add_argument("--timings", action="store_true", help="include stage timings")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("borders", parents=[common], help="print the border vectors")
    p.set_defaults(func=cmd_borders)

    p = sub.add_parser("oracle", parents=[common],
                       help="brute-force column-orthonormality check")
    p.add_argument("--window", type=int, required=True,
                   help="check all sources with support in [0, W-1]")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("rownorm", parents=[common],
                       help="squared row norm for the configuration spelled by a word")
    p.add_argument("--word", default="", help="letters of the configuration "
                                              "(empty for the all-quiescent row)")
    p.set_defaults(func=cmd_rownorm)

    p = sub.add_parser("step", parents=[common],
                       help="evolve a pure configuration and dump the superposition")
    p.add_argument("--config", default="", help="cells as index:state pairs, "
                                                "e.g. '-1:b' (empty for all-quiescent)")
    p.add_argument("--steps", type=int, default=1)
    p.set_defaults(func=cmd_step)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        t = args.tolerance if args.tolerance is not None else _env_tolerance()
        tol = Tolerance.from_membership(t) if t is not None else DEFAULT_TOLERANCE
        return args.func(args, tol)
    except (DocumentError, OracleScaleError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CODES[INVALID_INPUT]


if __name__ == "__main__":
    sys.exit(main())
