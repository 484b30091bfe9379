"""``phaselab`` command line.

Exit codes: 0 success, 1 failed lemma check, 2 bad input or configuration,
3 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import io
import sys
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import __version__
from .audits import (
    adequacy_audit,
    chi_bounds,
    chi_bounds_by_rank,
    chi_upper_bound,
    naeu_audit,
    sparsity_probe,
)
from .errors import InsufficientDataError, NotApplicableError, PhaselabError, ResourceLimitError
from .iso import build_xi, conjugate_language
from .langs import LanguageSpec, builtin_key, parse_language_token
from .lemmas import render_matrix, run_suite
from .phase import (
    CANONICAL_PARAMETER,
    CurveReport,
    Tolerances,
    curve,
    detect_transition,
    get_parameter,
    max_rank_for_length,
)
from .poly import parse_poly
from .protocol import Scenario, parse_scenario, run_scenario
from .roughp import build_default_csb, build_phi_oracle, errorless_heuristic, farago_target, identity_bijection
from .serial import decimal, dumps, ratio, write_atomic
from .words import Alphabet, decode_word, encode_word, enumerate_words, length_rank_interval, xi_transcode

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

TOLERANCE_FLAGS = ("mono", "limit", "r2", "delta", "cutoff", "split", "min_side_slices")


class UsageError(Exception):
    pass


# input / output -------------------------------------------------------------


def _read_lines(path: Optional[str]) -> list[str]:
    if path is None or path == "-":
        return sys.stdin.read().splitlines()
    with open(path, encoding="utf-8") as fh:
        return fh.read().splitlines()


def _decode_lines(lines: Iterable[str], alphabet: Alphabet):
    words, errors = [], []
    for lineno, raw in enumerate(lines, 1):
        text = raw.strip()
        if not text:
            continue
        try:
            words.append(decode_word(text, alphabet))
        except ValueError as exc:
            errors.append(f"line {lineno}: {exc}")
    if errors:
        raise UsageError("\n".join(errors))
    return words


def _emit(text: str, path: Optional[str]) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


def _render_value(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else ratio(q)


# shared argument handling --------------------------------------------------


def _resolve_lang(token: str, k: Optional[int]) -> LanguageSpec:
    if "@" not in token:
        token = f"{token}@k={k if k is not None else 3}"
    lang = parse_language_token(token)
    if k is not None and lang.alphabet.size != k:
        raise UsageError(f"--k {k} disagrees with the language token {token!r}")
    return lang


def _parameter_for(lang: LanguageSpec, name: Optional[str]):
    return get_parameter(name or CANONICAL_PARAMETER.get(builtin_key(lang), "signed-length"))


def _tolerances(args) -> Tolerances:
    return Tolerances().updated(**{key: getattr(args, f"tol_{key}", None) for key in TOLERANCE_FLAGS})


def _max_rank(args, alphabet: Alphabet, default: Optional[int] = None) -> int:
    if args.max_rank is not None and args.max_length is not None:
        raise UsageError("give either --max-rank or --max-length, not both")
    if args.max_length is not None:
        if args.max_length < 0:
            raise UsageError("--max-length must be nonnegative")
        return max_rank_for_length(alphabet, args.max_length)
    if args.max_rank is None:
        if default is None:
            raise UsageError("--max-rank or --max-length is required")
        return default
    if args.max_rank < 0:
        raise UsageError(f"--max-rank must be nonnegative, got {args.max_rank}")
    return args.max_rank


# commands -------------------------------------------------------------------


def cmd_transcode(args) -> int:
    src = Alphabet(args.k)
    dst = Alphabet(args.to if args.to is not None else args.k + 1)
    words = _decode_lines(_read_lines(args.input), src)
    _emit("".join(encode_word(xi_transcode(w, dst)) + "\n" for w in words), args.out)
    return EXIT_OK


def cmd_conjugate(args) -> int:
    lang = _resolve_lang(args.lang, args.k)
    iso = build_xi(lang.alphabet, args.to)
    h = conjugate_language(lang, iso)
    if args.max_rank is not None or args.max_length is not None:
        m = _max_rank(args, iso.dst)
        lines = [encode_word(v) for v in enumerate_words(iso.dst, m) if h.decide(v)]
    else:
        words = _decode_lines(_read_lines(args.input), iso.dst)
        lines = [f"{encode_word(v)} {'A' if h.decide(v) else 'R'}" for v in words]
    _emit("".join(line + "\n" for line in lines), args.out)
    return EXIT_OK


def cmd_heuristic(args) -> int:
    lang = _resolve_lang(args.lang, args.k)
    t = farago_target(lang)
    if args.max_rank is not None or args.max_length is not None:
        words = list(enumerate_words(lang.alphabet, _max_rank(args, lang.alphabet)))
    else:
        words = _decode_lines(_read_lines(args.input), lang.alphabet)
    _emit("".join(f"{encode_word(w)} {errorless_heuristic(t, w)}\n" for w in words), args.out)
    return EXIT_OK


def curve_csv(report: CurveReport) -> str:
    buf = io.StringIO()
    buf.write("value,total,accepted,undecided,fraction\n")
    for s in report.slices:
        buf.write(f"{_render_value(s.value)},{s.total},{s.accepted},{s.undecided},{ratio(s.fraction)}\n")
    return buf.getvalue()


def verdict_summary(report: CurveReport, tol: Tolerances) -> str:
    lines = [
        f"language: {report.language}",
        f"parameter: {report.parameter}",
        f"max_rank: {report.max_rank}",
        f"corpus: {report.corpus_size}",
        f"slices: {len(report.slices)}",
    ]
    if report.threshold is not None:
        lines.append(f"threshold: {ratio(report.threshold)} ({decimal(report.threshold)}, {report.threshold_method})")
    try:
        verdicts = detect_transition(report, tol)
    except InsufficientDataError as exc:
        lines.append(f"verdicts: INSUFFICIENT-DATA ({exc})")
        return "\n".join(lines) + "\n"
    for key, v in verdicts.items():
        detail = ", ".join(f"{k}={_short(val)}" for k, val in v.diagnostics.items() if k != "envelope")
        lines.append(f"{key}: {v.label} ({detail})")
    return "\n".join(lines) + "\n"


def _short(val) -> str:
    if isinstance(val, Fraction):
        return ratio(val)
    if isinstance(val, float):
        return f"{val:.6g}"
    return str(val)


def cmd_curve(args) -> int:
    lang = _resolve_lang(args.lang, args.k)
    g = _parameter_for(lang, args.param)
    m = _max_rank(args, lang.alphabet)
    tol = _tolerances(args)
    report = curve(lang, g, m)
    csv_text = curve_csv(report)
    summary = verdict_summary(report, tol)
    if args.out is None or args.out == "-":
        sys.stdout.write(csv_text)
        if args.summary is None:
            sys.stderr.write(summary)
    else:
        write_atomic(args.out, csv_text)
        if args.summary is None:
            sys.stdout.write(summary)
    if args.summary is not None:
        _emit(summary, args.summary)
    return EXIT_OK


def _oracle_for(lang: LanguageSpec, t, needed_rank: int):
    window = max(64, 3 * needed_rank)
    while True:
        phi = build_phi_oracle((lang, t.target), window)
        if phi.coverage >= needed_rank:
            return phi
        window *= 2


def _needed_rank(k: int, n_max: int, with_chi: bool) -> int:
    top = chi_bounds_by_rank(k, n_max)[1] if with_chi else n_max
    return length_rank_interval(k, top)[1]


def _balance_rows(rep) -> list[dict]:
    return [
        {
            "n": r.n,
            "size": r.size,
            "accept_correct": r.accept_correct,
            "reject_correct": r.reject_correct,
            "bottom": r.bottom,
            "bound": r.bound,
            "verdict": "PASS" if r.passed else "FAIL",
        }
        for r in rep.rows
    ]


def _verdict(value) -> str:
    return {True: "PASS", False: "FAIL", None: "UNDECIDED"}[value]


def audit_document(
    lang: LanguageSpec,
    poly_text: str,
    poly_s_text: str,
    n_lo: int,
    n_hi: int,
    phi_kind: str,
    tol: Tolerances,
    sparsity_max: int = 8,
) -> dict:
    poly, poly_s = parse_poly(poly_text), parse_poly(poly_s_text)
    k = lang.alphabet.size
    ns = list(range(n_lo, n_hi + 1))
    t = farago_target(lang)
    odd = k % 2 == 1
    if phi_kind == "oracle":
        phi = _oracle_for(lang, t, _needed_rank(k, n_hi, True))
    elif phi_kind == "csb":
        phi = build_default_csb(lang)
    else:
        phi = identity_bijection(lang.alphabet)
    doc: dict = {
        "language": lang.name,
        "alphabet": str(lang.alphabet),
        "poly": str(poly),
        "n_range": [n_lo, n_hi],
        "phi": phi.name,
        "phi_coverage": phi.coverage,
    }
    naeu = naeu_audit(lang, phi, t, poly, ns)
    doc["naeu"] = {
        "verdict": _verdict(naeu.passed),
        "decay_monotone": _verdict(naeu.monotone),
        "decay_failures": list(naeu.monotone_failures),
        "rows": _balance_rows(naeu),
    }
    iso = build_xi(lang.alphabet)
    if odd:
        ad = adequacy_audit(lang, iso, phi, t, poly, ns, tol)
        doc["adequacy"] = {
            "verdict": _verdict(ad.passed),
            "split": {
                "verdict": _verdict(ad.split_ok),
                "tolerance": tol.split,
                "rows": [
                    {
                        "n": r.n,
                        "j": r.j,
                        "piece": r.piece,
                        "piece_fraction": r.piece_fraction,
                        "block_fraction": r.block_fraction,
                        "verdict": "PASS" if r.passed else "FAIL",
                    }
                    for r in ad.split
                ],
            },
            "derivative": {
                "verdict": _verdict(ad.derivative_ok),
                "rows": [
                    {"n": r.n, "lhs": r.lhs, "rhs": r.rhs, "verdict": _verdict(r.holds), "nondecreasing": _verdict(r.increasing)}
                    for r in ad.derivative
                ],
            },
            "alt_naeu": {"verdict": _verdict(ad.alt_naeu.passed), "rows": _balance_rows(ad.alt_naeu)},
        }
    else:
        doc["adequacy"] = {"verdict": "NOT-APPLICABLE", "reason": f"{lang.alphabet} has an even number of symbols"}
    chi_rows = []
    for n in ns:
        lo, hi, alphas = chi_bounds_by_rank(k, n)
        ok, bound = chi_upper_bound(k, n, hi)
        row = {"n": n, "chi_low": lo, "chi_upp": hi, "bound": bound, "verdict": _verdict(ok), "alphas": alphas}
        if phi.coverage is not None or phi_kind == "csb":
            explicit = chi_bounds(iso, phi, n)
            row["explicit_matches"] = (explicit.chi_low, explicit.chi_upp, explicit.alphas) == (lo, hi, alphas)
            row["filling"] = _verdict(explicit.filling_ok and explicit.covers)
        chi_rows.append(row)
    doc["chi"] = chi_rows
    sp = sparsity_probe(lang, poly_s, range(0, sparsity_max + 1))
    doc["sparsity"] = {
        "poly_s": str(poly_s),
        "n_max": sparsity_max,
        "exceeded_at": sp.exceeded_at,
        "verdict": "consistent-with-sparse" if sp.consistent_with_sparse else "not-sparse",
        "densities": list(sp.densities),
    }
    return doc


def cmd_audit(args) -> int:
    lang = _resolve_lang(args.lang, args.k)
    if args.n_min < 0 or args.n_max < args.n_min:
        raise UsageError("need 0 <= --n-min <= --n-max")
    doc = audit_document(
        lang, args.poly, args.poly_s, args.n_min, args.n_max, args.phi, _tolerances(args), args.sparsity_max
    )
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    sc = parse_scenario(_read_text(args.config)) if args.config else Scenario()
    sc = sc.updated(
        lang=args.lang,
        param=args.param,
        max_rank=args.max_rank,
        seed=args.seed,
        flip_probability=args.flip_probability,
        cohort_size=args.cohort_size,
        policy=args.policy,
        target=args.target,
    )
    report = run_scenario(sc)
    _emit(dumps(report.as_dict()), args.out)
    return EXIT_OK


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_lemma_suite(args) -> int:
    results = run_suite(args.scale, tuple(args.only or ()))
    _emit(render_matrix(results), args.out)
    failed = [r for r in results if not r.passed]
    for r in failed:
        sys.stderr.write(f"lemma check failed: {r.check.identity}\n")
    return EXIT_FAILED if failed else EXIT_OK


# parser ---------------------------------------------------------------------


def _add_tolerances(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-mono", type=Fraction)
    p.add_argument("--tol-limit", type=Fraction)
    p.add_argument("--tol-r2", type=float)
    p.add_argument("--tol-delta", type=Fraction)
    p.add_argument("--tol-cutoff", type=Fraction)
    p.add_argument("--tol-split", type=Fraction)
    p.add_argument("--tol-min-side-slices", type=int)


def _add_corpus(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-rank", type=int)
    p.add_argument("--max-length", type=int)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phaselab", description="Cross-alphabet isomorphisms, phase curves and audits.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        p.add_argument("--config", help="key=value file supplying defaults for the flags below")
        p.add_argument("--out", help="output path (default: stdout)")
        return p

    p = command("transcode", cmd_transcode, "rank-preserving transcoding of words, one per line")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--to", type=int)
    p.add_argument("--in", dest="input")

    p = command("conjugate", cmd_conjugate, "decide or list members of a language carried to k+1 symbols")
    p.add_argument("--lang", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--to", type=int)
    p.add_argument("--in", dest="input")
    _add_corpus(p)

    p = command("heuristic", cmd_heuristic, "A/R/_ answers of the square-or-odd target heuristic")
    p.add_argument("--lang", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--in", dest="input")
    _add_corpus(p)

    p = command("curve", cmd_curve, "accepting-fraction curve as CSV, plus transition verdicts")
    p.add_argument("--lang", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--param")
    p.add_argument("--summary", help="write the verdict summary here instead of the console")
    _add_corpus(p)
    _add_tolerances(p)

    p = command("audit", cmd_audit, "balance, adequacy, chi and sparsity report as JSON")
    p.add_argument("--lang", required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--poly", default="n+4")
    p.add_argument("--poly-s", default="n^3")
    p.add_argument("--n-min", type=int, default=0)
    p.add_argument("--n-max", type=int, default=5)
    p.add_argument("--sparsity-max", type=int, default=8)
    p.add_argument("--phi", choices=("oracle", "csb", "identity"), default="oracle")
    _add_tolerances(p)

    p = command("verify", cmd_verify, "simulate checking a noisy device against curve predictions")
    p.add_argument("--lang")
    p.add_argument("--param")
    p.add_argument("--max-rank", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--flip-probability", type=Fraction)
    p.add_argument("--cohort-size", type=int)
    p.add_argument("--policy", choices=("same-length", "rank-neighbors"))
    p.add_argument("--target")

    p = command("lemma-suite", cmd_lemma_suite, "run every consistency check and print a pass/fail matrix")
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("--only", nargs="*")
    return parser


def _apply_config(parser: argparse.ArgumentParser, argv: Sequence[str]) -> argparse.Namespace:
    """Turn the keys of ``--config`` into defaults for the chosen subcommand, then parse."""
    command, config = _prescan(argv)
    if command is None or config is None or command == "verify":
        return parser.parse_args(argv)
    sub = _subparser(parser, command)
    actions = {a.dest: a for a in sub._actions if a.dest not in ("help", "config", "handler")}
    defaults = {}
    for lineno, raw in enumerate(_read_text(config).splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{config} line {lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        action = actions.get(key.replace("-", "_"))
        if action is None:
            raise UsageError(f"{config} line {lineno}: unknown key {key!r} for {command}")
        try:
            defaults[action.dest] = action.type(value) if action.type else value
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"{config} line {lineno}: bad value for {key}: {exc}") from None
        action.required = False
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _prescan(argv: Sequence[str]) -> tuple[Optional[str], Optional[str]]:
    command = next((a for a in argv if not a.startswith("-")), None)
    config = None
    for i, a in enumerate(argv):
        if a == "--config" and i + 1 < len(argv):
            config = argv[i + 1]
        elif a.startswith("--config="):
            config = a.split("=", 1)[1]
    return command, config


def _subparser(parser: argparse.ArgumentParser, name: str) -> argparse.ArgumentParser:
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            return action.choices[name]
    raise KeyError(name)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        return args.handler(args)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except ResourceLimitError as exc:
        sys.stderr.write(f"phaselab: {exc}\n")
        return EXIT_CAP
    except (UsageError, ValueError, NotApplicableError, PhaselabError, OSError) as exc:
        sys.stderr.write(f"phaselab: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
