"""Command-line front end: ``ordauto <verb> ...``.

Human-readable detail goes first; the final line is a ``key=value`` summary.
Exit status is 0 when every check passed, 1 when a check failed and 2 for
usage or parse errors.
"""
from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analysis, automaton as aut, compiler, otm
from .library import AUTOMATA, PROGRAMS, automaton_text, program_text
from .ordinal import (
    OrdinalError, OrdinalParseError, cardinality, compare, depth_budget, format_ordinal,
    left_subtract, parse_ordinal,
)
from .reference import enrichment_accepts
from .samples import block_boundaries, random_split, random_words
from .suites import (
    SuiteConfig, certificate_lines, l1_certificate, l2_certificate, lcount_certificate, run_suite,
    suite_names,
)
from .word import LAMBDA, WordError, format_word, parse_word, projection_stats, slice_word, symbol_at

OK, FAILED, USAGE = 0, 1, 2


class CliError(Exception):
    pass


def _out(line: str = ""):
    print(line)


def _bool(x: bool) -> str:
    return "true" if x else "false"


def _source(arg: str, kind: str):
    """Text of a file path, or of a bundled example given by name."""
    p = Path(arg)
    if p.is_file():
        return p.read_text(), p.stem
    key = p.stem.lower().replace("-", "_")
    names = AUTOMATA if kind == "aut" else PROGRAMS
    if key in names:
        return (automaton_text(key) if kind == "aut" else program_text(key)), key
    raise CliError(f"no such file or bundled {'automaton' if kind == 'aut' else 'program'}: {arg}")


def _automaton(arg: str) -> aut.LimitPresentation:
    text, _ = _source(arg, "aut")
    return aut.parse_automaton(text)


def _program(arg: str):
    text, label = _source(arg, "otm")
    return otm.parse_program(text), label


def _state(q) -> str:
    if isinstance(q, frozenset):
        return "{" + " ".join(sorted(map(str, q))) + "}"
    return str(q)


# -- ord ----------------------------------------------------------------------------

def cmd_ord(a) -> int:
    if a.op == "eval":
        _out(format_ordinal(parse_ordinal(a.args[0])))
    elif a.op == "cmp":
        x, y = (parse_ordinal(t) for t in a.args[:2])
        _out({-1: "lt", 0: "eq", 1: "gt"}[compare(x, y)])
    elif a.op == "sub":
        x, y = (parse_ordinal(t) for t in a.args[:2])
        _out(format_ordinal(left_subtract(x, y)))
    elif a.op == "card":
        _out(str(cardinality(parse_ordinal(a.args[0]))))
    return OK


# -- word ---------------------------------------------------------------------------

def cmd_word(a) -> int:
    w = parse_word(a.word)
    if a.op == "norm":
        _out(format_word(w))
        _out(f"blocks={len(w)} length={format_ordinal(w.length)} card={cardinality(w.length)}")
    elif a.op == "slice":
        _out(format_word(slice_word(w, parse_ordinal(a.args[0]), parse_ordinal(a.args[1]))))
    elif a.op == "at":
        _out(symbol_at(w, parse_ordinal(a.args[0])))
    elif a.op == "stats":
        otp, card = projection_stats(w, a.args[0])
        _out(f"otp={format_ordinal(otp)} card={card}")
    return OK


# -- aut ----------------------------------------------------------------------------

def cmd_aut(a) -> int:
    A = _automaton(a.file)
    if a.op == "check":
        again = aut.parse_automaton(aut.format_automaton(A))
        same = aut.format_automaton(again) == aut.format_automaton(A)
        _out(aut.format_automaton(A).rstrip())
        _out(f"roundtrip={_bool(same)} states={len(A.states)} complete={_bool(A.is_complete())}")
        return OK if same else FAILED
    if a.op == "run":
        if not a.word:
            raise CliError("aut run needs a word")
        w = parse_word(a.word[0], alphabet=A.alphabet)
        r = A.run(w)
        verdict = "accept" if r.accepted_by(A) else "reject"
        _out(f"{verdict} state={_state(r.end) if r.defined and r.end is not None else 'undefined'}")
        return OK
    rng = random.Random(a.seed)
    n = a.samples or 1000
    letters = sorted(A.alphabet - {LAMBDA}) if a.op == "agree" and a.via == "eliminate" else sorted(A.alphabet)
    words = random_words(a.seed, n, letters)
    if a.op == "coherence":
        states = sorted(A.states, key=str) if A.deterministic else [A.start]
        rep = aut.check_coherence(A, [(rng.choice(states), w, random_split(rng, w)) for w in words])
        for f in rep.failures[:10]:
            q, w, alpha, d, c = f
            _out(f"FAIL q={q} w={format_word(w)} split={format_ordinal(alpha)} direct={d} composed={c}")
        _out(rep.summary())
        return OK if rep.ok else FAILED
    if a.op == "agree":
        if a.via == "eliminate":
            # lambda moves may be used anywhere, so compare with explicit enrichments
            E = aut.lambda_eliminate(A)
            bad = [w for w in words if E.accepts(w) != enrichment_accepts(A, w)]
        else:
            other = {"determinize": aut.determinize, "complete": aut.complete}[a.via](A)
            bad = [w for w in words if A.accepts(w) != other.accepts(w)]
        for w in bad[:10]:
            _out(f"FAIL w={format_word(w)}")
        _out(f"pass={n - len(bad)} fail={len(bad)}")
        return OK if not bad else FAILED
    raise CliError(f"unknown aut operation {a.op}")


# -- analyze ------------------------------------------------------------------------

def cmd_analyze(a) -> int:
    if a.op == "member":
        _out(f"member={_bool(analysis.membership(a.target, parse_word(a.args[0])))}")
        return OK
    if a.op == "fooling":
        L = analysis.get_oracle(a.target).id
        if L == "L1_equal":
            cert = l1_certificate(a.size or 8)
        elif L == "L2_omega_powers":
            cert = l2_certificate()
        elif L == "L_count":
            cert = lcount_certificate()
        else:
            raise CliError(f"no certificate recipe for {L}")
        for line in certificate_lines(L, cert):
            _out(line)
        good = cert.certified and cert.verify()
        _out(f"language={L} size={cert.size} verified={_bool(good)}")
        return OK if good else FAILED
    if a.op == "pump":
        A = _automaton(a.target)
        if not A.is_complete():
            A = aut.complete(A)
        w = parse_word(a.args[0])
        pts = [parse_ordinal(t) for t in a.args[1:]] or block_boundaries(w)
        p = analysis.find_pump(A, w, pts)
        good = analysis.verify_pump(A, p)
        _out(f"head={format_word(p.head)}")
        _out(f"v={format_word(p.v)}")
        _out(f"tail={format_word(p.tail)}")
        _out(f"alpha={format_ordinal(p.alpha)} beta={format_ordinal(p.beta)} verified={_bool(good)}")
        return OK if good else FAILED
    raise CliError(f"unknown analyze operation {a.op}")


# -- otm / compile / validate ---------------------------------------------------------

def cmd_otm(a) -> int:
    P, _ = _program(a.file)
    if a.op == "check":
        same = otm.parse_program(otm.format_program(P)).table == P.table
        _out(otm.format_program(P).rstrip())
        _out(f"roundtrip={_bool(same)} states={len(P.states)} gamma={P.gamma}")
        return OK if same else FAILED
    if not a.words:
        raise CliError(f"otm {a.op} needs at least one word")
    words = [parse_word(t, alphabet=P.alphabet) for t in a.words]
    if a.op == "run":
        for w in words:
            r = otm.run_naive(P, w, a.fuel) if a.naive else otm.run_accelerated(P, w, a.fuel)
            c = r.config
            _out(f"word={format_word(w)} state={P.states[c.state]} head={format_ordinal(c.head)} "
                 f"macro={r.macro_steps}")
            _out(r.summary())
        return OK
    if a.op == "space":
        rows = otm.space_profile(P, words, a.fuel)
        for r in rows:
            _out(f"word={format_word(r['word'])} length={format_ordinal(r['length'])} "
                 f"card={r['card_length']} space={r['space_used']} verdict={r['verdict']}"
                 + (" FLAGGED" if r["flagged"] else ""))
        _out(f"max_space={max(r['space_used'] for r in rows)} flagged={sum(r['flagged'] for r in rows)}")
        return OK
    raise CliError(f"unknown otm operation {a.op}")


def cmd_compile(a) -> int:
    P, label = _program(a.file)
    A = compiler.compile_program(P, a.bound, a.fuel)
    _out(f"program={P.name} states={len(A.program.states)} controls={compiler.control_count(A.program)} "
         f"bound={A.bound}")
    _out(compiler.make_handle(label, A))
    return OK


def cmd_validate(a) -> int:
    P, label = _program(a.file)
    A = compiler.compile_from_handle(P, a.handle, a.fuel)
    samples = random_words(a.seed, a.samples or 500, sorted(P.alphabet))
    rep = compiler.cross_validate(P, A, samples, a.fuel)
    for line in rep.lines():
        _out(line)
    if rep.flagged:
        print(f"warning: {len(rep.flagged)} unknown runs excluded", file=sys.stderr)
    _out(rep.summary())
    return OK if rep.ok else FAILED


def cmd_suite(a) -> int:
    names = suite_names() if a.name == "all" else [a.name]
    cfg = SuiteConfig(seed=a.seed, samples=a.samples, fuel=a.fuel, bound=a.bound)
    ok = True
    results = []
    for name in names:
        r = run_suite(name, cfg)
        results.append(r)
        ok &= r.ok
        for line in r.lines:
            _out(line)
        if len(names) > 1:
            _out(f"[{'pass' if r.ok else 'FAIL'}] {name}: {r.summary}")
    if len(names) == 1:
        _out(results[0].summary)
    else:
        _out(f"suites={len(results)} failed={sum(not r.ok for r in results)}")
    return OK if ok else FAILED


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--fuel", type=int, default=10_000)
    common.add_argument("--bound", type=int, default=None)
    common.add_argument("--depth", type=int, default=None, help="exponent nesting budget for ordinals")

    p = argparse.ArgumentParser(prog="ordauto", description="Automata and ordinal Turing machines "
                                "over ordinal-length words.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("ord", parents=[common], help="ordinal arithmetic")
    s.add_argument("op", choices=["eval", "cmp", "sub", "card"])
    s.add_argument("args", nargs="+")
    s.set_defaults(func=cmd_ord)

    s = sub.add_parser("word", parents=[common], help="block words")
    s.add_argument("op", choices=["norm", "slice", "at", "stats"])
    s.add_argument("word")
    s.add_argument("args", nargs="*")
    s.set_defaults(func=cmd_word)

    s = sub.add_parser("aut", parents=[common], help="automata files")
    s.add_argument("op", choices=["run", "check", "coherence", "agree"])
    s.add_argument("file")
    s.add_argument("word", nargs="*")
    s.add_argument("--via", choices=["determinize", "eliminate", "complete"], default="determinize")
    s.set_defaults(func=cmd_aut)

    s = sub.add_parser("analyze", parents=[common], help="languages, fooling sets, pumping")
    s.add_argument("op", choices=["member", "fooling", "pump"])
    s.add_argument("target", help="language id, or automaton for pump")
    s.add_argument("args", nargs="*")
    s.add_argument("--size", type=int, default=None)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("otm", parents=[common], help="ordinal Turing machine programs")
    s.add_argument("op", choices=["run", "check", "space"])
    s.add_argument("file")
    s.add_argument("words", nargs="*")
    s.add_argument("--naive", action="store_true")
    s.set_defaults(func=cmd_otm)

    s = sub.add_parser("compile", parents=[common], help="compile a program to an automaton handle")
    s.add_argument("file")
    s.set_defaults(func=cmd_compile)

    s = sub.add_parser("validate", parents=[common], help="compare a compiled handle with simulation")
    s.add_argument("file")
    s.add_argument("handle")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("suite", parents=[common], help="run a check suite")
    s.add_argument("name", choices=suite_names() + ["all"])
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.depth is not None:
            with depth_budget(args.depth):
                return args.func(args)
        return args.func(args)
    except (OrdinalParseError, WordError, aut.AutomatonParseError, otm.ProgramParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except (CliError, KeyError, OrdinalError, analysis.AnalysisError, otm.OTMError,
            aut.AutomatonError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
