"""Seeded end-to-end check suites driven by the ``suite`` command.

Every suite returns a :class:`SuiteResult` whose ``summary`` is a stable
``key=value`` line; identical arguments give identical summaries.
"""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from . import analysis, automaton as aut, compiler, otm
from .library import (
    DOA_NAMES, HALTING_PROGRAMS, LAMBDA_NAMES, LOOPING_PROGRAMS, NOA_NAMES, PROGRAMS,
    broken_oracle, load_automaton, load_program,
)
from .ordinal import (
    OMEGA, ONE, add, format_ordinal, left_subtract, multiply, omega_power, ordinal, parse_ordinal,
)
from .reference import enrichment_accepts, segment_unrolled_run
from .samples import block_boundaries, random_ordinal, random_split, random_word, random_words
from .word import LAMBDA, BlockWord, format_word

__all__ = ["SuiteConfig", "SuiteResult", "SUITES", "run_suite", "suite_names", "l1_certificate",
           "l2_certificate", "lcount_certificate", "certificate_lines"]


@dataclass
class SuiteConfig:
    seed: int = 7
    samples: Optional[int] = None      # None: the suite's own default
    fuel: int = 10_000
    bound: Optional[int] = None

    def n(self, default: int) -> int:
        return default if self.samples is None else self.samples


@dataclass
class SuiteResult:
    name: str
    ok: bool
    summary: str
    lines: List[str] = field(default_factory=list)
    seconds: float = 0.0


@dataclass
class _Tally:
    passed: int = 0
    failed: int = 0
    examples: List[str] = field(default_factory=list)

    def check(self, cond: bool, detail: Callable[[], str]):
        if cond:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.examples) < 10:
                self.examples.append("FAIL " + detail())

    @property
    def ok(self) -> bool:
        return self.failed == 0

    def summary(self, **extra) -> str:
        tail = "".join(f" {k}={v}" for k, v in extra.items())
        return f"pass={self.passed} fail={self.failed}{tail}"


# -- ordinals ---------------------------------------------------------------------

def _ordinal_laws(cfg: SuiteConfig) -> SuiteResult:
    rng = random.Random(cfg.seed)
    t = _Tally()
    for _ in range(cfg.n(10_000)):
        a, b, c = (random_ordinal(rng) for _ in range(3))
        label = lambda: f"a={format_ordinal(a)} b={format_ordinal(b)} c={format_ordinal(c)}"  # noqa: E731
        ok = (
            add(add(a, b), c) == add(a, add(b, c))
            and multiply(multiply(a, b), c) == multiply(a, multiply(b, c))
            and multiply(a, add(b, c)) == add(multiply(a, b), multiply(a, c))
            and parse_ordinal(format_ordinal(a)) == a
        )
        lo, hi = (a, b) if a <= b else (b, a)
        ok = ok and add(lo, left_subtract(lo, hi)) == hi
        t.check(ok, label)
    return SuiteResult("ordinal-laws", t.ok, t.summary(), t.examples)


# -- automata ---------------------------------------------------------------------

_COHERENCE_NAMES = DOA_NAMES + NOA_NAMES + LAMBDA_NAMES


def _alphabet(A) -> List[str]:
    return sorted(A.alphabet)


def _coherence(cfg: SuiteConfig) -> SuiteResult:
    rng = random.Random(cfg.seed)
    autos = [load_automaton(n) for n in _COHERENCE_NAMES]
    t = _Tally()
    for k in range(cfg.n(10_000)):
        A = autos[k % len(autos)]
        w = random_word(rng, _alphabet(A))
        q = rng.choice(sorted(A.states, key=str))
        if not A.deterministic:
            q = A.start
        alpha = random_split(rng, w)
        rep = aut.check_coherence(A, [(q, w, alpha)])
        t.check(rep.ok, lambda: f"{A.name} q={q} w={format_word(w)} split={format_ordinal(alpha)}")
    lines = list(t.examples)
    bad = broken_oracle()
    caught = None
    for w in random_words(cfg.seed, 200, ["0", "1"]):
        for alpha in block_boundaries(w):
            rep = aut.check_coherence(bad, [(bad.start, w, alpha)])
            if not rep.ok:
                caught = rep.failures[0]
                break
        if caught:
            break
    if caught:
        q, w, alpha, direct, composed = caught
        lines.append(f"broken oracle caught: q={q} w={format_word(w)} split={format_ordinal(alpha)} "
                     f"direct={direct} composed={composed}")
    else:
        lines.append("broken oracle NOT caught")
    lines.append(f"automata={len(autos)}")
    return SuiteResult("coherence", t.ok and caught is not None, t.summary(), lines)


def _determinize(cfg: SuiteConfig) -> SuiteResult:
    t = _Tally()
    for i, name in enumerate(NOA_NAMES + LAMBDA_NAMES):
        N = load_automaton(name)
        D = aut.determinize(N)
        for w in random_words(cfg.seed + i, cfg.n(1000), _alphabet(N)):
            t.check(N.accepts(w) == D.accepts(w), lambda: f"{name} w={format_word(w)}")
    return SuiteResult("determinize", t.ok, t.summary(), t.examples)


def _booleans(cfg: SuiteConfig) -> SuiteResult:
    t = _Tally()
    autos = {n: load_automaton(n) for n in DOA_NAMES}
    for i, (x, y) in enumerate(itertools.combinations(DOA_NAMES, 2)):
        A, B = autos[x], autos[y]
        if set(A.alphabet) != set(B.alphabet):
            continue
        cA = aut.complement(aut.complete(A))
        u, n = aut.union(A, B), aut.intersection(A, B)
        for w in random_words(cfg.seed + i, cfg.n(1000), _alphabet(A)):
            a, b = A.accepts(w), B.accepts(w)
            t.check(cA.accepts(w) == (not a) and u.accepts(w) == (a or b) and n.accepts(w) == (a and b),
                    lambda: f"{x},{y} w={format_word(w)}")
    return SuiteResult("booleans", t.ok, t.summary(), t.examples)


def _lambda(cfg: SuiteConfig) -> SuiteResult:
    t = _Tally()
    for i, name in enumerate(LAMBDA_NAMES):
        N = load_automaton(name)
        E = aut.lambda_eliminate(N)
        letters = [s for s in _alphabet(N) if s != LAMBDA]
        for w in random_words(cfg.seed + i, cfg.n(1000), letters):
            t.check(E.accepts(w) == enrichment_accepts(N, w), lambda: f"{name} w={format_word(w)}")
    return SuiteResult("lambda", t.ok, t.summary(), t.examples)


# -- languages ------------------------------------------------------------------------

def l1_certificate(n: int):
    pre = [BlockWord([("0", multiply(OMEGA, ordinal(i)))]) for i in range(1, n + 1)]
    ext = [BlockWord([("1", multiply(OMEGA, ordinal(i)))]) for i in range(1, n + 1)]
    return analysis.fooling_certify("L1_equal", pre, ext)


def l2_certificate():
    pre = [BlockWord([("1", omega_power(k))]) for k in range(1, 7)]
    return analysis.fooling_certify("L2_omega_powers", pre, pre)


def lcount_certificate():
    pre = [analysis.counting_word(n) for n in range(1, 11)]
    ext = [BlockWord([("0", n), ("1", 1)]) for n in range(1, 11)]
    return analysis.fooling_certify("L_count", pre, ext)


def certificate_lines(label: str, cert) -> List[str]:
    out = [f"{label}: size={cert.size} verified={str(cert.verify()).lower()}"]
    for i, p in enumerate(cert.prefixes):
        out.append(f"  x{i} = {format_word(p)}")
    for (i, j), e in sorted(cert.witness.items())[:12]:
        out.append(f"  x{i} / x{j} separated by {format_word(e)}")
    if len(cert.witness) > 12:
        out.append(f"  ... {len(cert.witness) - 12} more pairs")
    return out


def _fooling(cfg: SuiteConfig) -> SuiteResult:
    sizes = (4, 8, 16, 32, 64)
    lines: List[str] = []
    ok = True
    for n in sizes:
        cert = l1_certificate(n)
        good = cert.size == n and cert.verify()
        ok &= good
        lines.append(f"L1_equal n={n}: size={cert.size} verified={str(good).lower()}")
    certs = {"L1_equal": l1_certificate(8), "L2_omega_powers": l2_certificate(),
             "L_count": lcount_certificate()}
    expected = {"L1_equal": 8, "L2_omega_powers": 6, "L_count": 10}
    for name, cert in certs.items():
        ok &= cert.size == expected[name] and cert.verify()
        lines += certificate_lines(name, cert)
    summary = " ".join(f"{k}={c.size}" for k, c in certs.items()) + f" verified={str(ok).lower()}"
    return SuiteResult("fooling", ok, summary, lines)


def _examples(cfg: SuiteConfig) -> SuiteResult:
    A = load_automaton("a0")
    t = _Tally()
    for w in random_words(cfg.seed, cfg.n(1000), ["0", "1"]):
        t.check(A.accepts(w) == analysis.membership("L0", w), lambda: f"a0 w={format_word(w)}")
    fool = _fooling(cfg)
    return SuiteResult("examples", t.ok and fool.ok, t.summary() + " " + fool.summary,
                       t.examples + fool.lines)


def _checkpoints(w: BlockWord):
    extra = {p for p in (ONE, ordinal(2), OMEGA, add(OMEGA, ONE)) if p <= w.length}
    return sorted(set(block_boundaries(w)) | extra)


def _pumping(cfg: SuiteConfig) -> SuiteResult:
    t = _Tally()
    skipped = 0
    for i, name in enumerate(DOA_NAMES):
        A = load_automaton(name)
        if not A.is_complete():
            A = aut.complete(A)
        for w in random_words(cfg.seed + i, cfg.n(300), _alphabet(A)):
            pts = _checkpoints(w)
            if len(pts) <= len(A.states):
                skipped += 1
                continue
            try:
                p = analysis.find_pump(A, w, pts)
                good = analysis.verify_pump(A, p)
            except analysis.AnalysisError:
                good = False
            t.check(good, lambda: f"{name} w={format_word(w)}")
    return SuiteResult("pumping", t.ok and t.passed > 0, t.summary(skipped=skipped), t.examples)


# -- machines --------------------------------------------------------------------------

_SHORT_RUNS = (ordinal(1), ordinal(2), ordinal(3), OMEGA, add(OMEGA, ONE), multiply(OMEGA, ordinal(2)))


def _finite_words(alphabet, max_len):
    for n in range(max_len + 1):
        for letters in itertools.product(sorted(alphabet), repeat=n):
            yield BlockWord([(s, 1) for s in letters])


def _simulator(cfg: SuiteConfig) -> SuiteResult:
    naive, unrolled = _Tally(), _Tally()
    undecided = 0
    rng = random.Random(cfg.seed)
    for name in PROGRAMS:
        P = load_program(name)
        for w in _finite_words(P.alphabet, 5):
            a = otm.run_accelerated(P, w, fuel=1000)
            b = otm.run_naive(P, w, fuel=1000)
            if otm.UNKNOWN in (a.verdict, b.verdict):
                undecided += 1
                continue
            naive.check(a.key() == b.key(), lambda: f"naive {name} w={format_word(w)}")
        for _ in range(cfg.n(20)):
            w = random_word(rng, sorted(P.alphabet), runs=_SHORT_RUNS)
            ref = segment_unrolled_run(P, w)
            if ref is None:
                undecided += 1
                continue
            r = otm.run_accelerated(P, w, cfg.fuel)
            got = (r.verdict, r.accept, r.time, r.space_used) if r.verdict != otm.DIVERGES \
                else (otm.DIVERGES, None, None, None)
            unrolled.check(got == ref, lambda: f"unrolled {name} w={format_word(w)}")
    ok = naive.ok and unrolled.ok and len(PROGRAMS) >= 20
    summary = (f"pass={naive.passed + unrolled.passed} fail={naive.failed + unrolled.failed} "
               f"naive={naive.passed} unrolled={unrolled.passed} undecided={undecided} "
               f"programs={len(PROGRAMS)}")
    return SuiteResult("simulator", ok, summary, naive.examples + unrolled.examples)


def _looping(cfg: SuiteConfig) -> SuiteResult:
    t = _Tally()
    for i, name in enumerate(LOOPING_PROGRAMS + HALTING_PROGRAMS):
        P = load_program(name)
        looping = name in LOOPING_PROGRAMS
        for w in random_words(cfg.seed + i, cfg.n(40), sorted(P.alphabet)):
            r = otm.run_accelerated(P, w, fuel=10_000)
            if looping:
                t.check(r.verdict == otm.DIVERGES, lambda: f"{name} w={format_word(w)} got {r.verdict}")
            else:
                t.check(r.verdict != otm.DIVERGES, lambda: f"{name} w={format_word(w)} flagged")
    return SuiteResult("looping", t.ok, t.summary(), t.examples)


COMPILE_PROGRAMS = ("sweep", "only_ones", "two_pass", "three_pass", "last_symbol")


def _compile_validate(cfg: SuiteConfig) -> SuiteResult:
    lines = []
    total = agree = mism = maxcs = 0
    ok = True
    for i, name in enumerate(COMPILE_PROGRAMS):
        P = load_program(name)
        A = compiler.compile_program(P, cfg.bound, cfg.fuel)
        rep = compiler.cross_validate(P, A, random_words(cfg.seed + i, cfg.n(500), sorted(P.alphabet)),
                                      cfg.fuel)
        lines.append(f"{name}: {rep.summary()} bound={A.bound} flagged={len(rep.flagged)}")
        lines += ["  " + x for x in rep.lines()[:-1]]
        total += len(rep.decided)
        agree += len(rep.decided) - len(rep.mismatches)
        mism += len(rep.mismatches)
        maxcs = max(maxcs, rep.max_crossing)
        ok &= rep.ok
    p = agree / total if total else 1.0
    return SuiteResult("compile-validate", ok, f"agreement={p:.4f} mismatches={mism} maxcs={maxcs}", lines)


def _space(cfg: SuiteConfig) -> SuiteResult:
    lines = []
    compare = load_program("compare")
    finite = [BlockWord([("0", n), ("1", n)]) for n in range(1, 65)]
    rows = otm.space_profile(compare, finite, cfg.fuel)
    grows = all(r["space_used"] == n and r["verdict"] == otm.HALTED for n, r in enumerate(rows, 1))
    for n in (1, 2, 4, 8, 16, 32, 64):
        lines.append(f"COMPARE 0^{n} 1^{n}: space={rows[n - 1]['space_used']}")
    inf = otm.space_profile(compare, [BlockWord([("0", OMEGA), ("1", OMEGA)])], cfg.fuel)[0]
    breach = inf["verdict"] == otm.BUDGET
    lines.append(f"COMPARE 0^(w) 1^(w): verdict={inf['verdict']} space={inf['space_used']} "
                 f"gamma={compare.gamma}")
    sweep = load_program("sweep")
    lengths = (OMEGA, multiply(OMEGA, ordinal(2)), omega_power(2))
    srows = otm.space_profile(sweep, [BlockWord([("0", x)]) for x in lengths], cfg.fuel)
    small = all(r["space_used"] <= 1 and not r["flagged"] for r in srows)
    for x, r in zip(lengths, srows):
        lines.append(f"SWEEP 0^({format_ordinal(x)}): space={r['space_used']} card_length={r['card_length']}")
    ok = grows and breach and small
    summary = (f"compare_grows={str(grows).lower()} compare_budget={str(breach).lower()} "
               f"sweep_constant={str(small).lower()}")
    return SuiteResult("space", ok, summary, lines)


SUITES: Dict[str, Callable[[SuiteConfig], SuiteResult]] = {
    "ordinal-laws": _ordinal_laws,
    "coherence": _coherence,
    "determinize": _determinize,
    "booleans": _booleans,
    "lambda": _lambda,
    "examples": _examples,
    "fooling": _fooling,
    "pumping": _pumping,
    "simulator": _simulator,
    "looping": _looping,
    "compile-validate": _compile_validate,
    "space": _space,
}


def suite_names() -> List[str]:
    return list(SUITES)


def run_suite(name: str, cfg: Optional[SuiteConfig] = None) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    cfg = cfg or SuiteConfig()
    t0 = time.perf_counter()
    res = SUITES[name](cfg)
    res.seconds = time.perf_counter() - t0
    return res
