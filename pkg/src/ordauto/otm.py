"""Ordinal Turing machines with a finite scratch tape.

The input tape holds ``lh`` at position 0, the input word from position 1 and
``rh`` right after it.  At limit times every component takes the inferior
limit of its earlier values: the state index, each scratch bit, the scratch
head and the input head.  A left move from a limit input position sends the
input head to 0.

:func:`run_accelerated` jumps across constant-symbol input runs by memoised
cycle summaries and detects configuration loops, so it handles inputs of any
length below ``w^w`` in a bounded number of macro-steps.
"""
from __future__ import annotations

import bisect
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple

from .ordinal import (
    ONE, OMEGA, ZERO, Cardinality, DepthExceeded, Ordinal, add, cardinality,
    get_depth_budget, left_subtract, multiply, omega_power, ordinal,
)
from .word import LH, RH, BlockWord

__all__ = [
    "OTMError", "ProgramParseError", "MissingTableEntry", "ScratchBudgetExceeded",
    "Rule", "OTMProgram", "Configuration", "Tape", "RunResult", "parse_program",
    "format_program", "initial_configuration", "step", "limit_config", "run_naive",
    "run_accelerated", "space_profile", "normalize_halting", "HALTED", "DIVERGES",
    "UNKNOWN", "STUCK", "BUDGET", "ARRIVED", "RESET",
]

MOVES = ("L", "R", "S")


class OTMError(ValueError):
    pass


class ProgramParseError(OTMError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class MissingTableEntry(OTMError):
    pass


class ScratchBudgetExceeded(OTMError):
    pass


@dataclass(frozen=True)
class Rule:
    next: int
    write: int
    imove: str
    smove: str


@dataclass
class OTMProgram:
    """Finite program table.  State index 0 is initial; order matters for limits."""

    name: str
    states: Tuple[str, ...]
    halting: Dict[int, bool]          # halting state index -> accepts?
    gamma: int
    alphabet: Tuple[str, ...]
    table: Dict[Tuple[int, str, int], Rule]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.gamma < 1:
            raise OTMError("gamma must be at least 1")
        for (q, _, _) in self.table:
            if q in self.halting:
                raise OTMError(f"halting state {self.states[q]} has outgoing rules")

    @property
    def tokens(self) -> Tuple[str, ...]:
        return (LH,) + tuple(self.alphabet) + (RH,)

    def index(self, name: str) -> int:
        return self.states.index(name)

    def is_constant_space(self) -> bool:
        return True  # scratch is capped at gamma cells by construction


def _expand(field_text: str, universe, what: str, lineno: int):
    field_text = field_text.strip()
    if field_text == "*":
        return list(universe)
    if field_text not in universe:
        raise ProgramParseError(f"unknown {what} {field_text!r}", lineno)
    return [field_text]


def parse_program(text: str) -> OTMProgram:
    """Parse the program format.

    ::

        name: SWEEP
        alphabet: 0 1
        states: s0 acc:accept
        gamma: 1
        rules:
          s0, *, * -> s0, 0, R, S
          s0, rh, 0 -> acc, 0, S, S

    ``*`` matches every token or bit; a rule naming a token or bit explicitly
    overrides wildcard rules regardless of order.
    """
    fields: Dict[str, str] = {}
    where: Dict[str, int] = {}
    rules: List[Tuple[int, str]] = []
    in_rules = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head, sep, rest = line.partition(":")
        if sep and not line[0].isspace() and head.strip() in ("name", "alphabet", "states", "gamma", "rules"):
            key = head.strip()
            in_rules = key == "rules"
            where[key] = lineno
            if not in_rules:
                fields[key] = rest.strip()
            continue
        if in_rules:
            rules.append((lineno, line.strip()))
        else:
            raise ProgramParseError(f"unexpected line {line.strip()!r}", lineno)
    for key in ("alphabet", "states", "gamma"):
        if key not in fields:
            raise ProgramParseError(f"missing section {key!r}", 1)
    alphabet = tuple(fields["alphabet"].split())
    names, halting = [], {}
    for i, item in enumerate(fields["states"].split()):
        name, _, tag = item.partition(":")
        if tag:
            if tag not in ("accept", "reject"):
                raise ProgramParseError(f"unknown state tag {tag!r}", where["states"])
            halting[i] = tag == "accept"
        names.append(name)
    try:
        gamma = int(fields["gamma"])
    except ValueError:
        raise ProgramParseError("gamma must be a natural number", where["gamma"]) from None
    if gamma < 1:
        raise ProgramParseError("gamma must be at least 1", where["gamma"])
    tokens = (LH,) + alphabet + (RH,)
    table: Dict[Tuple[int, str, int], Rule] = {}
    specificity: Dict[Tuple[int, str, int], int] = {}
    for lineno, entry in rules:
        lhs, arrow, rhs = entry.partition("->")
        left = [p.strip() for p in lhs.split(",")]
        right = [p.strip() for p in rhs.split(",")]
        if not arrow or len(left) != 3 or len(right) != 4:
            raise ProgramParseError("expected 'state, token, bit -> state, write, imove, smove'", lineno)
        if left[0] not in names:
            raise ProgramParseError(f"unknown state {left[0]!r}", lineno)
        if right[0] not in names:
            raise ProgramParseError(f"unknown state {right[0]!r}", lineno, entry.index("->") + 3)
        if right[1] not in ("0", "1") or right[2] not in MOVES or right[3] not in MOVES:
            raise ProgramParseError("write must be 0/1 and moves L/R/S", lineno)
        rule = Rule(names.index(right[0]), int(right[1]), right[2], right[3])
        q = names.index(left[0])
        rank = (left[1] != "*") * 2 + (left[2] != "*")
        for tok in _expand(left[1], tokens, "token", lineno):
            for bit in _expand(left[2], ("0", "1"), "bit", lineno):
                key = (q, tok, int(bit))
                if key in specificity and specificity[key] == rank and table[key] != rule:
                    raise ProgramParseError(f"conflicting rules for {left[0]}, {tok}, {bit}", lineno)
                if key not in specificity or specificity[key] <= rank:
                    table[key] = rule
                    specificity[key] = rank
    try:
        return OTMProgram(fields.get("name", "program"), tuple(names), halting, gamma, alphabet, table)
    except OTMError as exc:
        raise ProgramParseError(str(exc), 1) from None


def format_program(P: OTMProgram) -> str:
    """Fully expanded text (no wildcards); parses back to an equal table."""
    states = " ".join(
        n + ({True: ":accept", False: ":reject"}[P.halting[i]] if i in P.halting else "")
        for i, n in enumerate(P.states))
    lines = [f"name: {P.name}", f"alphabet: {' '.join(P.alphabet)}", f"states: {states}",
             f"gamma: {P.gamma}", "rules:"]
    order = {t: i for i, t in enumerate(P.tokens)}
    for (q, tok, bit) in sorted(P.table, key=lambda k: (k[0], order[k[1]], k[2])):
        r = P.table[(q, tok, bit)]
        lines.append(f"  {P.states[q]}, {tok}, {bit} -> {P.states[r.next]}, {r.write}, {r.imove}, {r.smove}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# configurations and tapes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Configuration:
    """Machine state index, input head, scratch bitmask (bit i = cell i), scratch head."""

    state: int
    head: Ordinal = ZERO
    scratch: int = 0
    shead: int = 0

    @property
    def control(self) -> Tuple[int, int, int]:
        return (self.state, self.scratch, self.shead)

    def bits(self, gamma: int) -> Tuple[int, ...]:
        return tuple((self.scratch >> i) & 1 for i in range(gamma))

    def as_tuple(self):
        return (self.state, self.head, self.scratch, self.shead)


def initial_configuration() -> Configuration:
    return Configuration(0, ZERO, 0, 0)


class Tape:
    """Read-only input tape given as constant-token blocks."""

    def __init__(self, blocks: Sequence[Tuple[str, Ordinal]]):
        self.blocks = [(tok, ordinal(run)) for tok, run in blocks if not ordinal(run).is_zero()]
        if not self.blocks:
            raise OTMError("empty tape")
        self.starts: List[Ordinal] = []
        pos = ZERO
        for _, run in self.blocks:
            self.starts.append(pos)
            pos = add(pos, run)
        self.length = pos
        self.ends = self.starts[1:] + [pos]
        self._last_start = self.starts[-1]

    @classmethod
    def for_input(cls, w: BlockWord) -> "Tape":
        return cls([(LH, ONE)] + list(w.blocks) + [(RH, ONE)])

    def _find(self, p: Ordinal) -> int:
        i = bisect.bisect_right(self.starts, p) - 1
        if i < 0 or not p < self.ends[i]:
            raise OTMError(f"position {p} outside the tape")
        return i

    def token(self, p: Ordinal) -> str:
        return self.blocks[self._find(p)][0]

    def block_end(self, p: Ordinal) -> Ordinal:
        return self.ends[self._find(p)]

    def last(self) -> Ordinal:
        # position of the final cell (the last block's last position)
        tok, run = self.blocks[-1]
        if run.is_successor():
            return add(self._last_start, run.predecessor())
        raise OTMError("tape must end with a successor-length block")


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

HALTED, DIVERGES, UNKNOWN, STUCK, BUDGET = "halted", "diverges", "unknown", "stuck", "budget"
ARRIVED, RESET = "arrived", "reset"


@dataclass
class RunResult:
    verdict: str
    time: Ordinal
    config: Configuration
    space_used: int
    accept: Optional[bool] = None
    witness: Optional[Tuple[Configuration, Ordinal, Ordinal]] = None
    reason: str = ""
    macro_steps: int = 0
    resets: int = 0

    @property
    def accepted(self) -> bool:
        return self.verdict == HALTED and bool(self.accept)

    @property
    def passes(self) -> int:
        """Left-to-right passes; each input block is entered at most once per pass."""
        return self.resets + 1

    def key(self):
        """Comparable outcome (verdict, acceptance, time, space)."""
        return (self.verdict, self.accept, self.time, self.space_used)

    def summary(self) -> str:
        from .ordinal import format_ordinal
        parts = [f"verdict={self.verdict}"]
        if self.verdict == HALTED:
            parts.append(f"accept={str(self.accept).lower()}")
        parts += [f"time={format_ordinal(self.time)}", f"space={self.space_used}",
                  f"passes={self.passes}"]
        if self.reason:
            parts.append(f"reason={self.reason}")
        return " ".join(parts)


# ---------------------------------------------------------------------------
# single steps and limits
# ---------------------------------------------------------------------------

class _Reset(Exception):
    pass


def _scratch_update(P: OTMProgram, rule: Rule, sc: int, sh: int) -> Tuple[int, int]:
    if rule.write:
        if sh >= P.gamma:
            raise ScratchBudgetExceeded(f"write at scratch cell {sh} with gamma={P.gamma}")
        sc |= 1 << sh
    else:
        sc &= ~(1 << sh)
    if rule.smove == "R":
        if sh >= P.gamma:
            raise ScratchBudgetExceeded(f"scratch head moved past cell {P.gamma}")
        sh += 1
    elif rule.smove == "L" and sh > 0:
        sh -= 1
    return sc, sh


def _rule(P: OTMProgram, q: int, tok: str, sc: int, sh: int) -> Rule:
    rule = P.table.get((q, tok, (sc >> sh) & 1))
    if rule is None:
        raise MissingTableEntry(f"no rule for ({P.states[q]}, {tok}, {(sc >> sh) & 1})")
    return rule


def _move_input(h: Ordinal, move: str, last: Ordinal, origin_is_limit: bool):
    """New head position and whether the move was a reset to the origin."""
    if move == "R":
        return (add(h, ONE) if h < last else h), False
    if move == "L":
        if h.is_zero():
            return h, origin_is_limit
        if h.is_limit():
            return ZERO, True
        return h.predecessor(), False
    return h, False


def step(P: OTMProgram, c: Configuration, w) -> Configuration:
    """One successor step on input ``w`` (a BlockWord or a Tape)."""
    if c.state in P.halting:
        raise OTMError(f"state {P.states[c.state]} is halting")
    tape = w if isinstance(w, Tape) else Tape.for_input(w)
    rule = _rule(P, c.state, tape.token(c.head), c.scratch, c.shead)
    sc, sh = _scratch_update(P, rule, c.scratch, c.shead)
    h, _ = _move_input(c.head, rule.imove, tape.last(), False)
    return Configuration(rule.next, h, sc, sh)


def limit_config(cofinal: Sequence[Configuration], drift: Optional[Ordinal] = None) -> Configuration:
    """Componentwise inferior limit of configurations occurring cofinally.

    ``drift`` is the supremum of the head positions when they increase
    without settling; otherwise the head takes the least cofinal position.
    """
    if not cofinal:
        raise OTMError("limit of an empty history")
    sc = -1
    for c in cofinal:
        sc &= c.scratch
    return Configuration(
        min(c.state for c in cofinal),
        drift if drift is not None else min(c.head for c in cofinal),
        sc,
        min(c.shead for c in cofinal),
    )


# ---------------------------------------------------------------------------
# acceleration
#
# _segment(P, s, e, ctrl) summarises the run that starts with control ctrl at
# the left end of a region of at least w^e cells all carrying symbol s, up to
# the moment the head first reaches offset w^e.  It is None when that moment
# never comes without the run halting, getting stuck, breaching the scratch
# budget, leaving the region leftwards or looping in place.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _Segment:
    exit: Tuple[int, int, int]
    low: Tuple[int, int, int]        # min state, AND of scratch, min scratch head
    ever: int                        # OR of scratch contents seen
    tau: Ordinal                     # elapsed time


def _meet(a: Tuple[int, int, int], b: Tuple[int, int, int]) -> Tuple[int, int, int]:
    return (min(a[0], b[0]), a[1] & b[1], min(a[2], b[2]))


def _segment(P: OTMProgram, sym: str, e: int, ctrl):
    cache = P._cache.setdefault("segments", {})
    key = (sym, e, ctrl)
    if key in cache:
        return cache[key]
    result = _segment_1(P, sym, ctrl) if e == 1 else _segment_up(P, sym, e, ctrl)
    cache[key] = result
    return result


def _segment_1(P: OTMProgram, sym: str, ctrl):
    seen: Dict[Tuple[int, int, int], int] = {}
    trail: List[Tuple[int, int, int]] = []
    offsets: List[int] = []
    q, sc, sh = ctrl
    off = 0
    while (q, sc, sh) not in seen:
        seen[(q, sc, sh)] = len(trail)
        trail.append((q, sc, sh))
        offsets.append(off)
        if q in P.halting:
            return None
        rule = P.table.get((q, sym, (sc >> sh) & 1))
        if rule is None:
            return None
        try:
            sc, sh = _scratch_update(P, rule, sc, sh)
        except ScratchBudgetExceeded:
            return None
        if rule.imove == "R":
            off += 1
        elif rule.imove == "L":
            if off == 0:
                return None
            off -= 1
        q = rule.next
    i = seen[(q, sc, sh)]
    if off - offsets[i] <= 0:
        return None
    exit_ = trail[i]
    for c in trail[i:]:
        exit_ = _meet(exit_, c)
    low, ever = exit_, 0
    for c in trail:
        low = _meet(low, c)
        ever |= c[1]
    return _Segment(exit_, low, ever, add(ordinal(i), OMEGA))


def _segment_up(P: OTMProgram, sym: str, e: int, ctrl):
    seen: Dict[Tuple[int, int, int], int] = {}
    parts: List[_Segment] = []
    x = ctrl
    while x not in seen:
        seen[x] = len(parts)
        part = _segment(P, sym, e - 1, x)
        if part is None:
            return None
        parts.append(part)
        x = part.exit
    i = seen[x]
    exit_ = parts[i].low
    period = ZERO
    for part in parts[i:]:
        exit_ = _meet(exit_, part.low)
        period = add(period, part.tau)
    low, ever, lead = exit_, 0, ZERO
    for k, part in enumerate(parts):
        low = _meet(low, part.low)
        ever |= part.ever
        if k < i:
            lead = add(lead, part.tau)
    return _Segment(exit_, low, ever, add(lead, multiply(period, OMEGA)))


def _result(verdict, T, cfg, ever, macro, resets, **kw) -> RunResult:
    return RunResult(verdict, T, Configuration(*cfg), ever.bit_length(), macro_steps=macro,
                     resets=resets, **kw)


def run_accelerated(P: OTMProgram, w: Optional[BlockWord] = None, fuel: int = 10_000, *,
                    tape: Optional[Tape] = None, start: Optional[Configuration] = None,
                    time: Ordinal = ZERO, stop_at: Optional[Ordinal] = None,
                    origin_is_limit: bool = False, stop_on_reset: bool = False,
                    accelerate: bool = True) -> RunResult:
    """Exact transfinite run of ``P`` on ``w`` using at most ``fuel`` macro-steps.

    A macro-step is a single successor step, a jump across ``w^e`` cells of a
    constant-symbol run, or a jump to the limit of a repeating stretch of
    configurations.  The keyword hooks serve the crossing-sequence compiler:
    ``stop_at`` ends the run (verdict ``arrived``) once the head reaches that
    position; ``stop_on_reset`` ends it (verdict ``reset``) at the first left
    move from a limit position, and ``origin_is_limit`` treats position 0 as
    such a position.
    """
    if tape is None:
        if w is None:
            raise OTMError("need an input word or a tape")
        tape = Tape.for_input(w)
    last = tape.last()
    c = start or initial_configuration()
    q, h, sc, sh = c.as_tuple()
    T = time
    ever = sc
    cap = get_depth_budget()
    history: Dict[tuple, int] = {}
    log: List[Tuple[Ordinal, Tuple[int, int, int], Ordinal]] = []  # time, low control, low head
    macro = resets = 0
    while True:
        cfg = (q, h, sc, sh)
        if q in P.halting:
            return _result(HALTED, T, cfg, ever, macro, resets, accept=P.halting[q])
        if stop_at is not None and h >= stop_at:
            return _result(ARRIVED, T, cfg, ever, macro, resets)
        if macro >= fuel:
            return _result(UNKNOWN, T, cfg, ever, macro, resets, reason="fuel")
        macro += 1
        if cfg in history:
            i = history[cfg]
            t_i = log[i][0]
            low, low_head = log[i][1], log[i][2]
            for _, lc, lh in log[i + 1:]:
                low = _meet(low, lc)
                low_head = min(low_head, lh)
            limit = (low[0], low_head, low[1], low[2])
            if limit == cfg:
                return _result(DIVERGES, T, cfg, ever, macro, resets,
                               witness=(Configuration(*cfg), t_i, T))
            try:
                T = add(t_i, multiply(left_subtract(t_i, T), OMEGA))
                if T.depth() > cap:
                    raise DepthExceeded(f"time exceeds depth budget {cap}")
            except DepthExceeded:
                return _result(UNKNOWN, T, cfg, ever, macro, resets, reason="depth")
            # the run from any time depends only on the configuration then,
            # so the history stays valid across the jump
            q, h, sc, sh = limit
            continue
        history[cfg] = len(log)
        tok = tape.token(h)
        jump = None
        if accelerate and tok not in (LH, RH):
            room = left_subtract(h, tape.block_end(h))
            if room >= OMEGA:
                top = room.leading_exponent
                top = min(int(top), cap) if top.is_finite() else cap
                for e in range(1, top + 1):
                    seg = _segment(P, tok, e, (q, sc, sh))
                    if seg is None:
                        break
                    jump = (e, seg)
        if jump is not None:
            e, seg = jump
            log.append((T, seg.low, h))
            ever |= seg.ever
            T = add(T, seg.tau)
            h = add(h, omega_power(e))
            q, sc, sh = seg.exit
            continue
        log.append((T, (q, sc, sh), h))
        try:
            rule = _rule(P, q, tok, sc, sh)
        except MissingTableEntry as exc:
            return _result(STUCK, T, cfg, ever, macro, resets, reason=str(exc))
        try:
            sc, sh = _scratch_update(P, rule, sc, sh)
        except ScratchBudgetExceeded as exc:
            return _result(BUDGET, T, cfg, ever | (1 << sh), macro, resets, reason=str(exc))
        ever |= sc
        h, was_reset = _move_input(h, rule.imove, last, origin_is_limit)
        q = rule.next
        T = add(T, ONE)
        if was_reset:
            resets += 1
            if stop_on_reset:
                return _result(RESET, T, (q, h, sc, sh), ever, macro, resets)


def run_naive(P: OTMProgram, w: BlockWord, fuel: int = 1000) -> RunResult:
    """Step-by-step reference runner (no jumps across input runs).

    Limits are reached only through repeated configurations, so on inputs
    with an infinite run of one symbol a sweep exhausts ``fuel``.
    """
    tape = Tape.for_input(w)
    last = tape.last()
    c = initial_configuration()
    T = ZERO
    ever = 0
    trace: List[Configuration] = []
    times: List[Ordinal] = []
    where: Dict[Configuration, int] = {}
    n = 0
    while True:
        if c.state in P.halting:
            return RunResult(HALTED, T, c, ever.bit_length(), accept=P.halting[c.state], macro_steps=n)
        if n >= fuel:
            return RunResult(UNKNOWN, T, c, ever.bit_length(), reason="fuel", macro_steps=n)
        n += 1
        if c in where:
            i = where[c]
            lim = limit_config(trace[i:])
            if lim == c:
                return RunResult(DIVERGES, T, c, ever.bit_length(), witness=(c, times[i], T), macro_steps=n)
            T = add(times[i], multiply(left_subtract(times[i], T), OMEGA))
            c = lim
            continue
        where[c] = len(trace)
        trace.append(c)
        times.append(T)
        try:
            rule = _rule(P, c.state, tape.token(c.head), c.scratch, c.shead)
            sc, sh = _scratch_update(P, rule, c.scratch, c.shead)
        except MissingTableEntry as exc:
            return RunResult(STUCK, T, c, ever.bit_length(), reason=str(exc), macro_steps=n)
        except ScratchBudgetExceeded as exc:
            return RunResult(BUDGET, T, c, (ever | (1 << c.shead)).bit_length(), reason=str(exc), macro_steps=n)
        ever |= sc
        h, _ = _move_input(c.head, rule.imove, last, False)
        c = Configuration(rule.next, h, sc, sh)
        T = add(T, ONE)


def space_profile(P: OTMProgram, inputs: Sequence[BlockWord], fuel: int = 10_000) -> List[dict]:
    """Per input: length, its cardinality, scratch cells used and their cardinality."""
    rows = []
    for w in inputs:
        r = run_accelerated(P, w, fuel)
        rows.append({
            "word": w,
            "length": w.length,
            "card_length": cardinality(w.length),
            "space_used": r.space_used,
            "card_space": Cardinality(r.space_used),
            "verdict": r.verdict,
            "flagged": r.verdict == UNKNOWN,
        })
    return rows


def normalize_halting(P: OTMProgram) -> OTMProgram:
    """Equivalent program that only halts with the input head on ``rh``.

    Every transition into a halting state is redirected to a fresh walker
    state that moves right until ``rh``.  Walkers come after all original
    states, so limits among original states are unaffected.
    """
    if P._cache.get("normalized"):
        return P
    states = list(P.states)
    walker = {}
    for hq in sorted(P.halting):
        walker[hq] = len(states)
        states.append(f"{P.states[hq]}~walk")
    table = {}
    for key, rule in P.table.items():
        if rule.next in walker:
            rule = replace(rule, next=walker[rule.next])
        table[key] = rule
    for hq, wq in walker.items():
        for tok in P.tokens:
            for bit in (0, 1):
                if tok == RH:
                    table[(wq, tok, bit)] = Rule(hq, bit, "S", "S")
                else:
                    table[(wq, tok, bit)] = Rule(wq, bit, "R", "S")
    out = OTMProgram(P.name, tuple(states), dict(P.halting), P.gamma, P.alphabet, table)
    if 0 in P.halting:
        # a program halting at once still has to walk to rh
        out = _prepend_start_walker(out)
    out._cache["normalized"] = True
    return out


def _prepend_start_walker(P: OTMProgram) -> OTMProgram:
    hq = 0
    names = list(P.states) + [f"{P.states[0]}~start"]
    start = len(names) - 1
    # swap the new walker into index 0
    perm = list(range(len(names)))
    perm[0], perm[start] = start, 0
    inv = {old: new for new, old in enumerate(perm)}
    table = {}
    for (q, tok, bit), r in P.table.items():
        table[(inv[q], tok, bit)] = replace(r, next=inv[r.next])
    for tok in P.tokens:
        for bit in (0, 1):
            table[(0, tok, bit)] = Rule(inv[hq], bit, "S", "S") if tok == RH else Rule(0, bit, "R", "S")
    halting = {inv[q]: acc for q, acc in P.halting.items()}
    return OTMProgram(P.name, tuple(names[i] for i in perm), halting, P.gamma, P.alphabet, table)
