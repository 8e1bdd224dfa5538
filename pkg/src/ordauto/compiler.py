"""Crossing-sequence compilation of constant-space OTM programs.

A run of a (normalized) program splits into passes: a pass starts with the
head on cell 0 and ends when the head jumps back to 0 from a limit position,
or when the machine halts on ``rh``.  Within a pass the head never moves left
across a limit position, so what a pass does to the right of a cell depends
only on its control (state, scratch contents, scratch head), the offset of
the cell inside its omega-block and the block content up to that cell.  That
triple is a :class:`Snippet`.

The compiled automaton guesses (by a single initial lambda move) the
sequence ``z`` of controls at which the passes start, then tracks one
snippet per pass deterministically while reading the input.
"""
from __future__ import annotations

import hashlib
import itertools
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .automaton import TransitionOracle
from .ordinal import ONE, ZERO, add, ordinal
from .otm import (
    ARRIVED, HALTED, RESET, UNKNOWN, OTMError, OTMProgram, Configuration, Tape, format_program,
    normalize_halting, run_accelerated,
)
from .word import LH, RH, BlockWord, format_word

__all__ = [
    "Snippet", "Outcome", "EMPTY", "CrossingSequence", "CompiledAutomaton", "BoundTooSmall",
    "HandleError", "local_successor", "compile_program", "default_bound", "control_count",
    "initial_snippet", "cross_validate", "ValidationReport", "make_handle", "parse_handle",
]

Control = Tuple[int, int, int]  # state, scratch bits, scratch head


class BoundTooSmall(OTMError):
    pass


class HandleError(OTMError):
    pass


@dataclass(frozen=True)
class Snippet:
    """Control ``s`` with the head ``i`` cells into its omega-block, ``f`` being those cells.

    In the first block ``f`` starts with the left-end marker ``lh``.
    """
    s: Control
    i: int
    f: Tuple[str, ...]

    def __post_init__(self):
        if self.i != len(self.f):
            raise ValueError("snippet offset must equal the length of its block content")

    @property
    def in_first_block(self) -> bool:
        return bool(self.f) and self.f[0] == LH

    def __str__(self):
        q, sc, sh = self.s
        return f"({q},{sc:b},{sh}|{self.i}|{' '.join(self.f) or 'eps'})"


@dataclass(frozen=True)
class Outcome:
    """Non-snippet result of :func:`local_successor`.

    ``kind`` is ``reset`` (the head went back to cell 0; printed as the empty
    set), ``halted``, ``diverges``, ``stuck``, ``budget`` or ``unknown``.
    """
    kind: str
    control: Optional[Control] = None
    accept: Optional[bool] = None

    def __str__(self):
        return "∅" if self.kind == RESET else self.kind


EMPTY = Outcome(RESET)
_DONE = "reset-matched"


@dataclass(frozen=True)
class CrossingSequence:
    """Controls at which successive passes start, at most ``bound`` of them."""
    entries: Tuple[Control, ...]
    bound: int

    def __post_init__(self):
        if not self.entries:
            raise ValueError("a crossing sequence has at least one entry")
        if len(self.entries) > self.bound:
            raise BoundTooSmall(f"{len(self.entries)} passes exceed the bound {self.bound}")

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)


def control_count(P: OTMProgram) -> int:
    return len(P.states) * (2 ** P.gamma) * (P.gamma + 1)


def default_bound(P: OTMProgram) -> int:
    """Two times the number of controls of the normalized program.

    A halting run never starts two passes with the same control, so the
    number of controls already bounds every crossing sequence that matters.
    """
    return control_count(normalize_halting(P)) * 2


def _tape_for(snippet: Snippet, w: BlockWord) -> Tape:
    return Tape([(tok, ONE) for tok in snippet.f] + list(w.blocks) + [(RH, ONE)])


def _tokens_tail(f: Tuple[str, ...], w: BlockWord, n: int) -> Tuple[str, ...]:
    """The last ``n`` tokens of ``f`` followed by ``w`` (``n`` finite)."""
    out: List[str] = []
    for sym, run in reversed(w.blocks):
        if len(out) >= n:
            break
        take = n - len(out)
        if run.is_finite():
            take = min(take, int(run))
        out.extend([sym] * take)
    if len(out) < n:
        out.extend(reversed(f[len(f) - (n - len(out)):]))
    return tuple(reversed(out))


def _arrival(snippet: Snippet, w: BlockWord, control: Control) -> Snippet:
    total = add(ordinal(snippet.i), w.length)
    n = int(total.finite_part)
    if total.is_finite():
        return Snippet(control, n, snippet.f + _tokens_tail((), w, n))
    return Snippet(control, n, _tokens_tail((), w, n))


def _simulate(P: OTMProgram, snippet: Snippet, w: BlockWord, fuel: int, stop: bool):
    tape = _tape_for(snippet, w)
    q, sc, sh = snippet.s
    r = run_accelerated(
        P, tape=tape, start=Configuration(q, ordinal(snippet.i), sc, sh), fuel=fuel,
        stop_at=tape.last() if stop else None,
        origin_is_limit=not snippet.in_first_block, stop_on_reset=True,
    )
    c = r.config
    control = (c.state, c.scratch, c.shead)
    if r.verdict == ARRIVED:
        return _arrival(snippet, w, control)
    if r.verdict == RESET:
        return Outcome(RESET, control)
    if r.verdict == HALTED:
        return Outcome(HALTED, control, r.accept)
    return Outcome(r.verdict, control)


def local_successor(P: OTMProgram, q: Snippet, w: BlockWord, z: Optional[Sequence[Control]] = None,
                    fuel: int = 10_000) -> Union[Snippet, Outcome]:
    """Continue the pass standing at ``q`` over ``w`` until it first reaches the cell after ``w``.

    Returns the snippet there, :data:`EMPTY` when the head goes back to cell 0
    first (unless ``z`` is given and the reset control is among its entries,
    in which case the reset outcome carries that control), or an
    :class:`Outcome` for halting, looping, getting stuck, exceeding the
    scratch budget or running out of fuel.
    """
    out = _simulate(P, q, w, fuel, stop=True)
    if isinstance(out, Outcome) and out.kind == RESET and (z is None or out.control not in z):
        return EMPTY
    return out


def initial_snippet(P: OTMProgram, control: Control, fuel: int = 10_000) -> Union[Snippet, Outcome]:
    """Where a pass starting on cell 0 with ``control`` first reaches cell 1."""
    return _first_cell(P, control, fuel)


def _first_cell(P: OTMProgram, control: Control, fuel: int):
    tape = Tape([(LH, ONE), (RH, ONE)])
    q, sc, sh = control
    r = run_accelerated(P, tape=tape, start=Configuration(q, ZERO, sc, sh), fuel=fuel, stop_at=ONE,
                        stop_on_reset=True)
    c = r.config
    if r.verdict == ARRIVED:
        return Snippet((c.state, c.scratch, c.shead), 1, (LH,))
    return Outcome(r.verdict, (c.state, c.scratch, c.shead), r.accept)


# ---------------------------------------------------------------------------
# the compiled automaton
# ---------------------------------------------------------------------------

@dataclass
class CompiledAutomaton:
    """Lambda-NOA for a normalized program, with lazily built components ``A_z``.

    States are :data:`START` and pairs ``(z, statuses)``; ``statuses`` holds
    one snippet per pass still running to the right, or a marker for a pass
    that already went back to cell 0 with the control the next entry of ``z``
    expects.  From :data:`START` the only moves are lambda moves, one per
    crossing sequence; every other transition is single-valued.
    """
    program: OTMProgram
    bound: int
    fuel: int = 10_000
    source: Optional[OTMProgram] = None
    _memo: Dict = field(default_factory=dict, repr=False)
    _final: Dict = field(default_factory=dict, repr=False)
    stats: Dict[str, int] = field(default_factory=lambda: {"local": 0, "hits": 0, "max_passes": 0,
                                                          "over_bound": 0})

    START = "q0"

    # -- pieces ------------------------------------------------------------------

    def controls(self) -> Iterator[Control]:
        P = self.program
        return itertools.product(range(len(P.states)), range(2 ** P.gamma), range(P.gamma + 1))

    @property
    def start_control(self) -> Control:
        return (0, 0, 0)

    def sequences(self, max_len: Optional[int] = None) -> Iterator[CrossingSequence]:
        """Seq_P truncated to the bound, shortest first, lazily."""
        top = self.bound if max_len is None else min(max_len, self.bound)
        controls = list(self.controls())
        for n in range(1, top + 1):
            for rest in itertools.product(controls, repeat=n - 1):
                yield CrossingSequence((self.start_control,) + rest, self.bound)

    def _local(self, snippet: Snippet, w: BlockWord):
        key = (snippet, w)
        hit = self._memo.get(key)
        if hit is not None:
            self.stats["hits"] += 1
            return hit
        self.stats["local"] += 1
        out = _simulate(self.program, snippet, w, self.fuel, stop=True)
        self._memo[key] = out
        return out

    def _finish(self, snippet: Snippet):
        out = self._final.get(snippet)
        if out is None:
            out = _simulate(self.program, snippet, BlockWord(), self.fuel, stop=False)
            self._final[snippet] = out
        return out

    def component_start(self, z: CrossingSequence):
        statuses = []
        for c in z:
            s = self._first_cell_cached(c)
            if not isinstance(s, Snippet):
                if s.kind == RESET:
                    raise AssertionError("cell 0 is not a limit position")
                return None
            statuses.append(s)
        return (z, tuple(statuses))

    def _first_cell_cached(self, c: Control):
        key = ("first", c)
        if key not in self._memo:
            self._memo[key] = _first_cell(self.program, c, self.fuel)
        return self._memo[key]

    def component_step(self, state, w: BlockWord):
        """``D_z``: advance every pass over ``w``; ``None`` when undefined."""
        if state is None:
            return None
        z, statuses = state
        if w.is_empty():
            return state
        out = []
        for j, st in enumerate(statuses):
            if st == _DONE:
                out.append(st)
                continue
            nxt = self._local(st, w)
            if isinstance(nxt, Snippet):
                out.append(nxt)
            elif nxt.kind == RESET and j + 1 < len(z) and z.entries[j + 1] == nxt.control:
                out.append(_DONE)
            else:
                return None
        return (z, tuple(out))

    def component_accepting(self, state) -> bool:
        """``F_z``: every pass but the last returns to cell 0 as ``z`` predicts; the last accepts."""
        if state is None:
            return False
        z, statuses = state
        m = len(statuses)
        for j, st in enumerate(statuses):
            if st == _DONE:
                if j == m - 1:
                    return False
                continue
            end = self._finish(st)
            if j < m - 1:
                if not (end.kind == RESET and end.control == z.entries[j + 1]):
                    return False
            elif not (end.kind == HALTED and end.accept):
                return False
        return True

    def component(self, z: CrossingSequence) -> TransitionOracle:
        """The deterministic component ``A_z`` as a transition oracle."""
        return TransitionOracle(
            start=self.component_start(z),
            accepting=self.component_accepting,
            transition=self.component_step,
            deterministic=True,
            alphabet=self.program.alphabet,
            name=f"{self.program.name}[z={len(z)}]",
        )

    # -- automaton interface -----------------------------------------------------

    def lambda_successors(self, max_len: Optional[int] = None):
        for z in self.sequences(max_len):
            yield self.component_start(z)

    def transition(self, q, w: BlockWord):
        """Deterministic moves of the components; ``START`` only admits lambda moves."""
        if q == self.START:
            return q if w.is_empty() else None
        return self.component_step(q, w)

    def accepts_exhaustive(self, w: BlockWord, max_len: Optional[int] = None) -> bool:
        """Acceptance by trying every guess in Seq_P (small bounds only)."""
        for z in self.sequences(max_len):
            if self.component_accepting(self.component_step(self.component_start(z), w)):
                return True
        return False

    def guess(self, w: BlockWord) -> Optional[CrossingSequence]:
        """The unique accepting guess for ``w``, found depth first, or ``None``.

        Passes evolve independently, so only guesses whose next entry equals
        the control a pass actually returns with can ever be accepted.
        """
        z: List[Control] = [self.start_control]
        while True:
            if len(z) > self.stats["max_passes"]:
                self.stats["max_passes"] = len(z)
            seq = CrossingSequence(tuple(z), self.bound)
            st = self._first_cell_cached(z[-1])
            if not isinstance(st, Snippet):
                return None
            if not w.is_empty():
                st = self._local(st, w)
                if not isinstance(st, Snippet):
                    if st.kind != RESET:
                        return None
                    nxt = st.control
                else:
                    nxt = None
            else:
                nxt = None
            if nxt is None:
                end = self._finish(st)
                if end.kind == HALTED:
                    return seq if end.accept else None
                if end.kind != RESET:
                    return None
                nxt = end.control
            if nxt in z or len(z) >= self.bound:
                if nxt not in z:
                    self.stats["over_bound"] += 1
                return None
            z.append(nxt)

    def accepts(self, w: BlockWord) -> bool:
        z = self.guess(w)
        if z is None:
            return False
        return self.component_accepting(self.component_step(self.component_start(z), w))


def compile_program(P: OTMProgram, bound: Optional[int] = None, fuel: int = 10_000) -> CompiledAutomaton:
    """Compile ``P`` (normalized first so that it halts only on ``rh``)."""
    N = normalize_halting(P)
    B = default_bound(P) if bound is None else int(bound)
    if B < 1:
        raise ValueError("bound must be at least 1")
    return CompiledAutomaton(N, B, fuel, source=P)


# ---------------------------------------------------------------------------
# handles and validation
# ---------------------------------------------------------------------------

def _digest(P: OTMProgram, bound: int) -> str:
    return hashlib.sha256(f"{format_program(P)}\n#B={bound}".encode()).hexdigest()[:8]


def make_handle(label: str, A: CompiledAutomaton) -> str:
    return f"{label}#B={A.bound}#sha={_digest(A.source or A.program, A.bound)}"


def parse_handle(handle: str) -> Tuple[str, int, str]:
    try:
        label, b, sha = handle.rsplit("#", 2)
        if not b.startswith("B=") or not sha.startswith("sha="):
            raise ValueError
        return label, int(b[2:]), sha[4:]
    except ValueError:
        raise HandleError(f"malformed handle {handle!r}; expected <program>#B=<bound>#sha=<hex>") from None


def compile_from_handle(P: OTMProgram, handle: str, fuel: int = 10_000) -> CompiledAutomaton:
    _, bound, sha = parse_handle(handle)
    if _digest(P, bound) != sha:
        raise HandleError("handle does not match this program")
    return compile_program(P, bound, fuel)


@dataclass
class ValidationReport:
    rows: List[dict]
    bound: int
    control_bound: int

    @property
    def decided(self) -> List[dict]:
        return [r for r in self.rows if not r["flagged"]]

    @property
    def mismatches(self) -> List[dict]:
        return [r for r in self.decided if r["direct"] != r["compiled"]]

    @property
    def agreement(self) -> float:
        d = self.decided
        return 1.0 if not d else (len(d) - len(self.mismatches)) / len(d)

    @property
    def max_crossing(self) -> int:
        """Longest crossing sequence (number of passes) seen in a halting direct run."""
        return max((r["passes"] for r in self.decided if r["verdict"] == HALTED), default=0)

    @property
    def flagged(self) -> List[dict]:
        return [r for r in self.rows if r["flagged"]]

    @property
    def bound_too_small(self) -> bool:
        return self.max_crossing > self.bound

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.bound_too_small

    def summary(self) -> str:
        return f"agreement={self.agreement:.4f} mismatches={len(self.mismatches)} maxcs={self.max_crossing}"

    def lines(self) -> List[str]:
        out = []
        shown = self.mismatches[:20]
        for r in shown:
            out.append(f"mismatch word={format_word(r['word'])} direct={str(r['direct']).lower()} "
                       f"compiled={str(r['compiled']).lower()} passes={r['passes']}")
        if len(self.mismatches) > len(shown):
            out.append(f"... {len(self.mismatches) - len(shown)} more mismatches")
        for r in self.flagged:
            out.append(f"flagged word={format_word(r['word'])} verdict={r['verdict']} (excluded)")
        if self.bound_too_small:
            out.append(f"warning: bound {self.bound} is below the observed crossing length "
                       f"{self.max_crossing}")
        out.append(f"decided={len(self.decided)} flagged={len(self.flagged)} bound={self.bound} "
                   f"controls={self.control_bound}")
        return out


def cross_validate(P: OTMProgram, A: CompiledAutomaton, samples: Sequence[BlockWord],
                   fuel: int = 10_000) -> ValidationReport:
    """Compare direct simulation of ``P`` with ``A`` on every sample."""
    rows = []
    for w in samples:
        r = run_accelerated(P, w, fuel)
        flagged = r.verdict == UNKNOWN
        rows.append({
            "word": w,
            "verdict": r.verdict,
            "direct": r.accepted,
            "compiled": None if flagged else A.accepts(w),
            "passes": r.passes,
            "flagged": flagged,
        })
    return ValidationReport(rows, A.bound, control_count(A.program))
