"""Ordinal automata over block words.

Two finite presentations of a transition function are supported:

* :class:`LimitPresentation` -- one-step transitions per symbol plus a limit
  rule sending the set of states seen cofinally below a limit position to the
  state at that position.  Runs over a block ``s^n`` are computed by
  accelerating along the Cantor normal form of ``n``.
* :class:`TransitionOracle` -- an opaque ``D(q, w)``; coherence is not assumed
  and can be probed with :func:`check_coherence`.

Nondeterministic presentations use set-run semantics: the run is the
deterministic run of the subset automaton whose limit rule applies the
underlying rule to the union of all subset-states seen cofinally.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterable, List, Tuple

from .ordinal import DepthExceeded, Ordinal, omega_power, ordinal
from .word import (
    EPSILON, LAMBDA, AlphabetMismatch, BlockWord, concat, prefix, suffix,
)

__all__ = [
    "AutomatonError", "UndefinedTransition", "NotComplete", "LimitPresentation",
    "TransitionOracle", "RunOutcome", "CoherenceReport", "block_step", "run",
    "accepts", "transition", "check_coherence", "complete", "determinize",
    "complement", "union", "intersection", "lambda_eliminate",
    "prefix_tree_doa", "as_noa", "lambda_closure", "parse_automaton",
    "format_automaton", "AutomatonParseError",
]

State = Hashable


class AutomatonError(ValueError):
    pass


class UndefinedTransition(AutomatonError):
    pass


class NotComplete(AutomatonError):
    pass


# ---------------------------------------------------------------------------
# acceleration engine
#
# A "system" summarises the run over one block s^(w^e): for every start state
# index it stores the exit state index (-1 if undefined) and the bitmask of
# states occurring at positions strictly inside the block.
# ---------------------------------------------------------------------------

System = Tuple[Tuple[int, ...], Tuple[int, ...]]


class _Engine:
    def __init__(self, n: int, step_fn: Callable[[str], Tuple[int, ...]],
                 lim_fn: Callable[[int], int]):
        self.n = n
        self._step_fn = step_fn
        self._lim_fn = lim_fn
        self._base: Dict[str, System] = {}
        self._lim: Dict[int, int] = {}
        self._pow: Dict[Tuple[System, Ordinal], System] = {}
        self._iter: Dict[Tuple[System, object], System] = {}

    def base(self, sym: str) -> System:
        s = self._base.get(sym)
        if s is None:
            s = (tuple(self._step_fn(sym)), tuple(1 << i for i in range(self.n)))
            self._base[sym] = s
        return s

    def lim(self, mask: int) -> int:
        r = self._lim.get(mask)
        if r is None:
            r = self._lim_fn(mask)
            self._lim[mask] = r
        return r

    def omega_iterate(self, first: System, advance, tag) -> System:
        """Concatenate the segments first, advance(first), ... (omega of them)."""
        key = (first, tag)
        hit = self._iter.get(key)
        if hit is not None:
            return hit
        seq = [first]
        index = {first: 0}
        while True:
            nxt = advance(seq[-1])
            if nxt in index:
                mu = index[nxt]
                break
            index[nxt] = len(seq)
            seq.append(nxt)
        period = len(seq) - mu
        exits, occs = [], []
        for q in range(self.n):
            seen: Dict[Tuple[int, int], int] = {}
            trail: List[int] = []
            x, k = q, 0
            while True:
                ki = k if k < len(seq) else mu + (k - mu) % period
                if (x, ki) in seen:
                    cycle_from = seen[(x, ki)]
                    break
                seen[(x, ki)] = len(trail)
                exit_tab, occ_tab = seq[ki]
                y = exit_tab[x]
                if y < 0:
                    cycle_from = None
                    break
                trail.append(occ_tab[x])
                x, k = y, k + 1
            if cycle_from is None:
                exits.append(-1)
                occs.append(0)
                continue
            cof = total = 0
            for i, m in enumerate(trail):
                total |= m
                if i >= cycle_from:
                    cof |= m
            exits.append(self.lim(cof))
            occs.append(total)
        result = (tuple(exits), tuple(occs))
        self._iter[key] = result
        return result

    def power(self, system: System, e: Ordinal) -> System:
        """System for blocks of length w^e built from ``system``'s blocks."""
        if e.is_zero():
            return system
        key = (system, e)
        hit = self._pow.get(key)
        if hit is not None:
            return hit
        last_exp, last_coeff = e.terms[-1]
        if not last_exp.is_finite():
            raise DepthExceeded(f"block acceleration needs run exponents below w^w, got {e}")
        if last_coeff == 1:
            beta = Ordinal(e.terms[:-1])
        else:
            beta = Ordinal(e.terms[:-1] + ((last_exp, last_coeff - 1),))
        head = self.power(system, beta)
        if last_exp.is_zero():
            result = self.omega_iterate(head, _identity, None)
        else:
            step = omega_power(int(last_exp) - 1)
            result = self.omega_iterate(head, lambda s: self.power(s, step), step)
        self._pow[key] = result
        return result

    def block(self, x: int, sym: str, n: Ordinal) -> int:
        base = self.base(sym)
        for e, c in n.terms:
            exit_tab = self.power(base, e)[0]
            x = _iterate(exit_tab, x, c)
            if x < 0:
                return -1
        return x


def _identity(s):
    return s


def _iterate(table, x: int, times: int) -> int:
    seen = {}
    i = 0
    while i < times:
        if x < 0:
            return -1
        if x in seen:
            period = i - seen[x]
            remaining = (times - i) % period
            for _ in range(remaining):
                x = table[x]
                if x < 0:
                    return -1
            return x
        seen[x] = i
        x = table[x]
        i += 1
    return x


def _mask_members(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


# ---------------------------------------------------------------------------
# presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunOutcome:
    end: object
    defined: bool

    def accepted_by(self, automaton) -> bool:
        return automaton.is_accepting(self.end) if self.defined else False


def _as_callable(table, default):
    if callable(table):
        return table
    table = dict(table)
    return lambda *key: table.get(key[0] if len(key) == 1 else key, default)


class LimitPresentation:
    """Finite automaton over ordinal words given by steps and a limit rule.

    Parameters
    ----------
    states : iterable of hashable
    start : state
    accepting : iterable of states
    step : mapping ``(state, symbol) -> state`` or callable
        For nondeterministic presentations the value is a set of states.
    limit : mapping ``frozenset -> state`` or callable
        For nondeterministic presentations the value is a set of states.
    alphabet : iterable of symbols (may include ``lambda`` for lambda-NOAs)
    deterministic : bool
    total : bool, optional
        Declares completeness for callable tables that cannot be enumerated.
    """

    def __init__(self, states, start, accepting, step, limit, alphabet,
                 deterministic=True, total=None, name=None):
        self.states = tuple(states)
        self._index = {q: i for i, q in enumerate(self.states)}
        if len(self._index) != len(self.states):
            raise AutomatonError("duplicate states")
        if start not in self._index:
            raise AutomatonError(f"start state {start!r} not in states")
        self.start = start
        self.accepting = frozenset(accepting)
        if not self.accepting <= set(self.states):
            raise AutomatonError("accepting states must be states")
        self.alphabet = frozenset(alphabet)
        self.deterministic = deterministic
        self.name = name
        self._tables = (step, limit)
        empty = None if deterministic else frozenset()
        self._step = _as_callable(step, empty)
        self._limit = _as_callable(limit, empty)
        self._declared_total = total
        self._engine = None
        self._subset_engine = None

    # -- raw tables ------------------------------------------------------
    def step(self, q, s):
        r = self._step(q, s)
        if self.deterministic:
            return r
        return frozenset(r) if r is not None else frozenset()

    def limit(self, cofinal):
        cofinal = frozenset(cofinal)
        if not cofinal:
            return None if self.deterministic else frozenset()
        r = self._limit(cofinal)
        if self.deterministic:
            return r
        return frozenset(r) if r is not None else frozenset()

    def is_accepting(self, end) -> bool:
        if self.deterministic:
            return end in self.accepting
        return bool(frozenset(end) & self.accepting)

    def is_complete(self) -> bool:
        if not self.deterministic:
            return True
        if self._declared_total is not None:
            return self._declared_total
        for q in self.states:
            for s in self.alphabet:
                if self._step(q, s) is None:
                    return False
        for r in range(1, len(self.states) + 1):
            for combo in itertools.combinations(self.states, r):
                if self._limit(frozenset(combo)) is None:
                    return False
        return True

    # -- engines ---------------------------------------------------------
    def _det_engine(self) -> _Engine:
        if self._engine is None:
            states, index = self.states, self._index

            def step_fn(sym):
                out = []
                for q in states:
                    r = self._step(q, sym)
                    out.append(-1 if r is None else index[r])
                return out

            def lim_fn(mask):
                r = self._limit(frozenset(states[i] for i in _mask_members(mask)))
                return -1 if r is None else index[r]

            self._engine = _Engine(len(states), step_fn, lim_fn)
        return self._engine

    def _nondet_engine(self) -> _Engine:
        # subset-states are bitmasks over self.states, used directly as indices
        if self._subset_engine is None:
            states, index = self.states, self._index
            n = len(states)
            if n > 12:
                raise AutomatonError("set-run semantics limited to 12 states")

            def to_mask(qs):
                m = 0
                for q in qs:
                    m |= 1 << index[q]
                return m

            def step_fn(sym):
                single = [to_mask(self.step(q, sym)) for q in states]
                out = []
                for subset in range(1 << n):
                    m = 0
                    for i in _mask_members(subset):
                        m |= single[i]
                    out.append(m)
                return out

            def lim_fn(mask_of_subsets):
                union_mask = 0
                for subset in _mask_members(mask_of_subsets):
                    union_mask |= subset
                if not union_mask:
                    return 0
                return to_mask(self.limit(states[i] for i in _mask_members(union_mask)))

            self._subset_engine = _Engine(1 << n, step_fn, lim_fn)
        return self._subset_engine

    def _mask(self, qs) -> int:
        m = 0
        for q in qs:
            m |= 1 << self._index[q]
        return m

    def _unmask(self, m: int) -> frozenset:
        return frozenset(self.states[i] for i in _mask_members(m))

    # -- semantics -------------------------------------------------------
    def _check_symbol(self, s):
        if s not in self.alphabet:
            raise AlphabetMismatch(f"symbol {s!r} not in alphabet {sorted(self.alphabet)}")

    def block_step(self, q, s, n):
        """``D(q, s^n)``; ``None`` (or the empty set) when undefined."""
        self._check_symbol(s)
        n = ordinal(n)
        if self.deterministic:
            r = self._det_engine().block(self._index[q], s, n)
            return None if r < 0 else self.states[r]
        return self._run_set(frozenset(q), BlockWord([(s, n)]))

    def _run_set(self, qs, w: BlockWord) -> frozenset:
        eng = self._nondet_engine()
        x = self._mask(qs)
        for s, n in w.blocks:
            self._check_symbol(s)
            x = eng.block(x, s, n)
        return self._unmask(x)

    def transition(self, q, w: BlockWord):
        if self.deterministic:
            eng = self._det_engine()
            x = self._index[q]
            for s, n in w.blocks:
                self._check_symbol(s)
                x = eng.block(x, s, n)
                if x < 0:
                    return None
            return self.states[x]
        return self._run_set((q,), w)

    def transition_set(self, qs, w: BlockWord) -> frozenset:
        if self.deterministic:
            out = set()
            for q in qs:
                r = self.transition(q, w)
                if r is not None:
                    out.add(r)
            return frozenset(out)
        return self._run_set(qs, w)

    def run(self, w: BlockWord) -> RunOutcome:
        end = self.transition(self.start, w)
        if self.deterministic:
            return RunOutcome(end, end is not None)
        return RunOutcome(end, True)

    def accepts(self, w: BlockWord) -> bool:
        return self.run(w).accepted_by(self)

    def __repr__(self):
        kind = "DOA" if self.deterministic else "NOA"
        label = f" {self.name}" if self.name else ""
        return f"<{kind}{label} with {len(self.states)} states>"


class TransitionOracle:
    """Automaton given by an opaque transition function ``D(q, w)``.

    ``transition`` returns a state or ``None`` (deterministic) or a set of
    states (nondeterministic).  ``accepting`` is a set or a predicate.
    """

    def __init__(self, start, accepting, transition, deterministic=True,
                 states=None, alphabet=None, name=None):
        self.start = start
        self._accepting = accepting
        self._transition = transition
        self.deterministic = deterministic
        self.states = states
        self.alphabet = frozenset(alphabet) if alphabet is not None else None
        self.name = name

    def is_accepting(self, end) -> bool:
        pred = self._accepting if callable(self._accepting) else self._accepting.__contains__
        if self.deterministic:
            return end is not None and pred(end)
        return any(pred(q) for q in end)

    def transition(self, q, w: BlockWord):
        if self.alphabet is not None:
            for s, _ in w.blocks:
                if s not in self.alphabet:
                    raise AlphabetMismatch(f"symbol {s!r} not in alphabet")
        r = self._transition(q, w)
        if self.deterministic:
            return r
        return frozenset(r)

    def transition_set(self, qs, w: BlockWord) -> frozenset:
        out = set()
        for q in qs:
            r = self.transition(q, w)
            if self.deterministic:
                if r is not None:
                    out.add(r)
            else:
                out |= r
        return frozenset(out)

    def run(self, w: BlockWord) -> RunOutcome:
        end = self.transition(self.start, w)
        if self.deterministic:
            return RunOutcome(end, end is not None)
        return RunOutcome(end, True)

    def accepts(self, w: BlockWord) -> bool:
        return self.run(w).accepted_by(self)

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<TransitionOracle{label}>"


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def block_step(A: LimitPresentation, q, s, n):
    r = A.block_step(q, s, n)
    if A.deterministic and r is None:
        raise UndefinedTransition(f"D({q!r}, {s}^{n}) is undefined")
    return r


def transition(A, q, w: BlockWord):
    return A.transition(q, w)


def run(A, w: BlockWord) -> RunOutcome:
    return A.run(w)


def accepts(A, w: BlockWord) -> bool:
    return A.accepts(w)


@dataclass
class CoherenceReport:
    checked: int = 0
    failures: List[tuple] = field(default_factory=list)

    @property
    def passed(self) -> int:
        return self.checked - len(self.failures)

    @property
    def ok(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        return f"pass={self.passed} fail={len(self.failures)}"


def check_coherence(A, samples: Iterable[Tuple[object, BlockWord, object]]) -> CoherenceReport:
    """Compare ``D(q, w)`` with ``D(D(q, w[0,a)), w[a,|w|))`` on each sample.

    Each sample is ``(q, w, a)``.  Failures record
    ``(q, w, a, direct, composed)``.
    """
    report = CoherenceReport()
    for q, w, alpha in samples:
        alpha = ordinal(alpha)
        w1, w2 = prefix(w, alpha), suffix(w, alpha)
        direct = A.transition(q, w)
        if A.deterministic:
            mid = A.transition(q, w1)
            composed = None if mid is None else A.transition(mid, w2)
            if direct is not None and mid is None:
                composed = "<prefix undefined>"
        else:
            mid = A.transition(q, w1)
            composed = A.transition_set(mid, w2)
        report.checked += 1
        if direct != composed:
            report.failures.append((q, w, alpha, direct, composed))
    return report


def _fresh(name: str, taken) -> str:
    while name in taken:
        name += "'"
    return name


def complete(A: LimitPresentation) -> LimitPresentation:
    """Add a rejecting sink absorbing every undefined transition."""
    if not A.deterministic:
        raise AutomatonError("complete() expects a deterministic presentation")
    sink = _fresh("sink", set(A.states))

    def step(q, s):
        if q == sink:
            return sink
        r = A.step(q, s)
        return sink if r is None else r

    def limit(S):
        if sink in S:
            return sink
        r = A.limit(S)
        return sink if r is None else r

    return LimitPresentation(A.states + (sink,), A.start, A.accepting, step, limit,
                             A.alphabet, total=True, name=f"complete({A.name or ''})")


def as_noa(A: LimitPresentation) -> LimitPresentation:
    """View a deterministic presentation as a nondeterministic one."""
    if not A.deterministic:
        return A

    def step(q, s):
        r = A.step(q, s)
        return frozenset() if r is None else frozenset((r,))

    def limit(S):
        r = A.limit(S)
        return frozenset() if r is None else frozenset((r,))

    return LimitPresentation(A.states, A.start, A.accepting, step, limit, A.alphabet,
                             deterministic=False, name=A.name)


def determinize(N: LimitPresentation) -> LimitPresentation:
    """Subset construction: states are all subsets of ``N``'s states."""
    if N.deterministic:
        N = as_noa(N)
    base = N.states
    subsets = [frozenset(c) for r in range(len(base) + 1)
               for c in itertools.combinations(base, r)]
    accepting = [X for X in subsets if X & N.accepting]

    def step(X, s):
        out = set()
        for x in X:
            out |= N.step(x, s)
        return frozenset(out)

    def limit(family):
        union_ = frozenset().union(*family)
        return N.limit(union_) if union_ else frozenset()

    return LimitPresentation(subsets, frozenset((N.start,)), accepting, step, limit,
                             N.alphabet, total=True, name=f"det({N.name or ''})")


def complement(A: LimitPresentation) -> LimitPresentation:
    if not A.deterministic or not A.is_complete():
        raise NotComplete("complement() needs a complete deterministic presentation")
    flipped = frozenset(A.states) - A.accepting
    return LimitPresentation(A.states, A.start, flipped, A.step, A.limit, A.alphabet,
                             total=True, name=f"not({A.name or ''})")


def union(A1: LimitPresentation, A2: LimitPresentation) -> LimitPresentation:
    """NOA with a fresh start forwarding to both components."""
    if A1.alphabet != A2.alphabet:
        raise AlphabetMismatch(f"{sorted(A1.alphabet)} vs {sorted(A2.alphabet)}")
    N1, N2 = as_noa(A1), as_noa(A2)
    start = (0, "start")
    states = [start] + [(1, q) for q in N1.states] + [(2, q) for q in N2.states]
    accepting = {(1, q) for q in N1.accepting} | {(2, q) for q in N2.accepting}
    if N1.start in N1.accepting or N2.start in N2.accepting:
        accepting.add(start)

    def tag(i, qs):
        return frozenset((i, q) for q in qs)

    def step(q, s):
        if q == start:
            return tag(1, N1.step(N1.start, s)) | tag(2, N2.step(N2.start, s))
        i, inner = q
        return tag(i, (N1 if i == 1 else N2).step(inner, s))

    def limit(S):
        # componentwise: the start state is never revisited
        out = frozenset()
        for i, N in ((1, N1), (2, N2)):
            part = frozenset(q for j, q in S if j == i)
            if part:
                out |= tag(i, N.limit(part))
        return out

    return LimitPresentation(states, start, accepting, step, limit, A1.alphabet,
                             deterministic=False,
                             name=f"union({A1.name or ''},{A2.name or ''})")


def intersection(A1: LimitPresentation, A2: LimitPresentation) -> LimitPresentation:
    """De Morgan: complement of the union of the complements."""
    c1 = complement(A1 if A1.is_complete() else complete(A1))
    c2 = complement(A2 if A2.is_complete() else complete(A2))
    return complement(determinize(union(c1, c2)))


def lambda_closure(A: LimitPresentation, qs, depth: int = 3) -> frozenset:
    """States reachable from ``qs`` by lambda-only words.

    Reachability is explored with lambda blocks of lengths w^k, k < ``depth``+1,
    applied in any order from every reached subset.
    """
    if LAMBDA not in A.alphabet:
        return frozenset(qs)
    start = frozenset(qs)
    seen = {start}
    frontier = [start]
    runs = [omega_power(k) for k in range(depth + 1)]
    while frontier:
        X = frontier.pop()
        for n in runs:
            Y = A.transition_set(X, BlockWord([(LAMBDA, n)]))
            if Y not in seen:
                seen.add(Y)
                frontier.append(Y)
    return frozenset().union(*seen)


def lambda_eliminate(A: LimitPresentation) -> LimitPresentation:
    """NOA over the non-lambda symbols accepting the lambda-NOA's language."""
    N = as_noa(A)
    sigma = frozenset(N.alphabet) - {LAMBDA}
    closures: Dict[object, frozenset] = {}

    def close(qs):
        key = frozenset(qs)
        hit = closures.get(key)
        if hit is None:
            hit = lambda_closure(N, key)
            closures[key] = hit
        return hit

    start = _fresh("lambda-start", set(N.states))

    def step(q, s):
        src = N.start if q == start else q
        out = set()
        for x in close((src,)):
            out |= N.step(x, s)
        return close(out)

    def limit(S):
        S = frozenset(S) - {start}
        return close(N.limit(S)) if S else frozenset()

    accepting = set(N.accepting)
    if close((N.start,)) & N.accepting:
        accepting.add(start)
    return LimitPresentation((start,) + N.states, start, accepting, step, limit, sigma,
                             deterministic=False, name=f"elim({A.name or ''})")


def prefix_tree_doa(S: Iterable[BlockWord], alphabet=None) -> TransitionOracle:
    """Complete DOA accepting exactly the finite set ``S``.

    States are the initial segments of members of ``S`` plus a dead state;
    they are materialised only when reached.
    """
    members = frozenset(S)
    dead = ("dead",)
    if alphabet is None:
        alphabet = frozenset().union(*(w.symbols() for w in members)) if members else None

    def is_prefix(x: BlockWord, m: BlockWord) -> bool:
        return x.length <= m.length and prefix(m, x.length) == x

    def D(q, w):
        if q == dead:
            return dead
        x = concat(q, w)
        return x if any(is_prefix(x, m) for m in members) else dead

    return TransitionOracle(EPSILON, lambda q: q in members, D, alphabet=None,
                            name="prefix-tree")


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------

class AutomatonParseError(AutomatonError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_HEADERS = ("kind", "name", "alphabet", "states", "start", "accept", "step", "limit")


def parse_automaton(text: str) -> LimitPresentation:
    """Parse the sectioned automaton format.

    ::

        kind: doa            # or noa
        alphabet: 0 1
        states: z1 z2
        start: z1
        accept: z2
        step:
          z1, 0 -> z1
          z1, 1 -> z2
        limit:
          {z1} -> z1
          {z2} -> z2

    Nondeterministic targets list several states (``p, 1 -> p q``); an empty
    target is written ``{}``.
    """
    fields: Dict[str, str] = {}
    steps: List[Tuple[int, str]] = []
    limits: List[Tuple[int, str]] = []
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        head, sep, rest = line.strip().partition(":")
        if sep and head.strip() in _HEADERS and not line[0].isspace():
            key = head.strip()
            if key in fields or (key in ("step", "limit") and section == key):
                raise AutomatonParseError(f"duplicate section {key!r}", lineno)
            section = key
            if key in ("step", "limit"):
                if rest.strip():
                    (steps if key == "step" else limits).append((lineno, rest.strip()))
            else:
                fields[key] = rest.strip()
            continue
        if section == "step":
            steps.append((lineno, line.strip()))
        elif section == "limit":
            limits.append((lineno, line.strip()))
        else:
            raise AutomatonParseError(f"unexpected line {line.strip()!r}", lineno)
    for key in ("alphabet", "states", "start"):
        if key not in fields:
            raise AutomatonParseError(f"missing section {key!r}", 1)
    kind = fields.get("kind", "doa").lower()
    if kind not in ("doa", "noa"):
        raise AutomatonParseError(f"unknown kind {kind!r}", 1)
    det = kind == "doa"
    states = fields["states"].split()
    known = set(states)
    alphabet = fields["alphabet"].split()

    def targets(text: str, lineno: int):
        text = text.strip()
        if text in ("{}", "-"):
            names = []
        else:
            names = text.strip("{}").replace(",", " ").split()
        for n in names:
            if n not in known:
                raise AutomatonParseError(f"unknown state {n!r}", lineno)
        if det:
            if len(names) != 1:
                raise AutomatonParseError("deterministic rule needs exactly one target", lineno)
            return names[0]
        return frozenset(names)

    step_table = {}
    for lineno, entry in steps:
        lhs, arrow, rhs = entry.partition("->")
        parts = [p.strip() for p in lhs.split(",")]
        if not arrow or len(parts) != 2:
            raise AutomatonParseError("expected 'state, symbol -> target'", lineno)
        q, s = parts
        if q not in known:
            raise AutomatonParseError(f"unknown state {q!r}", lineno)
        if s not in alphabet:
            raise AutomatonParseError(f"symbol {s!r} not in alphabet", lineno, entry.index(s) + 1)
        step_table[(q, s)] = targets(rhs, lineno)
    limit_table = {}
    for lineno, entry in limits:
        lhs, arrow, rhs = entry.partition("->")
        lhs = lhs.strip()
        if not arrow or not (lhs.startswith("{") and lhs.endswith("}")):
            raise AutomatonParseError("expected '{states} -> target'", lineno)
        members = lhs[1:-1].replace(",", " ").split()
        if not members:
            raise AutomatonParseError("limit rule needs a non-empty set", lineno)
        for n in members:
            if n not in known:
                raise AutomatonParseError(f"unknown state {n!r}", lineno)
        limit_table[frozenset(members)] = targets(rhs, lineno)
    try:
        return LimitPresentation(states, fields["start"], fields.get("accept", "").split(),
                                 step_table, limit_table, alphabet, deterministic=det,
                                 name=fields.get("name"))
    except AutomatonError as exc:
        raise AutomatonParseError(str(exc), 1) from None


def format_automaton(A: LimitPresentation) -> str:
    """Inverse of :func:`parse_automaton` for table-backed presentations."""
    step, limit = A._tables
    if callable(step) or callable(limit):
        raise AutomatonError("only table-backed presentations can be formatted")
    order = {q: i for i, q in enumerate(A.states)}

    def show(target):
        if A.deterministic:
            return str(target)
        return " ".join(sorted(map(str, target), key=lambda n: order.get(n, 0))) or "{}"

    lines = [f"kind: {'doa' if A.deterministic else 'noa'}"]
    if A.name:
        lines.append(f"name: {A.name}")
    lines += [
        f"alphabet: {' '.join(sorted(A.alphabet))}",
        f"states: {' '.join(map(str, A.states))}",
        f"start: {A.start}",
        f"accept: {' '.join(str(q) for q in A.states if q in A.accepting)}",
        "step:",
    ]
    for (q, s) in sorted(step, key=lambda k: (order[k[0]], k[1])):
        lines.append(f"  {q}, {s} -> {show(step[(q, s)])}")
    lines.append("limit:")
    for S in sorted(limit, key=lambda S: (len(S), sorted(order[q] for q in S))):
        members = " ".join(str(q) for q in sorted(S, key=order.get))
        lines.append(f"  {{{members}}} -> {show(limit[S])}")
    return "\n".join(lines) + "\n"
