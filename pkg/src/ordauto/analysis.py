"""Language oracles, Myhill-Nerode tooling, fooling sets and pumping."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .automaton import TransitionOracle
from .ordinal import ZERO, Ordinal, left_subtract, multiply, ordinal
from .word import EPSILON, BlockWord, concat, power, prefix, projection_stats, slice_word, suffix

__all__ = [
    "AnalysisError", "OutOfModel", "PreconditionError", "NoRepeat", "NotClosed",
    "Inconsistent", "LanguageOracle", "ORACLES", "get_oracle", "membership",
    "counting_word", "ordinal_sqrt", "FoolingCertificate", "fooling_certify",
    "nerode_partition", "quotient_doa", "PumpDecomposition", "find_pump", "verify_pump",
]


class AnalysisError(ValueError):
    pass


class OutOfModel(AnalysisError):
    """The word lies outside the oracle's representable domain."""


class PreconditionError(AnalysisError):
    pass


class NoRepeat(AnalysisError):
    pass


class NotClosed(AnalysisError):
    pass


class Inconsistent(AnalysisError):
    pass


@dataclass(frozen=True)
class LanguageOracle:
    id: str
    predicate: Callable[[BlockWord], bool]
    description: str = ""

    def __call__(self, w: BlockWord) -> bool:
        return self.predicate(w)


def _unary_length(w: BlockWord, symbol: str = "1") -> Optional[Ordinal]:
    if any(s != symbol for s, _ in w.blocks):
        return None
    return w.length


def _l0(w: BlockWord) -> bool:
    # 0^a 1^b with b > 0
    syms = [s for s, _ in w.blocks]
    return syms in (["1"], ["0", "1"])


def _l1(w: BlockWord) -> bool:
    b = w.blocks
    if not b:
        return True
    return len(b) == 2 and b[0][0] == "0" and b[1][0] == "1" and b[0][1] == b[1][1]


def _l2(w: BlockWord) -> bool:
    n = _unary_length(w)
    return n is not None and len(n.terms) == 1 and n.terms[0][1] == 1


def ordinal_sqrt(g: Ordinal) -> Optional[Ordinal]:
    """The unique ``a`` with ``a*a == g``, or ``None``."""
    g = ordinal(g)
    if g.is_finite():
        n = int(g)
        r = math.isqrt(n)
        return ordinal(r) if r * r == n else None
    (lead_exp, lead_coeff) = g.terms[0]
    # the leading exponent must be x + x for some x > 0
    x_lead, x_coeff = lead_exp.terms[0]
    if x_coeff % 2:
        return None
    x = Ordinal(((x_lead, x_coeff // 2),) + lead_exp.terms[1:])
    terms = [(x, lead_coeff)]
    finite = 0
    for e, c in g.terms[1:]:
        if e > x:
            terms.append((left_subtract(x, e), c))
        elif e == x:
            if c % lead_coeff:
                return None
            finite = c // lead_coeff
            break
        else:
            return None
    if finite:
        terms.append((ZERO, finite))
    candidate = Ordinal(tuple(terms))
    if any(terms[i][0] <= terms[i + 1][0] for i in range(len(terms) - 1)):
        return None
    return candidate if multiply(candidate, candidate) == g else None


def _l3(w: BlockWord) -> bool:
    n = _unary_length(w)
    return n is not None and ordinal_sqrt(n) is not None


def counting_word(n: int) -> BlockWord:
    """Concatenation of ``0^i 1`` for ``i < n``."""
    blocks = []
    for i in range(n):
        blocks += [("0", i), ("1", 1)]
    return BlockWord(blocks)


def _l_count(w: BlockWord) -> bool:
    if not w.length.is_finite():
        raise OutOfModel("counting words of infinite length have infinitely many blocks")
    b = list(w.blocks)
    i, expected = 0, 0
    while i < len(b):
        if expected:
            if b[i] != ("0", ordinal(expected)):
                return False
            i += 1
        if i >= len(b) or b[i] != ("1", ordinal(1)):
            return False
        i += 1
        expected += 1
    return True


def _otp_equal(w: BlockWord) -> bool:
    return projection_stats(w, "0")[0] == projection_stats(w, "1")[0]


def _card_equal(w: BlockWord) -> bool:
    return projection_stats(w, "0")[1] == projection_stats(w, "1")[1]


ORACLES: Dict[str, LanguageOracle] = {
    o.id: o for o in (
        LanguageOracle("L0", _l0, "0^a 1^b with b > 0"),
        LanguageOracle("L1_equal", _l1, "0^a 1^a"),
        LanguageOracle("L2_omega_powers", _l2, "1^(w^a)"),
        LanguageOracle("L3_squares", _l3, "1^(a*a)"),
        LanguageOracle("L_count", _l_count, "1, 101, 101001, ... (finite words only)"),
        LanguageOracle("L_otp_equal", _otp_equal, "equal order types of 0- and 1-positions"),
        LanguageOracle("L_card_equal", _card_equal, "equal cardinalities of 0- and 1-positions"),
    )
}


def get_oracle(name) -> LanguageOracle:
    if isinstance(name, LanguageOracle):
        return name
    try:
        return ORACLES[name]
    except KeyError:
        raise KeyError(f"unknown language {name!r}; choose from {', '.join(ORACLES)}") from None


def membership(L, w: BlockWord) -> bool:
    return get_oracle(L)(w)


# -- fooling sets and Nerode classes ------------------------------------------

@dataclass
class FoolingCertificate:
    language: str
    prefixes: List[BlockWord]
    witness: Dict[Tuple[int, int], BlockWord] = field(default_factory=dict)
    unseparated: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def certified(self) -> bool:
        return not self.unseparated

    @property
    def size(self) -> int:
        """Certified lower bound on the state count of any DOA for the language."""
        return len(self.prefixes) if self.certified else 0

    def verify(self, L=None) -> bool:
        """Re-evaluate every witness from scratch."""
        L = get_oracle(L if L is not None else self.language)
        n = len(self.prefixes)
        for i in range(n):
            for j in range(i + 1, n):
                e = self.witness.get((i, j))
                if e is None:
                    return False
                if L(concat(self.prefixes[i], e)) == L(concat(self.prefixes[j], e)):
                    return False
        return True


def _signature(L: LanguageOracle, x: BlockWord, extensions) -> Tuple[bool, ...]:
    return tuple(L(concat(x, e)) for e in extensions)


def fooling_certify(L, prefixes: Sequence[BlockWord],
                    extensions: Sequence[BlockWord]) -> FoolingCertificate:
    L = get_oracle(L)
    prefixes, extensions = list(prefixes), list(extensions)
    table = [_signature(L, x, extensions) for x in prefixes]
    cert = FoolingCertificate(L.id, prefixes)
    for i in range(len(prefixes)):
        for j in range(i + 1, len(prefixes)):
            k = next((k for k, (a, b) in enumerate(zip(table[i], table[j])) if a != b), None)
            if k is None:
                cert.unseparated.append((i, j))
            else:
                cert.witness[(i, j)] = extensions[k]
    return cert


def nerode_partition(L, prefixes: Sequence[BlockWord],
                     extensions: Sequence[BlockWord]) -> List[List[BlockWord]]:
    """Group prefixes that no supplied extension separates (sampled classes)."""
    L = get_oracle(L)
    classes: Dict[Tuple[bool, ...], List[BlockWord]] = {}
    for x in prefixes:
        classes.setdefault(_signature(L, x, extensions), []).append(x)
    return list(classes.values())


def quotient_doa(L, representatives, generators: Sequence[BlockWord],
                 extensions: Optional[Sequence[BlockWord]] = None) -> TransitionOracle:
    """DOA on sampled Nerode classes.

    ``representatives`` is a list of words or a list of classes (lists of
    words); each class is represented by its first member.  Classes are told
    apart by membership of ``x . e`` for ``e`` in ``extensions`` (default: the
    empty word and the generators).
    """
    L = get_oracle(L)
    classes = [list(r) if isinstance(r, (list, tuple)) else [r] for r in representatives]
    for cls in classes:
        verdicts = {L(x) for x in cls}
        if len(verdicts) > 1:
            raise Inconsistent(f"class of {cls[0]} mixes members and non-members")
    if extensions is None:
        extensions = [EPSILON] + list(generators)
    reps = [cls[0] for cls in classes]
    index: Dict[Tuple[bool, ...], int] = {}
    for i, r in enumerate(reps):
        index.setdefault(_signature(L, r, extensions), i)
    start = index.get(_signature(L, EPSILON, extensions))
    if start is None:
        raise NotClosed("the empty word matches no representative")
    for r in reps:
        for g in generators:
            if _signature(L, concat(r, g), extensions) not in index:
                raise NotClosed(f"{r} . {g} matches no representative")
    accepting = frozenset(i for i, r in enumerate(reps) if L(r))

    def D(q, w):
        return index.get(_signature(L, concat(reps[q], w), extensions))

    return TransitionOracle(start, accepting, D, states=tuple(range(len(reps))),
                            name=f"quotient({L.id})")


# -- pumping ------------------------------------------------------------------

@dataclass(frozen=True)
class PumpDecomposition:
    alpha: Ordinal
    beta: Ordinal
    head: BlockWord
    v: BlockWord
    tail: BlockWord

    def pumped(self, i: int) -> BlockWord:
        return concat(concat(self.head, power(self.v, i)), self.tail)


def find_pump(A, w: BlockWord, checkpoints: Sequence) -> PumpDecomposition:
    """Two checkpoints with equal run states; the shortest gap wins.

    The pumped part is the half-open interval ``[alpha, beta)``, the tail
    starts at ``beta``.
    """
    pts = [ordinal(c) for c in checkpoints]
    n_states = len(A.states)
    if len(pts) <= n_states:
        raise PreconditionError(f"need more than {n_states} checkpoints, got {len(pts)}")
    if any(a >= b for a, b in zip(pts, pts[1:])) or (pts and pts[-1] > w.length):
        raise PreconditionError("checkpoints must increase and stay within the word")
    states = [A.transition(A.start, prefix(w, p)) for p in pts]
    best = None
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if states[i] == states[j]:
                gap = left_subtract(pts[i], pts[j])
                if best is None or gap < best[0]:
                    best = (gap, i, j)
    if best is None:
        raise NoRepeat("no two checkpoints share a state")
    _, i, j = best
    a, b = pts[i], pts[j]
    return PumpDecomposition(a, b, prefix(w, a), slice_word(w, a, b), suffix(w, b))


def verify_pump(A, pump: PumpDecomposition, repetitions=range(5)) -> bool:
    """The end state is the same for every number of repetitions of ``v``."""
    ends = {A.transition(A.start, pump.pumped(i)) for i in repetitions}
    return len(ends) == 1
