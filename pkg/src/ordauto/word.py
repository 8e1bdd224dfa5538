"""Ordinal-length words stored as finitely many constant-symbol blocks."""
from __future__ import annotations

import re
from typing import Iterable, Iterator, Tuple

from .ordinal import (
    ZERO, ONE, Cardinality, Ordinal, OrdinalParseError, add, cardinality,
    compare, format_ordinal, left_subtract, ordinal, parse_ordinal,
)

__all__ = [
    "BlockWord", "Alphabet", "WordError", "AlphabetMismatch", "OutOfRange",
    "WordParseError", "LAMBDA", "LH", "RH", "RESERVED", "EPSILON",
    "normalize_word", "length", "concat", "slice_word", "symbol_at",
    "projection_stats", "parse_word", "format_word", "word",
]

LAMBDA = "lambda"
LH = "lh"
RH = "rh"
RESERVED = frozenset({LAMBDA, LH, RH})


class WordError(ValueError):
    pass


class AlphabetMismatch(WordError):
    pass


class OutOfRange(WordError, IndexError):
    pass


class WordParseError(WordError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column + 1}: {text!r}")
        self.column = column


class Alphabet(frozenset):
    """A non-empty finite set of symbols that excludes the reserved tokens."""

    def __new__(cls, symbols: Iterable[str] = ()):
        self = super().__new__(cls, (str(s) for s in symbols))
        if not self:
            raise WordError("alphabet must be non-empty")
        bad = self & RESERVED
        if bad:
            raise WordError(f"reserved tokens in alphabet: {sorted(bad)}")
        return self

    def __repr__(self):
        return f"Alphabet({sorted(self)!r})"


class BlockWord:
    """Immutable word ``s1^r1 s2^r2 ... sk^rk`` in block normal form.

    Adjacent blocks carry distinct symbols and every run is positive.  The
    optional ``alphabet`` only matters for :func:`concat`, which refuses to mix
    words declared over different alphabets.
    """

    __slots__ = ("blocks", "alphabet", "_length", "_hash")

    def __init__(self, blocks: Iterable[Tuple[str, object]] = (), alphabet=None):
        merged: list = []
        for sym, run in blocks:
            run = ordinal(run)
            if run.is_zero():
                continue
            if merged and merged[-1][0] == sym:
                merged[-1] = (sym, add(merged[-1][1], run))
            else:
                merged.append((sym, run))
        object.__setattr__(self, "blocks", tuple(merged))
        object.__setattr__(self, "alphabet", frozenset(alphabet) if alphabet is not None else None)
        object.__setattr__(self, "_length", None)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("BlockWord is immutable")

    @property
    def length(self) -> Ordinal:
        if self._length is None:
            total = ZERO
            for _, run in self.blocks:
                total = add(total, run)
            object.__setattr__(self, "_length", total)
        return self._length

    def symbols(self) -> frozenset:
        return frozenset(s for s, _ in self.blocks)

    def is_empty(self) -> bool:
        return not self.blocks

    def positions(self) -> Iterator[Tuple[Ordinal, str, Ordinal]]:
        """Yield ``(start, symbol, run)`` for each block."""
        pos = ZERO
        for sym, run in self.blocks:
            yield pos, sym, run
            pos = add(pos, run)

    def __len__(self):
        return len(self.blocks)

    def __iter__(self):
        return iter(self.blocks)

    def __eq__(self, other):
        if not isinstance(other, BlockWord):
            return NotImplemented
        return self.blocks == other.blocks

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash(self.blocks))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, BlockWord):
            return NotImplemented
        return concat(self, other)

    def __repr__(self):
        return f"BlockWord({format_word(self)!r})"

    def __str__(self):
        return format_word(self)


EPSILON = BlockWord()


def word(x) -> BlockWord:
    if isinstance(x, BlockWord):
        return x
    if isinstance(x, str):
        return parse_word(x)
    return BlockWord(x)


def normalize_word(blocks: Iterable[Tuple[str, object]], alphabet=None) -> BlockWord:
    return BlockWord(blocks, alphabet)


def length(w: BlockWord) -> Ordinal:
    return w.length


def _joint_alphabet(a: BlockWord, b: BlockWord):
    if a.alphabet is not None and b.alphabet is not None and a.alphabet != b.alphabet:
        raise AlphabetMismatch(f"{sorted(a.alphabet)} vs {sorted(b.alphabet)}")
    return a.alphabet if a.alphabet is not None else b.alphabet


def concat(a: BlockWord, b: BlockWord) -> BlockWord:
    alphabet = _joint_alphabet(a, b)
    if not b.blocks and a.alphabet == alphabet:
        return a
    return BlockWord(a.blocks + b.blocks, alphabet)


def power(w: BlockWord, times: int) -> BlockWord:
    """``w`` concatenated with itself a finite number of times."""
    return BlockWord(w.blocks * times, w.alphabet)


def slice_word(w: BlockWord, start, stop) -> BlockWord:
    """Sub-word occupying positions ``[start, stop)``."""
    start, stop = ordinal(start), ordinal(stop)
    if compare(start, stop) > 0 or compare(stop, w.length) > 0:
        raise OutOfRange(f"[{start}, {stop}) not within word of length {w.length}")
    if start == stop:
        return BlockWord((), w.alphabet)
    out = []
    for pos, sym, run in w.positions():
        end = add(pos, run)
        if compare(end, start) <= 0:
            continue
        if compare(pos, stop) >= 0:
            break
        lo = left_subtract(pos, start) if compare(start, pos) > 0 else ZERO
        hi = left_subtract(pos, stop) if compare(stop, end) < 0 else run
        out.append((sym, left_subtract(lo, hi)))
    return BlockWord(out, w.alphabet)


def prefix(w: BlockWord, alpha) -> BlockWord:
    return slice_word(w, ZERO, alpha)


def suffix(w: BlockWord, alpha) -> BlockWord:
    return slice_word(w, alpha, w.length)


def symbol_at(w: BlockWord, i) -> str:
    i = ordinal(i)
    for pos, sym, run in w.positions():
        if compare(i, add(pos, run)) < 0:
            return sym
    raise OutOfRange(f"position {i} outside word of length {w.length}")


def block_index_at(w: BlockWord, i) -> int:
    i = ordinal(i)
    for k, (pos, _, run) in enumerate(w.positions()):
        if compare(i, add(pos, run)) < 0:
            return k
    raise OutOfRange(f"position {i} outside word of length {w.length}")


def projection_stats(w: BlockWord, s: str) -> Tuple[Ordinal, Cardinality]:
    """Order type and cardinality of the set of positions carrying ``s``."""
    otp = ZERO
    for sym, run in w.blocks:
        if sym == s:
            otp = add(otp, run)
    return otp, cardinality(otp)


# -- literal grammar ---------------------------------------------------------

_BLOCK = re.compile(r"\s*([^\s^()]+)(?:\^(\(|\d+))?")


def parse_word(text: str, alphabet=None) -> BlockWord:
    """Parse ``0^(w) 1^(w*2) 0^3``; ``eps`` denotes the empty word."""
    stripped = text.strip()
    if stripped in ("eps", "ε", ""):
        if not stripped:
            raise WordParseError("empty word literal (use 'eps')", text, 0)
        return BlockWord((), alphabet)
    blocks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _BLOCK.match(text, pos)
        if not m:
            raise WordParseError("expected a block", text, pos)
        sym = m.group(1)
        if sym == "eps":
            raise WordParseError("'eps' cannot be combined with blocks", text, m.start(1))
        if alphabet is not None and sym not in alphabet and sym != LAMBDA:
            raise WordParseError(f"symbol {sym!r} not in alphabet", text, m.start(1))
        exp = m.group(2)
        if exp is None:
            run = ONE
            pos = m.end()
        elif exp == "(":
            depth, j = 1, m.end()
            while j < len(text) and depth:
                depth += {"(": 1, ")": -1}.get(text[j], 0)
                j += 1
            if depth:
                raise WordParseError("unbalanced '('", text, m.start(2))
            try:
                run = parse_ordinal(text[m.end():j - 1])
            except OrdinalParseError as exc:
                raise WordParseError(f"bad run length ({exc})", text, m.end() + exc.column) from None
            pos = j
        else:
            run = ordinal(int(exp))
            pos = m.end()
        if pos < len(text) and not text[pos].isspace():
            raise WordParseError("blocks must be separated by whitespace", text, pos)
        blocks.append((sym, run))
    return BlockWord(blocks, alphabet)


def format_word(w: BlockWord) -> str:
    if not w.blocks:
        return "eps"
    parts = []
    for sym, run in w.blocks:
        if run == ONE:
            parts.append(sym)
        elif run.is_finite():
            parts.append(f"{sym}^{int(run)}")
        else:
            parts.append(f"{sym}^({format_ordinal(run)})")
    return " ".join(parts)
