"""Ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is a finite, strictly decreasing sum of terms
``w^e * c`` where every exponent ``e`` is itself an :class:`Ordinal` and every
coefficient ``c`` is a positive integer.  Plain ints are accepted wherever an
ordinal is expected.
"""
from __future__ import annotations

import contextlib
from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple, Union

__all__ = [
    "Ordinal", "Cardinality", "OrdinalError", "Underflow", "DepthExceeded",
    "OrdinalParseError", "ZERO", "ONE", "OMEGA", "ordinal", "normalize",
    "compare", "add", "left_subtract", "multiply", "omega_power", "cardinality",
    "parse_ordinal", "format_ordinal", "depth_budget", "get_depth_budget",
]

OrdinalLike = Union["Ordinal", int]

_DEPTH_BUDGET = 8


class OrdinalError(ArithmeticError):
    pass


class Underflow(OrdinalError):
    pass


class DepthExceeded(OrdinalError):
    pass


class OrdinalParseError(ValueError):
    def __init__(self, message: str, text: str, column: int):
        super().__init__(f"{message} at column {column + 1}: {text!r}")
        self.text = text
        self.column = column


def get_depth_budget() -> int:
    return _DEPTH_BUDGET


@contextlib.contextmanager
def depth_budget(depth: int) -> Iterator[None]:
    """Temporarily change the nesting-depth budget for omega powers."""
    global _DEPTH_BUDGET
    if depth < 1:
        raise ValueError("depth budget must be positive")
    saved = _DEPTH_BUDGET
    _DEPTH_BUDGET = depth
    try:
        yield
    finally:
        _DEPTH_BUDGET = saved


class Ordinal:
    """Immutable CNF ordinal.  ``terms`` is a tuple of ``(exponent, coeff)``."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Tuple[Tuple["Ordinal", int], ...] = ()):
        # trusted constructor: callers must pass normal form
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    # -- construction -------------------------------------------------
    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if n < 0:
            raise Underflow(f"negative ordinal {n}")
        if n < len(_SMALL):
            return _SMALL[n]
        return cls(((ZERO, n),))

    # -- structure ----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and self.terms[0][0].is_zero())

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    @property
    def finite_part(self) -> int:
        if self.terms and self.terms[-1][0].is_zero():
            return self.terms[-1][1]
        return 0

    @property
    def limit_part(self) -> "Ordinal":
        """The largest limit ordinal (or 0) not exceeding ``self``."""
        if self.terms and self.terms[-1][0].is_zero():
            return Ordinal(self.terms[:-1])
        return self

    @property
    def leading_exponent(self) -> "Ordinal":
        return self.terms[0][0] if self.terms else ZERO

    @property
    def leading_coefficient(self) -> int:
        return self.terms[0][1] if self.terms else 0

    def predecessor(self) -> "Ordinal":
        if not self.is_successor():
            raise OrdinalError(f"{self} has no predecessor")
        e, c = self.terms[-1]
        if c == 1:
            return Ordinal(self.terms[:-1])
        return Ordinal(self.terms[:-1] + ((e, c - 1),))

    def depth(self) -> int:
        if not self.terms:
            return 0
        return 1 + max(e.depth() for e, _ in self.terms)

    def __int__(self) -> int:
        if not self.is_finite():
            raise OrdinalError(f"{self} is infinite")
        return self.finite_part

    def __index__(self) -> int:
        return int(self)

    # -- protocol -----------------------------------------------------
    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(self.terms) if not self.is_finite() else hash(self.finite_part)
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if isinstance(other, Ordinal):
            return self is other or self.terms == other.terms
        if isinstance(other, int) and not isinstance(other, bool):
            return self.is_finite() and self.finite_part == other
        return NotImplemented

    def __lt__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else compare(self, other) < 0

    def __le__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else compare(self, other) <= 0

    def __gt__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else compare(self, other) > 0

    def __ge__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else compare(self, other) >= 0

    def __add__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else add(self, other)

    def __radd__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else add(other, self)

    def __mul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else multiply(self, other)

    def __rmul__(self, other):
        other = _coerce(other)
        return NotImplemented if other is None else multiply(other, self)

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)


def _coerce(x) -> Ordinal | None:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, int) and not isinstance(x, bool):
        return Ordinal.from_int(x)
    return None


def ordinal(x: OrdinalLike | str) -> Ordinal:
    """Coerce an int, literal string or Ordinal to an Ordinal."""
    if isinstance(x, str):
        return parse_ordinal(x)
    o = _coerce(x)
    if o is None:
        raise TypeError(f"cannot interpret {x!r} as an ordinal")
    return o


ZERO = Ordinal(())
_SMALL = [ZERO]
ONE = Ordinal(((ZERO, 1),))
_SMALL.append(ONE)
_SMALL.extend(Ordinal(((ZERO, n),)) for n in range(2, 64))
OMEGA = Ordinal(((ONE, 1),))


# -- arithmetic -------------------------------------------------------------

def compare(a: OrdinalLike, b: OrdinalLike) -> int:
    """Return -1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    a, b = ordinal(a), ordinal(b)
    if a is b:
        return 0
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    la, lb = len(a.terms), len(b.terms)
    return (la > lb) - (la < lb)


def normalize(raw: Iterable[Tuple[OrdinalLike, int]]) -> Ordinal:
    """Sum the given ``(exponent, coefficient)`` terms left to right."""
    result = ZERO
    for e, c in raw:
        if c < 0:
            raise Underflow("negative coefficient")
        if c == 0:
            continue
        result = add(result, Ordinal(((ordinal(e), c),)))
    return result


def add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = ordinal(a), ordinal(b)
    if not b.terms:
        return a
    if not a.terms:
        return b
    lead_e, lead_c = b.terms[0]
    kept = []
    for e, c in a.terms:
        cmp = compare(e, lead_e)
        if cmp > 0:
            kept.append((e, c))
        elif cmp == 0:
            kept.append((e, c + lead_c))
            return Ordinal(tuple(kept) + b.terms[1:])
        else:
            break
    return Ordinal(tuple(kept) + b.terms)


def left_subtract(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """The unique ``g`` with ``a + g == b``; requires ``a <= b``."""
    a, b = ordinal(a), ordinal(b)
    for i, ((ea, ca), (eb, cb)) in enumerate(zip(a.terms, b.terms)):
        if ea == eb and ca == cb:
            continue
        cmp = compare(ea, eb)
        if cmp < 0 or (cmp == 0 and ca < cb):
            if cmp == 0:
                return Ordinal(((eb, cb - ca),) + b.terms[i + 1:])
            return Ordinal(b.terms[i:])
        raise Underflow(f"{a} > {b}")
    if len(a.terms) > len(b.terms):
        raise Underflow(f"{a} > {b}")
    return Ordinal(b.terms[len(a.terms):])


def multiply(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    a, b = ordinal(a), ordinal(b)
    if not a.terms or not b.terms:
        return ZERO
    a_lead, a_coeff = a.terms[0]
    result = ZERO
    for e, c in b.terms:
        if e.is_zero():
            # a * c: only the leading coefficient scales
            piece = Ordinal(((a_lead, a_coeff * c),) + a.terms[1:])
        else:
            piece = Ordinal(((add(a_lead, e), c),))
        result = add(result, piece)
    return result


def omega_power(a: OrdinalLike) -> Ordinal:
    a = ordinal(a)
    result = Ordinal(((a, 1),))
    if result.depth() > _DEPTH_BUDGET:
        raise DepthExceeded(f"w^({a}) exceeds depth budget {_DEPTH_BUDGET}")
    return result


@dataclass(frozen=True)
class Cardinality:
    """``Finite(n)`` when ``n`` is set, otherwise aleph_0."""

    finite: int | None

    @property
    def is_finite(self) -> bool:
        return self.finite is not None

    def __lt__(self, other: "Cardinality") -> bool:
        if self.finite is None:
            return False
        return other.finite is None or self.finite < other.finite

    def __str__(self):
        return "aleph0" if self.finite is None else str(self.finite)


ALEPH0 = Cardinality(None)


def cardinality(a: OrdinalLike) -> Cardinality:
    a = ordinal(a)
    return Cardinality(a.finite_part) if a.is_finite() else ALEPH0


# -- literal grammar ----------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if not a.terms:
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite() or e == OMEGA:
            base = f"w^{format_ordinal(e)}"
        else:
            base = f"w^({format_ordinal(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)


class _Parser:
    # expr := term ('+' term)* ; term := factor ('*' factor)* ;
    # factor := atom ('^' atom)? ; atom := nat | 'w' | '(' expr ')'

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, message):
        raise OrdinalParseError(message, self.text, self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> Ordinal:
        if not self.text.strip():
            self.error("empty ordinal literal")
        value = self.expr()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek() == "+":
            self.pos += 1
            value = add(value, self.term())
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.pos += 1
            value = multiply(value, self.factor())
        return value

    def factor(self):
        start = self.pos
        base, is_omega = self.atom()
        if self.peek() == "^":
            if not is_omega:
                self.pos = start
                self.error("only w may be raised to a power")
            self.pos += 1
            exponent, _ = self.atom()
            return omega_power(exponent)
        return base

    def atom(self):
        ch = self.peek()
        if ch == "(":
            self.pos += 1
            value = self.expr()
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
            return value, False
        if ch in ("w", "ω"):
            self.pos += 1
            return OMEGA, True
        if ch.isdigit():
            start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            return Ordinal.from_int(int(self.text[start:self.pos])), False
        self.error("expected a natural number, 'w' or '('")


def parse_ordinal(text: str) -> Ordinal:
    """Parse an ASCII ordinal expression such as ``w^2*3+w+5``.

    Arbitrary sums and products are evaluated with ordinal arithmetic, so
    ``w+w^2`` parses to ``w^2``.
    """
    return _Parser(text).parse()
