"""Seeded random words, splits and ordinals for the property suites."""
from __future__ import annotations

import random
from typing import List, Sequence, Tuple

from .ordinal import ZERO, Ordinal, add, ordinal
from .word import BlockWord

__all__ = ["RUNS", "random_word", "random_words", "random_split", "block_boundaries",
           "random_ordinal"]

RUNS: Tuple[Ordinal, ...] = tuple(ordinal(x) for x in
                                  (1, 2, 3, "w", "w+1", "w*2", "w^2", "w^2+w"))


def random_word(rng: random.Random, alphabet: Sequence[str], max_blocks: int = 4,
                runs: Sequence[Ordinal] = RUNS) -> BlockWord:
    symbols = sorted(alphabet)
    k = rng.randint(0, max_blocks)
    return BlockWord([(rng.choice(symbols), rng.choice(runs)) for _ in range(k)])


def random_words(seed: int, count: int, alphabet: Sequence[str], **kw) -> List[BlockWord]:
    rng = random.Random(seed)
    return [random_word(rng, alphabet, **kw) for _ in range(count)]


def block_boundaries(w: BlockWord) -> List[Ordinal]:
    out = [ZERO]
    for pos, _, run in w.positions():
        out.append(add(pos, run))
    return out


def random_split(rng: random.Random, w: BlockWord) -> Ordinal:
    """A split point: a block boundary or a point strictly inside a block."""
    blocks = list(w.positions())
    if not blocks or rng.random() < 0.4:
        return rng.choice(block_boundaries(w))
    pos, _, run = rng.choice(blocks)
    inner = [r for r in RUNS + (ZERO,) if r < run]
    return add(pos, rng.choice(inner))


def random_ordinal(rng: random.Random, max_exp: int = 3, max_terms: int = 3,
                   max_coeff: int = 4) -> Ordinal:
    """Random ordinal below w^(max_exp+1)."""
    exps = sorted(rng.sample(range(max_exp + 1), rng.randint(0, min(max_terms, max_exp + 1))),
                  reverse=True)
    return Ordinal(tuple((ordinal(e), rng.randint(1, max_coeff)) for e in exps))
