"""Shared hypothesis strategies."""
from hypothesis import strategies as st

from ordauto.ordinal import Ordinal, ordinal
from ordauto.samples import RUNS
from ordauto.word import BlockWord


@st.composite
def ordinals_below_omega_omega(draw, max_exp=4, max_coeff=5):
    exps = draw(st.sets(st.integers(0, max_exp), max_size=3))
    return Ordinal(tuple((ordinal(e), draw(st.integers(1, max_coeff)))
                         for e in sorted(exps, reverse=True)))


@st.composite
def nested_ordinals(draw):
    """Ordinals whose exponents may themselves be infinite."""
    exps = draw(st.lists(ordinals_below_omega_omega(max_exp=2, max_coeff=2),
                         unique=True, max_size=3))
    return Ordinal(tuple((e, draw(st.integers(1, 4))) for e in sorted(exps, reverse=True)))


def block_words(alphabet=("0", "1"), max_blocks=4):
    block = st.tuples(st.sampled_from(alphabet), st.sampled_from(RUNS))
    return st.lists(block, max_size=max_blocks).map(BlockWord)
