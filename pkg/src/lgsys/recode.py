"""Higher-block recodings (topological conjugacies used for invariance tests)."""

from __future__ import annotations

from .errors import InvalidPresentation
from .oracle import ShiftOracle, language_states
from .words import Alphabet, Word


def block_symbol(block: Word) -> str:
    if all(len(s) == 1 for s in block):
        return "".join(block)
    return ",".join(block)


class HigherBlockOracle(ShiftOracle):
    """Oracle of the n-th higher block shift.

    Block symbols are the admissible inner words of length n; a block
    word is admissible iff consecutive blocks overlap in n-1 symbols and
    the unrolled inner word is admissible.  When the inner oracle
    composes states, block states compose too and all exact machinery
    carries over.
    """

    def __init__(self, inner: ShiftOracle, n: int):
        if n < 1:
            raise InvalidPresentation("block length must be >= 1")
        blocks = [w for w, _ in language_states(inner, n)]
        if not blocks:
            raise InvalidPresentation("inner language has no words of the block length")
        names = [block_symbol(b) for b in blocks]
        if len(set(names)) != len(names):
            names = ["|".join(b) for b in blocks]
        super().__init__(Alphabet(names))
        self.inner = inner
        self.n = n
        self.block_of = dict(zip(names, blocks))
        self.symbol_of = {b: s for s, b in zip(names, blocks)}
        if inner.max_len is not None:
            self.max_len = inner.max_len - n + 1
        self.finite_states = inner.finite_states
        self.composable = inner.composable
        self._rev = None

    def unroll(self, word: Word) -> Word:
        """Inner word carried by a block word."""
        if not word:
            return ()
        out = list(self.block_of[word[0]])
        for sym in word[1:]:
            out.append(self.block_of[sym][-1])
        return tuple(out)

    # state: the EMPTY marker for the empty word, else
    # (first_block, last_block, inner state of the unrolled word,
    #  inner state of the blocks' last letters)  -- the last component
    # makes states composable when the inner oracle composes.

    EMPTY = "empty-block-word"

    def initial_state(self):
        return self.EMPTY

    def _block_state(self, symbol):
        block = self.block_of[symbol]
        full = self.inner.state_of(block)
        if full is None:
            return None
        tail = self.inner.state_of(block[-1:])
        return (block, block, full, tail)

    def _step(self, state, symbol):
        block = self.block_of[symbol]
        if state == self.EMPTY:
            return self._block_state(symbol)
        first, last, full, tail = state
        if last[1:] != block[:-1]:
            return None
        full2 = self.inner.step(full, block[-1])
        if full2 is None:
            return None
        tail2 = self.inner.step(tail, block[-1])
        return (first, block, full2, tail2)

    def compose(self, s1, s2):
        if s1 == self.EMPTY:
            return s2
        if s2 == self.EMPTY:
            return s1
        f1, l1, full1, tail1 = s1
        f2, l2, full2, tail2 = s2
        if l1[1:] != f2[:-1]:
            return None
        full = self.inner.compose(full1, tail2)
        if full is None:
            return None
        tail = self.inner.compose(tail1, tail2)
        if tail is None:
            return None
        return (f1, l2, full, tail)

    def left_profile(self, word: Word, length: int):
        if not word:
            return ()
        state = self.state_of(word)
        if state is None:
            return None
        first, _, full, _ = state
        inner_profile = self.inner.left_profile(
            self.unroll(word), length + self.n - 1
        )
        if inner_profile is None:
            return None
        return (first, inner_profile)


def higher_block_recode(oracle: ShiftOracle, n: int):
    """The n-block recoding oracle plus the block -> inner-word map."""
    rec = HigherBlockOracle(oracle, n)
    return rec, dict(rec.block_of)
