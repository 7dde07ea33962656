"""Alphabets, words, and the canonical word order.

Words are tuples of symbol strings.  The empty word is ``()``.  All
canonical orderings downstream (vertex numbering, matrix layouts, JSON
exports) derive from the fixed symbol order of the alphabet.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Word = tuple  # tuple[str, ...]

EMPTY: Word = ()


class Alphabet:
    """An ordered finite set of distinct symbol names."""

    __slots__ = ("symbols", "_index")

    def __init__(self, symbols: Sequence[str]):
        symbols = tuple(symbols)
        if not symbols:
            raise ValueError("alphabet must be nonempty")
        if len(set(symbols)) != len(symbols):
            raise ValueError("alphabet has duplicate symbols")
        self.symbols = symbols
        self._index = {s: i for i, s in enumerate(symbols)}

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, symbol):
        return symbol in self._index

    def __eq__(self, other):
        return isinstance(other, Alphabet) and self.symbols == other.symbols

    def __hash__(self):
        return hash(self.symbols)

    def __repr__(self):
        return f"Alphabet({list(self.symbols)!r})"

    def index(self, symbol: str) -> int:
        return self._index[symbol]

    def word_key(self, word: Word):
        """Sort key realizing the canonical (length, alphabet-lex) order."""
        idx = self._index
        return (len(word), tuple(idx[s] for s in word))

    def sort_words(self, words: Iterable[Word]) -> list:
        """Canonically sorted, duplicate-free list of words."""
        return sorted(set(words), key=self.word_key)

    def contains_word(self, word: Word) -> bool:
        idx = self._index
        return all(s in idx for s in word)


def word_text(word: Word) -> str:
    """Human-readable rendering; '.' joins multi-character symbols."""
    if not word:
        return "<empty>"
    if all(len(s) == 1 for s in word):
        return "".join(word)
    return ".".join(word)


def reverse_word(word: Word) -> Word:
    return tuple(reversed(word))


def factors(word: Word, length: int) -> set:
    """All contiguous factors of the given length."""
    n = len(word)
    if length > n:
        return set()
    return {word[i : i + length] for i in range(n - length + 1)}


def all_factors_up_to(word: Word, max_len: int) -> set:
    """All contiguous factors of length <= max_len, including the empty word."""
    out = {EMPTY}
    n = len(word)
    for i in range(n):
        top = min(n, i + max_len)
        for j in range(i + 1, top + 1):
            out.add(word[i:j])
    return out
