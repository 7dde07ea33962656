"""Substitution subshifts: primitivity certificates and factor languages.

The language is computed to a requested length by saturating factor
sets under one substitution round; primitivity makes the result
independent of the starting letter.  The resulting oracle is exact up
to the computed length and horizon bounded beyond it.
"""

from __future__ import annotations

from .errors import InvalidPresentation, NotPrimitive
from .oracle import ShiftOracle
from .words import Alphabet, Word, all_factors_up_to


class FactorSetOracle(ShiftOracle):
    """Oracle backed by an explicit factor set, exact up to max_len."""

    finite_states = False
    cache_transitions = False

    def __init__(self, alphabet: Alphabet, factor_set, max_len: int):
        super().__init__(alphabet)
        self.max_len = max_len
        self._factors = frozenset(factor_set)
        if () not in self._factors:
            raise InvalidPresentation("factor set must contain the empty word")

    def initial_state(self):
        return ()

    def _step(self, state, symbol):
        word = state + (symbol,)
        return word if word in self._factors else None

    def is_admissible(self, word: Word) -> bool:
        self.check_horizon(len(word))
        return tuple(word) in self._factors

    def reversed(self) -> "FactorSetOracle":
        rev = FactorSetOracle(
            self.alphabet,
            {tuple(reversed(w)) for w in self._factors},
            self.max_len,
        )
        rev._rev_source = self
        return rev


class SubstitutionPresentation:
    """Primitive substitution with its positivity certificate.

    ``rules`` maps each symbol to a nonempty word.  The certificate is
    the least power p with all entries of the p-th incidence-matrix
    power positive; the search stops at |alphabet|**2.
    """

    def __init__(self, alphabet, rules: dict):
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        self.rules = {}
        for sym in self.alphabet.symbols:
            if sym not in rules:
                raise InvalidPresentation(f"no rule for symbol {sym}")
            image = tuple(rules[sym])
            if not image or not self.alphabet.contains_word(image):
                raise InvalidPresentation(f"bad image for symbol {sym}: {image!r}")
            self.rules[sym] = image
        self.primitivity_power = self._certify_primitive()

    def incidence_matrix(self) -> list:
        """Counts[i][j] = occurrences of symbol j in the image of symbol i."""
        syms = self.alphabet.symbols
        return [
            [self.rules[a].count(b) for b in syms]
            for a in syms
        ]

    def _certify_primitive(self) -> int:
        n = len(self.alphabet)
        m = self.incidence_matrix()
        power = [row[:] for row in m]
        for p in range(1, n * n + 1):
            if all(x > 0 for row in power for x in row):
                return p
            power = [
                [sum(power[i][k] * m[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)
            ]
        raise NotPrimitive(
            f"no positive incidence power up to {n * n}; substitution not primitive"
        )

    def apply(self, word: Word) -> Word:
        out = []
        for s in word:
            out.extend(self.rules[s])
        return tuple(out)


def substitution_language(p: SubstitutionPresentation, max_len: int) -> FactorSetOracle:
    """Oracle for the substitution subshift, exact up to max_len.

    Factor sets are saturated: the fixpoint is reached when one more
    substitution round adds no factor of length <= max_len.
    """
    factors = {(s,) for s in p.alphabet.symbols}
    factors.add(())
    while True:
        new = set(factors)
        for w in list(factors):
            if not w:
                continue
            new |= all_factors_up_to(p.apply(w), max_len)
        if new == factors:
            break
        factors = new
    return FactorSetOracle(p.alphabet, factors, max_len)


def substitution_saturation_rounds(p: SubstitutionPresentation, max_len: int) -> int:
    """Number of substitution rounds until the factor set stabilizes."""
    factors = {(s,) for s in p.alphabet.symbols} | {()}
    rounds = 0
    while True:
        new = set(factors)
        for w in list(factors):
            if w:
                new |= all_factors_up_to(p.apply(w), max_len)
        if new == factors:
            return rounds
        factors = new
        rounds += 1
