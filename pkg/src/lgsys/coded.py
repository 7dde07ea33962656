"""A coded system distinguishing the two time directions.

Alphabet {0, 1, alpha, beta, gamma}; a word is admissible iff it avoids

    beta beta,  beta gamma,  beta 0,  beta 1

and every word of the family

    beta alpha c gamma 0^k gamma        (k >= 1, |c| = k).

The admissibility is exact: the system is the increasing union of the
finite-type approximations obtained by bounding k, so a word of length
n lies in the language iff it avoids the families with k < n (runs of
zeros alone are never forbidden in the limit).

States are run-detector tuples, so right extensions evolve in O(active
detectors); the reversed language gets its own mirrored detector.
"""

from __future__ import annotations

from .oracle import ShiftOracle
from .words import Alphabet, Word

CODED_ALPHABET = Alphabet(("0", "1", "alpha", "beta", "gamma"))


class CodedExamplePresentation:
    """Fixed presentation; carried only for registry/file symmetry."""

    alphabet = CODED_ALPHABET

    def oracle(self) -> "CodedOracle":
        return CodedOracle()


class CodedOracle(ShiftOracle):
    """Forward orientation of the coded system.

    State: (last_is_beta, gaps, armed) where ``gaps`` holds, per
    beta-alpha occurrence, the number of symbols consumed since its
    alpha, and ``armed`` holds zero-run detectors (remaining zeros
    before a closing gamma would complete a forbidden word).
    """

    finite_states = False

    def __init__(self):
        super().__init__(CODED_ALPHABET)
        self._rev: ReversedCodedOracle | None = None

    def initial_state(self):
        return (False, frozenset(), frozenset())

    def _step(self, state, symbol):
        last_beta, gaps, armed = state
        if last_beta and symbol != "alpha":
            return None
        if symbol == "gamma" and 0 in armed:
            return None
        if symbol == "0":
            new_armed = frozenset(r - 1 for r in armed if r >= 1)
        elif symbol == "gamma":
            new_armed = frozenset(g for g in gaps if g >= 1)
        else:
            new_armed = frozenset()
        new_gaps = frozenset(g + 1 for g in gaps)
        if last_beta and symbol == "alpha":
            new_gaps |= {0}
        return (symbol == "beta", new_gaps, new_armed)

    def reversed(self) -> "ReversedCodedOracle":
        if self._rev is None:
            rev = ReversedCodedOracle()
            rev._rev = self
            self._rev = rev
        return self._rev


class ReversedCodedOracle(ShiftOracle):
    """Time reversal of the coded system.

    The reversed forbidden families are the mirror images: beta may only
    follow alpha (or start a word), and

        gamma 0^k gamma c alpha beta    (k >= 1, |c| = k)

    is forbidden.  State: (after_alpha, zero_run, pending, expect_beta)
    where ``zero_run`` counts zeros since the last gamma (-1 when
    broken), ``pending`` holds the remaining arbitrary-symbol counts of
    armed tails, and ``expect_beta`` marks a tail whose alpha was just
    consumed.
    """

    finite_states = False

    def __init__(self):
        super().__init__(CODED_ALPHABET)
        self._rev: CodedOracle | None = None

    def initial_state(self):
        return (True, -1, frozenset(), False)

    def _step(self, state, symbol):
        after_alpha, zero_run, pending, expect_beta = state
        if symbol == "beta" and not after_alpha:
            return None
        if symbol == "beta" and expect_beta:
            return None
        new_expect_beta = (symbol == "alpha") and (0 in pending)
        new_pending = frozenset(r - 1 for r in pending if r >= 1)
        if symbol == "gamma":
            if zero_run >= 1:
                new_pending |= {zero_run}
            new_zero_run = 0
        elif symbol == "0" and zero_run >= 0:
            new_zero_run = zero_run + 1
        else:
            new_zero_run = -1
        return (symbol == "alpha", new_zero_run, new_pending, new_expect_beta)

    def reversed(self) -> CodedOracle:
        if self._rev is None:
            rev = CodedOracle()
            rev._rev = self
            self._rev = rev
        return self._rev


def coded_example_oracle() -> CodedOracle:
    return CodedOracle()


def coded_forbidden_scan(word: Word) -> bool:
    """Reference check by direct pattern scan (used to validate the
    detector machines): True iff the word is admissible."""
    w = tuple(word)
    n = len(w)
    pairs = {("beta", "beta"), ("beta", "gamma"), ("beta", "0"), ("beta", "1")}
    for i in range(n - 1):
        if (w[i], w[i + 1]) in pairs:
            return False
    for i in range(n - 1):
        if w[i] == "beta" and w[i + 1] == "alpha":
            # beta alpha c gamma 0^k gamma with |c| = k >= 1
            for k in range(1, n):
                j = i + 2 + k  # position of the opening gamma
                end = j + k + 1  # position of the closing gamma
                if end >= n:
                    break
                if (
                    w[j] == "gamma"
                    and all(w[j + 1 + t] == "0" for t in range(k))
                    and w[end] == "gamma"
                ):
                    return False
    return True
