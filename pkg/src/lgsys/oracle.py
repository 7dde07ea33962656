"""Word-admissibility oracles and the predecessor/follower operators.

An oracle presents the language of a subshift through a deterministic
right-transition system: ``initial_state()`` is the state of the empty
word and ``_step(state, symbol)`` extends a word by one symbol on the
right, returning ``None`` when no admissible extension exists.  A word
is admissible iff walking it from the initial state stays alive.  This
single protocol backs language enumeration, the gamma/omega operators,
and every synchronization check.

States are interned to small integers internally; the hot quantification
loops (the killer searches) run entirely on ids.  State spaces fall
into two classes:

* ``finite_states = True`` -- the reachable state set is finite (labeled
  graph presentations).  Quantifications over arbitrarily long follower
  words are then decided exactly by reachability over state pairs.
* ``finite_states = False`` -- states may grow with word length
  (inverse-semigroup values, factor sets, detector states).  Follower
  quantifications are horizon bounded and results are flagged as upper
  bounds.
"""

from __future__ import annotations

from .errors import HorizonExceeded
from .words import Alphabet, Word, reverse_word

EXACT = "exact"
UPPER_BOUND = "upper_bound"

DEAD = -1


class ShiftOracle:
    """Base class for subshift admissibility oracles.

    Subclasses provide ``initial_state`` and ``_step``; everything else
    (interning, walking, caching) is shared.  Oracles are immutable once
    constructed and behave as pure functions; caches only memoize.
    """

    #: finite reachable state space (enables exact follower decisions)
    finite_states = False
    #: state(u+v) is a function of (state(u), state(v)) via ``compose``
    composable = False
    #: None for an exact oracle, else the certified word-length horizon
    max_len: int | None = None

    def __init__(self, alphabet: Alphabet):
        self.alphabet = alphabet
        self._ids: dict = {}
        self._raw: list = []
        self._trans: dict = {}
        self._kill_memo = ({}, {})  # witnesses, refutation depths
        self._kill_exact_memo: dict = {}
        self._init_id: int | None = None

    # -- the transition protocol (subclasses) ------------------------------

    def initial_state(self):
        raise NotImplementedError

    def _step(self, state, symbol):
        """Extend by one symbol; return the new state or None (dead)."""
        raise NotImplementedError

    def compose(self, left_state, right_state):
        """State of a concatenation from the parts' states (composable only)."""
        raise NotImplementedError(f"{type(self).__name__} states do not compose")

    # -- interned interface -------------------------------------------------

    def intern(self, state) -> int:
        try:
            return self._ids[state]
        except KeyError:
            sid = len(self._raw)
            self._ids[state] = sid
            self._raw.append(state)
            return sid

    def raw_state(self, sid: int):
        return self._raw[sid]

    def initial_id(self) -> int:
        if self._init_id is None:
            self._init_id = self.intern(self.initial_state())
        return self._init_id

    def step_id(self, sid: int, symbol) -> int:
        key = (sid, symbol)
        trans = self._trans
        try:
            return trans[key]
        except KeyError:
            nxt = self._step(self._raw[sid], symbol)
            rid = DEAD if nxt is None else self.intern(nxt)
            trans[key] = rid
            return rid

    def walk_id(self, sid: int, word: Word) -> int:
        step = self.step_id
        for symbol in word:
            sid = step(sid, symbol)
            if sid < 0:
                return DEAD
        return sid

    def state_id_of(self, word: Word) -> int:
        return self.walk_id(self.initial_id(), word)

    def compose_id(self, left: int, right: int) -> int:
        out = self.compose(self._raw[left], self._raw[right])
        return DEAD if out is None else self.intern(out)

    # -- raw conveniences ---------------------------------------------------

    def step(self, state, symbol):
        rid = self.step_id(self.intern(state), symbol)
        return None if rid < 0 else self._raw[rid]

    def walk(self, state, word: Word):
        rid = self.walk_id(self.intern(state), word)
        return None if rid < 0 else self._raw[rid]

    def state_of(self, word: Word):
        rid = self.state_id_of(word)
        return None if rid < 0 else self._raw[rid]

    def is_admissible(self, word: Word) -> bool:
        self.check_horizon(len(word))
        return self.state_id_of(word) >= 0

    # -- optional abstractions -----------------------------------------------

    def left_profile(self, word: Word, length: int):
        """Hashable key determining admissibility of u+word for |u| <= length.

        Two words with equal profiles have identical predecessor sets at
        every depth up to ``length``.  ``None`` means no abstraction is
        available and callers must treat each word individually.
        """
        return None

    def reversed(self) -> "ShiftOracle":
        """Oracle of the time-reversed subshift."""
        return WordReversalOracle(self)

    # -- housekeeping ----------------------------------------------------------

    def check_horizon(self, needed_length: int):
        if self.max_len is not None and needed_length > self.max_len:
            raise HorizonExceeded(
                f"length {needed_length} exceeds oracle horizon {self.max_len}"
            )

    @property
    def exactness(self) -> str:
        return EXACT if self.max_len is None else f"horizon_bounded({self.max_len})"


class WordReversalOracle(ShiftOracle):
    """Generic time reversal: states are the reversed-shift words themselves.

    Fallback only; concrete families override ``reversed`` with a
    structural construction that keeps fast, shareable states.
    """

    def __init__(self, inner: ShiftOracle):
        super().__init__(inner.alphabet)
        self.inner = inner
        self.max_len = inner.max_len

    def initial_state(self):
        return ()

    def _step(self, state, symbol):
        word = state + (symbol,)
        if self.inner.state_id_of(reverse_word(word)) < 0:
            return None
        return word

    def is_admissible(self, word: Word) -> bool:
        self.check_horizon(len(word))
        return self.inner.is_admissible(reverse_word(word))

    def reversed(self) -> ShiftOracle:
        return self.inner


def reverse_oracle(oracle: ShiftOracle) -> ShiftOracle:
    """Oracle for the time-reversed subshift (involutive up to behavior)."""
    return oracle.reversed()


# -- language enumeration ---------------------------------------------------


def language_states(oracle: ShiftOracle, n: int) -> list:
    """All (word, state id) pairs of exact length n, in canonical order."""
    oracle.check_horizon(n)
    level = [((), oracle.initial_id())]
    step = oracle.step_id
    symbols = oracle.alphabet.symbols
    for _ in range(n):
        nxt = []
        for word, sid in level:
            for symbol in symbols:
                s2 = step(sid, symbol)
                if s2 >= 0:
                    nxt.append((word + (symbol,), s2))
        level = nxt
    return level


def language_states_up_to(oracle: ShiftOracle, n: int) -> list:
    """All (word, state id) pairs of length <= n, shortest first."""
    oracle.check_horizon(n)
    out = [((), oracle.initial_id())]
    level = out[:]
    step = oracle.step_id
    symbols = oracle.alphabet.symbols
    for _ in range(n):
        nxt = []
        for word, sid in level:
            for symbol in symbols:
                s2 = step(sid, symbol)
                if s2 >= 0:
                    nxt.append((word + (symbol,), s2))
        out.extend(nxt)
        level = nxt
    return out


def enumerate_language(oracle: ShiftOracle, n: int) -> list:
    """The admissible words of length n, canonically ordered."""
    return [word for word, _ in language_states(oracle, n)]


# -- follower quantification (the engine behind omega and synchronization) --


def find_killer(oracle: ShiftOracle, keep_id: int, test_id: int, horizon: int):
    """Search a follower word c with the keep-walk alive and the test-walk dead.

    Returns the witness word, or None when no such c exists within the
    horizon (exactly, with no horizon, when the oracle is finite-state).
    Both input ids must be live.
    """
    if oracle.finite_states:
        return _find_killer_exact(oracle, keep_id, test_id)
    return _find_killer_bounded(oracle, keep_id, test_id, horizon)


def _find_killer_exact(oracle, keep, test):
    memo = oracle._kill_exact_memo
    root = (keep, test)
    try:
        return memo[root]
    except KeyError:
        pass
    # BFS over live state pairs; finite, so this terminates.
    step = oracle.step_id
    symbols = oracle.alphabet.symbols
    parent = {root: None}
    frontier = [root]
    witness = None
    while frontier and witness is None:
        nxt = []
        for pair in frontier:
            k, t = pair
            for symbol in symbols:
                k2 = step(k, symbol)
                if k2 < 0:
                    continue
                t2 = step(t, symbol)
                if t2 < 0:
                    path = [symbol]
                    cur = pair
                    while parent[cur] is not None:
                        prev, sym = parent[cur]
                        path.append(sym)
                        cur = prev
                    witness = tuple(reversed(path))
                    break
                child = (k2, t2)
                if child not in parent:
                    parent[child] = (pair, symbol)
                    nxt.append(child)
            if witness is not None:
                break
        frontier = nxt
    memo[root] = witness
    return witness


def _find_killer_bounded(oracle, keep, test, horizon):
    # two budget-free memos: a witness works at any budget >= its length,
    # and "no witness within b" covers every smaller budget
    found_memo, none_depth = oracle._kill_memo
    step = oracle.step_id
    symbols = oracle.alphabet.symbols

    def rec(k, t, budget):
        if budget == 0:
            return None
        key = (k, t)
        wit = found_memo.get(key)
        if wit is not None and len(wit) <= budget:
            return wit
        if none_depth.get(key, -1) >= budget:
            return None
        found = None
        for symbol in symbols:
            k2 = step(k, symbol)
            if k2 < 0:
                continue
            t2 = step(t, symbol)
            if t2 < 0:
                found = (symbol,)
                break
            sub = rec(k2, t2, budget - 1)
            if sub is not None:
                found = (symbol,) + sub
                break
        if found is not None:
            prev = found_memo.get(key)
            if prev is None or len(found) < len(prev):
                found_memo[key] = found
        elif none_depth.get(key, -1) < budget:
            none_depth[key] = budget
        return found

    return rec(keep, test, horizon)


def through_id(oracle: ShiftOracle, left_id: int, word: Word, word_id: int) -> int:
    """Id of (left word)+(word) given both parts' ids."""
    if oracle.composable:
        return oracle.compose_id(left_id, word_id)
    return oracle.walk_id(left_id, word)


# -- gamma and omega operators ----------------------------------------------


def gamma_plus(oracle: ShiftOracle, word: Word, length: int) -> list:
    """Length-``length`` right extensions of ``word`` within the language."""
    oracle.check_horizon(len(word) + length)
    sid = oracle.state_id_of(word)
    if sid < 0:
        raise ValueError(f"word is not admissible: {word!r}")
    level = [((), sid)]
    step = oracle.step_id
    symbols = oracle.alphabet.symbols
    for _ in range(length):
        nxt = []
        for w, s in level:
            for symbol in symbols:
                s2 = step(s, symbol)
                if s2 >= 0:
                    nxt.append((w + (symbol,), s2))
        level = nxt
    return [w for w, _ in level]


def gamma_minus(oracle: ShiftOracle, word: Word, length: int) -> list:
    """Length-``length`` left extensions of ``word`` within the language."""
    oracle.check_horizon(len(word) + length)
    rev = oracle.reversed()
    ext = gamma_plus(rev, reverse_word(word), length)
    return oracle.alphabet.sort_words(reverse_word(u) for u in ext)


def omega_minus(oracle: ShiftOracle, word: Word, length: int, follower_horizon: int):
    """Left extensions of ``word`` compatible with every follower of ``word``.

    Computes { b of length ``length`` : b+word+c admissible for every
    follower c of ``word`` }, with c quantified over all lengths 0..
    ``follower_horizon`` (exactly, ignoring the horizon, for finite-state
    oracles).  Returns (words, flag) with flag EXACT or UPPER_BOUND.
    """
    oracle.check_horizon(length + len(word) + follower_horizon)
    sid = oracle.state_id_of(word)
    if sid < 0:
        raise ValueError(f"word is not admissible: {word!r}")
    out = []
    for b, sb in language_states(oracle, length):
        t = through_id(oracle, sb, word, sid)
        if t < 0:
            continue
        if find_killer(oracle, sid, t, follower_horizon) is None:
            out.append(b)
    flag = EXACT if oracle.finite_states else UPPER_BOUND
    return out, flag


def omega_plus(oracle: ShiftOracle, word: Word, length: int, follower_horizon: int):
    """Time mirror of ``omega_minus``: right extensions compatible with
    every predecessor of ``word``."""
    rev = oracle.reversed()
    ext, flag = omega_minus(rev, reverse_word(word), length, follower_horizon)
    return oracle.alphabet.sort_words(reverse_word(b) for b in ext), flag
