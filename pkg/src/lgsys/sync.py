"""Synchronizing words and the synchronization hierarchy certificates.

A word v is l-synchronizing when every length-l predecessor of v glues
admissibly with every follower of v.  The set of such words shrinks as
l grows; its l-past equivalence classes become the vertices of the
lambda-graph construction.

All quantifications over followers run through ``find_killer`` on state
pairs: exact for finite-state oracles, horizon bounded otherwise.
Certificates are three-valued (verified / refuted / inconclusive)
because the properties quantify over unbounded word sets; refutations
always carry machine-checkable witnesses, and verification is relative
to the recorded horizons unless the oracle class decides exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import EmptySyncLevel
from .oracle import (ShiftOracle, find_killer, language_states,
                     language_states_up_to, through_id)
from .words import Word, reverse_word

YES_EXACT = "yes_exact"
YES_AT_HORIZON = "yes_at_horizon"
NO = "no"

VERIFIED = "verified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"

_DEDUPE_BASIS_CAP = 96


@dataclass(frozen=True)
class SyncDecision:
    status: str
    witness_left: Word | None = None
    witness_right: Word | None = None


@dataclass
class SyncCertificate:
    property_name: str
    status: str
    exact: bool
    horizons: dict
    witness: dict | None = None
    failures: list = field(default_factory=list)
    found: dict = field(default_factory=dict)
    leaning: str | None = None

    def to_json(self) -> dict:
        return {
            "property": self.property_name,
            "status": self.status,
            "exact": self.exact,
            "horizons": dict(self.horizons),
            "witness": self.witness,
            "failures": self.failures,
            "leaning": self.leaning,
        }


# -- plumbing ----------------------------------------------------------------


def _state_key_fn(oracle: ShiftOracle, words_states, max_level: int):
    """Key function under which sync status and signatures are invariant.

    Composable oracles: the state itself.  Otherwise a small basis of
    predecessor states is walked through each word; if the basis is too
    large, each word is its own key.
    """
    if oracle.composable:
        return lambda word, state: state
    basis = []
    seen = set()
    for b, s in words_states:
        if len(b) > max_level:
            break
        if s not in seen:
            seen.add(s)
            basis.append(s)
    if len(basis) > _DEDUPE_BASIS_CAP:
        return lambda word, state: word
    basis = tuple(basis)
    walk = oracle.walk_id

    def key(word, state):
        return (state, tuple(walk(s, word) for s in basis))

    return key


def _states_saturated(oracle: ShiftOracle, words_states, bound: int) -> bool:
    """True when words of length <= bound already realize every reachable
    oracle state (so quantifying over longer words adds nothing)."""
    states = {s for _, s in words_states}
    step = oracle.step_id
    for w, s in words_states:
        if len(w) != bound:
            continue
        for symbol in oracle.alphabet.symbols:
            s2 = step(s, symbol)
            if s2 >= 0 and s2 not in states:
                return False
    return True


# -- l-synchronizing words ---------------------------------------------------


def is_l_synchronizing(oracle: ShiftOracle, v: Word, l: int,
                       follower_horizon: int) -> SyncDecision:
    """Decide whether every length-l predecessor of v survives every
    follower of v; NO carries a gluing counterexample (b, c)."""
    oracle.check_horizon(l + len(v) + follower_horizon)
    sv = oracle.state_id_of(v)
    if sv < 0:
        raise ValueError(f"word is not admissible: {v!r}")
    seen = set()
    for b, sb in language_states(oracle, l):
        if sb in seen:
            continue
        seen.add(sb)
        sbv = through_id(oracle, sb, v, sv)
        if sbv < 0:
            continue
        killer = find_killer(oracle, sv, sbv, follower_horizon)
        if killer is not None:
            return SyncDecision(NO, b, killer)
    return SyncDecision(YES_EXACT if oracle.finite_states else YES_AT_HORIZON)


class SyncWordTable:
    """Length-truncated table of l-synchronizing words with signatures.

    Signatures (predecessor sets at depth ``level``) are materialized
    lazily per dedupe key; classes group members by signature.
    """

    def __init__(self, oracle, level, members, keys, level_words, horizons):
        self.oracle = oracle
        self.level = level
        self.members = members  # [(word, state)] canonical order
        self._keys = keys  # word -> dedupe key
        self._level_words = level_words  # [(b, state)] of length == level
        self.horizons = horizons
        self._sig_by_key: dict = {}

    def words(self) -> list:
        return [w for w, _ in self.members]

    def __len__(self):
        return len(self.members)

    def signature_of(self, word: Word, state: int | None = None) -> frozenset:
        """Predecessor set of depth ``level`` (exact, single oracle calls)."""
        if state is None:
            state = self.oracle.state_id_of(word)
        key = self._keys.get(word)
        if key is None:
            key = ("adhoc", word)
        sig = self._sig_by_key.get(key)
        if sig is None:
            alive_states = {}
            sig_words = []
            for b, sb in self._level_words:
                ok = alive_states.get(sb)
                if ok is None:
                    ok = through_id(self.oracle, sb, word, state) >= 0
                    alive_states[sb] = ok
                if ok:
                    sig_words.append(b)
            sig = frozenset(sig_words)
            self._sig_by_key[key] = sig
        return sig

    def classes(self) -> list:
        """Signature classes as (representative, signature, member count),
        representatives canonical-least."""
        groups: dict = {}
        counts: dict = {}
        for word, state in self.members:
            sig = self.signature_of(word, state)
            if sig not in groups:
                groups[sig] = word  # canonical enumeration order
                counts[sig] = 0
            counts[sig] += 1
        out = [(rep, sig, counts[sig]) for sig, rep in groups.items()]
        key = self.oracle.alphabet.word_key
        out.sort(key=lambda t: key(t[0]))
        return out


def build_sync_tables(oracle: ShiftOracle, max_level: int, max_word_len: int,
                      follower_horizon: int, require_nonempty: bool = True) -> list:
    """Sync-word tables for levels 0..max_level, nested by construction."""
    oracle.check_horizon(max_level + max_word_len + follower_horizon)
    all_words = language_states_up_to(oracle, max_word_len)
    key_fn = _state_key_fn(oracle, all_words, max_level)
    horizons = {
        "max_word_len": max_word_len,
        "follower_horizon": follower_horizon,
    }
    by_length: dict = {}
    for w, s in all_words:
        by_length.setdefault(len(w), []).append((w, s))

    tables = []
    survivors = all_words
    for level in range(max_level + 1):
        level_words = by_length.get(level, [])
        reps = []
        seen_states = set()
        for b, sb in level_words:
            if sb not in seen_states:
                seen_states.add(sb)
                reps.append((b, sb))
        status_by_key: dict = {}
        members = []
        keys = {}
        for v, sv in survivors:
            k = key_fn(v, sv)
            ok = status_by_key.get(k)
            if ok is None:
                ok = True
                for b, sb in reps:
                    sbv = through_id(oracle, sb, v, sv)
                    if sbv < 0:
                        continue
                    if find_killer(oracle, sv, sbv, follower_horizon) is not None:
                        ok = False
                        break
                status_by_key[k] = ok
            if ok:
                members.append((v, sv))
                keys[v] = k
        if require_nonempty and not members:
            raise EmptySyncLevel(level)
        tables.append(
            SyncWordTable(oracle, level, members, keys, level_words, horizons)
        )
        survivors = members
    return tables


def sync_word_table(oracle: ShiftOracle, l: int, max_word_len: int,
                    follower_horizon: int) -> SyncWordTable:
    """The level-l table alone (built through the nested pipeline)."""
    return build_sync_tables(
        oracle, l, max_word_len, follower_horizon, require_nonempty=False
    )[l]


# -- the hierarchy certificates ----------------------------------------------


def _search_extension(oracle, keep0, test0, search_bound, follower_horizon,
                      max_failures=3):
    """Search a word z with both walks alive and no killer afterwards.

    Explores state pairs depth-first with a visited set.  Returns
    (witness z or None, exhausted, failures) where ``failures`` samples
    (z, killer) pairs and ``exhausted`` means the pair space was fully
    explored within the bound.
    """
    step = oracle.step_id
    symbols = oracle.alphabet.symbols
    root = (keep0, test0)
    visited = {root}
    stack = [((), keep0, test0)]
    failures = []
    cutoff = False
    while stack:
        z, k, t = stack.pop()
        killer = find_killer(oracle, k, t, follower_horizon)
        if killer is None:
            return z, True, failures
        if len(failures) < max_failures:
            failures.append({"extension": z, "killer": killer})
        if len(z) >= search_bound:
            cutoff = True
            continue
        for symbol in reversed(symbols):
            k2 = step(k, symbol)
            if k2 < 0:
                continue
            t2 = step(t, symbol)
            if t2 < 0:
                continue
            pair = (k2, t2)
            if pair not in visited:
                visited.add(pair)
                stack.append((z + (symbol,), k2, t2))
    return None, not cutoff, failures


def check_lambda_synchronizing(oracle: ShiftOracle, word_length_bound: int = 8,
                               follower_horizon: int = 8,
                               search_bound: int | None = None) -> SyncCertificate:
    """Certify lambda-synchronization through its predecessor form: every
    word b admits a word a whose followers all glue behind b.

    For each b (up to the word-length bound, deduplicated by state) the
    check searches a with b in the depth-|b| omega set of a.  Exact
    verdicts require a finite-state oracle with a saturated state space.
    """
    if search_bound is None:
        search_bound = 2 * word_length_bound
    oracle.check_horizon(word_length_bound + search_bound + follower_horizon)
    init = oracle.initial_id()
    words = language_states_up_to(oracle, word_length_bound)
    horizons = {
        "word_length_bound": word_length_bound,
        "search_bound": search_bound,
        "follower_horizon": follower_horizon,
    }
    found = {}
    failures = []
    all_exhausted = True
    seen_states = set()
    for b, sb in words:
        if not b or sb in seen_states:
            continue
        seen_states.add(sb)
        z, exhausted, samples = _search_extension(
            oracle, init, sb, search_bound, follower_horizon
        )
        if z is not None:
            found[b] = z
        else:
            all_exhausted &= exhausted
            failures.append({"word": b, "samples": samples, "exhausted": exhausted})
    saturated = oracle.finite_states and _states_saturated(
        oracle, words, word_length_bound
    )
    if not failures:
        return SyncCertificate(
            "lambda_synchronizing", VERIFIED, exact=saturated,
            horizons=horizons, found=found,
        )
    if oracle.finite_states and all_exhausted:
        return SyncCertificate(
            "lambda_synchronizing", REFUTED, exact=True, horizons=horizons,
            witness={"word": failures[0]["word"], "samples": failures[0]["samples"]},
            failures=failures, found=found,
        )
    return SyncCertificate(
        "lambda_synchronizing", INCONCLUSIVE, exact=False, horizons=horizons,
        witness={"word": failures[0]["word"], "samples": failures[0]["samples"]},
        failures=failures, found=found, leaning=REFUTED,
    )


def check_condition_iii(oracle: ShiftOracle, **kwargs) -> SyncCertificate:
    """The predecessor form itself, reported under its own name."""
    cert = check_lambda_synchronizing(oracle, **kwargs)
    cert.property_name = "condition_iii"
    return cert


def check_property_d(oracle: ShiftOracle, word_length_bound: int = 8,
                     follower_horizon: int = 8,
                     search_bound: int | None = None) -> SyncCertificate:
    """Certify property (D): for every symbol s and predecessor word b of
    s there is a predecessor a of b with s surviving every predecessor
    of ab.

    Runs on the reversed oracle, where predecessor quantifications
    become follower quantifications; witnesses are reported in original
    coordinates.
    """
    if search_bound is None:
        search_bound = 2 * word_length_bound
    rev = oracle.reversed()
    rev.check_horizon(1 + word_length_bound + search_bound + follower_horizon)
    words = language_states_up_to(rev, word_length_bound)
    horizons = {
        "word_length_bound": word_length_bound,
        "search_bound": search_bound,
        "follower_horizon": follower_horizon,
    }
    found = {}
    failures = []
    all_exhausted = True
    for symbol in oracle.alphabet.symbols:
        s_sym = rev.state_id_of((symbol,))
        if s_sym < 0:
            continue
        seen_states = set()
        for y, sy in words:
            # y is the reversal of a predecessor word b of the symbol
            t0 = rev.walk_id(s_sym, y)
            if t0 < 0:
                continue
            key = (sy, t0)  # the search depends on exactly this pair
            if key in seen_states:
                continue
            seen_states.add(key)
            z, exhausted, samples = _search_extension(
                rev, sy, t0, search_bound, follower_horizon
            )
            b_word = reverse_word(y)
            if z is not None:
                found[(symbol, b_word)] = reverse_word(z)
            else:
                all_exhausted &= exhausted
                failures.append(
                    {
                        "symbol": symbol,
                        "word": b_word,
                        "samples": [
                            {
                                "a": reverse_word(s["extension"]),
                                "left_killer": reverse_word(s["killer"]),
                            }
                            for s in samples
                        ],
                        "exhausted": exhausted,
                    }
                )
    saturated = rev.finite_states and _states_saturated(
        rev, words, word_length_bound
    )
    if not failures:
        return SyncCertificate(
            "property_d", VERIFIED, exact=saturated, horizons=horizons, found=found,
        )
    if rev.finite_states and all_exhausted:
        return SyncCertificate(
            "property_d", REFUTED, exact=True, horizons=horizons,
            witness=failures[0], failures=failures, found=found,
        )
    return SyncCertificate(
        "property_d", INCONCLUSIVE, exact=False, horizons=horizons,
        witness=failures[0], failures=failures, found=found, leaning=REFUTED,
    )


# -- structural facts about the tables ---------------------------------------


def lemma31_witnesses(oracle: ShiftOracle, tables: list) -> dict:
    """For each class of the level-l table, exhibit (ii) a deeper-level
    word with the same depth-l predecessor set and (iii) a symbol-plus-
    deeper-word pair whose depth-l predecessor set matches.

    Failures indicate truncation (the guarantees hold for the full
    tables of a lambda-synchronizing subshift).
    """
    report = {"levels": [], "all_found": True}
    for l in range(len(tables) - 1):
        table, above = tables[l], tables[l + 1]
        entries = []
        # depth-l signatures of the deeper table's classes
        deeper = []
        for rep, sig_above, _count in above.classes():
            deeper.append((rep, sig_above, table.signature_of(rep)))
        for rep, sig, count in table.classes():
            part_ii = None
            for rep_a, _sig_a, sig_at_l in deeper:
                if sig_at_l == sig:
                    part_ii = rep_a
                    break
            part_iii = None
            for rep_a, sig_above, _ in deeper:
                by_last: dict = {}
                for u in sig_above:
                    if u:
                        by_last.setdefault(u[-1], set()).add(u[:-1])
                for beta, stripped in by_last.items():
                    if frozenset(stripped) == sig:
                        part_iii = (beta, rep_a)
                        break
                if part_iii:
                    break
            entries.append(
                {
                    "representative": rep,
                    "members": count,
                    "same_class_deeper": part_ii,
                    "symbol_factorization": part_iii,
                }
            )
            if part_ii is None or part_iii is None:
                report["all_found"] = False
        report["levels"].append({"level": l, "entries": entries})
    return report
