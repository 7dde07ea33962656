"""Leveled labeled graph systems: construction and verification.

Vertices at level l are depth-l predecessor classes; an edge labeled a
runs from the class of a+w at level l to the class of w at level l+1,
and the level maps send a deeper class to the same word's shallower
class.  Because a class is identified with its signature (the exact
predecessor set of its representative), edges and level maps are
derivable from signatures alone:

    predecessors of a+w at depth l = { u : u+a in predecessors of w at depth l+1 }.

Construction is signature-driven and deterministic; words the truncated
tables cannot reach become explicitly marked extension vertices, and the
axiom checks report any resulting holes instead of hiding them.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .errors import EmptySyncLevel, HorizonExceeded
from .oracle import ShiftOracle, language_states, through_id
from .sync import SyncWordTable, build_sync_tables
from .words import Word

VERIFIED = "verified"
REFUTED = "refuted"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Vertex:
    repr_word: Word
    signature: frozenset
    from_table: bool = True


@dataclass
class CertificateReport:
    name: str
    status: str
    details: dict = field(default_factory=dict)

    def to_json(self):
        return {"name": self.name, "status": self.status, "details": _jsonable(self.details)}


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        if isinstance(obj, (set, frozenset)):
            items.sort(key=repr)
        return items
    return obj


class LambdaGraphSystem:
    """A finite truncation of a leveled labeled graph system."""

    def __init__(self, alphabet, levels, edges, iota, provenance=None):
        self.alphabet = alphabet
        self.levels = levels  # list of list[Vertex]
        self.edges = edges    # edges[l]: list of (src at l, label, tgt at l+1)
        self.iota = iota      # iota[l]: tuple, index at l+1 -> index at l
        self.provenance = provenance or {}

    @property
    def top_level(self) -> int:
        return len(self.levels) - 1

    def vertex_counts(self) -> list:
        return [len(level) for level in self.levels]

    def signatures(self, level: int) -> list:
        return [v.signature for v in self.levels[level]]

    def in_labels(self, level: int, index: int) -> Counter:
        """Multiset of labels on edges into vertex ``index`` at ``level``."""
        return Counter(
            lab for _, lab, j in self.edges[level - 1] if j == index
        )

    def iota_power(self, level: int, index: int, depth: int) -> int:
        """Image of a vertex under ``depth`` successive level maps."""
        for l in range(level, level - depth, -1):
            index = self.iota[l - 1][index]
        return index


# -- construction ------------------------------------------------------------


def _derive_system(oracle, level_classes, sig_at, provenance):
    """Shared edge/iota derivation.

    ``level_classes``: per level, list of (payload, repr word, signature).
    ``sig_at(payload, repr, level)``: signature of that class at a
    shallower level.  Missing source classes are appended as extension
    vertices (payload None).
    """
    top = len(level_classes) - 1
    levels = []
    index_of = []  # per level: signature -> index
    for classes in level_classes:
        verts = [Vertex(rep, sig, True) for _, rep, sig in classes]
        levels.append(verts)
        index_of.append({v.signature: i for i, v in enumerate(verts)})
    payloads = [[payload for payload, _, _ in classes] for classes in level_classes]

    extension_count = 0
    sym_index = {s: i for i, s in enumerate(oracle.alphabet.symbols)}
    edges = [None] * top
    iota = [None] * top

    def ensure_vertex(level, repr_word, sig):
        nonlocal extension_count
        idx = index_of[level].get(sig)
        if idx is None:
            idx = len(levels[level])
            levels[level].append(Vertex(repr_word, sig, False))
            payloads[level].append(None)
            index_of[level][sig] = idx
            extension_count += 1
        return idx

    for l in range(top - 1, -1, -1):
        level_edges = []
        for j, tgt in enumerate(levels[l + 1]):
            by_last = {}
            for u in tgt.signature:
                if u:
                    by_last.setdefault(u[-1], []).append(u[:-1])
            for label in sorted(by_last, key=sym_index.__getitem__):
                src_sig = frozenset(by_last[label])
                i = ensure_vertex(l, (label,) + tgt.repr_word, src_sig)
                level_edges.append((i, label, j))
        level_edges.sort(key=lambda e: (e[0], sym_index[e[1]], e[2]))
        edges[l] = level_edges
        # level maps l+1 -> l: same payload (or representative) one level down
        mapping = []
        for j, v in enumerate(levels[l + 1]):
            sig_low = sig_at(payloads[l + 1][j], v.repr_word, l)
            i = ensure_vertex(l, v.repr_word, sig_low)
            mapping.append(i)
        iota[l] = tuple(mapping)

    provenance = dict(provenance)
    provenance["extension_vertices"] = extension_count
    return LambdaGraphSystem(oracle.alphabet, levels, edges, iota, provenance)


def build_lambda_sync_system(oracle: ShiftOracle, max_level: int,
                             max_word_len: int, follower_horizon: int,
                             tables: list | None = None) -> LambdaGraphSystem:
    """The leveled system over l-past classes of synchronizing words."""
    if max_level < 1:
        raise ValueError("need at least one level step")
    if tables is None:
        tables = build_sync_tables(oracle, max_level, max_word_len, follower_horizon)
    level_classes = []
    for table in tables:
        classes = table.classes()
        if not classes:
            raise EmptySyncLevel(table.level)
        level_classes.append([(rep, rep, sig) for rep, sig, _count in classes])

    def sig_at(payload, repr_word, level):
        return tables[level].signature_of(repr_word)

    provenance = {
        "kind": "lambda_synchronizing",
        "max_level": max_level,
        "max_word_len": max_word_len,
        "follower_horizon": follower_horizon,
        "table_sizes": [len(t) for t in tables],
    }
    return _derive_system(oracle, level_classes, sig_at, provenance)


def build_canonical_system(oracle: ShiftOracle, max_level: int,
                           tail_len: int) -> LambdaGraphSystem:
    """Truncated canonical system: depth-l predecessor classes of long
    words standing in for right-infinite rays.

    For finite-state oracles the ray classes are computed exactly on the
    relation graph; otherwise length-``tail_len`` words approximate rays
    and the result is flagged approximate.
    """
    if max_level < 1:
        raise ValueError("need at least one level step")
    if tail_len < max_level:
        raise ValueError("tail_len must be at least the top level")
    level_words = {
        l: language_states(oracle, l) for l in range(max_level + 1)
    }

    def sig_of_profile_words(word, state, level):
        out = []
        alive = {}
        for b, sb in level_words[level]:
            ok = alive.get(sb)
            if ok is None:
                ok = through_id(oracle, sb, word, state) >= 0
                alive[sb] = ok
            if ok:
                out.append(b)
        return frozenset(out)

    exact = False
    ray_reps = None
    if oracle.finite_states:
        from .graphs import ray_profiles

        try:
            profiles = ray_profiles(oracle)
        except AttributeError:
            profiles = None
        if profiles is not None:
            exact = True
            ray_reps = sorted(
                profiles.items(), key=lambda kv: (len(kv[1]), kv[1])
            )

    level_classes = []
    if exact:
        def ray_sig(dom, level):
            out = []
            for b, sb in level_words[level]:
                rng = {j for _, j in oracle.raw_state(sb)}
                if rng & dom:
                    out.append(b)
            return frozenset(out)

        for l in range(max_level + 1):
            seen = {}
            classes = []
            for dom, witness in ray_reps:
                sig = ray_sig(dom, l)
                if sig not in seen:
                    seen[sig] = True
                    classes.append((dom, witness, sig))
            classes.sort(key=lambda c: oracle.alphabet.word_key(c[1]))
            level_classes.append(classes)

        def sig_at(payload, repr_word, level):
            if payload is not None:
                return ray_sig(payload, level)
            state = oracle.state_id_of(repr_word)
            return sig_of_profile_words(repr_word, state, level)

    else:
        oracle.check_horizon(tail_len + max_level)
        tail_words = language_states(oracle, tail_len)
        for l in range(max_level + 1):
            seen = {}
            classes = []
            by_profile = {}
            for w, s in tail_words:
                prof = oracle.left_profile(w, max_level)
                key = prof if prof is not None else w
                if key in by_profile:
                    continue
                by_profile[key] = w
                sig = sig_of_profile_words(w, s, l)
                if sig not in seen:
                    seen[sig] = True
                    classes.append((w, w, sig))
            classes.sort(key=lambda c: oracle.alphabet.word_key(c[1]))
            level_classes.append(classes)

        def sig_at(payload, repr_word, level):
            state = oracle.state_id_of(repr_word)
            return sig_of_profile_words(repr_word, state, level)

    provenance = {
        "kind": "canonical",
        "max_level": max_level,
        "tail_len": tail_len,
        "exact": exact,
    }
    return _derive_system(oracle, level_classes, sig_at, provenance)


# -- axiom and structure verification ----------------------------------------


def verify_axioms(g: LambdaGraphSystem) -> CertificateReport:
    """Level-map surjectivity, label compatibility along the level maps,
    and the local bijection between lifted and projected edge sets."""
    failures = {"iota_surjective": [], "label_compat": [], "local_property": []}
    top = g.top_level
    for l in range(top):
        hit = set(g.iota[l])
        for i in range(len(g.levels[l])):
            if i not in hit:
                failures["iota_surjective"].append({"level": l, "vertex": i})
    for l in range(1, top):
        # labels into v at level l+1 must equal labels into iota(v) at level l
        for j in range(len(g.levels[l + 1])):
            upper = set(g.in_labels(l + 1, j))
            lower = set(g.in_labels(l, g.iota[l][j]))
            if upper != lower:
                failures["label_compat"].append(
                    {"level": l + 1, "vertex": j, "upper": sorted(upper), "lower": sorted(lower)}
                )
    for l in range(1, top):
        # E^iota(u, v) vs E_iota(u, v) for u at l-1, v at l+1
        lifted = {}
        for i, lab, j in g.edges[l]:
            lifted.setdefault((g.iota[l - 1][i], j), Counter())[lab] += 1
        projected = {}
        iota_here = g.iota[l]
        for u, lab, t in g.edges[l - 1]:
            for j in range(len(g.levels[l + 1])):
                if iota_here[j] == t:
                    projected.setdefault((u, j), Counter())[lab] += 1
        for key in set(lifted) | set(projected):
            a = lifted.get(key, Counter())
            b = projected.get(key, Counter())
            if a != b:
                u, v = key
                for lab in set(a) | set(b):
                    if a[lab] != b[lab]:
                        failures["local_property"].append(
                            {"level": l, "u": u, "v": v, "label": lab,
                             "lifted": a[lab], "projected": b[lab]}
                        )
    ok = not any(failures.values())
    return CertificateReport(
        "lambda_graph_axioms", VERIFIED if ok else REFUTED, {"failures": failures}
    )


def verify_presents(g: LambdaGraphSystem, oracle: ShiftOracle, n: int) -> CertificateReport:
    """Equality of the length-n path-label set (paths ending at the top
    level) with the language, both inclusions."""
    top = g.top_level
    if n > top:
        raise ValueError(f"need n <= top level ({top}); got {n}")
    words_to_top = {j: {()} for j in range(len(g.levels[top]))}
    for l in range(top - 1, top - n - 1, -1):
        nxt = {}
        for i, lab, j in g.edges[l]:
            if j in words_to_top:
                bucket = nxt.setdefault(i, set())
                for w in words_to_top[j]:
                    bucket.add((lab,) + w)
        words_to_top = nxt
    path_words = set()
    for bucket in words_to_top.values():
        path_words.update(bucket)
    language = {w for w, _ in language_states(oracle, n)}
    missing = oracle.alphabet.sort_words(language - path_words)
    extra = oracle.alphabet.sort_words(path_words - language)
    ok = not missing and not extra
    return CertificateReport(
        "presents_language",
        VERIFIED if ok else REFUTED,
        {"n": n, "missing": missing, "extra": extra,
         "path_words": len(path_words), "language": len(language)},
    )


def structural_checks(g: LambdaGraphSystem,
                      canonical: LambdaGraphSystem | None = None) -> CertificateReport:
    """Left-resolving, predecessor-separated, and (optionally) vertexwise
    embedding into a canonical system via signature containment."""
    details = {"left_resolving": [], "predecessor_separated": [], "subsystem": []}
    for l in range(g.top_level):
        seen = {}
        for i, lab, j in g.edges[l]:
            key = (lab, j)
            if key in seen and seen[key] != i:
                details["left_resolving"].append(
                    {"level": l + 1, "vertex": j, "label": lab}
                )
            seen[key] = i
    for l, level in enumerate(g.levels):
        sigs = [v.signature for v in level]
        if len(set(sigs)) != len(sigs):
            details["predecessor_separated"].append({"level": l})
    if canonical is not None:
        for l in range(min(g.top_level, canonical.top_level) + 1):
            have = set(canonical.signatures(l))
            for i, v in enumerate(g.levels[l]):
                if v.signature not in have:
                    details["subsystem"].append({"level": l, "vertex": i})
    ok = not any(details.values())
    return CertificateReport(
        "structural_checks", VERIFIED if ok else REFUTED, details
    )


# -- the simplicity-condition checks ------------------------------------------


def check_lambda_condition_I(g: LambdaGraphSystem) -> CertificateReport:
    """Every vertex should source two distinct paths with a common
    terminal vertex but different label sequences, within the built
    depth; unwitnessed vertices leave the check inconclusive."""
    top = g.top_level
    unwitnessed = []
    witnesses = {}
    for l in range(top):
        for i in range(len(g.levels[l])):
            found = None
            paths = {i: {()}}
            for depth in range(1, top - l + 1):
                nxt = {}
                for src, lab, tgt in g.edges[l + depth - 1]:
                    if src in paths:
                        bucket = nxt.setdefault(tgt, set())
                        for w in paths[src]:
                            bucket.add(w + (lab,))
                paths = nxt
                for tgt, labelings in paths.items():
                    if len(labelings) >= 2:
                        pair = sorted(labelings)[:2]
                        found = {"terminal_level": l + depth, "terminal": tgt,
                                 "labels": pair}
                        break
                if found:
                    break
            if found:
                witnesses[(l, i)] = found
            else:
                unwitnessed.append({"level": l, "vertex": i})
    status = VERIFIED if not unwitnessed else INCONCLUSIVE
    return CertificateReport(
        "lambda_condition_I", status,
        {"unwitnessed": unwitnessed, "witnessed": len(witnesses)},
    )


def check_sync_condition_I(oracle: ShiftOracle, tables: list) -> CertificateReport:
    """Word-level form: each class at level l admits two distinct
    length-K predecessor words of a deeper synchronizing word that land
    it in the same class."""
    top = len(tables) - 1
    unwitnessed = []
    witnessed = 0
    for l in range(top):
        table = tables[l]
        targets = [(rep, sig) for rep, sig, _ in table.classes()]
        for rep, sig in targets:
            found = None
            for k in range(1, top - l + 1):
                deeper = tables[l + k]
                for rep_nu, sig_nu, _ in deeper.classes():
                    by_suffix = {}
                    for u in sig_nu:
                        if len(u) >= k:
                            by_suffix.setdefault(u[-k:], set()).add(u[:-k])
                    matching = [
                        suf for suf, stripped in by_suffix.items()
                        if frozenset(stripped) == sig
                    ]
                    if len(matching) >= 2:
                        found = {"K": k, "nu": rep_nu,
                                 "gammas": sorted(matching)[:2]}
                        break
                if found:
                    break
            if found:
                witnessed += 1
            else:
                unwitnessed.append({"level": l, "class": rep})
    status = VERIFIED if not unwitnessed else INCONCLUSIVE
    return CertificateReport(
        "sync_condition_I", status,
        {"unwitnessed": unwitnessed, "witnessed": witnessed},
    )


def check_lambda_irreducible(g: LambdaGraphSystem) -> CertificateReport:
    """For each ordered vertex pair (i, j) at a level, search a depth d
    such that every d-fold level-map preimage of i is reached from j by
    a depth-d path."""
    top = g.top_level
    unwitnessed = []
    tables = {}
    for l in range(top):
        n = len(g.levels[l])
        for i in range(n):
            for j in range(n):
                found = None
                reachable = {j}
                for d in range(1, top - l + 1):
                    reachable = {
                        tgt for src, _, tgt in g.edges[l + d - 1] if src in reachable
                    }
                    preimages = {
                        h for h in range(len(g.levels[l + d]))
                        if g.iota_power(l + d, h, d) == i
                    }
                    if preimages and preimages <= reachable:
                        found = d
                        break
                if found is None:
                    unwitnessed.append({"level": l, "i": i, "j": j})
                else:
                    tables[(l, i, j)] = found
    status = VERIFIED if not unwitnessed else INCONCLUSIVE
    return CertificateReport(
        "lambda_irreducible", status,
        {"unwitnessed": unwitnessed,
         "depths": {f"{l}:{i}->{j}": d for (l, i, j), d in sorted(tables.items())}},
    )


def check_synchronized_irreducible(oracle: ShiftOracle, tables: list) -> CertificateReport:
    """Word-level irreducibility over the synchronizing tables: for
    classes mu, nu at level l find k such that every deeper class
    agreeing with nu at depth l is carried onto mu's class by some
    length-k predecessor word."""
    top = len(tables) - 1
    unwitnessed = []
    found_depths = {}
    for l in range(top):
        classes = [(rep, sig) for rep, sig, _ in tables[l].classes()]
        for rep_mu, sig_mu in classes:
            for rep_nu, sig_nu in classes:
                found = None
                for k in range(1, top - l + 1):
                    deeper = tables[l + k]
                    etas = [
                        (rep_eta, sig_eta)
                        for rep_eta, sig_eta, _ in deeper.classes()
                        if tables[l].signature_of(rep_eta) == sig_nu
                    ]
                    if not etas:
                        continue
                    ok = True
                    for rep_eta, sig_eta in etas:
                        by_suffix = {}
                        for u in sig_eta:
                            if len(u) >= k:
                                by_suffix.setdefault(u[-k:], set()).add(u[:-k])
                        if not any(
                            frozenset(stripped) == sig_mu
                            for stripped in by_suffix.values()
                        ):
                            ok = False
                            break
                    if ok:
                        found = k
                        break
                if found is None:
                    unwitnessed.append({"level": l, "mu": rep_mu, "nu": rep_nu})
                else:
                    found_depths[(l, rep_mu, rep_nu)] = found
    status = VERIFIED if not unwitnessed else INCONCLUSIVE
    return CertificateReport(
        "synchronized_irreducible", status,
        {"unwitnessed": unwitnessed, "witnessed": len(found_depths)},
    )
