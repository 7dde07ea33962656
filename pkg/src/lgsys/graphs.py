"""Labeled-graph presentations: shifts of finite type, sofic shifts, beta-shifts.

All three families reduce to one finite labeled directed graph whose
bi-essential path labels form the language.  The oracle state of a word
w is the transfer relation T(w) = { (p, q) : some path from p to q is
labeled w }, composed symbol by symbol.  Relations make every follower
quantification exactly decidable (finite state space) and give a cheap
predecessor abstraction: admissibility of u+w depends on w only through
dom T(w).
"""

from __future__ import annotations

from .errors import InvalidExpansion, InvalidPresentation, NotIrreducible
from .oracle import ShiftOracle
from .words import Alphabet, Word


class LabeledGraph:
    """Finite labeled directed graph, the presentation of a sofic shift.

    ``states`` is an ordered tuple of hashable names; ``edges`` is a
    tuple of (source, label, target).  Parallel edges with equal labels
    are collapsed.
    """

    def __init__(self, states, edges, right_resolving: bool = False):
        self.states = tuple(states)
        self.edges = tuple(sorted(set(edges), key=self._edge_key))
        self.right_resolving = right_resolving
        state_set = set(self.states)
        if len(state_set) != len(self.states):
            raise InvalidPresentation("duplicate state names")
        for s, lab, t in self.edges:
            if s not in state_set or t not in state_set:
                raise InvalidPresentation(f"edge ({s},{lab},{t}) uses unknown state")
        if right_resolving:
            seen = set()
            for s, lab, _ in self.edges:
                if (s, lab) in seen:
                    raise InvalidPresentation(
                        f"not right-resolving: state {s} has two out-edges labeled {lab}"
                    )
                seen.add((s, lab))

    @staticmethod
    def _edge_key(edge):
        s, lab, t = edge
        return (str(s), str(lab), str(t))

    def labels(self) -> tuple:
        return tuple(sorted({lab for _, lab, _ in self.edges}))

    def trimmed(self) -> "LabeledGraph":
        """Bi-essential subgraph: iteratively drop states lacking an
        out-edge or an in-edge."""
        states = set(self.states)
        edges = set(self.edges)
        while True:
            has_out = {s for s, _, _ in edges}
            has_in = {t for _, _, t in edges}
            keep = {s for s in states if s in has_out and s in has_in}
            if keep == states:
                break
            states = keep
            edges = {e for e in edges if e[0] in keep and e[2] in keep}
        if not states:
            raise InvalidPresentation("graph trims to nothing: empty language")
        ordered = tuple(s for s in self.states if s in states)
        return LabeledGraph(ordered, edges, right_resolving=self.right_resolving)

    def reversed_graph(self) -> "LabeledGraph":
        return LabeledGraph(
            self.states, [(t, lab, s) for s, lab, t in self.edges]
        )

    def is_strongly_connected(self) -> bool:
        if not self.states:
            return False
        fwd: dict = {s: [] for s in self.states}
        bwd: dict = {s: [] for s in self.states}
        for s, _, t in self.edges:
            fwd[s].append(t)
            bwd[t].append(s)

        def reach(start, adj):
            seen = {start}
            stack = [start]
            while stack:
                for nxt in adj[stack.pop()]:
                    if nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            return seen

        root = self.states[0]
        return len(reach(root, fwd)) == len(self.states) == len(reach(root, bwd))

    def oracle(self, alphabet: Alphabet | None = None) -> "GraphOracle":
        return GraphOracle(self, alphabet=alphabet)


class GraphOracle(ShiftOracle):
    """Admissibility oracle of a labeled graph: a word is admissible iff
    some path carries it.  States are transfer relations."""

    finite_states = True
    composable = True

    def __init__(self, graph: LabeledGraph, alphabet: Alphabet | None = None):
        graph = graph.trimmed()
        if alphabet is None:
            alphabet = Alphabet(graph.labels())
        else:
            missing = set(graph.labels()) - set(alphabet.symbols)
            if missing:
                raise InvalidPresentation(f"labels outside alphabet: {missing}")
        super().__init__(alphabet)
        self.graph = graph
        index = {s: i for i, s in enumerate(graph.states)}
        succ: dict = {}
        for s, lab, t in graph.edges:
            succ.setdefault(lab, {}).setdefault(index[s], []).append(index[t])
        self._succ = {
            lab: {i: tuple(js) for i, js in table.items()}
            for lab, table in succ.items()
        }
        self._identity = frozenset((i, i) for i in range(len(graph.states)))
        self._rev: GraphOracle | None = None

    def initial_state(self):
        return self._identity

    def _step(self, state, symbol):
        table = self._succ.get(symbol)
        if table is None:
            return None
        out = {
            (i, k)
            for i, j in state
            for k in table.get(j, ())
        }
        return frozenset(out) if out else None

    def compose(self, left_state, right_state):
        targets: dict = {}
        for j, k in right_state:
            targets.setdefault(j, []).append(k)
        out = {
            (i, k)
            for i, j in left_state
            if j in targets
            for k in targets[j]
        }
        return frozenset(out) if out else None

    def left_profile(self, word: Word, length: int):
        state = self.state_of(word)
        if state is None:
            return None
        return frozenset(i for i, _ in state)

    def reversed(self) -> "GraphOracle":
        if self._rev is None:
            rev = GraphOracle(self.graph.reversed_graph(), alphabet=self.alphabet)
            rev._rev = self
            self._rev = rev
        return self._rev


# -- shifts of finite type ---------------------------------------------------


class SftPresentation:
    """Subshift of finite type given by a finite set of forbidden words."""

    def __init__(self, alphabet, forbidden_words):
        self.alphabet = alphabet if isinstance(alphabet, Alphabet) else Alphabet(alphabet)
        forb = []
        for f in forbidden_words:
            f = tuple(f)
            if not f:
                raise InvalidPresentation("forbidden words must be nonempty")
            if not self.alphabet.contains_word(f):
                raise InvalidPresentation(f"forbidden word uses unknown symbols: {f}")
            forb.append(f)
        self.forbidden_words = tuple(self.alphabet.sort_words(forb))

    def _avoids(self, word: Word) -> bool:
        for f in self.forbidden_words:
            m = len(f)
            for i in range(len(word) - m + 1):
                if word[i : i + m] == f:
                    return False
        return True

    def to_labeled_graph(self) -> LabeledGraph:
        """De Bruijn graph on (k-1)-blocks, trimmed bi-essential, where k
        is the longest forbidden length (at least 2)."""
        symbols = [
            s for s in self.alphabet.symbols if (s,) not in self.forbidden_words
        ]
        if not symbols:
            raise InvalidPresentation("all symbols forbidden: empty language")
        k = max([len(f) for f in self.forbidden_words], default=1)
        if k <= 1:
            states = [()]
            edges = [((), s, ()) for s in symbols]
            return LabeledGraph(states, edges, right_resolving=True)
        m = k - 1
        blocks = [()]
        for _ in range(m):
            blocks = [
                b + (s,) for b in blocks for s in symbols if self._avoids(b + (s,))
            ]
        edges = []
        block_set = set(blocks)
        for b in blocks:
            for s in symbols:
                nxt = b[1:] + (s,)
                if nxt in block_set and self._avoids(b + (s,)):
                    edges.append((b, s, nxt))
        return LabeledGraph(tuple(blocks), edges, right_resolving=True).trimmed()

    def oracle(self) -> GraphOracle:
        return GraphOracle(self.to_labeled_graph(), alphabet=self.alphabet)


def sft_oracle(presentation: SftPresentation) -> GraphOracle:
    return presentation.oracle()


# -- beta-shifts -------------------------------------------------------------


class BetaPresentation:
    """Beta-shift given by the quasi-greedy expansion of 1.

    The expansion is supplied directly as (preperiod, period) digit
    tuples; no root finding for beta happens here.  Validity means the
    standard lexicographic self-admissibility: every shift of the
    expansion is lexicographically at most the expansion itself.
    """

    def __init__(self, preperiod, period):
        self.preperiod = tuple(int(d) for d in preperiod)
        self.period = tuple(int(d) for d in period)
        if not self.period:
            raise InvalidExpansion("period must be nonempty")
        if any(d < 0 for d in self.preperiod + self.period):
            raise InvalidExpansion("digits must be nonnegative")
        if self.digit(0) < 1:
            raise InvalidExpansion("expansion of 1 must start with a digit >= 1")
        if not self.preperiod and all(d == 0 for d in self.period):
            raise InvalidExpansion("expansion must not be identically zero")
        self._check_self_admissible()

    def digit(self, i: int) -> int:
        p = len(self.preperiod)
        if i < p:
            return self.preperiod[i]
        return self.period[(i - p) % len(self.period)]

    def _check_self_admissible(self):
        # two sequences that are eventually periodic with period q and
        # preperiod <= p agree iff they agree on p + 2q terms
        p, q = len(self.preperiod), len(self.period)
        window = p + 2 * q + 2
        base = [self.digit(i) for i in range(window + p + q)]
        for k in range(1, p + q + 1):
            shifted = base[k : k + window]
            if shifted > base[:window]:
                raise InvalidExpansion(
                    f"shift by {k} exceeds the expansion lexicographically"
                )

    def to_labeled_graph(self) -> LabeledGraph:
        """Spine automaton: state i has compared positions 0..i-1 of the
        expansion; a strictly smaller digit resets to state 0."""
        p, q = len(self.preperiod), len(self.period)
        n = p + q
        edges = []
        for i in range(n):
            di = self.digit(i)
            spine_next = i + 1 if i + 1 < n else p
            edges.append((i, str(di), spine_next))
            for smaller in range(di):
                edges.append((i, str(smaller), 0))
        states = tuple(range(n))
        graph = LabeledGraph(states, edges, right_resolving=True).trimmed()
        return graph

    def oracle(self) -> GraphOracle:
        p, q = len(self.preperiod), len(self.period)
        max_digit = max(self.digit(i) for i in range(p + q))
        alphabet = Alphabet([str(d) for d in range(max_digit + 1)])
        return GraphOracle(self.to_labeled_graph(), alphabet=alphabet)


def beta_oracle(presentation: BetaPresentation) -> GraphOracle:
    return presentation.oracle()


# -- Fischer cover -----------------------------------------------------------


def _determinize(graph: LabeledGraph):
    """Subset automaton of a labeled graph, from the full state set.

    Returns (subset list, transition dict (subset, label) -> subset).
    """
    labels = graph.labels()
    succ: dict = {lab: {} for lab in labels}
    for s, lab, t in graph.edges:
        succ[lab].setdefault(s, []).append(t)
    start = frozenset(graph.states)
    seen = {start}
    order = [start]
    trans = {}
    frontier = [start]
    while frontier:
        nxt_frontier = []
        for sub in frontier:
            for lab in labels:
                table = succ[lab]
                image = {t for s in sub for t in table.get(s, ())}
                if not image:
                    continue
                image = frozenset(image)
                trans[(sub, lab)] = image
                if image not in seen:
                    seen.add(image)
                    order.append(image)
                    nxt_frontier.append(image)
        frontier = nxt_frontier
    return order, trans


def _minimize(states, trans, labels):
    """Moore refinement for an all-accepting partial DFA.

    Returns a map state -> class id (0-based, deterministic).
    """
    block = {s: 0 for s in states}
    while True:
        signature = {}
        for s in states:
            signature[s] = (
                block[s],
                tuple(
                    (lab, block[trans[(s, lab)]] if (s, lab) in trans else -1)
                    for lab in labels
                ),
            )
        relabel = {}
        for s in states:  # deterministic: states carry their first-seen order
            sig = signature[s]
            if sig not in relabel:
                relabel[sig] = len(relabel)
        new_block = {s: relabel[signature[s]] for s in states}
        if new_block == block:
            return block
        block = new_block


def fischer_cover(presentation) -> LabeledGraph:
    """Left Fischer cover: the minimal left-resolving presentation of an
    irreducible sofic shift.

    Accepts a LabeledGraph, an SftPresentation, or a GraphOracle.
    """
    if isinstance(presentation, SftPresentation):
        graph = presentation.to_labeled_graph()
    elif isinstance(presentation, GraphOracle):
        graph = presentation.graph
    else:
        graph = presentation
    graph = graph.trimmed()
    if not graph.is_strongly_connected():
        raise NotIrreducible("presentation graph is not strongly connected")

    rev = graph.reversed_graph()
    subsets, trans = _determinize(rev)
    labels = rev.labels()
    block = _minimize(subsets, trans, labels)

    n_classes = len(set(block.values()))
    adj = {c: set() for c in range(n_classes)}
    for (sub, lab), img in trans.items():
        adj[block[sub]].add(block[img])

    # SCCs of the class graph (iterative Tarjan)
    sccs = _strongly_connected_components(range(n_classes), adj)
    scc_of = {}
    for i, comp in enumerate(sccs):
        for c in comp:
            scc_of[c] = i
    # condensed reachability; Tarjan emits each SCC after its successors,
    # so ascending order sees successor reach-sets already complete
    reach = {i: {i} for i in range(len(sccs))}
    for i in range(len(sccs)):
        for c in sccs[i]:
            for d in adj[c]:
                reach[i] |= reach[scc_of[d]]
    target = [
        i
        for i in range(len(sccs))
        if all(i in reach[j] for j in range(len(sccs)))
    ]
    if len(target) != 1:
        raise NotIrreducible("no unique absorbing component; shift not irreducible")
    core = set(sccs[target[0]])

    # cover of the reversed shift: classes of the core, then reverse back
    core_classes = sorted(core)
    rename = {c: i for i, c in enumerate(core_classes)}
    edge_set = set()
    for (sub, lab), img in trans.items():
        b, bi = block[sub], block[img]
        if b in core and bi in core:
            edge_set.add((rename[bi], lab, rename[b]))  # reversed back
    cover = LabeledGraph(tuple(range(len(core_classes))), edge_set).trimmed()
    # sanity: left-resolving by construction
    seen = set()
    for s, lab, t in cover.edges:
        if (lab, t) in seen:
            raise NotIrreducible("cover construction produced a non-left-resolving graph")
        seen.add((lab, t))
    return cover


def _strongly_connected_components(nodes, adj):
    """Tarjan SCCs, iterative; returned in reverse topological order."""
    index = {}
    low = {}
    on_stack = set()
    stack = []
    out = []
    counter = [0]
    for root in nodes:
        if root in index:
            continue
        work = [(root, iter(sorted(adj[root])))]
        index[root] = low[root] = counter[0]
        counter[0] += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for child in it:
                if child not in index:
                    index[child] = low[child] = counter[0]
                    counter[0] += 1
                    stack.append(child)
                    on_stack.add(child)
                    work.append((child, iter(sorted(adj[child]))))
                    advanced = True
                    break
                elif child in on_stack:
                    low[node] = min(low[node], index[child])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                out.append(sorted(comp))
    return out


def labeled_graphs_isomorphic(g1: LabeledGraph, g2: LabeledGraph) -> bool:
    """Label-preserving digraph isomorphism by permutation search (small n)."""
    if len(g1.states) != len(g2.states) or len(g1.edges) != len(g2.edges):
        return False
    from itertools import permutations

    s1, s2 = list(g1.states), list(g2.states)
    e1 = {(g1.states.index(s), lab, g1.states.index(t)) for s, lab, t in g1.edges}
    for perm in permutations(range(len(s2))):
        e2 = {
            (perm[s2.index(s)], lab, perm[s2.index(t)]) for s, lab, t in g2.edges
        }
        if e1 == e2:
            return True
    return False


def ray_profiles(oracle: GraphOracle, cap: int = 50000):
    """Predecessor profiles realizable by right-infinite rays.

    A profile is dom T(w); a ray realizes the eventual value of the
    decreasing sequence dom T(x[0:n]).  Computed on the reachable
    relation graph: a profile is realizable iff some relation with that
    domain lies on an infinite path along which the domain never changes.
    Returns a dict profile -> shortest witness word reaching a relation
    where the profile persists.  None when the relation graph exceeds
    ``cap`` (caller falls back to finite-word approximation).
    """
    init = oracle.initial_state()
    seen = {init: ()}
    order = [init]
    frontier = [init]
    step = oracle.step
    symbols = oracle.alphabet.symbols
    while frontier:
        nxt = []
        for state in frontier:
            for symbol in symbols:
                s2 = step(state, symbol)
                if s2 is not None and s2 not in seen:
                    seen[s2] = seen[state] + (symbol,)
                    order.append(s2)
                    nxt.append(s2)
            if len(seen) > cap:
                return None
        frontier = nxt

    def dom(rel):
        return frozenset(i for i, _ in rel)

    # prune, per domain value, to the sub-relation-graph where the domain
    # can persist forever
    by_dom: dict = {}
    for state in order:
        by_dom.setdefault(dom(state), set()).add(state)
    result = {}
    for d, group in by_dom.items():
        alive = set(group)
        changed = True
        while changed:
            changed = False
            for state in list(alive):
                if not any(
                    (s2 := step(state, symbol)) is not None and s2 in alive
                    for symbol in symbols
                ):
                    alive.discard(state)
                    changed = True
        if alive:
            witness = min((seen[s] for s in alive), key=lambda w: (len(w), w))
            result[d] = witness
    return result
