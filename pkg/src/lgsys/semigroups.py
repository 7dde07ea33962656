"""Graph inverse semigroups and the shift families they define.

A nonzero element is kept in normal form ``(plus_block, junction,
minus_block)``: a block of raising generators, a junction vertex (None
exactly for the unit), and a block of lowering generators.  Products
reduce at the junction by the defining relations

    f- g+ = P_src(f) if f == g else 0,
    P_u P_w = 0 for u != w,
    P_src(f) f- = f- P_tgt(f),      P_tgt(f) f+ = f+ P_src(f),

together with the path-compatibility zeros of partial maps.  A word of
the shift is admissible iff its product is nonzero, so the product value
is the oracle state.
"""

from __future__ import annotations

from .errors import InvalidPresentation
from .oracle import ShiftOracle
from .words import Alphabet, Word

UNIT = ((), None, ())


class GraphInverseSemigroup:
    """The inverse semigroup of a finite directed graph.

    ``edges`` maps edge name -> (source vertex, target vertex).
    """

    def __init__(self, vertices, edges: dict):
        self.vertices = tuple(vertices)
        vertex_set = set(self.vertices)
        self.src = {}
        self.tgt = {}
        for name, (s, t) in edges.items():
            if s not in vertex_set or t not in vertex_set:
                raise InvalidPresentation(f"edge {name} uses unknown vertex")
            self.src[name] = s
            self.tgt[name] = t
        self.edge_names = tuple(sorted(edges))

    # generator values
    def minus(self, name):
        return ((), self.src[name], (name,))

    def plus(self, name):
        return ((name,), self.src[name], ())

    def idem(self, vertex):
        if vertex not in self.vertices:
            raise InvalidPresentation(f"unknown vertex {vertex}")
        return ((), vertex, ())

    def unit(self):
        return UNIT

    def multiply(self, a, b):
        """Product of two normal forms; None encodes the zero element."""
        if a is None or b is None:
            return None
        p1, u1, m1 = a
        p2, u2, m2 = b
        # cancel the inner junction: last lowering against first raising
        i = len(m1)
        j = 0
        top = len(p2)
        while i > 0 and j < top:
            if m1[i - 1] != p2[j]:
                return None
            i -= 1
            j += 1
        m1r = m1[:i]
        p2r = p2[j:]
        src = self.src
        tgt = self.tgt
        if m1r:
            right_end = tgt[m1r[-1]]
        else:
            right_end = u1  # junction survives (or None for the unit)
        if p2r:
            left_end = tgt[p2r[0]]
        else:
            left_end = u2
        if right_end is not None and left_end is not None and right_end != left_end:
            return None
        plus = p1 + p2r
        minus = m1r + m2
        if minus:
            junction = src[minus[0]]
        elif plus:
            junction = src[plus[-1]]
        else:
            junction = u1 if u1 is not None else u2
        return (plus, junction, minus)

    def evaluate(self, values) -> tuple | None:
        out = UNIT
        mul = self.multiply
        for v in values:
            out = mul(out, v)
            if out is None:
                return None
        return out

    def star(self, value):
        """The inverse-semigroup involution on generators' values."""
        if value is None:
            return None
        p, u, m = value
        # (x1...xn)* with generators starred: plus<->minus blocks swap roles
        return (tuple(reversed(m)), self._star_junction(value), tuple(reversed(p)))

    @staticmethod
    def _star_junction(value):
        p, u, m = value
        return u

    def render(self, value) -> str:
        """Readable normal form; the lone idempotent of a one-vertex graph
        is the unit."""
        if value is None:
            return "0"
        p, u, m = value
        parts = [f"{name}+" for name in p]
        if not p and not m:
            if u is None or len(self.vertices) == 1:
                parts.append("1")
            else:
                parts.append(f"P[{u}]")
        parts.extend(f"{name}-" for name in m)
        return ".".join(parts)


class SemigroupOracle(ShiftOracle):
    """Shift oracle driven by semigroup products: states are values."""

    finite_states = False
    composable = True

    def __init__(self, semigroup: GraphInverseSemigroup, symbol_values: dict,
                 alphabet: Alphabet):
        super().__init__(alphabet)
        self.semigroup = semigroup
        self.symbol_values = dict(symbol_values)
        for sym in alphabet.symbols:
            if sym not in self.symbol_values:
                raise InvalidPresentation(f"symbol {sym} has no generator value")
        self._rev: SemigroupOracle | None = None

    def initial_state(self):
        return UNIT

    def _step(self, state, symbol):
        return self.semigroup.multiply(state, self.symbol_values[symbol])

    def compose(self, left_state, right_state):
        return self.semigroup.multiply(left_state, right_state)

    def left_profile(self, word: Word, length: int):
        return self.state_of(word)

    def value_of(self, word: Word):
        return self.state_of(word)

    def reversed(self) -> "SemigroupOracle":
        # the reversed language evaluates the starred generators in
        # original order: rev(w) != 0  iff  star(w_1)...star(w_n) != 0
        if self._rev is None:
            starred = {
                sym: self.semigroup.star(val)
                for sym, val in self.symbol_values.items()
            }
            rev = SemigroupOracle(self.semigroup, starred, self.alphabet)
            rev._rev = self
            self._rev = rev
        return self._rev


class MarkovDyckPresentation:
    """Markov-Dyck (and Markov-Motzkin) shift of a finite directed graph.

    Alphabet order: all lowering symbols first (edge order), then
    idempotent/unit symbols, then raising symbols.
    """

    def __init__(self, vertices, edges, idempotents: bool = False,
                 unit_symbol: str | None = None):
        edge_map = {}
        for name, s, t in edges:
            if name in edge_map:
                raise InvalidPresentation(f"duplicate edge name {name}")
            edge_map[name] = (s, t)
        self.semigroup = GraphInverseSemigroup(vertices, edge_map)
        self.idempotents = idempotents
        self.unit_symbol = unit_symbol
        names = [name for name, _, _ in edges]
        symbols = [f"{n}-" for n in names]
        values = {f"{n}-": self.semigroup.minus(n) for n in names}
        if idempotents:
            for v in self.semigroup.vertices:
                sym = f"P{v}"
                symbols.append(sym)
                values[sym] = self.semigroup.idem(v)
        if unit_symbol is not None:
            symbols.append(unit_symbol)
            values[unit_symbol] = self.semigroup.unit()
        symbols.extend(f"{n}+" for n in names)
        values.update({f"{n}+": self.semigroup.plus(n) for n in names})
        self.alphabet = Alphabet(symbols)
        self.symbol_values = values

    def oracle(self) -> SemigroupOracle:
        return SemigroupOracle(self.semigroup, self.symbol_values, self.alphabet)


def dyck_presentation(n: int) -> MarkovDyckPresentation:
    """Dyck shift D_n: one vertex, n loops."""
    if n < 2:
        raise InvalidPresentation("Dyck shifts need at least 2 loops")
    edges = [(str(i + 1), "v", "v") for i in range(n)]
    return MarkovDyckPresentation(("v",), edges)


def motzkin_presentation(n: int) -> MarkovDyckPresentation:
    """Motzkin shift M_n: the Dyck alphabet plus the unit symbol."""
    if n < 2:
        raise InvalidPresentation("Motzkin shifts need at least 2 loops")
    edges = [(str(i + 1), "v", "v") for i in range(n)]
    return MarkovDyckPresentation(("v",), edges, unit_symbol="1")


def markov_dyck_oracle(p: MarkovDyckPresentation) -> SemigroupOracle:
    return p.oracle()


def motzkin_oracle(p: MarkovDyckPresentation) -> SemigroupOracle:
    return p.oracle()


def semigroup_evaluate(p, word: Word):
    """Evaluate a word of generator symbols; None encodes zero."""
    if isinstance(p, MarkovDyckPresentation):
        values = p.symbol_values
        sg = p.semigroup
    else:
        values = p.symbol_values
        sg = p.semigroup
    return sg.evaluate(values[s] for s in word)


class SemigroupLabeledPresentation:
    """Subshift of outer-graph paths whose semigroup labels are nonzero.

    The inner graph defines the graph inverse semigroup; the outer
    irreducible graph carries edge labels that are lowering products,
    raising products, or vertex idempotents.  A word (sequence of outer
    edges) is admissible iff it is a path and its label product is
    nonzero.
    """

    def __init__(self, inner_vertices, inner_edges, outer_vertices, outer_edges,
                 labels: dict, cycle_search_bound: int | None = None):
        edge_map = {}
        for name, s, t in inner_edges:
            edge_map[name] = (s, t)
        self.semigroup = GraphInverseSemigroup(inner_vertices, edge_map)
        self.outer_vertices = tuple(outer_vertices)
        self.outer_edges = {}
        for name, s, t in outer_edges:
            if name in self.outer_edges:
                raise InvalidPresentation(f"duplicate outer edge {name}")
            if s not in self.outer_vertices or t not in self.outer_vertices:
                raise InvalidPresentation(f"outer edge {name} uses unknown vertex")
            self.outer_edges[name] = (s, t)
        self.labels = {}
        for name in self.outer_edges:
            if name not in labels:
                raise InvalidPresentation(f"outer edge {name} has no label")
            self.labels[name] = self._label_value(labels[name])
        self.alphabet = Alphabet(sorted(self.outer_edges))
        self._validate(cycle_search_bound or 2 * len(self.outer_edges) + 2)

    def _label_value(self, spec):
        kind = spec[0]
        if kind == "minus":
            return self.semigroup.evaluate(
                self.semigroup.minus(e) for e in spec[1]
            )
        if kind == "plus":
            return self.semigroup.evaluate(
                self.semigroup.plus(e) for e in spec[1]
            )
        if kind == "idem":
            return self.semigroup.idem(spec[1])
        raise InvalidPresentation(f"unknown label kind {kind!r}")

    def _validate(self, bound: int):
        sg = self.semigroup
        # outer-vertex classes: cycles whose label product is a vertex idempotent
        omega_of: dict = {}
        size_cap = len(sg.vertices) + bound
        for start in self.outer_vertices:
            found = set()
            seen = {(start, UNIT)}
            frontier = [(start, UNIT)]
            for _ in range(bound):
                nxt = []
                for at, value in frontier:
                    for name, (s, t) in self.outer_edges.items():
                        if s != at:
                            continue
                        v2 = sg.multiply(value, self.labels[name])
                        if v2 is None:
                            continue
                        if t == start and v2[0] == () and v2[2] == () and v2[1] is not None:
                            found.add(v2[1])
                        if len(v2[0]) + len(v2[2]) <= size_cap and (t, v2) not in seen:
                            seen.add((t, v2))
                            nxt.append((t, v2))
                frontier = nxt
                if not frontier:
                    break
            if len(found) != 1:
                raise InvalidPresentation(
                    f"outer vertex {start} lies in {len(found)} idempotent classes; "
                    "need exactly one for a partition"
                )
            omega_of[start] = next(iter(found))
        self.omega_of = omega_of
        covered = set(omega_of.values())
        if covered != set(sg.vertices):
            raise InvalidPresentation(
                "outer-vertex classes do not cover every inner vertex"
            )
        # edge compatibility at class boundaries (edge labels, not vertices)
        for name, (s, t) in self.outer_edges.items():
            lab = self.labels[name]
            if sg.multiply(lab, sg.idem(omega_of[t])) is None:
                raise InvalidPresentation(
                    f"edge {name} enters class {omega_of[t]} incompatibly"
                )
            if sg.multiply(sg.idem(omega_of[s]), lab) is None:
                raise InvalidPresentation(
                    f"edge {name} leaves class {omega_of[s]} incompatibly"
                )

    def oracle(self) -> "SemigroupLabeledOracle":
        return SemigroupLabeledOracle(self)


class SemigroupLabeledOracle(ShiftOracle):
    """Oracle for a semigroup-labeled shift: states are (path start, path
    end, label product)."""

    finite_states = False
    composable = True

    def __init__(self, presentation: SemigroupLabeledPresentation, reversed_=False):
        super().__init__(presentation.alphabet)
        self.presentation = presentation
        self._reversed = reversed_
        sg = presentation.semigroup
        if reversed_:
            self.edge_ends = {
                name: (t, s) for name, (s, t) in presentation.outer_edges.items()
            }
            self.edge_values = {
                name: sg.star(val) for name, val in presentation.labels.items()
            }
        else:
            self.edge_ends = dict(presentation.outer_edges)
            self.edge_values = dict(presentation.labels)
        self._rev: SemigroupLabeledOracle | None = None

    def initial_state(self):
        return (None, None, UNIT)

    def _step(self, state, symbol):
        start, end, value = state
        s, t = self.edge_ends[symbol]
        if end is not None and end != s:
            return None
        v2 = self.presentation.semigroup.multiply(value, self.edge_values[symbol])
        if v2 is None:
            return None
        return (start if start is not None else s, t, v2)

    def compose(self, left_state, right_state):
        s1, e1, v1 = left_state
        s2, e2, v2 = right_state
        if s2 is None:  # right part is the empty word
            return left_state
        if s1 is None:
            return right_state
        if e1 != s2:
            return None
        v = self.presentation.semigroup.multiply(v1, v2)
        if v is None:
            return None
        return (s1, e2, v)

    def left_profile(self, word: Word, length: int):
        return self.state_of(word)

    def reversed(self) -> "SemigroupLabeledOracle":
        if self._rev is None:
            rev = SemigroupLabeledOracle(
                self.presentation, reversed_=not self._reversed
            )
            rev._rev = self
            self._rev = rev
        return self._rev


def semigroup_labeled_oracle(p: SemigroupLabeledPresentation) -> SemigroupLabeledOracle:
    return p.oracle()
