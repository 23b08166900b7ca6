"""Bipartite source graphs and their edge-weighted projections.

The bipartite graph has the two source alphabets as parts and an edge at
every positive-probability outcome pair.  Projecting onto one side yields
an edge-weighted characteristic graph: two outcomes of that source are
linked when some jointly-possible outcome of the other source makes the
function disagree, and the edge weight is the probability mass of those
distinguishing neighbors (or their plain count under the counting rule).

n-th power graphs use OR adjacency on n-tuples (adjacent when at least one
coordinate pair is adjacent in the base graph) and carry weights summed
over jointly-supported distinguishing neighbor sequences.  OR-adjacent
tuple pairs whose weight sum is zero are kept as zero-weight edges: they
still require distinct colors for lossless block computation.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

from .errors import CapacityError, ConfigError, ValidationError
from .prob import JointPmf, Pmf

CEIL_NUDGE = 1e-9

POWER_VERTEX_BUDGET = 4096


@dataclass(frozen=True)
class FunctionTable:
    """A total bivariate function given by an explicit (x1, x2) -> value map."""

    table: Mapping[tuple, object]

    def __call__(self, x1, x2):
        try:
            return self.table[(x1, x2)]
        except KeyError:
            raise ConfigError(f"function table has no entry for {(x1, x2)!r}")

    def check_total(self, alphabet_1, alphabet_2) -> None:
        missing = [
            (x1, x2)
            for x1 in alphabet_1
            for x2 in alphabet_2
            if (x1, x2) not in self.table
        ]
        if missing:
            raise ConfigError(f"function table missing {len(missing)} pairs, e.g. {missing[0]!r}")

    def apply_blocks(self, u_block: tuple, v_block: tuple) -> tuple:
        """Coordinate-wise application to equal-length tuples."""
        return tuple(self(u, v) for u, v in zip(u_block, v_block))

    @classmethod
    def from_callable(cls, fn: Callable, alphabet_1, alphabet_2) -> "FunctionTable":
        return cls({(x1, x2): fn(x1, x2) for x1 in alphabet_1 for x2 in alphabet_2})


def builtin_function(name: str, alphabet_1, alphabet_2, k: int | None = None) -> FunctionTable:
    """Named functions over numeric alphabets: first, sum, product, modulo-k."""

    def as_num(x):
        if isinstance(x, (int, float)):
            return x
        try:
            return int(x)
        except (TypeError, ValueError):
            raise ConfigError(f"builtin function {name!r} needs numeric symbols, got {x!r}")

    if name == "first":
        fn = lambda a, b: as_num(a)
    elif name == "sum":
        fn = lambda a, b: as_num(a) + as_num(b)
    elif name == "product":
        fn = lambda a, b: as_num(a) * as_num(b)
    elif name in ("modulo", "modulo-k"):
        if not k or k < 1:
            raise ConfigError("modulo function needs k >= 1")
        fn = lambda a, b: (as_num(a) + as_num(b)) % k
    else:
        raise ConfigError(f"unknown builtin function {name!r}")
    return FunctionTable.from_callable(fn, alphabet_1, alphabet_2)


@dataclass(frozen=True)
class BipartiteGraph:
    """Bipartite source graph: parts are the alphabets, edges the support."""

    part_1: tuple
    part_2: tuple
    edges: Mapping[tuple, float]  # (x1, x2) -> joint probability, positive only
    joint: JointPmf
    function: FunctionTable

    @property
    def num_edges(self) -> int:
        return len(self.edges)


def build_bipartite(j: JointPmf, f: FunctionTable) -> BipartiteGraph:
    """Edges exactly at positive-probability pairs of the joint PMF."""
    f.check_total(j.row_alphabet, j.col_alphabet)
    edges = {(x1, x2): p for x1, x2, p in j.support()}
    return BipartiteGraph(j.row_alphabet, j.col_alphabet, edges, j, f)


@dataclass(frozen=True)
class Ewcg:
    """Edge-weighted characteristic graph of one source.

    Vertices are source symbols (n-tuples for power graphs) with their
    marginal probabilities.  Edge keys are (u, v) pairs canonicalized by
    vertex order.  Raw weights are nonnegative; normalized weights divide
    by the maximum raw weight when it is positive.
    """

    vertices: tuple
    vertex_probs: tuple[float, ...]
    edges: Mapping[tuple, float]  # canonical (u, v) -> raw weight
    power: int = 1
    side: int = 1
    _index: Mapping = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})
        Pmf(tuple(self.vertex_probs))  # validates the marginal

    def edge_key(self, u, v) -> tuple:
        iu, iv = self._index[u], self._index[v]
        if iu == iv:
            raise ValidationError(f"self-loop {u!r}")
        return (u, v) if iu < iv else (v, u)

    def weight(self, u, v) -> float:
        return self.edges.get(self.edge_key(u, v), 0.0)

    def has_edge(self, u, v) -> bool:
        return self.edge_key(u, v) in self.edges

    @property
    def max_weight(self) -> float:
        return max(self.edges.values(), default=0.0)

    def normalized_weight(self, u, v) -> float:
        key = self.edge_key(u, v)
        if key not in self.edges:
            return 0.0
        mx = self.max_weight
        return self.edges[key] / mx if mx > 0 else 0.0

    def normalized_edges(self) -> dict:
        mx = self.max_weight
        if mx <= 0:
            return {k: 0.0 for k in self.edges}
        return {k: w / mx for k, w in self.edges.items()}

    def required_disjoint(self, u, v, b: int) -> int:
        """Minimum number of disjoint colors between u and v in a b-fold
        coloring: ceil(w_norm * b), at least 1 on every edge.  A small
        downward nudge keeps exact multiples of 1/b from rounding up."""
        key = self.edge_key(u, v)
        if key not in self.edges:
            return 0
        w = self.normalized_weight(u, v)
        return max(1, math.ceil(w * b - CEIL_NUDGE))

    def neighbors(self, u) -> list:
        out = []
        for (a, c) in self.edges:
            if a == u:
                out.append(c)
            elif c == u:
                out.append(a)
        return out

    def adjacency(self) -> dict:
        """Vertex -> set of adjacent vertices (every stored edge counts,
        including zero-weight power-graph edges)."""
        adj = {v: set() for v in self.vertices}
        for (u, v) in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def marginal(self) -> Pmf:
        return Pmf(tuple(self.vertex_probs))

    def unweighted(self) -> "Ewcg":
        """Same adjacency with all edge weights set to 1."""
        return Ewcg(
            self.vertices,
            self.vertex_probs,
            {k: 1.0 for k in self.edges},
            power=self.power,
            side=self.side,
        )


def project_ewcg(g: BipartiteGraph, side: int, rule: str = "exact") -> Ewcg:
    """Project the bipartite graph onto one source.

    rule="exact": weight = sum of P(u,v)+P(u',v) over common neighbors v
    where the function distinguishes u from u'.
    rule="counting": weight = number of such common neighbors.
    """
    if side not in (1, 2):
        raise ConfigError(f"side must be 1 or 2, got {side!r}")
    if rule not in ("exact", "counting"):
        raise ConfigError(f"rule must be 'exact' or 'counting', got {rule!r}")

    j, f = g.joint, g.function
    if side == 1:
        own, other = j.row_alphabet, j.col_alphabet
        prob = lambda u, v: j.prob(u, v)
        fval = lambda u, v: f(u, v)
    else:
        own, other = j.col_alphabet, j.row_alphabet
        prob = lambda u, v: j.prob(v, u)
        fval = lambda u, v: f(v, u)

    edges = {}
    for a, u in enumerate(own):
        for u2 in own[a + 1:]:
            raw = 0.0
            count = 0
            for v in other:
                pu, pu2 = prob(u, v), prob(u2, v)
                if pu > 0.0 and pu2 > 0.0 and fval(u, v) != fval(u2, v):
                    raw += pu + pu2
                    count += 1
            if count:
                edges[(u, u2)] = raw if rule == "exact" else float(count)

    probs = j.row_marginal() if side == 1 else j.col_marginal()
    return Ewcg(tuple(own), tuple(probs), edges, power=1, side=side)


def power_graph(g: Ewcg, n: int, j: JointPmf, f: FunctionTable,
                budget: int = POWER_VERTEX_BUDGET) -> Ewcg:
    """n-th OR power of an edge-weighted characteristic graph.

    Vertices are n-tuples with i.i.d. product probabilities.  Adjacency is
    the OR rule over base adjacency; each edge carries the weight summed
    over jointly-supported neighbor sequences that distinguish the two
    endpoint blocks.
    """
    if n < 1:
        raise ConfigError(f"power must be >= 1, got {n}")
    if n == 1:
        return g

    base = g.vertices
    if len(base) ** n > budget:
        raise CapacityError(
            f"power graph would have {len(base) ** n} vertices, budget is {budget}")

    side = g.side
    if side == 1:
        supp = {u: set(j.row_support(u)) for u in base}
        base_prob = {u: p for u, p in zip(base, g.vertex_probs)}
        pair_prob = lambda u, v: j.prob(u, v)
        fval = lambda u, v: f(u, v)
    else:
        supp = {u: set(j.col_support(u)) for u in base}
        base_prob = {u: p for u, p in zip(base, g.vertex_probs)}
        pair_prob = lambda u, v: j.prob(v, u)
        fval = lambda u, v: f(v, u)

    vertices = tuple(itertools.product(base, repeat=n))
    probs = tuple(math.prod(base_prob[u] for u in tup) for tup in vertices)

    adj = g.adjacency()
    edges = {}
    for a in range(len(vertices)):
        u = vertices[a]
        for b in range(a + 1, len(vertices)):
            v = vertices[b]
            if not any(v[i] in adj[u[i]] for i in range(n)):
                continue
            # weight: sum over common-support neighbor sequences where the
            # function vector differs
            per_coord = [sorted(supp[u[i]] & supp[v[i]], key=str) for i in range(n)]
            raw = 0.0
            if all(per_coord):
                for wseq in itertools.product(*per_coord):
                    fu = tuple(fval(u[i], wseq[i]) for i in range(n))
                    fv = tuple(fval(v[i], wseq[i]) for i in range(n))
                    if fu != fv:
                        pu = math.prod(pair_prob(u[i], wseq[i]) for i in range(n))
                        pv = math.prod(pair_prob(v[i], wseq[i]) for i in range(n))
                        raw += pu + pv
            edges[(u, v)] = raw

    return Ewcg(vertices, probs, edges, power=n, side=side)
