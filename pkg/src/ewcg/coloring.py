"""Colorings of edge-weighted characteristic graphs.

Covers replica-weight splitting, validity checking of b-fold colorings
against the disjoint-color rule, minimum-entropy traditional coloring,
exact and heuristic searches for minimum-entropy a:b colorings, b-fold
chromatic numbers, and the exact fractional chromatic number via a
rational LP over maximal independent sets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, InfeasibleColoringError, ValidationError
from .graphs import CEIL_NUDGE, Ewcg
from .prob import Pmf, entropy
from .rational_lp import solve_min_cover

EXACT_MIN_ENTROPY_VERTEX_BUDGET = 12
EXACT_FOLDED_VERTEX_BUDGET = 8
EXACT_FOLDED_PALETTE_BUDGET = 8
EXACT_NODE_BUDGET = 5_000_000
MIS_ENUMERATION_BUDGET = 100_000
DEFAULT_RESTARTS = 32


# ---------------------------------------------------------------------------
# replica splitting


@dataclass(frozen=True)
class ReplicaTuple:
    """The b replica graphs of a normalized EWCG with per-replica weights.

    Splitting per edge is greedy: replica i takes
    min(1, max(b*w - sum of earlier replica weights, 0)),
    which yields a monotone nonincreasing weight sequence whose average
    recovers the normalized weight.
    """

    base: Ewcg
    fold: int
    replicas: tuple[Mapping[tuple, float], ...]

    def replica_edges(self, i: int) -> dict:
        """Positive-weight edges of replica i (0-based)."""
        return {k: w for k, w in self.replicas[i].items() if w > 0.0}


def split_replica_weights(w: float, b: int) -> tuple[float, ...]:
    """Split one normalized edge weight across b replicas."""
    if w < 0.0 or w > 1.0 + CEIL_NUDGE:
        raise ValidationError(f"normalized weight out of range: {w!r}")
    out = []
    acc = 0.0
    for _ in range(b):
        wi = min(1.0, max(b * w - acc, 0.0))
        out.append(wi)
        acc += wi
    return tuple(out)


def split_replicas(g: Ewcg, b: int) -> ReplicaTuple:
    if b < 1:
        raise ValidationError(f"fold must be >= 1, got {b}")
    norm = g.normalized_edges()
    replicas = [dict() for _ in range(b)]
    for key, w in norm.items():
        parts = split_replica_weights(w, b)
        for i, wi in enumerate(parts):
            replicas[i][key] = wi
    return ReplicaTuple(g, b, tuple(replicas))


# ---------------------------------------------------------------------------
# folded colorings


@dataclass(frozen=True)
class FoldedColoring:
    """An a:b coloring: every vertex holds b color slots from palette [a]."""

    palette_size: int
    fold: int
    slots: Mapping[object, tuple[int, ...]]

    def __post_init__(self):
        for v, s in self.slots.items():
            if len(s) != self.fold:
                raise ValidationError(f"vertex {v!r} has {len(s)} slots, fold is {self.fold}")
            for c in s:
                if not (0 <= c < self.palette_size):
                    raise ValidationError(f"vertex {v!r} uses color {c} outside palette")

    def color_set(self, v) -> frozenset:
        return frozenset(self.slots[v])

    def classes(self) -> dict[int, list]:
        """Color -> vertices holding it (via their color sets)."""
        out: dict[int, list] = {}
        for v, s in self.slots.items():
            for c in set(s):
                out.setdefault(c, []).append(v)
        return out

    @classmethod
    def from_partition(cls, classes: Sequence[Sequence], fold: int = 1,
                       palette_size: int | None = None) -> "FoldedColoring":
        """Single-color-per-class partition, replicated across `fold` slots
        with a disjoint palette per slot (class i gets colors i, k+i, 2k+i...)."""
        k = len(classes)
        a = palette_size if palette_size is not None else k * fold
        slots = {}
        for i, cl in enumerate(classes):
            cols = tuple(i + r * k for r in range(fold))
            for v in cl:
                slots[v] = cols
        return cls(a, fold, slots)


@dataclass(frozen=True)
class ValidityReport:
    ok: bool
    violations: tuple  # (u, v, required, achieved)


def validate_folded(c: FoldedColoring, g: Ewcg) -> ValidityReport:
    """Check the disjoint-color rule on every edge.

    Edge (u, v) with normalized weight w needs at least ceil(w*b) disjoint
    colors in each direction; zero-weight vertex pairs that are not edges
    are unconstrained.
    """
    for v in g.vertices:
        if v not in c.slots:
            raise ValidationError(f"coloring misses vertex {v!r}")
    b = c.fold
    violations = []
    for (u, v) in g.edges:
        need = g.required_disjoint(u, v, b)
        su, sv = c.color_set(u), c.color_set(v)
        got = min(len(su - sv), len(sv - su))
        if got < need:
            violations.append((u, v, need, got))
    return ValidityReport(not violations, tuple(violations))


def coloring_entropy(c: FoldedColoring, marginal: Pmf, vertices: Sequence) -> float:
    """Entropy in bits of the induced color PMF (each slot carries p(x)/b)."""
    masses: dict[int, float] = {}
    b = c.fold
    for v, p in zip(vertices, marginal.probs):
        for col in c.slots[v]:
            masses[col] = masses.get(col, 0.0) + p / b
    return entropy(Pmf.normalized(list(masses.values()))) if masses else 0.0


# ---------------------------------------------------------------------------
# search helpers


def _order_vertices(g: Ewcg) -> list:
    """Spec tie-break order: descending marginal probability, then position."""
    idx = {v: i for i, v in enumerate(g.vertices)}
    return sorted(g.vertices, key=lambda v: (-g.vertex_probs[idx[v]], idx[v]))


def _requirements(g: Ewcg, b: int) -> dict:
    req = {}
    for (u, v) in g.edges:
        req[(u, v)] = req[(v, u)] = g.required_disjoint(u, v, b)
    return req


def _entropy_of_masses(masses: Sequence[float]) -> float:
    total = math.fsum(masses)
    if total <= 0:
        return 0.0
    return -math.fsum((m / total) * math.log2(m / total) for m in masses if m > 0)


def _completion_lower_bound(masses: list[float], remaining: list[float], b: int) -> float:
    """Lower bound on the entropy of any completion: greedily concentrate
    each remaining vertex's mass on the b currently-largest colors (the most
    majorizing completion the b-distinct-slots constraint allows)."""
    work = sorted(masses, reverse=True)
    for p in remaining:
        share = p / b
        for i in range(min(b, len(work))):
            work[i] += share
        work.sort(reverse=True)
    return _entropy_of_masses(work)


def _candidate_sets(used: int, a: int, b: int) -> list[tuple[int, ...]]:
    """Canonical candidate b-sets: any old colors plus a prefix of unused ones."""
    out = []
    for k in range(min(b, a - used) + 1):
        new = tuple(range(used, used + k))
        for old in itertools.combinations(range(used), b - k):
            out.append(old + new)
    return out


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.count = 0

    def tick(self):
        self.count += 1
        if self.count > self.limit:
            raise CapacityError(f"exact search exceeded {self.limit} nodes")


def _exact_folded_search(g: Ewcg, a: int, b: int, marginal: Pmf,
                         incumbent: float | None = None,
                         feasibility_only: bool = False,
                         node_budget: int = EXACT_NODE_BUDGET):
    """Exhaustive canonical DFS over valid a:b colorings.

    Returns (best_rate, slots dict) or (None, None) when no valid coloring
    exists.  With feasibility_only=True, stops at the first valid coloring.
    """
    order = _order_vertices(g)
    idx = {v: i for i, v in enumerate(g.vertices)}
    req = _requirements(g, b)
    adj = g.adjacency()
    pos = {v: i for i, v in enumerate(order)}
    earlier_nbrs = {v: [u for u in adj[v] if pos[u] < pos[v]] for v in order}
    probs = {v: g.vertex_probs[idx[v]] for v in order}
    budget = _Budget(node_budget)

    best_rate = incumbent if incumbent is not None else math.inf
    best_slots = None
    assign: dict = {}
    masses = [0.0] * a

    def rec(i: int, used: int):
        nonlocal best_rate, best_slots
        budget.tick()
        if i == len(order):
            rate = _entropy_of_masses([m for m in masses if m > 0]) / b
            if feasibility_only or rate < best_rate - 1e-12:
                best_rate = rate
                best_slots = dict(assign)
            return
        v = order[i]
        remaining = [probs[u] for u in order[i + 1:]]
        for cand in _candidate_sets(used, a, b):
            cset = set(cand)
            ok = True
            for u in earlier_nbrs[v]:
                if b - len(cset & set(assign[u])) < req[(u, v)]:
                    ok = False
                    break
            if not ok:
                continue
            share = probs[v] / b
            for c in cand:
                masses[c] += share
            if not feasibility_only:
                lb = _completion_lower_bound([m for m in masses if m > 0], remaining, b) / b
            else:
                lb = -math.inf
            if feasibility_only or lb < best_rate - 1e-12:
                assign[v] = tuple(cand)
                rec(i + 1, max(used, (max(cand) + 1) if cand else used))
                del assign[v]
            for c in cand:
                masses[c] -= share
            if feasibility_only and best_slots is not None:
                return

    rec(0, 0)
    if best_slots is None:
        return None, None
    return best_rate, best_slots


def _greedy_folded(g: Ewcg, a: int, b: int, rng: np.random.Generator | None,
                   req: dict, adj: dict, order: list, probs: dict):
    """One randomized greedy construction; returns slots dict or None."""
    all_sets = list(itertools.combinations(range(a), b))
    assign: dict = {}
    masses: dict[int, float] = {}
    vorder = list(order)
    if rng is not None:
        noise = rng.uniform(0, 0.35, size=len(vorder))
        vorder.sort(key=lambda v: -(probs[v] + noise[order.index(v)]))
    for v in vorder:
        nbrs = [u for u in adj[v] if u in assign]
        best_set, best_obj = None, math.inf
        cand_sets = all_sets
        if rng is not None and len(all_sets) > 1:
            cand_sets = [all_sets[i] for i in rng.permutation(len(all_sets))]
        for cand in cand_sets:
            cset = set(cand)
            if any(b - len(cset & set(assign[u])) < req[(u, v)] for u in nbrs):
                continue
            trial = dict(masses)
            for c in cand:
                trial[c] = trial.get(c, 0.0) + probs[v] / b
            obj = _entropy_of_masses(list(trial.values()))
            if obj < best_obj - 1e-12:
                best_obj, best_set = obj, cand
        if best_set is None:
            return None
        assign[v] = best_set
        for c in best_set:
            masses[c] = masses.get(c, 0.0) + probs[v] / b
    return assign


def _feasible_folded(a: int, b: int, rng: np.random.Generator | None,
                     req: dict, adj: dict, order: list,
                     node_budget: int = 50_000):
    """Randomized backtracking search for any valid assignment.

    Fallback for tight instances where the entropy-greedy construction
    dead-ends; returns slots dict or None when the budget runs out.
    """
    all_sets = list(itertools.combinations(range(a), b))
    assign: dict = {}
    nodes = 0

    def rec(i: int) -> bool:
        nonlocal nodes
        if i == len(order):
            return True
        nodes += 1
        if nodes > node_budget:
            return False
        v = order[i]
        nbrs = [u for u in adj[v] if u in assign]
        cands = all_sets
        if rng is not None:
            cands = [all_sets[k] for k in rng.permutation(len(all_sets))]
        for cand in cands:
            cset = set(cand)
            if any(b - len(cset & set(assign[u])) < req[(u, v)] for u in nbrs):
                continue
            assign[v] = cand
            if rec(i + 1):
                return True
            del assign[v]
        return False

    return assign if rec(0) else None


def _local_search(g: Ewcg, a: int, b: int, slots: dict, req: dict, adj: dict,
                  probs: dict) -> dict:
    """First-improvement single-vertex b-set swaps until a local optimum."""
    all_sets = list(itertools.combinations(range(a), b))

    def obj_of(assign):
        masses: dict[int, float] = {}
        for v, s in assign.items():
            for c in s:
                masses[c] = masses.get(c, 0.0) + probs[v] / b
        return _entropy_of_masses(list(masses.values()))

    assign = dict(slots)
    current = obj_of(assign)
    improved = True
    while improved:
        improved = False
        for v in assign:
            nbrs = list(adj[v])
            for cand in all_sets:
                if cand == assign[v]:
                    continue
                cset = set(cand)
                if any(b - len(cset & set(assign[u])) < req[(u, v)] for u in nbrs):
                    continue
                old = assign[v]
                assign[v] = cand
                trial = obj_of(assign)
                if trial < current - 1e-12:
                    current = trial
                    improved = True
                    break
                assign[v] = old
            if improved:
                break
    return assign


def search_folded_coloring(g: Ewcg, a: int, b: int, marginal: Pmf | None = None,
                           mode: str = "exact", seed: int = 0,
                           restarts: int = DEFAULT_RESTARTS) -> FoldedColoring:
    """Find a valid a:b coloring minimizing (1/b) * H(color PMF).

    mode="exact" exhaustively enumerates (within budget) and returns the
    global optimum; mode="heuristic" runs seeded greedy construction plus
    first-improvement local search over restarts.
    """
    if not (a >= b >= 1):
        raise ValidationError(f"need a >= b >= 1, got a={a}, b={b}")
    if marginal is None:
        marginal = g.marginal()
    order = _order_vertices(g)
    idx = {v: i for i, v in enumerate(g.vertices)}
    req = _requirements(g, b)
    adj = g.adjacency()
    probs = {v: g.vertex_probs[idx[v]] for v in order}

    if mode == "exact":
        if len(g.vertices) > EXACT_FOLDED_VERTEX_BUDGET or a > EXACT_FOLDED_PALETTE_BUDGET:
            raise CapacityError(
                f"exact folded search limited to {EXACT_FOLDED_VERTEX_BUDGET} vertices "
                f"and palette {EXACT_FOLDED_PALETTE_BUDGET}; use mode='heuristic'")
        # a heuristic incumbent tightens pruning considerably
        incumbent_slots = None
        try:
            inc = search_folded_coloring(g, a, b, marginal, mode="heuristic",
                                         seed=seed, restarts=4)
            incumbent_slots = dict(inc.slots)
            incumbent = coloring_entropy(inc, marginal, g.vertices) / b
        except InfeasibleColoringError:
            incumbent = None
        rate, slots = _exact_folded_search(g, a, b, marginal, incumbent=incumbent)
        if slots is None and incumbent_slots is None:
            raise InfeasibleColoringError(f"no valid {a}:{b} coloring exists", proven=True)
        if slots is None:
            slots = incumbent_slots
        return FoldedColoring(a, b, slots)

    if mode != "heuristic":
        raise ValidationError(f"unknown mode {mode!r}")

    rng_root = np.random.default_rng(seed)
    best_assign, best_obj = None, math.inf
    for r in range(restarts):
        rng = np.random.default_rng(rng_root.integers(0, 2 ** 63)) if r else None
        assign = _greedy_folded(g, a, b, rng, req, adj, order, probs)
        if assign is None:
            assign = _feasible_folded(a, b, rng or rng_root, req, adj, order)
        if assign is None:
            continue
        assign = _local_search(g, a, b, assign, req, adj, probs)
        masses: dict[int, float] = {}
        for v, s in assign.items():
            for c in s:
                masses[c] = masses.get(c, 0.0) + probs[v] / b
        obj = _entropy_of_masses(list(masses.values()))
        if obj < best_obj - 1e-12:
            best_obj, best_assign = obj, assign
    if best_assign is None:
        raise InfeasibleColoringError(
            f"heuristic search found no valid {a}:{b} coloring", proven=False)
    return FoldedColoring(a, b, best_assign)


# ---------------------------------------------------------------------------
# traditional minimum-entropy coloring


def min_entropy_coloring(g: Ewcg, marginal: Pmf | None = None,
                         mode: str = "exact") -> tuple[dict, float]:
    """Proper coloring (adjacency = stored edges) minimizing the entropy of
    the induced color PMF.  Returns (vertex -> color, entropy bits).

    Exact mode enumerates partitions into independent sets with canonical
    color order and completion-bound pruning; when non-adjacency is an
    equivalence relation the forced maximal-independent-set partition is
    returned directly.
    """
    if marginal is None:
        marginal = g.marginal()
    verts = list(g.vertices)
    probs = dict(zip(verts, marginal.probs))
    adj = g.adjacency()

    if not g.edges:
        return {v: 0 for v in verts}, 0.0

    # fast path: components of the complement are cliques there, i.e.
    # non-adjacency is transitive -> the partition into maximal independent
    # sets is forced and optimal
    non_adj = {v: (set(verts) - adj[v] - {v}) for v in verts}
    transitive = all(
        non_adj[u] | {u} == non_adj[v] | {v}
        for v in verts for u in non_adj[v]
    )
    if transitive:
        classes: list[list] = []
        seen = set()
        for v in verts:
            if v in seen:
                continue
            cls = [v] + sorted(non_adj[v], key=verts.index)
            classes.append(cls)
            seen.update(cls)
        coloring = {v: i for i, cls in enumerate(classes) for v in cls}
        h = _entropy_of_masses([sum(probs[v] for v in cls) for cls in classes])
        return coloring, h

    if mode == "heuristic" or len(verts) > EXACT_MIN_ENTROPY_VERTEX_BUDGET:
        if mode == "exact":
            raise CapacityError(
                f"exact minimum-entropy coloring limited to "
                f"{EXACT_MIN_ENTROPY_VERTEX_BUDGET} vertices; use mode='heuristic'")
        return _heuristic_min_entropy(verts, probs, adj)

    order = sorted(verts, key=lambda v: (-probs[v], verts.index(v)))
    best = {"h": math.inf, "coloring": None}
    class_sets: list[set] = []
    class_mass: list[float] = []
    assign: dict = {}

    def rec(i: int):
        if i == len(order):
            h = _entropy_of_masses(class_mass)
            if h < best["h"] - 1e-12 or best["coloring"] is None:
                best["h"] = h
                best["coloring"] = dict(assign)
            return
        v = order[i]
        remaining = [probs[u] for u in order[i + 1:]]
        for c in range(len(class_sets) + 1):
            appended = c == len(class_sets)
            if appended:
                class_sets.append({v})
                class_mass.append(probs[v])
            else:
                if class_sets[c] & adj[v]:
                    continue
                class_sets[c].add(v)
                class_mass[c] += probs[v]
            lb = _completion_lower_bound(class_mass, remaining, 1)
            assign[v] = c
            if lb < best["h"] - 1e-12:
                rec(i + 1)
            del assign[v]
            if appended:
                class_sets.pop()
                class_mass.pop()
            else:
                class_sets[c].discard(v)
                class_mass[c] -= probs[v]

    rec(0)
    return best["coloring"], best["h"]


def _heuristic_min_entropy(verts, probs, adj) -> tuple[dict, float]:
    """Greedy merge by descending probability plus single-vertex moves."""
    order = sorted(verts, key=lambda v: (-probs[v], verts.index(v)))
    classes: list[set] = []
    for v in order:
        best_c, best_h = None, math.inf
        for c, cls in enumerate(classes):
            if cls & adj[v]:
                continue
            masses = [sum(probs[u] for u in cl) + (probs[v] if i == c else 0.0)
                      for i, cl in enumerate(classes)]
            h = _entropy_of_masses(masses)
            if h < best_h:
                best_h, best_c = h, c
        if best_c is None:
            classes.append({v})
        else:
            classes[best_c].add(v)
    # local improvement: move one vertex to another compatible class
    improved = True
    while improved:
        improved = False
        for v in order:
            src = next(i for i, cl in enumerate(classes) if v in cl)
            cur_h = _entropy_of_masses([sum(probs[u] for u in cl) for cl in classes])
            for dst, cls in enumerate(classes):
                if dst == src or (cls & adj[v]):
                    continue
                classes[src].discard(v)
                cls.add(v)
                trial = [sum(probs[u] for u in cl) for cl in classes if cl]
                h = _entropy_of_masses(trial)
                if h < cur_h - 1e-12:
                    improved = True
                    break
                cls.discard(v)
                classes[src].add(v)
            if improved:
                classes = [cl for cl in classes if cl]
                break
    coloring = {v: i for i, cls in enumerate(classes) for v in cls}
    h = _entropy_of_masses([sum(probs[u] for u in cls) for cls in classes])
    return coloring, h


# ---------------------------------------------------------------------------
# chromatic numbers


def b_fold_chromatic_number(g: Ewcg, b: int, a_max: int | None = None) -> int:
    """Least palette size a admitting a valid a:b coloring."""
    if b < 1:
        raise ValidationError(f"fold must be >= 1, got {b}")
    if not g.edges:
        return b
    if len(g.vertices) > EXACT_FOLDED_VERTEX_BUDGET:
        raise CapacityError("b-fold chromatic number limited to exact-search sizes")
    limit = a_max if a_max is not None else b * len(g.vertices)
    for a in range(b, limit + 1):
        _, slots = _exact_folded_search(g, a, b, g.marginal(), feasibility_only=True)
        if slots is not None:
            return a
    raise InfeasibleColoringError(f"no valid a:{b} coloring with a <= {limit}")


def maximal_independent_sets(g: Ewcg, budget: int = MIS_ENUMERATION_BUDGET) -> list[frozenset]:
    """All maximal independent sets, via Bron-Kerbosch with pivoting on the
    complement graph."""
    verts = list(g.vertices)
    adj = g.adjacency()
    comp = {v: set(verts) - adj[v] - {v} for v in verts}
    out: list[frozenset] = []

    def bk(r: set, p: set, x: set):
        if len(out) > budget:
            raise CapacityError(f"more than {budget} maximal independent sets")
        if not p and not x:
            out.append(frozenset(r))
            return
        pivot = max(p | x, key=lambda u: len(comp[u] & p))
        for v in list(p - comp[pivot]):
            bk(r | {v}, p & comp[v], x & comp[v])
            p.discard(v)
            x.add(v)

    bk(set(), set(verts), set())
    return out


def fractional_chromatic_number(g: Ewcg) -> Fraction:
    """Exact fractional chromatic number: rational LP optimum of the
    fractional cover by maximal independent sets."""
    if not g.vertices:
        return Fraction(0)
    if not g.edges:
        return Fraction(1)
    sets = maximal_independent_sets(g)
    verts = list(g.vertices)
    A = [[1 if v in s else 0 for s in sets] for v in verts]
    c = [1] * len(sets)
    b = [1] * len(verts)
    value, _ = solve_min_cover(c, A, b)
    return value


def check_fractional_bound(g: Ewcg, a: int, b: int) -> None:
    """Raise a proven infeasibility error when a/b is below the fractional
    chromatic number (chi_b / b >= chi_f for every b)."""
    try:
        chi_f = fractional_chromatic_number(g)
    except CapacityError:
        return
    if Fraction(a, b) < chi_f:
        raise InfeasibleColoringError(
            f"no {a}:{b} coloring exists: a/b = {Fraction(a, b)} < chi_f = {chi_f}",
            proven=True)
