"""Color PMFs, entropy rates, the finite-(n, b) rate region, and the
function-decodability check on joint color classes.

All rates are bits per source symbol: a coloring of the n-th power graph
at fold b contributes H(color PMF)/(n*b).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .coloring import (
    FoldedColoring,
    coloring_entropy,
    fractional_chromatic_number,
    min_entropy_coloring,
    search_folded_coloring,
    validate_folded,
)
from .errors import (
    AmbiguousLookupError,
    CapacityError,
    ConfigError,
    InfeasibleColoringError,
)
from .graphs import Ewcg, FunctionTable, build_bipartite, power_graph, project_ewcg
from .prob import JointPmf, Pmf, entropy, joint_entropy


@dataclass(frozen=True)
class ColorPmf:
    """Distribution over colors induced by pushing the marginal through a
    coloring; each of a vertex's b slots carries p(x)/b."""

    colors: tuple[int, ...]
    pmf: Pmf

    def entropy(self) -> float:
        return entropy(self.pmf)


def color_pmf(c: FoldedColoring, marginal: Pmf, vertices: Sequence) -> ColorPmf:
    if len(vertices) != len(marginal.probs):
        raise ConfigError("marginal length does not match vertex count")
    masses: dict[int, float] = {}
    for v, p in zip(vertices, marginal.probs):
        for col in c.slots[v]:
            masses[col] = masses.get(col, 0.0) + p / c.fold
    colors = tuple(sorted(masses))
    return ColorPmf(colors, Pmf.normalized([masses[col] for col in colors]))


def entropy_rate(c: FoldedColoring, marginal: Pmf, n: int, vertices: Sequence) -> float:
    """Bits per source symbol of the coloring: H(color PMF)/(n*b)."""
    if n < 1:
        raise ConfigError(f"power must be >= 1, got {n}")
    return color_pmf(c, marginal, vertices).entropy() / (n * c.fold)


def _blocks(j: JointPmf, n: int):
    """Yield (x1 block, x2 block, probability) over positive-probability
    i.i.d. n-blocks; blocks are plain symbols at n=1 and tuples beyond."""
    support = list(j.support())
    for seq in itertools.product(support, repeat=n):
        p = math.prod(s[2] for s in seq)
        b1 = tuple(s[0] for s in seq)
        b2 = tuple(s[1] for s in seq)
        if n == 1:
            b1, b2 = b1[0], b2[0]
        yield b1, b2, p


def joint_color_pmf(c1: FoldedColoring, c2: FoldedColoring, j: JointPmf,
                    n: int = 1) -> dict[tuple[frozenset, frozenset], float]:
    """Joint distribution of the two sides' color sets over i.i.d. n-blocks."""
    out: dict[tuple[frozenset, frozenset], float] = {}
    for b1, b2, p in _blocks(j, n):
        key = (c1.color_set(b1), c2.color_set(b2))
        out[key] = out.get(key, 0.0) + p
    return out


def conditional_color_entropy(c1: FoldedColoring, c2: FoldedColoring, j: JointPmf,
                              n: int = 1) -> float:
    """H(colors of side 1 | colors of side 2) in bits per block."""
    jcp = joint_color_pmf(c1, c2, j, n)
    h_joint = entropy(Pmf.normalized(list(jcp.values())))
    side2: dict[frozenset, float] = {}
    for (_, cs2), p in jcp.items():
        side2[cs2] = side2.get(cs2, 0.0) + p
    return h_joint - entropy(Pmf.normalized(list(side2.values())))


# ---------------------------------------------------------------------------
# function decodability of joint color classes


def ccc_check(c1: FoldedColoring, c2: FoldedColoring, j: JointPmf,
              f: FunctionTable, n: int = 1):
    """Return None when f is constant on every positive-probability joint
    color class, else a witness (class key, block pair, block pair) with
    two differing outcomes."""
    seen: dict[tuple[frozenset, frozenset], tuple] = {}
    for b1, b2, _ in _blocks(j, n):
        fv = f.apply_blocks(b1, b2) if n > 1 else f(b1, b2)
        key = (c1.color_set(b1), c2.color_set(b2))
        prev = seen.get(key)
        if prev is None:
            seen[key] = (b1, b2, fv)
        elif prev[2] != fv:
            return (key, (prev[0], prev[1], prev[2]), (b1, b2, fv))
    return None


def ccc_refine(c1: FoldedColoring, c2: FoldedColoring, j: JointPmf,
               f: FunctionTable, n: int = 1) -> FoldedColoring:
    """Refine the side-2 coloring until every joint class is
    function-constant.  Splits each offending side-2 class by the
    function-response signature of its symbols; raises AmbiguousLookupError
    when the ambiguity is not resolvable by any side-2 refinement (two
    symbols in one class, or one column, map the same side-1 color set to
    different function values)."""
    if n > 1:
        raise CapacityError("refinement is implemented for n=1 only")
    slots = dict(c2.slots)
    while True:
        witness = ccc_check(c1, FoldedColoring(_palette(slots), c2.fold, slots), j, f, n)
        if witness is None:
            break
        # signature of x2: how it maps each positive-probability side-1
        # color set to a function value
        sigs: dict[object, tuple] = {}
        for x2 in {k for k in slots}:
            sig = []
            for x1 in j.col_support(x2):
                sig.append((c1.color_set(x1), f(x1, x2)))
            sigs[x2] = tuple(sorted(sig, key=repr))
        offending = witness[0][1]
        members = [x2 for x2 in slots if frozenset(slots[x2]) == offending]
        groups: dict[tuple, list] = {}
        for x2 in members:
            groups.setdefault(sigs[x2], []).append(x2)
        if len(groups) < 2:
            # the two witness blocks disagree inside a single column (or
            # between signature-identical columns): no side-2 split can fix
            # that, only a finer side-1 coloring
            raise AmbiguousLookupError(
                "function is not constant on a joint color class and the "
                f"side-2 coloring cannot be refined further: witness {witness}")
        fresh = _palette(slots)
        for gi, (_, grp) in enumerate(sorted(groups.items(), key=repr)):
            if gi == 0:
                continue
            for x2 in grp:
                slots[x2] = tuple(fresh + i for i in range(c2.fold))
            fresh += c2.fold
    return FoldedColoring(_palette(slots), c2.fold, slots)


def _palette(slots: Mapping) -> int:
    return max((c for s in slots.values() for c in s), default=-1) + 1


# ---------------------------------------------------------------------------
# subset entropy diagnostic


def subset_entropy_average(c: FoldedColoring, marginal: Pmf, vertices: Sequence,
                           k: int) -> float:
    """Average, over all k-subsets S of the b color slots, of H(slots in S)/k.

    Nonincreasing in k (Han's inequality on the slot tuple).
    """
    if not 1 <= k <= c.fold:
        raise ConfigError(f"subset size {k} outside 1..{c.fold}")
    total = 0.0
    count = 0
    for S in itertools.combinations(range(c.fold), k):
        masses: dict[tuple, float] = {}
        for v, p in zip(vertices, marginal.probs):
            key = tuple(c.slots[v][i] for i in S)
            masses[key] = masses.get(key, 0.0) + p
        total += entropy(Pmf.normalized(list(masses.values()))) / k
        count += 1
    return total / count


def savings(traditional_rate: float, achieved_rate: float) -> float:
    """Fractional rate reduction versus the traditional coloring baseline."""
    if traditional_rate <= 0:
        raise ConfigError("traditional rate must be positive")
    return (traditional_rate - achieved_rate) / traditional_rate


# ---------------------------------------------------------------------------
# rate region at finite (n, b)


@dataclass(frozen=True)
class RateReport:
    """Finite-(n, b) upper-bound estimates of the rate region corners.

    All limits are reported at the recorded (n, b); nothing is
    extrapolated.  `complete` is False when a budget stopped some part.
    """

    n: int
    b: int
    rate_1: float
    rate_2: float
    conditional_rate_1: float
    conditional_rate_2: float
    joint_rate: float
    traditional_rate_1: float
    traditional_rate_2: float
    savings_1: float
    savings_2: float
    chi_f_1: Fraction
    chi_f_2: Fraction
    a_1: int
    a_2: int
    sum_rate_bound: float  # Slepian-Wolf joint entropy per symbol
    complete: bool = True
    notes: tuple[str, ...] = field(default_factory=tuple)


def _side_graphs(j: JointPmf, f: FunctionTable, side: int, n: int, rule: str = "exact"):
    base = project_ewcg(build_bipartite(j, f), side, rule=rule)
    return base, (base if n == 1 else power_graph(base, n, j, f))


def _best_folded(g: Ewcg, b: int, a_start: int, mode: str, seed: int,
                 a_cap: int = 40) -> tuple[FoldedColoring, int]:
    a = max(a_start, b)
    while a <= a_cap:
        try:
            c = search_folded_coloring(g, a, b, mode=mode, seed=seed)
            return c, a
        except InfeasibleColoringError:
            a += 1
    raise InfeasibleColoringError(f"no valid coloring up to {a_cap} colors", proven=False)


def rate_region(j: JointPmf, f: FunctionTable, n: int = 1, b: int = 1,
                mode: str = "heuristic", seed: int = 0) -> RateReport:
    """Search colorings of both sides' n-th power graphs at fold b and
    report marginal/conditional/joint color-entropy rates, exact chi_f
    values, and savings versus traditional (b=1) coloring."""
    notes: list[str] = []
    complete = True

    sides = {}
    for side in (1, 2):
        base, g = _side_graphs(j, f, side, n)
        chi = fractional_chromatic_number(base)
        marginal = g.marginal()

        trad_assign, trad_h = min_entropy_coloring(g, mode=mode)
        trad_rate = trad_h / n
        trad = FoldedColoring(
            max(trad_assign.values(), default=0) + 1 if trad_assign else 1,
            1, {v: (col,) for v, col in trad_assign.items()})

        if b == 1:
            folded, a_used = trad, trad.palette_size
            rate = trad_rate
        else:
            a_start = math.ceil(chi * b) if g.edges else b
            try:
                folded, a_used = _best_folded(g, b, min(a_start, b + 1), mode, seed)
                rate = entropy_rate(folded, marginal, n, g.vertices)
            except (InfeasibleColoringError, CapacityError) as e:
                notes.append(f"side {side}: {e}")
                complete = False
                folded, a_used, rate = trad, trad.palette_size, trad_rate
        sides[side] = dict(graph=g, chi=chi, folded=folded, a=a_used,
                           rate=rate, trad_rate=trad_rate)

    c1, c2 = sides[1]["folded"], sides[2]["folded"]
    jcp = joint_color_pmf(c1, c2, j, n)
    joint_rate = entropy(Pmf.normalized(list(jcp.values()))) / (n * b)
    cond_1 = conditional_color_entropy(c1, c2, j, n) / (n * b)
    cond_2 = conditional_color_entropy(c2, c1, JointPmf(
        tuple(zip(*j.matrix)), j.col_alphabet, j.row_alphabet), n) / (n * b)

    return RateReport(
        n=n, b=b,
        rate_1=sides[1]["rate"], rate_2=sides[2]["rate"],
        conditional_rate_1=cond_1, conditional_rate_2=cond_2,
        joint_rate=joint_rate,
        traditional_rate_1=sides[1]["trad_rate"],
        traditional_rate_2=sides[2]["trad_rate"],
        savings_1=savings(sides[1]["trad_rate"], sides[1]["rate"])
        if sides[1]["trad_rate"] > 0 else 0.0,
        savings_2=savings(sides[2]["trad_rate"], sides[2]["rate"])
        if sides[2]["trad_rate"] > 0 else 0.0,
        chi_f_1=sides[1]["chi"], chi_f_2=sides[2]["chi"],
        a_1=sides[1]["a"], a_2=sides[2]["a"],
        sum_rate_bound=joint_entropy(j),
        complete=complete, notes=tuple(notes),
    )
