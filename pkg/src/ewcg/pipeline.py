"""End-to-end two-encoder / one-decoder simulation.

Each encoder maps its n-blocks to the color sets of its power-graph
coloring.  With binning off, color sets are sent verbatim and decoded
through a lookup table keyed by joint color classes.  With binning on,
each side sends a bin index of its length-L color sequence; the decoder
recovers side 2 first, then side 1 given it, choosing in each stage the
bin-consistent candidate sequence with minimum empirical entropy
(unresolved ties count as errors).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .coloring import FoldedColoring
from .errors import (
    AmbiguousLookupError,
    CapacityError,
    ConfigError,
    ValidationError,
)
from .graphs import FunctionTable
from .prob import JointPmf
from .rates import _blocks, ccc_check

HALF_ENUMERATION_BUDGET = 1_000_000
PAIR_EVALUATION_BUDGET = 5_000_000


@dataclass(frozen=True)
class LookupTable:
    """Joint color class -> function output, total on positive-probability
    classes (guaranteed single-valued by the decodability check)."""

    table: Mapping[tuple[frozenset, frozenset], object]
    n: int

    def get(self, cs1: frozenset, cs2: frozenset):
        return self.table.get((cs1, cs2))


def build_lookup(j: JointPmf, f: FunctionTable, c1: FoldedColoring,
                 c2: FoldedColoring, n: int = 1) -> LookupTable:
    witness = ccc_check(c1, c2, j, f, n)
    if witness is not None:
        key, first, second = witness
        raise AmbiguousLookupError(
            f"joint color class {tuple(sorted(key[0]))}/{tuple(sorted(key[1]))} "
            f"maps to both {first[2]!r} and {second[2]!r}", witness=witness)
    table = {}
    for b1, b2, _ in _blocks(j, n):
        fv = f.apply_blocks(b1, b2) if n > 1 else f(b1, b2)
        table[(c1.color_set(b1), c2.color_set(b2))] = fv
    return LookupTable(table, n)


def encode(x_seq: Sequence, c: FoldedColoring, n: int = 1) -> tuple[frozenset, ...]:
    """Map each n-block of the symbol sequence to its vertex's color set."""
    if len(x_seq) % n:
        raise ValidationError(f"sequence length {len(x_seq)} not divisible by {n}")
    out = []
    for i in range(0, len(x_seq), n):
        block = tuple(x_seq[i:i + n]) if n > 1 else x_seq[i]
        if block not in c.slots:
            raise ValidationError(f"block {block!r} is not a colored vertex")
        out.append(c.color_set(block))
    return tuple(out)


def decode(colors1: Sequence[frozenset], colors2: Sequence[frozenset],
           table: LookupTable) -> tuple:
    """Per-block lookup; unseen (zero-probability) pairs decode to None."""
    if len(colors1) != len(colors2):
        raise ValidationError("color sequences are not aligned")
    return tuple(table.get(a, b) for a, b in zip(colors1, colors2))


# ---------------------------------------------------------------------------
# binning layer


@dataclass(frozen=True)
class BinningConfig:
    rate_1: float  # bits per source symbol
    rate_2: float
    blocklength: int  # color blocks per binned group


@dataclass(frozen=True)
class SimResult:
    samples: int
    decode_errors: int
    empirical_rate_1: float
    empirical_rate_2: float
    seed: int
    binning_error_rate: float | None = None
    binned_groups: int = 0


def _bin_count(rate: float, symbols: int, num_sequences: int) -> int:
    """Bins for a group covering `symbols` source symbols; at least 1 and
    capped at the sequence count (identity binning = no compression)."""
    if rate < 0:
        raise ConfigError(f"binning rate must be >= 0, got {rate}")
    bins = math.ceil(2 ** (rate * symbols))
    return min(max(bins, 1), num_sequences)


def _empirical_entropy(counts: Mapping) -> float:
    total = sum(counts.values())
    return -sum((c / total) * math.log2(c / total) for c in counts.values() if c)


def _min_entropy_sequence(candidates: list[list], hashes: list[dict], target: int,
                          bins: int, pair_key):
    """Minimum-empirical-entropy sequence among candidate products whose
    additive hash lands in `target` (mod `bins`).

    candidates[t] lists the allowed values at coordinate t; hashes[t] maps
    each to its hash contribution.  pair_key(t, value) yields the symbol
    used for the empirical histogram.  Returns (sequence, unique_flag).
    """
    L = len(candidates)
    half = L // 2
    sizes = [math.prod(len(c) for c in candidates[:half]),
             math.prod(len(c) for c in candidates[half:])]
    if max(sizes) > HALF_ENUMERATION_BUDGET:
        raise CapacityError(f"binning decoder half enumeration {max(sizes)} "
                            f"exceeds budget {HALF_ENUMERATION_BUDGET}")
    if sizes[0] * sizes[1] / max(bins, 1) > PAIR_EVALUATION_BUDGET:
        raise CapacityError("binning decoder candidate pairs exceed budget")

    def halves(lo, hi):
        out = []
        for combo in itertools.product(*candidates[lo:hi]):
            h = sum(hashes[t][v] for t, v in zip(range(lo, hi), combo)) % bins
            hist: dict = {}
            for t, v in zip(range(lo, hi), combo):
                k = pair_key(t, v)
                hist[k] = hist.get(k, 0) + 1
            out.append((combo, h, hist))
        return out

    first = halves(0, half)
    second: dict[int, list] = {}
    for combo, h, hist in halves(half, L):
        second.setdefault(h, []).append((combo, hist))

    best = None
    best_seq = None
    unique = True
    for combo1, h1, hist1 in first:
        for combo2, hist2 in second.get((target - h1) % bins, ()):
            merged = dict(hist1)
            for k, c in hist2.items():
                merged[k] = merged.get(k, 0) + c
            ent = _empirical_entropy(merged)
            if best is None or ent < best - 1e-12:
                best, best_seq, unique = ent, combo1 + combo2, True
            elif abs(ent - best) <= 1e-12 and combo1 + combo2 != best_seq:
                unique = False
    if best_seq is None:
        return None, False
    return best_seq, unique


def _invert_positional(target: int, values, L: int):
    """Invert the injective base-K positional code (no compression case)."""
    K = len(values)
    out = []
    for _ in range(L):
        out.append(values[target % K])
        target //= K
    return tuple(out)


def _decode_binned_group(seq1, seq2, bins1, bins2, hash1, hash2, side2_cands,
                         side1_given_2, injective2: bool):
    """Successive decoding: side 2 from its bin alone, then side 1 given
    the side-2 estimate.  Returns (decoded1, decoded2) or (None, None)."""
    L = len(seq1)
    t2 = sum(hash2[t][cs] for t, cs in enumerate(seq2)) % bins2
    if injective2:
        est2 = _invert_positional(t2, side2_cands, L)
    else:
        cands2 = [side2_cands] * L
        est2, ok = _min_entropy_sequence(cands2, [hash2[t] for t in range(L)],
                                         t2, bins2, lambda t, v: v)
        if not ok or est2 is None:
            return None, None

    t1 = sum(hash1[t][cs] for t, cs in enumerate(seq1)) % bins1
    cands1 = []
    for t in range(L):
        allowed = side1_given_2.get(est2[t], ())
        if not allowed:
            return None, None
        cands1.append(list(allowed))
    est1, ok = _min_entropy_sequence(cands1, [hash1[t] for t in range(L)],
                                     t1, bins1, lambda t, v: (v, est2[t]))
    if not ok or est1 is None:
        return None, None
    return est1, est2


def simulate(j: JointPmf, f: FunctionTable, c1: FoldedColoring, c2: FoldedColoring,
             n: int = 1, num_blocks: int = 10_000, seed: int = 0,
             binning: BinningConfig | None = None) -> SimResult:
    """Draw i.i.d. n-blocks, push them through both encoders, decode, and
    count errors.  Deterministic given the seed."""
    if num_blocks < 1:
        raise ConfigError("need at least one block")
    table = build_lookup(j, f, c1, c2, n)

    support = list(_blocks(j, n))
    probs = np.array([p for _, _, p in support])
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    draws = rng.choice(len(support), size=num_blocks, p=probs)

    blocks1 = [support[i][0] for i in draws]
    blocks2 = [support[i][1] for i in draws]
    truth = [f.apply_blocks(b1, b2) if n > 1 else f(b1, b2)
             for b1, b2 in zip(blocks1, blocks2)]
    colors1 = [c1.color_set(b) for b in blocks1]
    colors2 = [c2.color_set(b) for b in blocks2]

    def stream_rate(colors):
        counts: dict = {}
        for cs in colors:
            counts[cs] = counts.get(cs, 0) + 1
        return _empirical_entropy(counts) / n

    rate1, rate2 = stream_rate(colors1), stream_rate(colors2)

    if binning is None:
        decoded = decode(colors1, colors2, table)
        errors = sum(1 for d, t in zip(decoded, truth) if d != t)
        return SimResult(num_blocks, errors, rate1, rate2, seed)

    L = binning.blocklength
    if L < 2 or num_blocks < L:
        raise ConfigError(f"binned blocklength {L} needs 2 <= L <= num_blocks")
    jcp_support: dict[frozenset, set] = {}
    for b1b, b2b, _ in support:
        jcp_support.setdefault(c2.color_set(b2b), set()).add(c1.color_set(b1b))
    side1_given_2 = {k: sorted(v, key=repr) for k, v in jcp_support.items()}
    side2_cands = sorted(jcp_support, key=repr)
    side1_all = sorted({cs for v in jcp_support.values() for cs in v}, key=repr)

    bins1 = _bin_count(binning.rate_1, L * n, len(side1_all) ** L)
    bins2 = _bin_count(binning.rate_2, L * n, len(side2_cands) ** L)

    def make_hashes(values, bins):
        # injective positional code when the bin budget covers every
        # sequence (no compression), seeded random contributions otherwise
        if bins >= len(values) ** L:
            return [{cs: (len(values) ** t) * i for i, cs in enumerate(values)}
                    for t in range(L)]
        return [{cs: int(rng.integers(bins)) for cs in values} for _ in range(L)]

    hash1 = make_hashes(side1_all, bins1)
    hash2 = make_hashes(side2_cands, bins2)
    injective2 = bins2 >= len(side2_cands) ** L

    groups = num_blocks // L
    wrong = 0
    decode_errors = 0
    for gi in range(groups):
        lo = gi * L
        s1, s2 = colors1[lo:lo + L], colors2[lo:lo + L]
        est1, est2 = _decode_binned_group(
            s1, s2, bins1, bins2, hash1, hash2, side2_cands, side1_given_2,
            injective2)
        if est1 is None or tuple(est1) != tuple(s1) or tuple(est2) != tuple(s2):
            wrong += 1
            decode_errors += L
            continue
        decoded = decode(est1, est2, table)
        bad = sum(1 for d, t in zip(decoded, truth[lo:lo + L]) if d != t)
        decode_errors += bad
        wrong += bool(bad)
    return SimResult(groups * L, decode_errors, rate1, rate2, seed,
                     binning_error_rate=wrong / groups, binned_groups=groups)
