"""Probability primitives: PMFs, joint PMFs, marginals, Shannon entropy.

All entropies are in bits (base-2 logarithms) with the convention
0 * log 0 = 0.  PMFs are validated on construction against a fixed
tolerance; nothing is renormalized silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ValidationError

PMF_TOL = 1e-9


def _check_probs(probs: Sequence[float], what: str) -> None:
    for p in probs:
        if not math.isfinite(p):
            raise ValidationError(f"{what}: non-finite entry {p!r}")
        if p < -PMF_TOL:
            raise ValidationError(f"{what}: negative entry {p!r}")
    total = math.fsum(probs)
    if abs(total - 1.0) > PMF_TOL:
        raise ValidationError(f"{what}: entries sum to {total!r}, expected 1")


@dataclass(frozen=True)
class Pmf:
    """A finite probability mass function over an implicit ordered support."""

    probs: tuple[float, ...]

    def __post_init__(self):
        _check_probs(self.probs, "Pmf")

    @classmethod
    def of(cls, *probs: float) -> "Pmf":
        return cls(tuple(float(p) for p in probs))

    @classmethod
    def normalized(cls, weights: Sequence[float]) -> "Pmf":
        """Build a PMF by explicit renormalization of nonnegative weights."""
        total = math.fsum(weights)
        if total <= 0:
            raise ValidationError("cannot normalize: weights sum to zero")
        return cls(tuple(float(w) / total for w in weights))

    @classmethod
    def uniform(cls, size: int) -> "Pmf":
        if size < 1:
            raise ValidationError("uniform PMF needs a positive support size")
        return cls((1.0 / size,) * size)

    def __len__(self) -> int:
        return len(self.probs)

    def __iter__(self):
        return iter(self.probs)


def entropy(p: Pmf | Sequence[float]) -> float:
    """Shannon entropy -sum p_i log2 p_i in bits, with 0 log 0 = 0."""
    if not isinstance(p, Pmf):
        p = Pmf(tuple(float(x) for x in p))
    return -math.fsum(q * math.log2(q) for q in p.probs if q > 0.0)


@dataclass(frozen=True)
class JointPmf:
    """Joint PMF of two finite sources given as a row-major matrix.

    Rows index the first source's alphabet, columns the second's.
    """

    matrix: tuple[tuple[float, ...], ...]
    row_alphabet: tuple
    col_alphabet: tuple

    def __post_init__(self):
        if len(self.matrix) != len(self.row_alphabet):
            raise ValidationError("matrix row count does not match row alphabet")
        for row in self.matrix:
            if len(row) != len(self.col_alphabet):
                raise ValidationError("matrix column count does not match col alphabet")
        flat = [p for row in self.matrix for p in row]
        _check_probs(flat, "JointPmf")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]], row_alphabet: Sequence,
                  col_alphabet: Sequence) -> "JointPmf":
        return cls(
            tuple(tuple(float(p) for p in row) for row in rows),
            tuple(row_alphabet),
            tuple(col_alphabet),
        )

    def prob(self, x1, x2) -> float:
        i = self.row_alphabet.index(x1)
        j = self.col_alphabet.index(x2)
        return self.matrix[i][j]

    def row_marginal(self) -> Pmf:
        return Pmf(tuple(math.fsum(row) for row in self.matrix))

    def col_marginal(self) -> Pmf:
        ncols = len(self.col_alphabet)
        return Pmf(tuple(math.fsum(row[j] for row in self.matrix) for j in range(ncols)))

    def support(self):
        """Yield (x1, x2, p) over strictly positive entries."""
        for i, x1 in enumerate(self.row_alphabet):
            for j, x2 in enumerate(self.col_alphabet):
                p = self.matrix[i][j]
                if p > 0.0:
                    yield x1, x2, p

    def row_support(self, x1) -> tuple:
        i = self.row_alphabet.index(x1)
        return tuple(x2 for j, x2 in enumerate(self.col_alphabet) if self.matrix[i][j] > 0.0)

    def col_support(self, x2) -> tuple:
        j = self.col_alphabet.index(x2)
        return tuple(x1 for i, x1 in enumerate(self.row_alphabet) if self.matrix[i][j] > 0.0)


def marginals(j: JointPmf) -> tuple[Pmf, Pmf]:
    """Row and column marginals of a joint PMF."""
    return j.row_marginal(), j.col_marginal()


def joint_entropy(j: JointPmf) -> float:
    flat = [p for row in j.matrix for p in row]
    return -math.fsum(p * math.log2(p) for p in flat if p > 0.0)


def conditional_entropy(j: JointPmf) -> float:
    """H(row source | column source) = H(joint) - H(column marginal)."""
    return joint_entropy(j) - entropy(j.col_marginal())
