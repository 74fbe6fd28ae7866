"""Exact formulas and sum distributions for 0/1 and +-1 combinations of residues mod q.

Everything here works on Python integers; nothing touches floating point.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from math import comb, gcd
from typing import Iterable, Optional, Sequence, Tuple


class NotReducedError(ValueError):
    """A configuration entry shares a factor with the modulus."""

    def __init__(self, index: int, value: int, q: int):
        self.index = index
        self.value = value
        self.q = q
        super().__init__(
            f"residue a_{index + 1} = {value} is not reduced mod {q} (gcd = {gcd(value, q)})"
        )


def _check_modulus(q: int) -> None:
    if not isinstance(q, int) or isinstance(q, bool) or q < 1:
        raise ValueError(f"modulus must be an integer >= 1, got {q!r}")


@dataclass(frozen=True)
class Configuration:
    """Modulus ``q`` plus reduced residues ``a_1..a_n``, stored in ``[0, q)``."""

    q: int
    residues: Tuple[int, ...] = ()

    def __post_init__(self):
        _check_modulus(self.q)
        reduced = tuple(int(a) % self.q for a in self.residues)
        for i, a in enumerate(reduced):
            if gcd(a, self.q) != 1:
                raise NotReducedError(i, self.residues[i], self.q)
        object.__setattr__(self, "residues", reduced)

    @property
    def n(self) -> int:
        return len(self.residues)

    @classmethod
    def all_ones(cls, n: int, q: int) -> "Configuration":
        return cls(q, (1,) * n)

    def total(self) -> int:
        return sum(self.residues) % self.q


@dataclass(frozen=True)
class ResidueSet:
    """Target set P of k distinct residues mod q."""

    q: int
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        _check_modulus(self.q)
        raw = list(self.members)
        reduced = frozenset(int(s) % self.q for s in raw)
        if len(reduced) != len(raw):
            raise ValueError(f"target residues {sorted(raw)} are not distinct mod {self.q}")
        object.__setattr__(self, "members", reduced)

    @classmethod
    def of(cls, q: int, members: Iterable[int]) -> "ResidueSet":
        return cls(q, tuple(members))

    @property
    def k(self) -> int:
        return len(self.members)

    def sorted(self) -> Tuple[int, ...]:
        return tuple(sorted(self.members))


@dataclass(frozen=True)
class SumDistribution:
    """``counts[s]`` = number of coefficient vectors whose sum is congruent to s."""

    q: int
    counts: Tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != self.q:
            raise ValueError(f"expected {self.q} counts, got {len(self.counts)}")

    @property
    def total(self) -> int:
        return sum(self.counts)


class Method(str, Enum):
    FORMULA = "formula"
    PARTITION = "partition"
    BRUTE_FORCE = "brute-force"


@dataclass(frozen=True)
class BoundReport:
    value: int
    method: Method
    witness: Optional[Tuple[Configuration, ResidueSet]] = None


def binom(n: int, j: int) -> int:
    if j < 0 or j > n:
        return 0
    return comb(n, j)


def mod_binomial(n: int, s: int, q: int) -> int:
    """Number of subsets of an n-set whose size is congruent to s mod q."""
    _check_modulus(q)
    return sum(comb(n, j) for j in range(s % q, n + 1, q))


def mod_binomial_row(n: int, q: int) -> Tuple[int, ...]:
    """All q mod-q binomial coefficients in n, indexed by residue."""
    _check_modulus(q)
    row = [0] * q
    for j in range(n + 1):
        row[j % q] += comb(n, j)
    return tuple(row)


def middle_window(n: int, k: int) -> Tuple[int, int]:
    """Inclusive integer range of j with (n - k)/2 <= j < (n + k)/2."""
    lo = -((k - n) // 2)
    return lo, lo + k - 1


def _check_k(k: int, q: int) -> None:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if k > q:
        raise ValueError(f"k exceeds q ({k} > {q})")


def theorem1_bound(n: int, k: int, q: int) -> int:
    """Largest number of 0/1 sums that can land in a k-element set of residues.

    This is the sum of the k middle mod-q binomial coefficients in n.
    """
    _check_modulus(q)
    _check_k(k, q)
    row = mod_binomial_row(n, q)
    lo, hi = middle_window(n, k)
    return sum(row[j % q] for j in range(lo, hi + 1))


def corollary2_bound(n: int, q: int) -> int:
    """Smallest possible size of a single residue class, valid once n >= q - 1."""
    _check_modulus(q)
    if n < q - 1:
        raise ValueError(f"n must be at least q - 1 ({n} < {q - 1})")
    return mod_binomial(n, -((q - n) // 2), q)


def signed_modulus(q: int) -> int:
    return q if q % 2 else q // 2


def corollary3_bound(n: int, k: int, q: int) -> int:
    """Largest number of +-1 sums that can land in a k-element set of residues.

    For even q every signed sum has the parity of n, so only q/2 classes are
    reachable; k is capped at that count before summing the middle window.
    """
    _check_modulus(q)
    _check_k(k, q)
    r = signed_modulus(q)
    return theorem1_bound(n, min(k, r), r)


def subset_sum_distribution(c: Configuration) -> SumDistribution:
    """Distribution of the 2^n sums of subsets of ``c.residues``.

    Multiplies by (1 + x^a) in Z[x]/(x^q - 1) one residue at a time.
    """
    q = c.q
    counts = [0] * q
    counts[0] = 1
    for a in c.residues:
        counts = [counts[s] + counts[(s - a) % q] for s in range(q)]
    return SumDistribution(q, tuple(counts))


def signed_sum_distribution(c: Configuration) -> SumDistribution:
    # sum(d_i a_i) = 2 * sum(e_i a_i) - sum(a_i) with e_i = (d_i + 1) / 2
    q = c.q
    total = c.total()
    counts = [0] * q
    for t, m in enumerate(subset_sum_distribution(c).counts):
        counts[(2 * t - total) % q] += m
    return SumDistribution(q, tuple(counts))


def count_in_set(d: SumDistribution, p: ResidueSet) -> int:
    if d.q != p.q:
        raise ValueError(f"modulus mismatch: distribution mod {d.q}, target mod {p.q}")
    return sum(d.counts[s] for s in p.members)


def reduced_residues(q: int) -> Tuple[int, ...]:
    """Units of Z_q in ascending order (``(0,)`` for q = 1)."""
    _check_modulus(q)
    return tuple(a for a in range(q) if gcd(a, q) == 1)


def parse_residues(text: str) -> Sequence[int]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(tok) for tok in text.split(","))
