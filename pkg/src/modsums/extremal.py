"""Configurations and target sets that attain the bounds exactly."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List

from .core import (
    Configuration,
    ResidueSet,
    _check_k,
    corollary2_bound,
    count_in_set,
    middle_window,
    subset_sum_distribution,
    theorem1_bound,
)


class ExtremalMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class ExtremalInstance:
    configuration: Configuration
    target: ResidueSet
    claimed: int


def _certify(c: Configuration, target: ResidueSet, expected: int) -> ExtremalInstance:
    # never trust the formula alone: recount from the distribution
    got = count_in_set(subset_sum_distribution(c), target)
    if got != expected:
        raise ExtremalMismatch(
            f"{c} with target {target.sorted()} reaches {got}, formula says {expected}"
        )
    return ExtremalInstance(c, target, got)


def centre_out(count: int) -> Iterator[int]:
    """0, 1, -1, 2, -2, ... truncated to ``count`` terms."""
    for i in range(count):
        yield (i + 1) // 2 if i % 2 else -(i // 2)


def allones_extremal(n: int, k: int, q: int) -> ExtremalInstance:
    _check_k(k, q)
    lo, hi = middle_window(n, k)
    target = ResidueSet.of(q, [j % q for j in range(lo, hi + 1)])
    return _certify(Configuration.all_ones(n, q), target, theorem1_bound(n, k, q))


def split_extremal(n: int, k: int, q: int) -> ExtremalInstance:
    """Half the residues 1 and half -1, aimed at the first k of 0, 1, -1, 2, ..."""
    _check_k(k, q)
    up = (n + 1) // 2
    c = Configuration(q, (1,) * up + (-1,) * (n - up))
    values: List[int] = [v % q for v in centre_out(k)]
    assert len(set(values)) == k, f"centre-out residues collide mod {q}: {values}"
    return _certify(c, ResidueSet.of(q, values), theorem1_bound(n, k, q))


def corollary2_extremal(n: int, q: int) -> ExtremalInstance:
    """All-ones configuration and its least populated residue class."""
    bound = corollary2_bound(n, q)
    rho = -((q - n) // 2) % q
    c = Configuration.all_ones(n, q)
    inst = _certify(c, ResidueSet.of(q, [rho]), bound)
    least = min(subset_sum_distribution(c).counts)
    if least != inst.claimed:
        raise ExtremalMismatch(f"class {rho} holds {inst.claimed} but the minimum is {least}")
    return inst
