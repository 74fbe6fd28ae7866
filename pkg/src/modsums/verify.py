"""Brute-force oracles and exhaustive sweeps that check the bounds at desk scale.

The enumerators here list all 2^n sums explicitly and never go through the
convolution in :mod:`modsums.core`, so the two routes check each other.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import (
    Configuration,
    ResidueSet,
    _check_k,
    corollary2_bound,
    corollary3_bound,
    reduced_residues,
    subset_sum_distribution,
    theorem1_bound,
)
from .structures import (
    build_partitions,
    check_limit,
    iter_partition_batches,
    partition_bounds,
    recompute_sums,
    verify_batch,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 10**8
SWEEP_LIMIT = 16
_CHUNK_CELLS = 1 << 22


class BudgetExceededError(ValueError):
    pass


def enumerate_sums(q: int, residues, signed: bool = False) -> np.ndarray:
    """Every one of the 2^n sums for each row of ``residues``, shape (rows, 2^n).

    Column ``mask`` holds the 0/1 sum over the set bits of ``mask``; in signed
    mode a set bit means coefficient -1 and a clear bit +1.
    """
    residues = np.asarray(residues, dtype=np.int64)
    rows = residues.shape[0]
    if signed:
        sums = np.zeros((rows, 1), dtype=np.int64)
        for col in residues.T:
            a = col[:, None]
            sums = np.concatenate([(sums + a) % q, (sums - a) % q], axis=1)
        return sums
    sums = np.zeros((rows, 1), dtype=np.int64)
    for col in residues.T:
        sums = np.concatenate([sums, (sums + col[:, None]) % q], axis=1)
    return sums


def brute_distributions(q: int, residues, signed: bool = False) -> np.ndarray:
    sums = enumerate_sums(q, residues, signed)
    rows = sums.shape[0]
    flat = (sums + (np.arange(rows, dtype=np.int64) * q)[:, None]).ravel()
    return np.bincount(flat, minlength=rows * q).reshape(rows, q)


def brute_count(
    c: Configuration, p: ResidueSet, limit: Optional[int] = None, signed: bool = False
) -> int:
    """Count the coefficient vectors whose sum lies in ``p`` by listing all 2^n of them."""
    if c.q != p.q:
        raise ValueError(f"modulus mismatch: configuration mod {c.q}, target mod {p.q}")
    check_limit(c.n, limit)
    if not p.members:
        return 0
    dist = brute_distributions(c.q, np.array(c.residues, dtype=np.int64).reshape(1, c.n), signed)
    return int(sum(int(dist[0, s]) for s in p.members))


@dataclass(frozen=True)
class SweepResult:
    kind: str
    n: int
    q: int
    k: int
    formula_bound: int
    observed: int
    witness: Optional[Tuple[Configuration, ResidueSet]]
    evaluated: int
    pruned: bool

    @property
    def agree(self) -> bool:
        return self.formula_bound == self.observed


def _configs(units: Sequence[int], free: int, start: int, stop: int, lead: Optional[int]) -> np.ndarray:
    """Rows start..stop of the odometer over ``units`` (first position most significant)."""
    idx = np.arange(start, stop, dtype=np.int64)
    digits = np.empty((idx.size, free), dtype=np.int64)
    base = len(units)
    for pos in range(free - 1, -1, -1):
        idx, digits[:, pos] = np.divmod(idx, base)
    out = np.asarray(units, dtype=np.int64)[digits]
    if lead is not None:
        out = np.concatenate([np.full((out.shape[0], 1), lead, dtype=np.int64), out], axis=1)
    return out


def _evaluate_chunk(args):
    kind, q, units, free, lead, start, stop, incidence = args
    configs = _configs(units, free, start, stop, lead)
    dist = brute_distributions(q, configs, signed=kind == "signed-max")
    scores = dist @ incidence.T
    if kind == "min":
        per_row = scores.min(axis=1)
        best = per_row.min()
    else:
        per_row = scores.max(axis=1)
        best = per_row.max()
    row = int(np.argmax(per_row == best))
    target = int(np.argmax(scores[row] == best))
    return int(best), start + row, target


def _sweep(kind, n, q, k, prune, budget, workers, limit) -> SweepResult:
    check_limit(n, SWEEP_LIMIT if limit is None else limit)
    units = reduced_residues(q)
    # scaling every residue by a unit permutes the distribution, so a_1 = 1 loses nothing
    lead = 1 % q if prune and n > 0 else None
    free = n - 1 if lead is not None else n
    total = len(units) ** free
    targets = list(combinations(range(q), k))
    evaluated = total * len(targets)
    if evaluated > budget:
        raise BudgetExceededError(
            f"sweep n={n} q={q} k={k} needs {evaluated} evaluations, budget is {budget}"
        )
    incidence = np.zeros((len(targets), q), dtype=np.int64)
    for i, t in enumerate(targets):
        incidence[i, list(t)] = 1

    step = max(1, _CHUNK_CELLS >> n)
    jobs = [
        (kind, q, units, free, lead, s, min(s + step, total), incidence)
        for s in range(0, total, step)
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_evaluate_chunk, jobs))
    else:
        results = [_evaluate_chunk(j) for j in jobs]

    # chunks are in odometer order, so strict comparison keeps the lexicographically first witness
    best = None
    for value, row, target in results:
        if best is None or (value < best[0] if kind == "min" else value > best[0]):
            best = (value, row, target)
    value, row, target = best
    config = _configs(units, free, row, row + 1, lead)[0]
    witness = (Configuration(q, tuple(int(a) for a in config)), ResidueSet.of(q, targets[target]))

    if kind == "max":
        formula = theorem1_bound(n, k, q)
    elif kind == "min":
        formula = corollary2_bound(n, q)
    else:
        formula = corollary3_bound(n, k, q)
    log.debug("sweep %s n=%d q=%d k=%d: observed %d, formula %d", kind, n, q, k, value, formula)
    return SweepResult(kind, n, q, k, formula, value, witness, evaluated, lead is not None)


def exhaustive_max(
    n: int,
    q: int,
    k: int,
    prune: bool = True,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    limit: Optional[int] = None,
) -> SweepResult:
    """Largest 0/1 count in any k-set, over every configuration of reduced residues."""
    _check_k(k, q)
    return _sweep("max", n, q, k, prune, budget, workers, limit)


def exhaustive_min_class(
    n: int,
    q: int,
    prune: bool = True,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    limit: Optional[int] = None,
) -> SweepResult:
    """Smallest single residue class over every configuration."""
    if n < q - 1:
        raise ValueError(f"n must be at least q - 1 ({n} < {q - 1})")
    return _sweep("min", n, q, 1, prune, budget, workers, limit)


def exhaustive_signed_max(
    n: int,
    q: int,
    k: int,
    prune: bool = True,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
    limit: Optional[int] = None,
) -> SweepResult:
    _check_k(k, q)
    return _sweep("signed-max", n, q, k, prune, budget, workers, limit)


@dataclass(frozen=True)
class UniformityReport:
    n: int
    q: int
    counts: Tuple[int, ...]
    min_fraction: Fraction
    max_fraction: Fraction
    max_deviation: Fraction


def uniformity_report(n: int, q: int, configuration: Optional[Configuration] = None) -> UniformityReport:
    """How far the 0/1 sum distribution is from uniform, in exact rationals."""
    c = Configuration.all_ones(n, q) if configuration is None else configuration
    if c.n != n or c.q != q:
        raise ValueError(f"configuration has n={c.n}, q={c.q}; asked for n={n}, q={q}")
    counts = subset_sum_distribution(c).counts
    total = 1 << n
    fractions = [Fraction(x, total) for x in counts]
    uniform = Fraction(1, q)
    return UniformityReport(
        n,
        q,
        counts,
        min(fractions),
        max(fractions),
        max(abs(f - uniform) for f in fractions),
    )


@dataclass
class CertificateSummary:
    """Outcome of building and checking the partition of every configuration of one length."""

    n: int
    q: int
    configurations: int = 0
    verified: int = 0
    bound_matches: int = 0
    dominated: int = 0
    multiset_matches: int = 0
    targets_per_configuration: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        c = self.configurations
        return c > 0 and self.verified == self.bound_matches == self.dominated == self.multiset_matches == c


def _target_matrix(q: int, samples: int, rng: np.random.Generator) -> np.ndarray:
    if (1 << q) - 1 <= samples:
        masks = np.arange(1, 1 << q, dtype=np.int64)
    elif q < 63:
        masks = rng.integers(1, 1 << q, size=samples, dtype=np.int64)
    else:
        raise ValueError("random target sampling needs q < 63")
    return ((masks[:, None] >> np.arange(q)) & 1).astype(np.int64)


def certificate_sweep(
    q: int,
    n_max: int,
    samples: int = 1000,
    seed: int = 0,
    max_cells: int = _CHUNK_CELLS,
) -> List[CertificateSummary]:
    """Build, verify and evaluate the partition of every configuration with n <= n_max.

    Per configuration: the partition passes the structural checks, its
    certificate bound equals the formula for every k, every target set (all of
    them when there are at most ``samples``, else ``samples`` random ones) holds
    no more sums than the certificate allows, and the block-size multiset equals
    the all-ones one.
    """
    rng = np.random.default_rng(seed)
    ks = list(range(1, q + 1))
    targets = _target_matrix(q, samples, rng)
    target_sizes = targets.sum(axis=1)
    formula = {n: np.array([theorem1_bound(n, k, q) for k in ks]) for n in range(n_max + 1)}
    reference = {}
    for n in range(n_max + 1):
        sizes = build_partitions(q, np.ones((1, n), dtype=np.int64) % q).block_sizes()[0]
        reference[n] = np.sort(sizes)[::-1]
    summaries = [CertificateSummary(n, q, targets_per_configuration=len(targets)) for n in range(n_max + 1)]

    for batch in iter_partition_batches(q, n_max, max_cells=max_cells):
        n, rows = batch.n, len(batch)
        s = summaries[n]
        recomputed = recompute_sums(q, batch.residues)
        ver = verify_batch(batch, recomputed)
        bounds = partition_bounds(batch, ks)
        bound_ok = (bounds == formula[n]).all(axis=1)

        dist = np.bincount(
            (recomputed + (np.arange(rows, dtype=np.int64) * q)[:, None]).ravel(),
            minlength=rows * q,
        ).reshape(rows, q)
        caps = bounds[:, target_sizes - 1]
        dominated = (dist @ targets.T <= caps).all(axis=1)

        sizes = np.sort(batch.block_sizes(), axis=1)[:, ::-1]
        ref = reference[n]
        if sizes.shape[1] >= ref.size:
            padded = np.zeros(sizes.shape[1], dtype=ref.dtype)
            padded[: ref.size] = ref
            multiset = (sizes == padded).all(axis=1)
        else:
            multiset = np.zeros(rows, dtype=bool)

        s.configurations += rows
        s.verified += int(ver.ok.sum())
        s.bound_matches += int(bound_ok.sum())
        s.dominated += int(dominated.sum())
        s.multiset_matches += int(multiset.sum())
        if len(s.failures) < 5:
            for name, flags in (("verify", ver.ok), ("bound", bound_ok), ("dominance", dominated), ("multiset", multiset)):
                bad = np.flatnonzero(~flags)
                if bad.size:
                    cfg = tuple(int(a) for a in batch.residues[bad[0]])
                    s.failures.append(f"{name} failed for a={cfg}")
    return summaries
