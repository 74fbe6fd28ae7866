"""Structure partitions of the Boolean lattice 2^[n].

A structure is a family of subsets of [n] whose residue sums are pairwise
distinct mod q.  The partition is grown one ground element at a time: every
block A spawns a shifted copy A' = {I + {n}}, and unless S(A) is already all of
Z_q one member of A' is moved into A (the one whose sum is the smallest residue
of S(A') missing from S(A)).  A copy emptied by that move is dropped.

Subsets are bit masks, element i of [n] being bit i - 1.  The construction runs
on numpy arrays and on many configurations at once (:class:`PartitionBatch`),
which is what makes exhaustive certificate sweeps feasible.  Inside a batch a
partition is stored as two arrays indexed by mask: the residue sum of the mask
and the index of its block.  Blocks are numbered in creation order (each B'
right after its B) and members are listed in ascending mask order.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .core import Configuration, _check_k, mod_binomial, reduced_residues

DEFAULT_LIMIT = 24


class EnumerationLimitError(ValueError):
    pass


class ShapeError(ValueError):
    """A sum set is neither all of Z_q nor an interval centred on n/2."""


class LemmaViolation(RuntimeError):
    pass


def check_limit(n: int, limit: Optional[int]) -> None:
    limit = DEFAULT_LIMIT if limit is None else limit
    if n > limit:
        raise EnumerationLimitError(
            f"n = {n} exceeds the explicit enumeration limit {limit} (2^n subsets)"
        )


@dataclass(frozen=True)
class Structure:
    members: Tuple[int, ...]
    sums: Tuple[int, ...]

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class StructurePartition:
    configuration: Configuration
    blocks: Tuple[Structure, ...]

    @property
    def n(self) -> int:
        return self.configuration.n

    @property
    def q(self) -> int:
        return self.configuration.q

    def sizes(self) -> List[int]:
        return [len(b) for b in self.blocks]


@dataclass(frozen=True)
class IntervalSumSet:
    """Shape of a block's sum set.

    ``full`` means the block realises every residue.  ``x``/``y`` are set when
    the sums are the residues of the integers x..y with x + y = n; a block of
    size q can be both.
    """

    full: bool
    x: Optional[int] = None
    y: Optional[int] = None


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    block_count: int
    expected_block_count: int
    violation: Optional[str] = None


def _sums_dtype(q: int):
    return np.int32 if q < 2**31 else np.int64


def _step(sums, labels, counts, a, q):
    """Grow every partition in a batch by one ground element with residue ``a[row]``."""
    rows, m = sums.shape
    width = int(counts.max())
    nb = rows * width
    gid = (np.arange(rows, dtype=np.int64) * width)[:, None] + labels
    shifted = ((sums.astype(np.int64) + a[:, None]) % q).astype(sums.dtype)

    exists = np.bincount(gid.ravel(), minlength=nb) > 0
    if nb * q <= 8 * rows * m + 4096:
        have = np.zeros(nb * q, dtype=bool)
        have[(gid * q + sums).ravel()] = True
        gain = np.zeros(nb * q, dtype=bool)
        gain[(gid * q + shifted).ravel()] = True
        new = (gain & ~have).reshape(nb, q)
        is_open = new.any(axis=1)
        first = np.where(is_open, new.argmax(axis=1), q)
        full = have.reshape(nb, q).all(axis=1)
        if np.any(exists & (full == is_open)):
            raise LemmaViolation("a shifted sum set failed the shift lemma")
    else:
        keys = (gid * q + sums).ravel()
        keys.sort()
        cand = (gid * q + shifted).ravel()
        pos = np.minimum(np.searchsorted(keys, cand), keys.size - 1)
        missing = keys[pos] != cand
        first = np.full(nb, q, dtype=np.int64)
        np.minimum.at(first, gid.ravel()[missing], shifted.ravel()[missing])

    moved = shifted == first[gid]
    kept = 2 * labels
    moved_labels = np.where(moved, kept, kept + 1)
    new_labels = np.concatenate([kept, moved_labels], axis=1)

    # drop empty B' blocks and renumber in creation order
    wide = 2 * width
    present = np.zeros(rows * wide, dtype=bool)
    present[((np.arange(rows, dtype=np.int64) * wide)[:, None] + new_labels).ravel()] = True
    present = present.reshape(rows, wide)
    rank = np.cumsum(present, axis=1, dtype=np.int32) - 1
    new_labels = np.take_along_axis(rank, new_labels, axis=1).astype(np.int32)
    return (
        np.concatenate([sums, shifted], axis=1),
        new_labels,
        present.sum(axis=1),
    )


@dataclass
class PartitionBatch:
    """Structure partitions for ``len(residues)`` configurations of equal n and q."""

    q: int
    residues: np.ndarray  # (rows, n)
    sums: np.ndarray  # (rows, 2^n)
    labels: np.ndarray  # (rows, 2^n)
    block_counts: np.ndarray  # (rows,)

    @classmethod
    def empty(cls, q: int, rows: int = 1) -> "PartitionBatch":
        return cls(
            q,
            np.zeros((rows, 0), dtype=np.int64),
            np.zeros((rows, 1), dtype=_sums_dtype(q)),
            np.zeros((rows, 1), dtype=np.int32),
            np.ones(rows, dtype=np.int64),
        )

    @property
    def n(self) -> int:
        return self.residues.shape[1]

    @property
    def width(self) -> int:
        return int(self.block_counts.max())

    def __len__(self):
        return self.residues.shape[0]

    def __getitem__(self, sl: slice) -> "PartitionBatch":
        return PartitionBatch(
            self.q, self.residues[sl], self.sums[sl], self.labels[sl], self.block_counts[sl]
        )

    def extend(self, a) -> "PartitionBatch":
        a = np.asarray(a, dtype=np.int64) % self.q
        sums, labels, counts = _step(self.sums, self.labels, self.block_counts, a, self.q)
        return PartitionBatch(
            self.q, np.concatenate([self.residues, a[:, None]], axis=1), sums, labels, counts
        )

    def branch(self, units: Sequence[int]) -> "PartitionBatch":
        """Extend every row by every residue in ``units`` (row-major: row, then unit)."""
        u = len(units)
        rep = PartitionBatch(
            self.q,
            np.repeat(self.residues, u, axis=0),
            np.repeat(self.sums, u, axis=0),
            np.repeat(self.labels, u, axis=0),
            np.repeat(self.block_counts, u),
        )
        return rep.extend(np.tile(np.asarray(units, dtype=np.int64), len(self)))

    def block_sizes(self) -> np.ndarray:
        rows, width = len(self), self.width
        gid = (np.arange(rows, dtype=np.int64) * width)[:, None] + self.labels
        return np.bincount(gid.ravel(), minlength=rows * width).reshape(rows, width)

    def configuration(self, i: int) -> Configuration:
        return Configuration(self.q, tuple(int(a) for a in self.residues[i]))

    def partition(self, i: int) -> StructurePartition:
        labels = self.labels[i]
        order = np.argsort(labels, kind="stable")
        bounds = np.cumsum(np.bincount(labels, minlength=int(self.block_counts[i])))
        sums = self.sums[i]
        blocks = []
        start = 0
        for stop in bounds.tolist():
            masks = order[start:stop]
            blocks.append(Structure(tuple(masks.tolist()), tuple(sums[masks].tolist())))
            start = stop
        return StructurePartition(self.configuration(i), tuple(blocks))


def build_partitions(q: int, residues, limit: Optional[int] = None) -> PartitionBatch:
    """Build the partition for every row of the ``(rows, n)`` residue matrix."""
    residues = np.asarray(residues, dtype=np.int64)
    if residues.ndim != 2:
        raise ValueError("residues must be a 2-d array (rows, n)")
    check_limit(residues.shape[1], limit)
    for a in np.unique(residues % q).tolist():
        if gcd(a, q) != 1:
            raise ValueError(f"residue {a} is not reduced mod {q}")
    batch = PartitionBatch.empty(q, residues.shape[0])
    for col in residues.T:
        batch = batch.extend(col)
    return batch


def build_partition(c: Configuration, limit: Optional[int] = None) -> StructurePartition:
    check_limit(c.n, limit)
    batch = build_partitions(c.q, np.array(c.residues, dtype=np.int64).reshape(1, c.n), limit)
    return StructurePartition(c, batch.partition(0).blocks)


def iter_partition_batches(
    q: int,
    n_max: int,
    units: Optional[Sequence[int]] = None,
    max_cells: int = 1 << 22,
) -> Iterator[PartitionBatch]:
    """Yield partitions of every configuration of length 0..n_max over ``units``.

    Configurations are grown depth-first in chunks, so each prefix is built
    once and no batch holds more than about ``max_cells`` subset entries.
    """
    units = reduced_residues(q) if units is None else tuple(units)
    root = PartitionBatch.empty(q)
    yield root

    def descend(batch: PartitionBatch) -> Iterator[PartitionBatch]:
        if batch.n >= n_max:
            return
        per_row = len(units) << (batch.n + 1)
        step = max(1, max_cells // per_row)
        for start in range(0, len(batch), step):
            child = batch[start : start + step].branch(units)
            yield child
            yield from descend(child)

    yield from descend(root)


def recompute_sums(q: int, residues: np.ndarray) -> np.ndarray:
    """Sum of residues over each mask, straight from the mask bits."""
    rows, n = residues.shape
    masks = np.arange(1 << n, dtype=np.int64)
    bits = ((masks[:, None] >> np.arange(n)) & 1).astype(np.float64)
    # integer-valued float matmul is exact far below 2^53
    total = (bits @ residues.T.astype(np.float64)).T
    return np.rint(total).astype(np.int64) % q


@dataclass
class BatchVerification:
    cover: np.ndarray
    sums_match: np.ndarray
    distinct: np.ndarray
    count: np.ndarray

    @property
    def ok(self) -> np.ndarray:
        return self.cover & self.sums_match & self.distinct & self.count

    def first_failure(self) -> Optional[Tuple[int, str]]:
        for name in ("cover", "sums_match", "distinct", "count"):
            bad = np.flatnonzero(~getattr(self, name))
            if bad.size:
                return int(bad[0]), name
        return None


def verify_batch(batch: PartitionBatch, recomputed: Optional[np.ndarray] = None) -> BatchVerification:
    """Array form of :func:`verify_partition`, one verdict per row."""
    rows, q, n = len(batch), batch.q, batch.n
    width = batch.width
    labels = batch.labels.astype(np.int64)
    in_range = (labels >= 0) & (labels < batch.block_counts[:, None])
    sizes = batch.block_sizes()
    used = sizes > 0
    slots = np.arange(width)[None, :] < batch.block_counts[:, None]
    cover = in_range.all(axis=1) & (used == slots).all(axis=1)

    if recomputed is None:
        recomputed = recompute_sums(q, batch.residues)
    sums_match = (recomputed == batch.sums).all(axis=1)

    gid = (np.arange(rows, dtype=np.int64) * width)[:, None] + np.clip(labels, 0, width - 1)
    keys = gid * q + batch.sums
    if rows * width * q <= 8 * keys.size + 4096:
        hits = np.bincount(keys.ravel(), minlength=rows * width * q).reshape(rows, width * q)
        distinct = (hits <= 1).all(axis=1)
    else:
        srt = np.sort(keys, axis=1)
        distinct = (np.diff(srt, axis=1) != 0).all(axis=1)

    count = batch.block_counts == mod_binomial(n, n // 2, q)
    return BatchVerification(cover, sums_match, distinct, count)


def verify_partition(p: StructurePartition) -> VerificationReport:
    c = p.configuration
    n, q = c.n, c.q
    expected = mod_binomial(n, n // 2, q)
    nblocks = len(p.blocks)

    def fail(msg):
        return VerificationReport(False, nblocks, expected, msg)

    owner = {}
    for j, block in enumerate(p.blocks):
        if not block.members:
            return fail(f"block {j} is empty")
        for mask in block.members:
            if not 0 <= mask < (1 << n):
                return fail(f"block {j}: mask {mask:x} is not a subset of [{n}]")
            if mask in owner:
                return fail(f"not disjoint: mask {mask:x} in blocks {owner[mask]} and {j}")
            owner[mask] = j
    if len(owner) != 1 << n:
        missing = next(m for m in range(1 << n) if m not in owner)
        return fail(f"not a cover: mask {missing:x} missing")

    for j, block in enumerate(p.blocks):
        if len(block.sums) != len(block.members):
            return fail(f"block {j}: {len(block.members)} members but {len(block.sums)} sums")
        for mask, stored in zip(block.members, block.sums):
            actual = sum(a for i, a in enumerate(c.residues) if mask >> i & 1) % q
            if actual != stored:
                return fail(f"block {j}: mask {mask:x} has sum {actual}, stored {stored}")
        if len(set(block.sums)) != len(block.sums):
            return fail(f"block {j}: duplicate sums {block.sums}")

    if nblocks != expected:
        return fail(f"{nblocks} blocks, expected {expected}")
    return VerificationReport(True, nblocks, expected)


def partition_bound(p: StructurePartition, k: int) -> int:
    """Upper bound on the number of sums in any k-element target set."""
    _check_k(k, p.q)
    return sum(min(k, len(b)) for b in p.blocks)


def partition_bounds(batch: PartitionBatch, ks: Sequence[int]) -> np.ndarray:
    """``partition_bound`` for every row and every k, shape (rows, len(ks))."""
    for k in ks:
        _check_k(k, batch.q)
    sizes = batch.block_sizes()
    return np.stack([np.minimum(sizes, k).sum(axis=1) for k in ks], axis=1)


def sum_set_shape(s: Structure, n: int, q: int) -> IntervalSumSet:
    """Classify the sum set of a block built for the all-ones configuration."""
    residues = set(s.sums)
    size = len(residues)
    if size != len(s.sums):
        raise ShapeError(f"block sums {s.sums} are not distinct")
    full = size == q
    x = y = None
    if (n - size + 1) % 2 == 0:
        lo = (n - size + 1) // 2
        if {j % q for j in range(lo, n - lo + 1)} == residues:
            x, y = lo, n - lo
    if not full and x is None:
        raise ShapeError(f"sum set {sorted(residues)} is not an interval centred on {n}/2")
    return IntervalSumSet(full, x, y)


def lemma_shift_check(s, a: int, q: int) -> bool:
    """Whether translating the residue set ``s`` by the unit ``a`` fixes it."""
    if gcd(a, q) != 1:
        raise ValueError(f"{a} is not reduced mod {q}")
    s = {x % q for x in s}
    if not s:
        raise ValueError("residue set must be nonempty")
    return {(x + a) % q for x in s} == s


def format_partition(p: StructurePartition) -> str:
    c = p.configuration
    lines = [f"n={c.n} q={c.q} a={','.join(map(str, c.residues))}"]
    lines.extend(",".join(f"{m:x}" for m in b.members) for b in p.blocks)
    return "\n".join(lines) + "\n"


def parse_partition(text: str) -> StructurePartition:
    lines = text.strip("\n").split("\n")
    fields = dict(tok.split("=", 1) for tok in lines[0].split())
    n, q = int(fields["n"]), int(fields["q"])
    a = tuple(int(t) for t in fields["a"].split(",") if t)
    if len(a) != n:
        raise ValueError(f"header says n={n} but lists {len(a)} residues")
    c = Configuration(q, a)
    blocks = []
    for line in lines[1:]:
        masks = tuple(int(tok, 16) for tok in line.split(","))
        sums = tuple(sum(r for i, r in enumerate(a) if m >> i & 1) % q for m in masks)
        blocks.append(Structure(masks, sums))
    return StructurePartition(c, tuple(blocks))
