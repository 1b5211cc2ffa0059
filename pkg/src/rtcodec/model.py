"""Multi-head shift-error channel model.

A track of n bits is read by d fixed heads. A shift error drops (deletion) or
repeats/injects (insertion) cells; because the heads sit at fixed distances
t_1..t_{d-1} along the track, the error positions seen by head i+1 are those of
head i translated by t_i. Patterns therefore store head-1 positions only; the
per-head sets are always derived, never stored.

All public position indices are 1-based (insertion position 0 = before the
first bit); the conversion to 0-based numpy indexing happens once, here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb

import numpy as np

from .bits import BitArray, as_bits
from .errors import BudgetExceeded, InadmissiblePattern


@dataclass(frozen=True)
class BitTrack:
    """An immutable stored binary sequence."""

    bits: BitArray

    def __post_init__(self):
        object.__setattr__(self, "bits", as_bits(self.bits))
        self.bits.setflags(write=False)

    @property
    def length(self) -> int:
        return len(self.bits)

    def __len__(self) -> int:
        return len(self.bits)

    def __eq__(self, other) -> bool:
        return isinstance(other, BitTrack) and np.array_equal(self.bits, other.bits)

    def __hash__(self) -> int:
        return hash(self.bits.tobytes())


@dataclass(frozen=True)
class HeadGeometry:
    """Head count and inter-head distances t_1..t_{d-1} (all >= 1)."""

    distances: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "distances", tuple(int(t) for t in self.distances))
        if any(t < 1 for t in self.distances):
            raise ValueError("head distances must be positive")

    @property
    def d(self) -> int:
        return len(self.distances) + 1

    @property
    def offsets(self) -> tuple[int, ...]:
        """Cumulative head offsets: head i sees head-1 positions shifted by offsets[i-1]."""
        out = [0]
        for t in self.distances:
            out.append(out[-1] + t)
        return tuple(out)

    @property
    def t_max(self) -> int:
        return max(self.distances) if self.distances else 0

    @property
    def span(self) -> int:
        """Distance between first and last head."""
        return sum(self.distances)

    @classmethod
    def equispaced(cls, d: int, t: int) -> "HeadGeometry":
        if d < 1:
            raise ValueError("need at least one head")
        return cls(tuple([t] * (d - 1)))


@dataclass(frozen=True)
class DeletionPattern:
    """Deletion positions in head 1; other heads are shifted copies."""

    delta1: tuple[int, ...]

    def __post_init__(self):
        pos = tuple(sorted(int(p) for p in self.delta1))
        if len(set(pos)) != len(pos):
            raise ValueError("duplicate deletion positions")
        object.__setattr__(self, "delta1", pos)

    @property
    def k(self) -> int:
        return len(self.delta1)

    def head_positions(self, head: int, geometry: HeadGeometry) -> tuple[int, ...]:
        off = geometry.offsets[head - 1]
        return tuple(p + off for p in self.delta1)

    def admissible(self, n: int, geometry: HeadGeometry) -> bool:
        if not self.delta1:
            return True
        return self.delta1[0] >= 1 and self.delta1[-1] + geometry.span <= n


@dataclass(frozen=True)
class EditPattern:
    """Deletions plus insertions, head-1 positions; inserted bits may differ per head.

    ``gamma1`` positions are in [0, n]: bit j of head i's ``inserted_bits`` row is
    placed after track position gamma1[j] + offset(i) (0 = before the first bit).
    """

    delta1: tuple[int, ...]
    gamma1: tuple[int, ...]
    inserted_bits: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        dels = tuple(sorted(int(p) for p in self.delta1))
        ins = tuple(sorted(int(p) for p in self.gamma1))
        if len(set(dels)) != len(dels) or len(set(ins)) != len(ins):
            raise ValueError("duplicate error positions")
        bits = tuple(tuple(int(b) for b in row) for row in self.inserted_bits)
        if any(len(row) != len(ins) for row in bits):
            raise ValueError("each head needs one inserted bit per insertion position")
        object.__setattr__(self, "delta1", dels)
        object.__setattr__(self, "gamma1", ins)
        object.__setattr__(self, "inserted_bits", bits)

    @property
    def r(self) -> int:
        return len(self.delta1)

    @property
    def s(self) -> int:
        return len(self.gamma1)

    def admissible(self, n: int, geometry: HeadGeometry) -> bool:
        if len(self.inserted_bits) != geometry.d and self.s > 0:
            return False
        if self.delta1 and not (self.delta1[0] >= 1 and self.delta1[-1] + geometry.span <= n):
            return False
        if self.gamma1 and not (self.gamma1[0] >= 0 and self.gamma1[-1] + geometry.span <= n):
            return False
        return True


@dataclass(frozen=True)
class ReadMatrix:
    """The d per-head reads stacked as rows (equal lengths)."""

    rows: np.ndarray
    kind: str = "deletion"  # "deletion" | "edit"

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.uint8)
        if rows.ndim != 2:
            raise ValueError("read matrix must be 2-D")
        object.__setattr__(self, "rows", rows)
        self.rows.setflags(write=False)

    @property
    def d(self) -> int:
        return self.rows.shape[0]

    @property
    def cols(self) -> int:
        return self.rows.shape[1]

    def row(self, head: int) -> BitArray:
        """1-based head index."""
        return self.rows[head - 1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ReadMatrix)
            and self.kind == other.kind
            and self.rows.shape == other.rows.shape
            and np.array_equal(self.rows, other.rows)
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.rows.shape, self.rows.tobytes()))


def apply_deletions(track: BitTrack, pattern: DeletionPattern, geometry: HeadGeometry) -> ReadMatrix:
    """Read matrix after correlated deletions (row i = track minus delta1 + offset_i)."""
    n = len(track)
    if not pattern.admissible(n, geometry):
        raise InadmissiblePattern(f"deletions {pattern.delta1} with span {geometry.span} leave [1,{n}]")
    rows = []
    for head in range(1, geometry.d + 1):
        keep = np.ones(n, dtype=bool)
        for p in pattern.head_positions(head, geometry):
            keep[p - 1] = False
        rows.append(track.bits[keep])
    return ReadMatrix(np.stack(rows), kind="deletion")


def apply_edits(track: BitTrack, pattern: EditPattern, geometry: HeadGeometry) -> ReadMatrix:
    """Read matrix after correlated deletions and insertions.

    Insertions are anchored to original track positions: a bit at gamma stays
    between track positions gamma and gamma+1 even when neighbours are deleted.
    """
    n = len(track)
    if not pattern.admissible(n, geometry):
        raise InadmissiblePattern(f"edit pattern leaves [0,{n}] in some head")
    rows = []
    for head in range(1, geometry.d + 1):
        off = geometry.offsets[head - 1]
        dels = {p + off for p in pattern.delta1}
        ins_after = {p + off: int(pattern.inserted_bits[head - 1][j]) for j, p in enumerate(pattern.gamma1)}
        out = []
        if 0 in ins_after:
            out.append(ins_after[0])
        for pos in range(1, n + 1):
            if pos not in dels:
                out.append(int(track.bits[pos - 1]))
            if pos in ins_after:
                out.append(ins_after[pos])
        rows.append(np.array(out, dtype=np.uint8))
    return ReadMatrix(np.stack(rows), kind="edit")


def admissible_deletion_positions(n: int, geometry: HeadGeometry) -> range:
    """Head-1 positions whose copies stay on the track in every head."""
    return range(1, n - geometry.span + 1)


def enumerate_deletion_ball(
    track: BitTrack, k: int, geometry: HeadGeometry, budget: int = 2_000_000
) -> set[ReadMatrix]:
    """All distinct read matrices over admissible k-deletion patterns.

    Distinct patterns can collide on the same matrix; the result set is
    deduplicated by content. Raises BudgetExceeded when the pattern count
    (before dedup) exceeds ``budget``.
    """
    n = len(track)
    positions = admissible_deletion_positions(n, geometry)
    total = comb(len(positions), k)
    if total > budget:
        raise BudgetExceeded(f"{total} patterns exceed budget {budget}")
    out: set[ReadMatrix] = set()
    for combo in combinations(positions, k):
        out.add(apply_deletions(track, DeletionPattern(combo), geometry))
    return out


def sample_deletion_pattern(rng, n: int, k: int, geometry: HeadGeometry) -> DeletionPattern:
    positions = admissible_deletion_positions(n, geometry)
    if len(positions) < k:
        raise InadmissiblePattern(f"track too short for {k} admissible deletions")
    return DeletionPattern(tuple(rng.sample(list(positions), k)))


def sample_edit_pattern(
    rng, n: int, k: int, d: int, geometry: HeadGeometry, r: int | None = None, s: int | None = None
) -> EditPattern:
    """Random admissible pattern; (r, s) uniform over r + s <= k unless given."""
    if r is None or s is None:
        pairs = [(a, b) for a in range(k + 1) for b in range(k + 1) if a + b <= k]
        r, s = rng.choice(pairs)
    del_positions = list(admissible_deletion_positions(n, geometry))
    ins_positions = list(range(0, n - geometry.span + 1))
    if len(del_positions) < r or len(ins_positions) < s:
        raise InadmissiblePattern("track too short for requested edit load")
    delta1 = tuple(rng.sample(del_positions, r))
    gamma1 = tuple(rng.sample(ins_positions, s))
    bits = tuple(tuple(rng.randrange(2) for _ in range(s)) for _ in range(d))
    return EditPattern(delta1, gamma1, bits)
