"""Deletion-mode read synchronization.

Given the d reads of a period-capped track, marking isolates the deletions
into at most k disjoint read intervals: long stretches where all rows agree
cannot contain deletions (a deletion would force a long low-period window),
so their interiors are marked and the unmarked remainder brackets the errors.
Per-interval deletion counts then come from majority voting over row-1/row-2
shift probes spaced one head distance apart, and everything outside the
intervals aligns back to the source by prefix count subtraction.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from itertools import combinations
from math import comb

import numpy as np

from .bits import BitArray, agreement_run_starts, as_bits
from .errors import Ambiguous, BudgetExceeded, MajorityTie, NoCandidate
from .model import HeadGeometry, ReadMatrix
from .params import CodeParams
from .periodicity import max_periodic_run

UNKNOWN = np.uint8(2)  # sentinel for not-yet-recovered source bits


@dataclass(frozen=True)
class IntervalReport:
    """Read-side intervals, per-interval deletion counts, derived source intervals."""

    read_intervals: tuple[tuple[int, int], ...]
    counts: tuple[int, ...]

    @property
    def J(self) -> int:
        return len(self.read_intervals)

    @property
    def source_intervals(self) -> tuple[tuple[int, int], ...]:
        """Source interval j is the read interval shifted by the deletions before/through it."""
        out = []
        before = 0
        for (s, e), c in zip(self.read_intervals, self.counts):
            out.append((s + before, e + before + c))
            before += c
        return tuple(out)

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class ShiftProbeTable:
    """Per-window shift probes and per-residue sums behind one count vote."""

    probes: dict[tuple[int, int], int]
    sums: dict[int, int]
    fallbacks: int
    majority: int


def _column_agreement(rows: np.ndarray) -> np.ndarray:
    return (rows == rows[0]).all(axis=0)


def identify_intervals(D: ReadMatrix, params: CodeParams) -> list[tuple[int, int]]:
    """Unmarked-interval identification over read columns (1-based, inclusive).

    Marks interiors of agreement runs, keeping a margin of t_max on each side
    and never marking past column n+1; returns all unmarked intervals, or the
    k with smallest starts when there are more.
    """
    rows = D.rows
    cols = rows.shape[1]
    n, k, t_max = params.n, params.k, params.geometry.t_max
    T = params.T
    runs = agreement_run_starts(_column_agreement(rows))
    marked = np.zeros(cols, dtype=bool)
    # initialization pass: a long agreement prefix is safe up to L - t_max
    L = int(runs[0]) if cols else 0
    if L > t_max:
        marked[: L - t_max] = True
    i = 1
    scan_end = min(n + 1, cols)
    while i <= scan_end:
        L = int(runs[i - 1])
        if L >= 2 * t_max + T + 1:
            lo = i + t_max
            hi = min(i + L - 1, n + 1) - t_max
            if lo <= hi:
                marked[lo - 1 : hi] = True
            i += L
        else:
            i += max(L, 1)  # no column inside a short run can open a long one
    intervals = []
    pos = 0
    while pos < cols:
        if marked[pos]:
            pos += 1
            continue
        end = pos
        while end + 1 < cols and not marked[end + 1]:
            end += 1
        intervals.append((pos + 1, end + 1))
        pos = end + 1
    if len(intervals) > k:
        intervals = intervals[:k]
    return intervals


def count_deletions_in_interval(
    D: ReadMatrix,
    interval: tuple[int, int],
    params: CodeParams,
    return_table: bool = False,
):
    """Deletions of head 1 inside the source interval behind a read interval.

    Only the first two reads are used. Windows of length T+k+1 tile the
    interval with stride t1 in 4k+1 residue classes; each window yields the
    row-1/row-2 shift accumulated up to it, the per-residue sums telescope to
    the count, and the majority over residues wins.
    """
    b_min, b_max = interval
    row1, row2 = D.rows[0], D.rows[1]
    k, T = params.k, params.T
    t1 = params.geometry.distances[0]
    stride = T + 2 * k + 1
    win = T + k + 1
    probes: dict[tuple[int, int], int] = {}
    sums: dict[int, int] = {m: 0 for m in range(1, 4 * k + 2)}
    fallbacks = 0
    length = b_max - b_min + 1
    for i in range(1, (length + t1 - 1) // t1 + 1):
        for m in range(1, 4 * k + 2):
            p = b_min + (i - 1) * t1 + (m - 1) * stride
            q = p + win - 1  # untruncated end; window in the probe set only if it fits
            if q > b_max:
                continue
            x_val, matches = None, 0
            for x in range(0, k + 1):
                if np.array_equal(row1[p - 1 : q - x], row2[p - 1 + x : q]):
                    matches += 1
                    x_val = x
            if matches != 1:
                x_val = 0
                fallbacks += 1
            probes[(i, m)] = x_val
            sums[m] += x_val
    votes = Counter(sums.values())
    top = votes.most_common()
    if len(top) > 1 and top[0][1] == top[1][1]:
        raise MajorityTie(f"count vote tied between {top[0][0]} and {top[1][0]}")
    majority = top[0][0]
    if return_table:
        return majority, ShiftProbeTable(probes, sums, fallbacks, majority)
    return majority


def build_report(
    D: ReadMatrix, params: CodeParams, total_deletions: int | None = None
) -> IntervalReport:
    """Identify intervals and determine their deletion counts.

    The shift-probe vote is only guaranteed inside the period-capped prefix.
    When ``total_deletions`` is supplied, the trailing interval (which always
    reaches the last read column and may extend into uncapped redundancy) is
    counted by subtraction instead.
    """
    intervals = identify_intervals(D, params)
    counts = []
    for s, e in intervals:
        if total_deletions is not None and e == D.cols:
            remainder = total_deletions - sum(counts)
            if remainder < 0:
                raise MajorityTie("interval counts exceed the total deletion count")
            counts.append(remainder)
        else:
            counts.append(count_deletions_in_interval(D, (s, e), params))
    return IntervalReport(tuple(intervals), tuple(counts))


def align_and_recover_clean_bits(
    D: ReadMatrix, report: IntervalReport, source_len: int
) -> BitArray:
    """Fill source positions outside all intervals from row 1; UNKNOWN elsewhere.

    Source position p outside the intervals appears in row 1 at column
    p - (deletions in intervals entirely before p).
    """
    row1 = D.rows[0]
    out = np.full(source_len, UNKNOWN, dtype=np.uint8)
    cursor = 1  # next source position to fill
    before = 0
    for (s, e), c in zip(report.source_intervals, report.counts):
        lo, hi = cursor, min(s - 1, source_len)
        if lo <= hi:
            out[lo - 1 : hi] = row1[lo - 1 - before : hi - before]
        cursor = e + 1
        before += c
        if cursor > source_len:
            break
    if cursor <= source_len:
        hi = min(source_len, len(row1) + before)
        if cursor <= hi:
            out[cursor - 1 : hi] = row1[cursor - 1 - before : hi - before]
    return out


def recover_interval_multihead(
    segments: list[BitArray],
    count: int,
    geometry: HeadGeometry,
    period_filter: tuple[int, int, int] | None = None,
    pinned: dict[int, int] | None = None,
    budget: int = 250_000,
) -> BitArray:
    """Search for the unique source segment behind d aligned interval reads.

    Candidates are the insertions of ``count`` bits into the head-1 segment;
    each must reproduce every other head under the common shifted deletion
    pattern. ``period_filter=(prefix_len, k, T)`` drops candidates whose first
    prefix_len bits contain a period-<=k window longer than T; ``pinned`` maps
    1-based candidate positions to required bit values (used to anchor the
    part of a tail interval that overlaps already-recovered redundancy).
    Exactly one candidate content must survive.
    """
    d = len(segments)
    seg1 = as_bits(segments[0])
    seg_len = len(seg1)
    m = seg_len + count
    offsets = geometry.offsets
    span = geometry.span
    if count == 0:
        for w in range(1, d):
            if not np.array_equal(segments[w], seg1):
                raise NoCandidate("error-free interval but reads disagree")
        return seg1.copy()
    if m - span < count:
        raise NoCandidate("interval too short for the claimed deletion count")

    # disagreement columns bound where the deletions can sit
    fd, ld = None, None
    for w in range(1, d):
        diff = np.flatnonzero(segments[w] != seg1)
        if len(diff):
            fd = int(diff[0]) + 1 if fd is None else min(fd, int(diff[0]) + 1)
            ld = int(diff[-1]) + 1 if ld is None else max(ld, int(diff[-1]) + 1)
    hi_anchor = fd if fd is not None else m - span  # min(Q) <= first disagreement
    lo_anchor = (ld - span + count) if ld is not None else 1  # max(Q) >= last - span + count

    n_positions = m - span
    if comb(n_positions, count) > budget:
        raise BudgetExceeded(f"{comb(n_positions, count)} patterns exceed budget {budget}")

    survivors: dict[bytes, BitArray] = {}
    for q in combinations(range(1, n_positions + 1), count):
        if q[0] > hi_anchor or q[-1] < lo_anchor:
            continue
        insert_at = [p - 1 - j for j, p in enumerate(q)]  # original-index form
        for values in range(1 << count):
            bits = [(values >> (count - 1 - j)) & 1 for j in range(count)]
            cand = np.insert(seg1, insert_at, bits)
            ok = True
            for w in range(1, d):
                drop = [p - 1 + offsets[w] for p in q]
                if not np.array_equal(np.delete(cand, drop), segments[w]):
                    ok = False
                    break
            if not ok:
                continue
            if pinned and any(cand[p - 1] != v for p, v in pinned.items()):
                continue
            if period_filter is not None:
                prefix_len, kk, cap = period_filter
                if prefix_len > 0 and max_periodic_run(cand[:prefix_len], kk) > cap:
                    continue
            survivors[cand.tobytes()] = cand
            if len(survivors) > 1:
                raise Ambiguous("multiple consistent interval contents")
    if not survivors:
        raise NoCandidate("no interval content consistent with all reads")
    return next(iter(survivors.values()))
