"""Synchronization under mixed deletions and insertions.

Mixed edits can cancel in length, so marking uses wider margins
(k*d*t + t per side) than the deletion-only procedure, and intervals carry a
signed net shift (insertions minus deletions) instead of a count. Inside an
interval, the iterative head reduction repairs one head per pass: it finds the
first column where the rows split, identifies an error-proximal head from the
minority bit, probes a ladder of windows for the inter-row shift, and splices
the undamaged prefix of one row onto the shift-corrected suffix of its
neighbour, producing a matrix with one row fewer and at least one error less.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .bits import BitArray, agreement_run_starts
from .errors import MajorityTie, ReductionStuck
from .model import ReadMatrix
from .params import CodeParams

UNKNOWN = np.uint8(2)


@dataclass(frozen=True)
class EditIntervalReport:
    """Read-side intervals with their net shifts and change points."""

    intervals: tuple[tuple[int, int], ...]
    shifts: tuple[int, ...]
    change_points: tuple[int, ...]

    @property
    def J(self) -> int:
        return len(self.intervals)

    def source_start(self, j: int) -> int:
        """Source position of read column b1j (shifts of earlier intervals undone)."""
        b1 = self.intervals[j][0]
        return b1 - sum(s for q, s in zip(self.change_points[:j], self.shifts[:j]) if q < b1)


@dataclass(frozen=True)
class ReductionStep:
    """One head-reduction pass, kept for diagnostics and tests."""

    i_star: int
    w_star: int
    minority_tie: bool
    direction: str  # "right" | "left"
    run_start: int
    one_runs: int
    cut_shift: int


def _column_agreement(rows: np.ndarray) -> np.ndarray:
    return (rows == rows[0]).all(axis=0)


def edit_margin(params: CodeParams) -> int:
    t = params.geometry.distances[0]
    return params.k * params.d * t + t


def identify_edit_intervals(E: ReadMatrix, params: CodeParams) -> list[tuple[int, int]]:
    """All unmarked intervals of the edit marking procedure (1-based, inclusive)."""
    rows = E.rows
    cols = rows.shape[1]
    margin = edit_margin(params)
    runs = agreement_run_starts(_column_agreement(rows))
    marked = np.zeros(cols, dtype=bool)
    L = int(runs[0]) if cols else 0
    if L > margin:
        marked[: L - margin] = True
    i = 1
    while i <= cols:
        L = int(runs[i - 1])
        if L >= 2 * margin + 1:
            lo = i + margin
            hi = min(i + L - 1, cols) - margin
            if lo <= hi:
                marked[lo - 1 : hi] = True
            i += L + 1
        else:
            i += max(L, 1)
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
    return intervals


def _probe_shift(rowA: BitArray, rowB: BitArray, a: int, b: int, k: int) -> int | None:
    """Unique x with rowA[a, b-x] == rowB[a+x, b] (x >= 0) or the mirrored form.

    1-based inclusive window [a, b]; None when no x or several x match.
    """
    if a < 1 or b > len(rowA) or b - a + 1 <= k:
        return None
    found = None
    for x in range(0, k + 1):
        if np.array_equal(rowA[a - 1 : b - x], rowB[a - 1 + x : b]):
            if found is not None:
                return None
            found = x
    for x in range(1, k + 1):
        if np.array_equal(rowA[a - 1 + x : b], rowB[a - 1 : b - x]):
            if found is not None:
                return None
            found = -x
    return found


def net_shift_of_interval(E: ReadMatrix, interval: tuple[int, int], params: CodeParams) -> int:
    """Insertions minus deletions inside the interval's source region.

    Probes ride windows strided one head distance apart in 4k+1 residue
    classes; within a residue each probe is the inter-row shift accumulated so
    far, the per-residue sums telescope to deletions-minus-insertions, and the
    majority vote flips sign on return.
    """
    b1, b2 = interval
    row1, row2 = E.rows[0], E.rows[1]
    if np.array_equal(row1[b1 - 1 : b2], row2[b1 - 1 : b2]) and E.rows.shape[0] == 2:
        return 0
    if _column_agreement(E.rows)[b1 - 1 : b2].all():
        return 0
    k, T = params.k, params.T
    t = params.geometry.distances[0]
    stride = T + 4 * k + 1
    sums: dict[int, int] = {}
    sentinel = k + 1
    for m in range(1, 4 * k + 2):
        total = 0
        i = 1
        while True:
            q_im = b1 + (i - 1) * t + (m - 1) * stride
            if q_im - 1 > b2:
                break
            a = q_im + stride + k  # probe window sits one stride later, shrunk by k
            b = q_im + 2 * stride - k - 1
            if b <= len(row1):
                x = _probe_shift(row1, row2, a, b, k)
                total += x if x is not None else sentinel
            i += 1
            if i > (b2 - b1 + 1) // t + 2:
                break
        sums[m] = total
    votes = Counter(sums.values())
    top = votes.most_common()
    if len(top) > 1 and top[0][1] == top[1][1]:
        raise MajorityTie(f"net-shift vote tied between {top[0][0]} and {top[1][0]}")
    return -top[0][0]


def build_edit_report(
    E: ReadMatrix, params: CodeParams, total_shift: int | None = None
) -> EditIntervalReport:
    """Intervals plus their net shifts and change points.

    The probe vote is only guaranteed inside the period-capped prefix; when
    ``total_shift`` is supplied, the trailing interval (which always reaches
    the last column and may cover uncapped redundancy) gets the remainder.
    """
    intervals = identify_edit_intervals(E, params)
    agree = _column_agreement(E.rows)
    capped_end = params.n + params.k + 1
    shifts, qs = [], []
    for b1, b2 in intervals:
        disagree = np.flatnonzero(~agree[b1 - 1 : b2])
        if len(disagree) == 0:
            shifts.append(0)
            qs.append(b1)
            continue
        qs.append(b1 + int(disagree[-1]))
        if total_shift is not None and b2 == E.cols:
            shifts.append(total_shift - sum(shifts))
            continue
        try:
            shifts.append(net_shift_of_interval(E, (b1, b2), params))
        except MajorityTie:
            if b2 <= capped_end:
                raise
            # probes carry no guarantee beyond the period-capped prefix; a
            # zero placeholder only mis-books the remainder of the trailing
            # interval, which never feeds positions inside the prefix
            shifts.append(0)
    return EditIntervalReport(tuple(intervals), tuple(shifts), tuple(qs))


def recover_outside_bits(E: ReadMatrix, report: EditIntervalReport, source_len: int) -> BitArray:
    """Fill source positions whose row-1 image avoids all intervals.

    A column i past change point q_j was displaced by net shift s_j, so it
    shows source position i - sum of earlier shifts. Positions inside
    undetectable error clusters may be wrong; the caller's outer code absorbs
    those as block substitutions.
    """
    est = np.full(source_len, UNKNOWN, dtype=np.uint8)
    row1 = E.rows[0]
    order = sorted(range(report.J), key=lambda j: report.change_points[j])
    cuts = np.array([report.change_points[j] for j in order], dtype=np.int64)
    shift_cum = np.concatenate(([0], np.cumsum([report.shifts[j] for j in order])))
    inside = np.zeros(len(row1), dtype=bool)
    for s, e in report.intervals:
        inside[s - 1 : e] = True
    columns = np.arange(1, len(row1) + 1)
    back = shift_cum[np.searchsorted(cuts, columns, side="left")]
    source_pos = columns - back
    ok = ~inside & (source_pos >= 1) & (source_pos <= source_len)
    est[source_pos[ok] - 1] = row1[ok]
    return est


def head_reduction_recover(
    segments: list[BitArray], params: CodeParams, collect_trace: bool = False
):
    """Iteratively merge heads until all remaining rows agree.

    Returns (e, d_star[, trace]): the surviving row and how many rows were
    left. When the segment's error count is below the original head count,
    e equals the source segment (flanks included).
    """
    k, T = params.k, params.T
    t = params.geometry.distances[0]
    step_len = T + 3 * k + 1
    n_probe_right = (k * k + 3) // 4 + 3 * k
    rows = [np.asarray(seg, dtype=np.uint8) for seg in segments]
    trace: list[ReductionStep] = []
    while True:
        d_cur = len(rows)
        m_cur = len(rows[0])
        stacked = np.stack(rows)
        disagree = np.flatnonzero(~(stacked == stacked[0]).all(axis=0))
        if len(disagree) == 0:
            result = (rows[0].copy(), d_cur)
            return (*result, trace) if collect_trace else result
        i_star = int(disagree[0]) + 1
        col = stacked[:, i_star - 1]
        ones = int(col.sum())
        zeros = d_cur - ones
        tie = ones == zeros
        if tie:
            w_star = 1
        else:
            minority = 1 if ones < zeros else 0
            w_star = int(np.flatnonzero(col == minority)[0]) + 1
        if w_star <= d_cur - 1:
            direction = "right"
            n_probe = n_probe_right

            def window(w: int, ell: int) -> tuple[int, int]:
                v = i_star + 2 * k + (ell - 1) * step_len + (w - w_star) * t
                return v, v + step_len - 1

            def cut_col(w: int, run_start: int) -> int:
                return i_star + 2 * k + run_start * step_len + (w - w_star) * t + k
        else:
            direction = "left"
            n_probe = n_probe_right + 2

            def window(w: int, ell: int) -> tuple[int, int]:
                v = i_star - T - 3 * k - ell * step_len + (w - w_star) * t
                return v, v + step_len - 1

            def cut_col(w: int, run_start: int) -> int:
                return i_star - T - 3 * k - (run_start + 1) * step_len + (w - w_star) * t + k

        sentinel = k + 1
        x = [[sentinel] * (n_probe + 1) for _ in range(d_cur - 1)]
        for w in range(1, d_cur):
            for ell in range(1, n_probe + 1):
                a, b = window(w, ell)
                got = _probe_shift(rows[w - 1], rows[w], a, b, k)
                x[w - 1][ell] = got if got is not None else sentinel
        z = [0] * (n_probe + 1)
        for ell in range(1, n_probe + 1):
            flag = 0
            for w in range(d_cur - 1):
                prev = x[w][ell - 1] if ell > 1 else x[w][1]
                cur = x[w][ell]
                if cur == sentinel:
                    flag = 1
                elif prev != sentinel and cur != prev:
                    flag = 1
            z[ell] = flag
        n_one_runs = sum(1 for ell in range(1, n_probe + 1) if z[ell] == 1 and (ell == 1 or z[ell - 1] == 0))
        need = k - n_one_runs + 2
        run_start = None
        streak = 0
        for ell in range(1, n_probe + 1):
            streak = streak + 1 if z[ell] == 0 else 0
            if streak >= need:
                run_start = ell - need  # z[run_start+1 .. run_start+need] all zero
                break
        if run_start is None:
            raise ReductionStuck(f"no zero run of length {need} among {n_probe} probes")
        cuts = [x[w - 1][run_start + 1] for w in range(1, d_cur)]
        if any(c == sentinel for c in cuts):
            raise ReductionStuck("probe at the chosen run is undefined")
        if len(set(cuts)) != 1:
            raise ReductionStuck(f"inconsistent cut shifts {cuts}")
        new_rows = []
        for w in range(1, d_cur):
            cut = cut_col(w, run_start)
            shift = cuts[w - 1]
            if not (0 <= cut <= m_cur and 0 <= cut - shift <= m_cur):
                raise ReductionStuck(f"cut column {cut} outside the segment")
            new_rows.append(np.concatenate([rows[w][:cut], rows[w - 1][cut - shift :]]))
        if len({len(r) for r in new_rows}) != 1:
            raise ReductionStuck("spliced rows disagree in length")
        trace.append(
            ReductionStep(i_star, w_star, tie, direction, run_start, n_one_runs, cuts[0])
        )
        rows = new_rows
