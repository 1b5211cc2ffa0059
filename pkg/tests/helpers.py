"""Independent oracles and simulator ground-truth checkers.

Everything here recomputes expectations from first principles (plain Python
strings/lists, naive scans) so the tests never share a code path with the
implementation they judge.
"""

from __future__ import annotations

import numpy as np


def bits_str(bits) -> str:
    return "".join("1" if int(b) else "0" for b in bits)


# ---------------------------------------------------------------------------
# definitional channel replay


def oracle_delete(c: str, positions) -> str:
    drop = set(positions)
    return "".join(ch for i, ch in enumerate(c, start=1) if i not in drop)


def oracle_read_matrix(c: str, delta1, offsets) -> list[str]:
    return [oracle_delete(c, [p + off for p in delta1]) for off in offsets]


def oracle_edit_row(c: str, dels, ins_after: dict[int, str]) -> str:
    out = []
    if 0 in ins_after:
        out.append(ins_after[0])
    for pos in range(1, len(c) + 1):
        if pos not in dels:
            out.append(c[pos - 1])
        if pos in ins_after:
            out.append(ins_after[pos])
    return "".join(out)


def oracle_edit_matrix(c: str, delta1, gamma1, bits_rows, offsets) -> list[str]:
    rows = []
    for w, off in enumerate(offsets):
        dels = {p + off for p in delta1}
        ins = {p + off: bits_rows[w][j] for j, p in enumerate(gamma1)}
        rows.append(oracle_edit_row(c, dels, ins))
    return rows


def oracle_longest_periodic_run(c: str, period: int) -> int:
    """Naive quadratic window scan."""
    n = len(c)
    best = 0
    for i in range(n):
        for j in range(i + period, n + 1):
            window = c[i:j]
            if all(window[x] == window[x + period] for x in range(len(window) - period)):
                best = max(best, j - i)
            else:
                break
    return max(best, min(period, n))


# ---------------------------------------------------------------------------
# edit-ball enumeration (normal form: deletions first, then insertions)


def one_deletions(s: str) -> set[str]:
    return {s[:i] + s[i + 1 :] for i in range(len(s))}


def one_insertions(s: str) -> set[str]:
    return {s[:i] + b + s[i:] for i in range(len(s) + 1) for b in "01"}


def edit_ball(s: str, k: int) -> set[str]:
    levels = {0: {s}}
    for r in range(1, k + 1):
        levels[r] = set()
        for x in levels[r - 1]:
            levels[r] |= one_deletions(x)
    total = set()
    for r in range(k + 1):
        layer = set(levels[r])
        total |= layer
        for _ in range(k - r):
            layer = set().union(*(one_insertions(x) for x in layer)) if layer else set()
            total |= layer
    return total


# ---------------------------------------------------------------------------
# deletion-sync ground truth


def source_index_maps(n: int, per_head_deletions: list[set[int]]) -> list[list[int]]:
    """For each head, kept source positions in read order."""
    return [[p for p in range(1, n + 1) if p not in dels] for dels in per_head_deletions]


def check_deletion_report(track_bits, pattern, params, matrix, report) -> None:
    """P1/P2/P3, count exactness, disjointness, and clean-column alignment."""
    g = params.geometry
    n, k = params.n, params.k
    N = len(track_bits)
    c = bits_str(track_bits)
    delta1 = pattern.delta1
    per_head = [set(pattern.head_positions(w, g)) for w in range(1, g.d + 1)]
    src = report.source_intervals

    assert report.J <= k, f"J={report.J} exceeds k={k}"
    assert all(e1 < s2 for (_, e1), (s2, _) in zip(src, src[1:])), "source intervals overlap"

    # P2: every head's deletions covered
    for dels in per_head:
        for p in dels:
            assert any(s <= p <= e for s, e in src), f"deletion {p} outside intervals"

    for (rs, re), (s, e), cnt in zip(report.read_intervals, src, report.counts):
        inside = [p for p in delta1 if s <= p <= e]
        assert len(inside) == cnt, f"count {cnt} != truth {len(inside)} in [{s},{e}]"
        # deletion isolation
        for w in range(1, g.d):
            off = g.distances[w - 1]
            lhs = sorted(p for p in per_head[w] if s <= p <= e)
            rhs = sorted(p + off for p in per_head[w - 1] if s <= p <= e)
            assert lhs == rhs, f"interval [{s},{e}] not deletion isolated at head {w + 1}"
        # P1: read segment is the per-head read of the source segment
        for w in range(g.d):
            seg = "".join(c[p - 1] for p in range(s, e + 1) if p not in per_head[w])
            assert bits_str(matrix.rows[w][rs - 1 : re]) == seg, f"P1 fails at head {w + 1}"
        # P3
        if rs <= n + 1:
            assert min(re, n + 1) - rs + 1 <= params.block_len - k, "P3 bound violated"

    # clean columns align to one undeleted source bit across heads
    maps = source_index_maps(N, per_head)
    covered = np.zeros(matrix.cols + 1, dtype=bool)
    for rs, re in report.read_intervals:
        covered[rs : re + 1] = True
    for m in range(1, matrix.cols + 1):
        if covered[m]:
            continue
        sources = {maps[w][m - 1] for w in range(g.d)}
        assert len(sources) == 1, f"clean column {m} maps to several source bits"
        p = sources.pop()
        assert all(p not in dels for dels in per_head), f"clean column {m} hides a deletion"


# ---------------------------------------------------------------------------
# edit ground truth


def edit_clusters(delta1, gamma1, d: int, t: int) -> list[dict]:
    """Minimal edit-isolated clusters: merge overlapping per-event head spans."""
    events = sorted([(p, "del") for p in delta1] + [(p, "ins") for p in gamma1])
    span = (d - 1) * t
    clusters: list[dict] = []
    for pos, kind in events:
        if clusters and pos <= clusters[-1]["hi"]:
            clusters[-1]["hi"] = max(clusters[-1]["hi"], pos + span)
            clusters[-1]["events"].append((pos, kind))
        else:
            clusters.append({"lo": pos, "hi": pos + span, "events": [(pos, kind)]})
    for cl in clusters:
        cl["net"] = sum(1 if kind == "ins" else -1 for _, kind in cl["events"])
        cl["count"] = len(cl["events"])
    return clusters


def head1_image_column(p: int, delta1, gamma1) -> int:
    """Column where source bit p lands in head 1 (before any in-flight edits)."""
    shift = sum(1 for q in gamma1 if q < p) - sum(1 for q in delta1 if q < p)
    return p + shift


def cluster_interval_assignment(clusters, intervals, delta1, gamma1) -> dict[int, list[int]]:
    """Map interval index -> cluster indices whose head-1 image lies inside it."""
    out: dict[int, list[int]] = {j: [] for j in range(len(intervals))}
    for ci, cl in enumerate(clusters):
        col_lo = head1_image_column(cl["lo"], delta1, gamma1) - 1
        col_hi = head1_image_column(cl["hi"], delta1, gamma1) + 1
        homes = [
            j
            for j, (b1, b2) in enumerate(intervals)
            if not (col_hi < b1 or col_lo > b2)
        ]
        for j in homes:
            out[j].append(ci)
    return out
