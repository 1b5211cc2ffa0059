"""Periodic-run statistics and the injective period-capping transform.

A window has period p when every bit equals the bit p places later. The
synchronization machinery needs tracks whose longest window of period <= k is
short; ``cap_periods`` rewrites an arbitrary n-bit track into an (n+k+1)-bit
track whose longest such window is at most 3k + ceil(log2 n) + 2, and
``uncap_periods`` inverts it exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import BitArray, as_bits, bits_from_int, ceil_log2, int_from_bits
from .errors import NotInImage


def longest_periodic_run(bits, period: int) -> int:
    """Length of the longest window w with w[i] == w[i+period] throughout."""
    c = as_bits(bits)
    n = len(c)
    if not 1 <= period <= n:
        raise ValueError(f"period must be in [1, {n}]")
    eq = c[period:] == c[:-period]
    best = run = 0
    for v in eq:
        run = run + 1 if v else 0
        best = max(best, run)
    return best + period


def max_periodic_run(bits, k: int) -> int:
    """max over periods 1..k of longest_periodic_run (0-length input gives 0)."""
    c = as_bits(bits)
    if len(c) == 0:
        return 0
    return max(longest_periodic_run(c, p) for p in range(1, min(k, len(c)) + 1))


@dataclass(frozen=True)
class PeriodProfile:
    """Per-period longest-run lengths for periods 1..k."""

    per_period: dict[int, int]

    @property
    def max_le_k(self) -> int:
        return max(self.per_period.values())

    @classmethod
    def of(cls, bits, k: int) -> "PeriodProfile":
        c = as_bits(bits)
        return cls({p: longest_periodic_run(c, p) for p in range(1, min(k, len(c)) + 1)})


def period_cap(n: int, k: int) -> int:
    """Guaranteed bound on the longest period-<=k window after capping."""
    return 3 * k + ceil_log2(n) + 2


def _window_len(n: int, k: int) -> int:
    return 2 * k + ceil_log2(n) + 2


def _smallest_period_at(c: np.ndarray, start: int, w: int, k: int) -> int | None:
    """Smallest p <= k such that c[start:start+w] has period p, or None."""
    win = c[start : start + w]
    for p in range(1, k + 1):
        if np.array_equal(win[p:], win[:-p]):
            return p
    return None


def cap_periods(bits, k: int) -> BitArray:
    """Injective transform to length n+k+1 with bounded low-period runs.

    Scans for windows of length 2k + ceil(log2 n) + 2 having period <= k;
    each such window is excised and replaced by an appended block that records
    the window's smallest period, its first period's bits, and the excision
    index, framed so the appended region can never itself form a long
    low-period run. The scan restarts from the beginning after every excision.
    """
    c = as_bits(bits)
    n = len(c)
    if k < 1:
        raise ValueError("k must be >= 1")
    width = ceil_log2(n)
    w = _window_len(n, k)
    f = np.concatenate([c, np.ones(k, dtype=np.uint8), np.zeros(1, dtype=np.uint8)])
    n_live = n  # prefix of f still holding original (uncapped) bits
    i = 0  # 0-based scan index
    while i + w <= n_live:
        p_min = _smallest_period_at(f, i, w, k)
        if p_min is None:
            i += 1
            continue
        prefix = f[i : i + p_min].copy()
        block = np.concatenate(
            [
                np.ones(k - p_min, dtype=np.uint8),
                np.zeros(1, dtype=np.uint8),
                prefix,
                bits_from_int(i + 1, width),  # excision index, 1-based
                np.zeros(k + 1, dtype=np.uint8),
            ]
        )
        f = np.concatenate([f[:i], f[i + w :], block])
        n_live -= w
        i = 0
    return f


def uncap_periods(bits, k: int, n: int) -> BitArray:
    """Exact inverse of cap_periods; raises NotInImage on malformed input."""
    f = as_bits(bits)
    width = ceil_log2(n)
    w = _window_len(n, k)
    if len(f) != n + k + 1:
        raise NotInImage(f"expected length {n + k + 1}, got {len(f)}")
    c = f.copy()
    terminator = np.concatenate([np.ones(k, dtype=np.uint8), np.zeros(1, dtype=np.uint8)])
    max_rounds = (n + k + 1) // w + 1
    rounds = 0
    while not np.array_equal(c[n : n + k + 1], terminator):
        rounds += 1
        if rounds > max_rounds:
            raise NotInImage("undo loop exceeded the excision bound")
        block = c[n + k + 1 - w :]
        ones = 0
        while ones < len(block) and block[ones] == 1:
            ones += 1
        if ones > k - 1:
            raise NotInImage("run of ones in trailing block leaves no room for a period")
        p_min = k - ones
        prefix = block[ones + 1 : ones + 1 + p_min]
        idx = int_from_bits(block[k + 1 : k + 1 + width])
        if block[k + 1 + width :].any():
            raise NotInImage("framing bits of appended block are not all zero")
        live_end = n + k + 1 - w  # 0-based end of the region that shifts right
        if not 1 <= idx <= live_end + 1:
            raise NotInImage(f"excision index {idx} out of range")
        window = np.resize(prefix, w)
        c = np.concatenate([c[: idx - 1], window, c[idx - 1 : live_end]])
        if len(c) != n + k + 1:
            raise NotInImage("length drifted during undo")
    return c[:n]
