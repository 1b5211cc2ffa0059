"""Bit-array helpers and the track file format.

Tracks are binary sequences. In memory they are numpy uint8 arrays of 0/1; on
disk they are either hex files with a ``len=<n>`` header (MSB-first, zero
padding in the final nibble) or raw ASCII 0/1 lines for fixtures.
"""

from __future__ import annotations

import numpy as np

BitArray = np.ndarray


def as_bits(seq) -> BitArray:
    """Coerce a sequence of 0/1 (list, tuple, str, ndarray) to a uint8 array."""
    if isinstance(seq, np.ndarray):
        arr = seq.astype(np.uint8, copy=False)
    elif isinstance(seq, str):
        arr = np.frombuffer(seq.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(list(seq), dtype=np.uint8)
    if arr.ndim != 1:
        raise ValueError("bit sequence must be one-dimensional")
    if arr.size and arr.max(initial=0) > 1:
        raise ValueError("bit sequence may contain only 0 and 1")
    return arr


def bits_to_str(bits: BitArray) -> str:
    return "".join("1" if b else "0" for b in bits)


def bits_from_int(value: int, width: int) -> BitArray:
    """MSB-first fixed-width binary expansion."""
    if value < 0 or (width < 64 and value >= (1 << width)):
        raise ValueError(f"{value} does not fit in {width} bits")
    return np.array([(value >> (width - 1 - i)) & 1 for i in range(width)], dtype=np.uint8)


def int_from_bits(bits: BitArray) -> int:
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    return value


def ceil_log2(n: int) -> int:
    """Smallest w with 2**w >= n (0 for n <= 1)."""
    return (n - 1).bit_length() if n > 1 else 0


def format_track(bits: BitArray) -> str:
    """Hex track format: header line ``len=<n>``, then lowercase hex, MSB-first."""
    n = len(bits)
    digits = []
    for i in range(0, n, 4):
        chunk = bits[i : i + 4]
        v = 0
        for j in range(4):
            v = (v << 1) | (int(chunk[j]) if j < len(chunk) else 0)
        digits.append("0123456789abcdef"[v])
    return f"len={n}\n{''.join(digits)}\n"


def parse_track(text: str) -> BitArray:
    """Parse either the hex format or raw ASCII 0/1 lines."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty track file")
    if lines[0].startswith("len="):
        try:
            n = int(lines[0][4:])
        except ValueError as e:
            raise ValueError(f"bad length header: {lines[0]!r}") from e
        hexstr = "".join(lines[1:])
        if len(hexstr) != (n + 3) // 4:
            raise ValueError(f"hex payload has {len(hexstr)} digits, expected {(n + 3) // 4}")
        out = np.zeros(4 * len(hexstr), dtype=np.uint8)
        for i, ch in enumerate(hexstr):
            v = int(ch, 16)
            out[4 * i : 4 * i + 4] = [(v >> 3) & 1, (v >> 2) & 1, (v >> 1) & 1, v & 1]
        if out[n:].any():
            raise ValueError("nonzero padding bits after declared length")
        return out[:n]
    payload = "".join(lines)
    if set(payload) - {"0", "1"}:
        raise ValueError("ASCII track may contain only 0/1")
    return as_bits(payload)


def write_track(path, bits: BitArray) -> None:
    with open(path, "w") as fh:
        fh.write(format_track(bits))


def read_track(path) -> BitArray:
    with open(path) as fh:
        return parse_track(fh.read())


def run_lengths(bits: BitArray) -> list[tuple[int, int]]:
    """Maximal runs as (value, length) pairs."""
    if len(bits) == 0:
        return []
    changes = np.flatnonzero(np.diff(bits)) + 1
    bounds = np.concatenate(([0], changes, [len(bits)]))
    return [(int(bits[bounds[i]]), int(bounds[i + 1] - bounds[i])) for i in range(len(bounds) - 1)]


def agreement_run_starts(equal: np.ndarray) -> np.ndarray:
    """For each index i, the length of the True-run of ``equal`` starting at i."""
    n = len(equal)
    out = np.zeros(n + 1, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        out[i] = out[i + 1] + 1 if equal[i] else 0
    return out[:n]


def edit_distance_at_most(a: BitArray, b: BitArray, limit: int) -> int | None:
    """Insert/delete edit distance between a and b if <= limit, else None.

    Greedy furthest-reaching diagonal search: O(limit) rounds, each sliding
    along matches with one vectorized comparison per live diagonal.
    """
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    n, m = len(a), len(b)
    if abs(n - m) > limit:
        return None

    def slide(x: int, y: int) -> int:
        span = min(n - x, m - y)
        if span <= 0:
            return x
        neq = np.flatnonzero(a[x : x + span] != b[y : y + span])
        return x + (int(neq[0]) if len(neq) else span)

    furthest = {1: 0}  # diagonal -> furthest x reached
    for dist in range(0, limit + 1):
        for diag in range(-dist, dist + 1, 2):
            if diag == -dist or (diag != dist and furthest.get(diag - 1, -1) < furthest.get(diag + 1, -1)):
                x = furthest.get(diag + 1, 0)
            else:
                x = furthest.get(diag - 1, -1) + 1
            y = x - diag
            if 0 <= x <= n and 0 <= y <= m:
                x = slide(x, y)
            furthest[diag] = x
            if x >= n and x - diag >= m:
                return dist
    return None
