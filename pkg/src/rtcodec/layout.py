"""Codeword layout shared by the deletion and edit codecs.

A codeword is (capped track ‖ first-layer redundancy R1 ‖ second-layer
redundancy R2). R1 protects the per-block hash vector of the capped track:
each block hash is packed into a group of g field symbols, and the outer code
(odd/even pair parity or Reed-Solomon) runs independently per lane across
groups, so erasing a block erases one symbol in every lane. R2 is the
(k+1)-fold repetition of a hash of R1 and bootstraps the decoder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bits import BitArray, as_bits, bits_from_int, int_from_bits
from .errors import DecodeFailure, ParamViolation
from .gf import GF
from .hashing import DeletionHasher, block_bounds
from .algebra import (
    SymbolString,
    oddeven_parity,
    oddeven_restore,
    rs_decode_errors_erasures,
    rs_parity,
)
from .params import CodeParams


@dataclass(frozen=True)
class Layout:
    """Derived segment geometry of a codeword."""

    n: int
    k: int
    f_len: int
    block_len: int
    blocks: tuple[tuple[int, int], ...]
    hash_bits: int  # padded per-block hash width H
    group_symbols: int  # g = ceil(H / w)
    symbol_bits: int
    parity_groups: int
    rlayer_hash_bits: int

    @property
    def n1(self) -> int:
        return self.parity_groups * self.group_symbols * self.symbol_bits

    @property
    def n2(self) -> int:
        return (self.k + 1) * self.rlayer_hash_bits

    @property
    def total(self) -> int:
        return self.f_len + self.n1 + self.n2

    def to_dict(self) -> dict:
        return {
            "N": self.total,
            "f_len": self.f_len,
            "n1": self.n1,
            "n2": self.n2,
            "block_len": self.block_len,
            "block_count": len(self.blocks),
            "hash_bits": self.hash_bits,
            "group_symbols": self.group_symbols,
            "parity_groups": self.parity_groups,
        }


def build_layout(params: CodeParams, hasher: DeletionHasher, rlayer: DeletionHasher) -> Layout:
    f_len = params.n + params.k + 1
    blocks = tuple(block_bounds(f_len, params.block_len))
    if params.regime == "direct" and params.kind == "edit":
        parity_groups = 0
        H = g = 0
    else:
        H = max(hasher.hash_len(e - s + 1, params.k) for s, e in blocks)
        g = (H + params.symbol_bits - 1) // params.symbol_bits
        parity_groups = params.rs_parity_blocks if params.regime == "rs" else 2
        if params.regime == "rs":
            gf = GF.get(params.symbol_bits)
            if len(blocks) + parity_groups > gf.charac:
                raise ParamViolation(
                    f"{len(blocks)}+{parity_groups} symbols exceed GF(2^{params.symbol_bits}); use symbol_bits=16"
                )
    n1 = parity_groups * g * params.symbol_bits
    rlayer_bits = rlayer.hash_len(n1, params.k) if n1 else 0
    return Layout(
        n=params.n,
        k=params.k,
        f_len=f_len,
        block_len=params.block_len,
        blocks=blocks,
        hash_bits=H,
        group_symbols=g,
        symbol_bits=params.symbol_bits,
        parity_groups=parity_groups,
        rlayer_hash_bits=rlayer_bits,
    )


def pack_group(hash_bits: BitArray, layout: Layout) -> list[int]:
    """Zero-pad a block hash to H bits and chop into g w-bit symbols, MSB-first."""
    padded = np.zeros(layout.hash_bits, dtype=np.uint8)
    padded[: len(hash_bits)] = hash_bits
    w = layout.symbol_bits
    total = layout.group_symbols * w
    buf = np.zeros(total, dtype=np.uint8)
    buf[: layout.hash_bits] = padded
    return [int_from_bits(buf[i * w : (i + 1) * w]) for i in range(layout.group_symbols)]


def unpack_group(symbols: list[int], layout: Layout, true_len: int) -> BitArray:
    w = layout.symbol_bits
    bits = np.concatenate([bits_from_int(s, w) for s in symbols]) if symbols else as_bits([])
    return bits[:true_len]


def groups_to_bits(groups: list[list[int]], layout: Layout) -> BitArray:
    w = layout.symbol_bits
    if not groups:
        return as_bits([])
    return np.concatenate([bits_from_int(s, w) for grp in groups for s in grp])


def bits_to_groups(bits: BitArray, layout: Layout, n_groups: int) -> list[list[int]]:
    w = layout.symbol_bits
    g = layout.group_symbols
    out = []
    for i in range(n_groups):
        grp = []
        for j in range(g):
            off = (i * g + j) * w
            grp.append(int_from_bits(bits[off : off + w]))
        out.append(grp)
    return out


def parity_groups_pair(block_groups: list[list[int]], layout: Layout) -> list[list[int]]:
    """Lane-wise odd/even parity over block groups: two parity groups."""
    g = layout.group_symbols
    p1, p2 = [], []
    for lane in range(g):
        lane_syms = [grp[lane] for grp in block_groups]
        a, b = oddeven_parity(lane_syms)
        p1.append(a)
        p2.append(b)
    return [p1, p2]


def restore_pair(
    block_groups: list[list[int] | None], parity: list[list[int]], layout: Layout
) -> list[list[int]]:
    """Fill None block groups (at most two, consecutive) lane by lane."""
    g = layout.group_symbols
    erased = [i for i, grp in enumerate(block_groups) if grp is None]
    out = [list(grp) if grp is not None else [0] * g for grp in block_groups]
    for lane in range(g):
        lane_syms: list[int | None] = [
            None if block_groups[i] is None else block_groups[i][lane] for i in range(len(block_groups))
        ]
        fixed = oddeven_restore(lane_syms, (parity[0][lane], parity[1][lane]))
        if not erased and fixed != [grp[lane] for grp in block_groups]:
            raise DecodeFailure("erasure", "pair parity mismatch with no erasures")
        for i in erased:
            out[i][lane] = fixed[i]
    if not erased:
        # no unknowns: verify both parity equations as a consistency check
        for lane in range(g):
            lane_syms = [grp[lane] for grp in block_groups]
            if oddeven_parity(lane_syms) != (parity[0][lane], parity[1][lane]):
                raise DecodeFailure("erasure", "pair parity mismatch with no erasures")
    return out


def parity_groups_rs(block_groups: list[list[int]], layout: Layout) -> list[list[int]]:
    """Lane-wise systematic RS parity: parity_groups groups."""
    g = layout.group_symbols
    r = layout.parity_groups
    lanes = [rs_parity([grp[lane] for grp in block_groups], r, layout.symbol_bits) for lane in range(g)]
    return [[lanes[lane][j] for lane in range(g)] for j in range(r)]


def restore_rs(
    block_groups: list[list[int] | None],
    parity: list[list[int]],
    layout: Layout,
    max_errors: int = 0,
) -> tuple[list[list[int]], list[int]]:
    """Erasure (+ optionally error) decode lane by lane.

    Returns (restored block groups, sorted block indices where a substitution
    was corrected). Raises DecodeFailure if any lane fails or the corrected
    block count exceeds ``max_errors``.
    """
    g = layout.group_symbols
    r = layout.parity_groups
    nb = len(block_groups)
    erased = {i for i, grp in enumerate(block_groups) if grp is None}
    corrected: set[int] = set()
    out = [list(grp) if grp is not None else [0] * g for grp in block_groups]
    for lane in range(g):
        symbols = tuple(
            (0 if i in erased else block_groups[i][lane]) for i in range(nb)
        ) + tuple(parity[j][lane] for j in range(r))
        mask = tuple(i in erased for i in range(nb)) + (False,) * r
        word = SymbolString(symbols, mask)
        fixed = rs_decode_errors_erasures(word, r, layout.symbol_bits)
        for i in range(nb):
            if i not in erased and fixed.symbols[i] != symbols[i]:
                corrected.add(i)
            out[i][lane] = fixed.symbols[i]
    if len(corrected) > max_errors:
        raise DecodeFailure("erasure", f"{len(corrected)} substituted blocks exceed budget {max_errors}")
    return out, sorted(corrected)
