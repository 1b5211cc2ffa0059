"""End-to-end codecs for mixed deletion/insertion errors.

Three regimes:

* k < d: the capped track alone is decodable; every interval holds fewer
  errors than heads, so head reduction repairs all of them.
* d <= k <= 2d-1: deletion-codec shape (pair parity over block hashes) with
  the edit block length; at most one interval can defeat head reduction.
* k >= 2d: Reed-Solomon parity over block hashes.

Because an interval can fail silently when it holds >= d errors, the decoder
enumerates which intervals to distrust: distrusted intervals erase their
blocks, trusted ones contribute spliced estimates, undetectable clusters are
absorbed as block substitutions, and a per-choice error budget derived from
the reduction outcomes rejects impossible choices. Accepted choices must also
re-verify against every read row within the global edit budget.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .algebra import rep_encode
from .bits import BitArray, as_bits, edit_distance_at_most
from .delcodec import _blocks_touched, _recover_r1
from .editsync import (
    UNKNOWN,
    EditIntervalReport,
    build_edit_report,
    head_reduction_recover,
    recover_outside_bits,
)
from .errors import DecodeFailure, ParamViolation, ReductionStuck, RtCodecError
from .layout import (
    Layout,
    bits_to_groups,
    build_layout,
    pack_group,
    restore_pair,
    restore_rs,
    unpack_group,
)
from .model import BitTrack, ReadMatrix
from .params import CodeParams
from .periodicity import cap_periods, uncap_periods


@dataclass
class IntervalOutcome:
    """Per-interval reduction result feeding the choice enumeration."""

    read_span: tuple[int, int]
    source_span: tuple[int, int]
    shift: int
    estimate: BitArray | None  # None when the reduction got stuck
    heads_left: int | None
    touches_track: bool

    def budget_term(self, d: int, selected: bool) -> int:
        """Minimum error count this interval must hold under the choice."""
        if self.heads_left is None:
            return d if selected else 0
        if self.heads_left == d and self.estimate is not None and not selected:
            return 0  # clean interval
        if self.heads_left == 1 and abs(self.shift) % 2 != (d + 1) % 2:
            return d
        return d + self.heads_left if selected else max(d - self.heads_left, 0)


@dataclass
class EditDecodeInfo:
    """Diagnostics for tests: chosen intervals, budgets, outcomes."""

    outcomes: list[IntervalOutcome] = field(default_factory=list)
    chosen: tuple[int, ...] = ()
    budget: int = 0
    substituted_blocks: tuple[int, ...] = ()
    accepted_choices: list[tuple[int, ...]] = field(default_factory=list)


def edit_layout(params: CodeParams) -> Layout:
    return build_layout(params, params.hasher(), params.rlayer_hasher())


def _check_edit_params(params: CodeParams) -> None:
    if params.kind != "edit":
        raise ParamViolation("edit codec needs edit-kind params")
    if params.d < 2:
        raise ParamViolation("edit codec needs at least two heads")


def encode_edits(track: BitTrack, params: CodeParams) -> BitArray:
    """k<d: the capped track alone; otherwise capped track + hash parity layers."""
    _check_edit_params(params)
    c = track.bits if isinstance(track, BitTrack) else as_bits(track)
    if len(c) != params.n:
        raise ParamViolation(f"track length {len(c)} != n = {params.n}")
    if params.regime == "direct":
        return cap_periods(c, params.k)
    from .delcodec import encode_layered

    return encode_layered(track, params)


def decode_edits(E: ReadMatrix, params: CodeParams, return_info: bool = False):
    """Recover the stored track from reads with at most k mixed edits per head."""
    _check_edit_params(params)
    hasher, rlayer = params.hasher(), params.rlayer_hasher()
    layout = build_layout(params, hasher, rlayer)
    N = layout.total
    row1 = E.rows[0]
    sigma = len(row1) - N
    if abs(sigma) > params.k:
        raise DecodeFailure("input", f"read length {len(row1)} incompatible with codeword length {N}")
    f_len = layout.f_len

    r1 = _recover_r1(row1, layout, params, rlayer) if layout.n1 else as_bits([])
    parity = bits_to_groups(r1, layout, layout.parity_groups)

    try:
        report = build_edit_report(E, params, total_shift=sigma)
    except RtCodecError as e:
        raise DecodeFailure("sync", str(e)) from e
    est0 = recover_outside_bits(E, report, f_len)

    outcomes: list[IntervalOutcome] = []
    for j, ((b1, b2), s_j) in enumerate(zip(report.intervals, report.shifts)):
        src_start = report.source_start(j)
        src_end = src_start + (b2 - b1 + 1 - s_j) - 1
        touches = src_start <= f_len
        estimate, heads_left = None, None
        if touches:
            segs = [E.rows[w][b1 - 1 : b2] for w in range(params.d)]
            try:
                estimate, heads_left = head_reduction_recover(segs, params)
                if len(estimate) != src_end - src_start + 1:
                    estimate, heads_left = None, None
            except ReductionStuck:
                estimate, heads_left = None, None
        outcomes.append(
            IntervalOutcome((b1, b2), (src_start, src_end), s_j, estimate, heads_left, touches)
        )

    if params.regime == "direct":
        return _decode_direct(est0, outcomes, layout, params, E, return_info)
    return _decode_with_choices(
        est0, outcomes, parity, r1, layout, params, E, row1, sigma, hasher, rlayer, return_info
    )


def _splice(est: BitArray, outcome: IntervalOutcome, f_len: int) -> None:
    lo, hi = outcome.source_span
    lo2, hi2 = max(lo, 1), min(hi, f_len)
    if lo2 > hi2 or outcome.estimate is None:
        return
    est[lo2 - 1 : hi2] = outcome.estimate[lo2 - lo : hi2 - lo + 1]


def _verify_rows(codeword: BitArray, E: ReadMatrix, k: int) -> bool:
    for w in range(E.rows.shape[0]):
        if edit_distance_at_most(codeword, E.rows[w], k) is None:
            return False
    return True


def _decode_direct(est0, outcomes, layout, params, E, return_info):
    est = est0.copy()
    for oc in outcomes:
        if not oc.touches_track:
            continue
        if oc.estimate is None:
            raise DecodeFailure("interval", "head reduction stuck with k < d")
        _splice(est, oc, layout.f_len)
    if (est == UNKNOWN).any():
        raise DecodeFailure("assemble", "unrecovered positions remain")
    try:
        out = uncap_periods(est, params.k, params.n)
    except RtCodecError as e:
        raise DecodeFailure("invert", str(e)) from e
    codeword = cap_periods(out, params.k)
    if not _verify_rows(codeword, E, params.k):
        raise DecodeFailure("verify", "decoded track does not reproduce the reads")
    if return_info:
        info = EditDecodeInfo(outcomes=outcomes, accepted_choices=[()])
        return out, info
    return out


def _decode_with_choices(
    est0, outcomes, parity, r1, layout, params, E, row1, sigma, hasher, rlayer, return_info
):
    d, k = params.d, params.k
    f_len = layout.f_len
    candidates = [j for j, oc in enumerate(outcomes) if oc.touches_track]
    forced = [
        j for j, oc in enumerate(outcomes) if oc.touches_track and oc.estimate is None
    ]
    choices: list[tuple[int, ...]] = []
    optional = [j for j in candidates if j not in forced]
    # only one interval can defeat head reduction below k = 2d
    max_extra = 1 if params.regime == "pair" else len(optional)
    for size in range(0, min(max_extra, len(optional)) + 1):
        for extra in combinations(optional, size):
            choices.append(tuple(sorted(set(forced) | set(extra))))
    accepted: list[tuple[tuple[int, ...], BitArray, EditDecodeInfo]] = []
    last_error = "no choice satisfied the budget"
    for chosen in choices:
        try:
            out, info = _try_choice(
                chosen, est0, outcomes, parity, r1, layout, params, E, row1, sigma, hasher, rlayer
            )
        except RtCodecError as e:
            last_error = str(e)
            continue
        accepted.append((chosen, out, info))
        if not return_info:
            break
    if not accepted:
        raise DecodeFailure("choices", last_error)
    chosen, out, info = accepted[0]
    for _, other, _ in accepted[1:]:
        if not np.array_equal(other, out):
            raise DecodeFailure("choices", "two distrust choices decode to different tracks")
    info.outcomes = outcomes
    info.accepted_choices = [c for c, _, _ in accepted]
    if return_info:
        return out, info
    return out


def _try_choice(
    chosen, est0, outcomes, parity, r1, layout, params, E, row1, sigma, hasher, rlayer
):
    d, k = params.d, params.k
    f_len = layout.f_len
    budget = sum(oc.budget_term(d, j in chosen) for j, oc in enumerate(outcomes))
    if budget > k:
        raise DecodeFailure("budget", f"choice needs {budget} errors, only {k} allowed")
    est = est0.copy()
    erased: set[int] = set()
    for j, oc in enumerate(outcomes):
        if not oc.touches_track:
            continue
        if j in chosen:
            lo, hi = oc.source_span
            erased.update(_blocks_touched(layout, max(lo, 1), min(hi, f_len)))
        else:
            _splice(est, oc, f_len)
    erased_list = sorted(erased)
    if params.regime == "pair":
        if len(erased_list) > 2 or (len(erased_list) == 2 and erased_list[1] - erased_list[0] != 1):
            raise DecodeFailure("erasure", f"pair parity cannot restore blocks {erased_list}")
        max_subs = 0
    else:
        max_subs = 2 * ((k - budget) // (2 * d))
        if 2 * max_subs + len(erased_list) > layout.parity_groups:
            max_subs = max(0, (layout.parity_groups - len(erased_list)) // 2)
    block_groups: list[list[int] | None] = []
    for i, (s, e) in enumerate(layout.blocks):
        if i in erased_list:
            block_groups.append(None)
            continue
        chunk = est[s - 1 : e]
        if (chunk == UNKNOWN).any():
            raise DecodeFailure("assemble", f"block {i + 1} incomplete under this choice")
        block_groups.append(pack_group(hasher.hash(chunk, params.k), layout))
    substituted: list[int] = []
    if params.regime == "pair":
        restored = restore_pair(block_groups, parity, layout)
    else:
        restored, substituted = restore_rs(block_groups, parity, layout, max_errors=max_subs)
    out_est = est.copy()
    for i in sorted(set(erased_list) | set(substituted)):
        s, e = layout.blocks[i]
        size = e - s + 1
        h = unpack_group(restored[i], layout, hasher.hash_len(size, params.k))
        lo = s - 1
        hi = min(max(e + sigma, lo), len(row1))
        window = row1[lo:hi]
        out_est[s - 1 : e] = hasher.recover(window, h, size, params.k)
    if (out_est == UNKNOWN).any():
        raise DecodeFailure("assemble", "unrecovered positions remain")
    out = uncap_periods(out_est, params.k, params.n)
    codeword = np.concatenate(
        [out_est, r1, rep_encode(rlayer.hash(r1, params.k), params.k + 1)]
    )
    recheck = cap_periods(out, params.k)
    if not np.array_equal(recheck, out_est):
        raise DecodeFailure("verify", "estimate is not a valid capped track")
    if not _verify_rows(codeword, E, params.k):
        raise DecodeFailure("verify", "decoded codeword does not reproduce the reads")
    info = EditDecodeInfo(chosen=chosen, budget=budget, substituted_blocks=tuple(substituted))
    return out, info
