"""Reed-Solomon, pair parity, and repetition sub-codes."""

import random
from itertools import combinations, product

import numpy as np
import pytest

from rtcodec.algebra import (
    SymbolString,
    oddeven_parity,
    oddeven_restore,
    rep_decode,
    rep_encode,
    rs_decode_erasures,
    rs_decode_errors_erasures,
    rs_encode,
)
from rtcodec.errors import (
    DecodeFailure,
    FieldTooSmall,
    MalformedRepetition,
    TooManyErasures,
    UnsupportedErasurePattern,
)

from helpers import edit_ball


def erase(cw: SymbolString, positions) -> SymbolString:
    mask = tuple(i in positions for i in range(len(cw)))
    return SymbolString(tuple(0 if mask[i] else s for i, s in enumerate(cw.symbols)), mask)


def test_rs_zero_redundancy_is_identity():
    msg = SymbolString((1, 2, 3))
    assert rs_encode(msg, 0).symbols == (1, 2, 3)


def test_rs_all_zero_message():
    assert rs_encode(SymbolString((0,) * 5), 3).symbols == (0,) * 8


def test_rs_erasures_exhaustive_short_lengths():
    """Every message length + parity with total length <= 8, every erasure set."""
    rng = random.Random(11)
    for m_len in range(1, 8):
        for r in range(0, 8 - m_len + 1):
            for _ in range(3):
                msg = SymbolString(tuple(rng.randrange(256) for _ in range(m_len)))
                cw = rs_encode(msg, r)
                n = m_len + r
                for e in range(r + 1):
                    for pos in combinations(range(n), e):
                        out = rs_decode_erasures(erase(cw, pos), r)
                        assert out.symbols == msg.symbols


def test_rs_erasure_contract_boundary():
    msg = SymbolString((9, 8, 7))
    cw = rs_encode(msg, 2)
    with pytest.raises(TooManyErasures):
        rs_decode_erasures(erase(cw, (0, 2, 4)), 2)
    # zero erasures: systematic prefix unchanged
    assert rs_decode_erasures(cw, 2).symbols == msg.symbols


def test_rs_random_erasures_large():
    rng = random.Random(12)
    for _ in range(2000):
        m_len = rng.randrange(1, 12)
        r = rng.randrange(0, 6)
        msg = SymbolString(tuple(rng.randrange(256) for _ in range(m_len)))
        cw = rs_encode(msg, r)
        pos = rng.sample(range(m_len + r), rng.randrange(0, r + 1))
        assert rs_decode_erasures(erase(cw, pos), r).symbols == msg.symbols


def test_rs_errors_and_erasures_exhaustive_positions():
    """distance 5: 2 erasures + 1 substitution anywhere, exact recovery."""
    rng = random.Random(13)
    for _ in range(8):
        msg = SymbolString(tuple(rng.randrange(256) for _ in range(6)))
        cw = rs_encode(msg, 4)
        n = 10
        for epos in combinations(range(n), 2):
            for spos in range(n):
                if spos in epos:
                    continue
                symbols = list(cw.symbols)
                symbols[spos] ^= rng.randrange(1, 256)
                mask = tuple(i in epos for i in range(n))
                word = SymbolString(
                    tuple(0 if mask[i] else s for i, s in enumerate(symbols)), mask
                )
                out = rs_decode_errors_erasures(word, 4)
                assert out.symbols == cw.symbols


def test_rs_errors_only_identity_when_clean():
    msg = SymbolString((5, 6, 7, 8))
    cw = rs_encode(msg, 4)
    assert rs_decode_errors_erasures(cw, 4).symbols == cw.symbols


def test_rs_beyond_radius_raises_not_lies():
    """Brute-force search for a 3-error corruption (radius 2) that is detected."""
    msg = SymbolString((1, 2))
    cw = rs_encode(msg, 4)
    n = 6
    raised = 0
    rng = random.Random(14)
    for _ in range(200):
        symbols = list(cw.symbols)
        for p in rng.sample(range(n), 3):
            symbols[p] ^= rng.randrange(1, 256)
        try:
            out = rs_decode_errors_erasures(SymbolString(tuple(symbols)), 4)
            # silent miscorrection must at least be a *different* codeword
            assert out.symbols != cw.symbols or symbols == list(cw.symbols)
        except DecodeFailure:
            raised += 1
    assert raised > 0


def test_rs_field_too_small():
    with pytest.raises(FieldTooSmall):
        rs_encode(SymbolString((0,) * 250), 10)


def test_rs_wide_field():
    rng = random.Random(15)
    msg = SymbolString(tuple(rng.randrange(1 << 16) for _ in range(300)))
    cw = rs_encode(msg, 6, width=16)
    pos = (0, 5, 299, 303)
    assert rs_decode_erasures(erase(cw, pos), 6, width=16).symbols == msg.symbols


# ---------------------------------------------------------------------------
# pair parity


def test_oddeven_zero_message():
    assert oddeven_parity([0, 0, 0, 0]) == (0, 0)


def test_oddeven_formula():
    a, b, c, d = 5, 9, 12, 3
    assert oddeven_parity([a, b, c, d]) == (a ^ c, b ^ d)


def test_oddeven_every_consecutive_pair_exhaustive():
    rng = random.Random(16)
    for n in range(2, 65):
        syms = [rng.randrange(256) for _ in range(n)]
        parity = oddeven_parity(syms)
        for j in range(n - 1):
            word = list(syms)
            word[j] = None
            word[j + 1] = None
            assert oddeven_restore(word, parity) == syms
        # single erasure and none
        word = list(syms)
        word[n // 2] = None
        assert oddeven_restore(word, parity) == syms
        assert oddeven_restore(list(syms), parity) == syms


def test_oddeven_rejects_nonconsecutive():
    syms = [1, 2, 3, 4, 5, 6]
    parity = oddeven_parity(syms)
    word = list(syms)
    word[1] = None
    word[4] = None
    with pytest.raises(UnsupportedErasurePattern):
        oddeven_restore(word, parity)


# ---------------------------------------------------------------------------
# repetition


def test_rep_encode_definition():
    assert rep_encode([1, 0], 3).tolist() == [1, 1, 1, 0, 0, 0]


def test_rep_single_deletion():
    assert rep_decode([1, 1, 0, 0, 0], 3, 2).tolist() == [1, 0]


def test_rep_single_insertion():
    assert rep_decode([1, 1, 1, 1, 0, 0, 0], 3, 2).tolist() == [1, 0]


def test_rep_exhaustive_deletions_fold3():
    for v in range(16):
        msg = [int(b) for b in format(v, "04b")]
        cw = "".join(str(b) * 3 for b in msg)
        words = {cw}
        for _ in range(2):
            words = {w[:i] + w[i + 1 :] for w in words for i in range(len(w))}
            for w in words:
                assert rep_decode(w, 3, 4).tolist() == msg


def test_rep_exhaustive_mixed_edits_small():
    """All <= k mixed edits for short messages (full sweep runs in acceptance)."""
    for k in (1, 2):
        fold = k + 1
        for length in range(1, 5):
            for v in range(1 << length):
                msg = format(v, f"0{length}b")
                cw = "".join(ch * fold for ch in msg)
                for y in edit_ball(cw, k):
                    out = rep_decode(y, fold, length)
                    assert "".join(map(str, out)) == msg


def test_rep_malformed():
    with pytest.raises(MalformedRepetition):
        rep_decode([1, 0, 1, 0, 1, 0], 4, 2)  # nothing 4-ish about this
    with pytest.raises(MalformedRepetition):
        rep_decode([1] * 12, 3, 2)  # drift beyond budget
