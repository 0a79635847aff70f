# -*- coding: utf-8 -*-
"""
测试用例：Chase 列表译码、外码级联与穷举 ML 译码
Test Cases: Chase list decoding, outer-code concatenation and exhaustive ML
"""

import numpy as np
import pytest

from src.models import ChannelKind, DecoderConfig, ListConfig
from src.utils.channels import ChannelModel, channel_from_param, llr, transmit, trial_rng
from src.utils.list_concat import (
    OuterCode, chase_candidates, extract_message, list_decode, ml_decode_exhaustive,
    ml_score, rpa_list_concat_decode, rpa_list_decode
)
from src.utils.rm_core import CodeParameterError, build_code, codebook, encode, gf2_rank, reed_decode
from src.utils.rpa import rpa_decode


@pytest.fixture
def rng():
    return np.random.default_rng(21)


def _noiseless(codeword: np.ndarray, K: float = 4.0) -> np.ndarray:
    return K * (1.0 - 2.0 * codeword.astype(np.float64))


class TestChaseCandidates:
    """Candidate generation at the least reliable coordinates."""

    def test_t_zero(self, rng):
        L = rng.normal(size=16)
        candidates = chase_candidates(L, ListConfig(t=0))
        assert candidates.shape == (1, 16)
        np.testing.assert_array_equal(candidates[0], L)

    def test_t_one(self, rng):
        L = rng.normal(size=16)
        candidates = chase_candidates(L, ListConfig(t=1, l_max_mult=2))
        weakest = int(np.argmin(np.abs(L)))
        l_max = 2 * np.abs(L).max()
        differ = np.flatnonzero(candidates[0] != candidates[1])
        assert differ.tolist() == [weakest]
        assert candidates[0, weakest] == l_max
        assert candidates[1, weakest] == -l_max

    def test_positions_match_full_sort(self, rng):
        L = rng.normal(size=32)
        candidates = chase_candidates(L, ListConfig(t=3, l_max_mult=1))
        changed = np.flatnonzero((candidates != L[None, :]).any(axis=0))
        expected = sorted(sorted(range(32), key=lambda z: abs(L[z]))[:3])
        assert changed.tolist() == expected
        assert len({c.tobytes() for c in candidates}) == 8

    def test_ties_prefer_smaller_index(self):
        L = np.array([3.0, 1.0, -1.0, 2.0])
        changed = np.flatnonzero((chase_candidates(L, ListConfig(t=1)) != L).any(axis=0))
        assert changed.tolist() == [1]

    def test_t_larger_than_length(self):
        with pytest.raises(CodeParameterError):
            chase_candidates(np.ones(4), ListConfig(t=5))


class TestMlScore:
    """Correlation with the received LLRs."""

    def test_zero_candidate(self, rng):
        L = rng.normal(size=16)
        assert ml_score(np.zeros(16, dtype=np.uint8), L) == pytest.approx(L.sum())

    def test_complement_negates(self, rng):
        L = rng.normal(size=16)
        c = rng.integers(0, 2, 16).astype(np.uint8)
        assert ml_score(1 - c, L) == pytest.approx(-ml_score(c, L))

    def test_transmitted_codeword_is_best(self, rng):
        code = build_code(4, 2)
        c = encode(code, rng.integers(0, 2, code.k))
        L = _noiseless(c, 3.0)
        scores = ml_score(codebook(code), L)
        assert ml_score(c, L) == pytest.approx(16 * 3.0)
        assert (scores < 48.0).sum() == len(scores) - 1

    def test_length_mismatch(self):
        with pytest.raises(CodeParameterError):
            ml_score(np.zeros(8, dtype=np.uint8), np.ones(16))


class TestListDecode:
    """RPA list decoding."""

    def test_t_zero_is_reed_of_rpa(self, rng):
        code = build_code(5, 2)
        L = rng.normal(0.5, 1.0, size=32) * 2
        expected = reed_decode(code, rpa_decode(L, 5, 2))[1]
        np.testing.assert_array_equal(rpa_list_decode(L, code, lcfg=ListConfig(t=0)), expected)

    @pytest.mark.parametrize("t", [1, 3])
    def test_noiseless_input(self, t, rng):
        code = build_code(4, 2)
        c = encode(code, rng.integers(0, 2, code.k))
        np.testing.assert_array_equal(rpa_list_decode(_noiseless(c), code, lcfg=ListConfig(t=t)), c)

    def test_outcome_contents(self, rng):
        code = build_code(4, 2)
        outcome = list_decode(rng.normal(1.0, 1.0, size=16) * 2, code, DecoderConfig(), ListConfig(t=2))
        assert outcome.codewords.shape == (4, 16)
        assert outcome.messages.shape == (4, code.k)
        assert outcome.scores[outcome.selected] == outcome.scores.max()
        np.testing.assert_array_equal(outcome.codeword, outcome.codewords[outcome.selected])

    def test_sign_flip_equivariance(self, rng):
        code = build_code(5, 2)
        ch = ChannelModel.awgn(0.4)
        lcfg = ListConfig(t=2)
        zero = np.zeros(code.n, dtype=np.uint8)
        for _ in range(30):
            L = llr(ch, transmit(ch, zero, rng))
            c0 = encode(code, rng.integers(0, 2, code.k))
            first = rpa_list_decode(L, code, lcfg=lcfg)
            second = rpa_list_decode((1.0 - 2.0 * c0) * L, code, lcfg=lcfg)
            np.testing.assert_array_equal(first ^ c0, second)


class TestOuterCode:
    """Random parity checks on the information bits."""

    def test_random_trailing_block_invertible(self):
        outer = OuterCode.random(11, 2, seed=5)
        assert outer.parity_check.shape == (2, 11)
        assert gf2_rank(outer.parity_check[:, -2:]) == 2
        assert outer.effective_rate(16) == pytest.approx(9 / 16)

    def test_complete_satisfies_checks(self, rng):
        outer = OuterCode.random(11, 2, seed=6)
        for _ in range(10):
            info = outer.complete(rng.integers(0, 2, 9))
            assert info.shape == (11,)
            assert outer.contains(info)

    def test_contains_batch(self):
        outer = OuterCode(k=3, parity_check=np.array([[1, 1, 1]], dtype=np.uint8))
        np.testing.assert_array_equal(outer.contains(np.array([[1, 1, 0], [1, 0, 0]])), [True, False])

    @pytest.mark.parametrize("q", [0, 12])
    def test_invalid_parity_count(self, q):
        with pytest.raises(CodeParameterError):
            OuterCode.random(11, q)


class TestConcatenatedDecoding:
    """List decoding filtered by the outer code."""

    def test_noiseless_valid_message(self, rng):
        code = build_code(4, 2)
        outer = OuterCode.random(code.k, 1, seed=2)
        message = outer.complete(rng.integers(0, 2, code.k - 1))
        c = encode(code, message)
        result = rpa_list_concat_decode(_noiseless(c), code, DecoderConfig(), ListConfig(t=2), outer)
        assert not result.failure
        np.testing.assert_array_equal(result.codeword, c)

    def test_failure_when_no_candidate_survives(self):
        code = build_code(4, 2)
        message = np.zeros(code.k, dtype=np.uint8)
        message[[0, 3, 7]] = 1
        c = encode(code, message)
        outer = OuterCode(k=code.k, parity_check=message[None, :].copy())
        result = rpa_list_concat_decode(_noiseless(c), code, DecoderConfig(), ListConfig(t=0), outer)
        assert result.failure
        assert not result.codeword.any()

    def test_only_parity_satisfying_candidates_selected(self, rng):
        code = build_code(4, 2)
        outer = OuterCode.random(code.k, 2, seed=3)
        ch = channel_from_param(ChannelKind.AWGN, 1.0, code.rate)
        lcfg = ListConfig(t=3)
        H = outer.parity_check.astype(np.int64)
        decoded = 0
        for _ in range(50):
            c = encode(code, outer.complete(rng.integers(0, 2, code.k - outer.q)))
            L = llr(ch, transmit(ch, c, rng))
            outcome = list_decode(L, code, None, lcfg)
            survivors = outcome.messages[outer.contains(outcome.messages)]
            assert not ((survivors.astype(np.int64) @ H.T) & 1).any()

            result = rpa_list_concat_decode(L, code, None, lcfg, outer)
            if result.failure:
                assert len(survivors) == 0
                continue
            decoded += 1
            info = extract_message(code, result.codeword)
            assert not ((H @ info.astype(np.int64)) & 1).any()
            assert any((info == msg).all() for msg in survivors)
        assert decoded > 0

    def test_outer_length_mismatch(self):
        code = build_code(4, 2)
        with pytest.raises(CodeParameterError):
            rpa_list_concat_decode(np.ones(16), code, None, None, OuterCode.random(5, 1))

    def test_extract_message(self, rng):
        code = build_code(5, 2)
        message = rng.integers(0, 2, code.k).astype(np.uint8)
        np.testing.assert_array_equal(extract_message(code, encode(code, message)), message)


class TestMlDecoding:
    """Exhaustive ML decoding and list-RPA proximity to it."""

    def test_exhaustive_maximises_score(self, rng):
        code = build_code(4, 2)
        words = codebook(code)
        for _ in range(20):
            L = rng.normal(size=16)
            decoded = ml_decode_exhaustive(L, code)
            assert ml_score(decoded, L) == pytest.approx(ml_score(words, L).max())

    def test_rpa_block_errors_agree_with_ml(self):
        code = build_code(4, 2)
        ch = channel_from_param(ChannelKind.AWGN, 4.0, code.rate)
        trials = 1000
        sent = encode(code, np.random.default_rng(41).integers(0, 2, (trials, code.k)))
        L = np.stack([llr(ch, transmit(ch, c, trial_rng(42, 0, t))) for t, c in enumerate(sent)])

        words = codebook(code)
        ml = words[np.argmax(L @ (1.0 - 2.0 * words.astype(np.float64)).T, axis=1)]
        ml_errors = (ml != sent).any(axis=1)
        rpa_errors = (rpa_decode(L, 4, 2) != sent).any(axis=1)
        assert np.mean(ml_errors == rpa_errors) >= 0.95

    @pytest.mark.slow
    def test_longer_list_no_worse(self):
        code = build_code(5, 2)
        ch = channel_from_param(ChannelKind.AWGN, 2.0, code.rate)
        zero = np.zeros(code.n, dtype=np.uint8)
        L = [llr(ch, transmit(ch, zero, trial_rng(43, 0, t))) for t in range(500)]

        short_errors = sum(int(rpa_list_decode(row, code, lcfg=ListConfig(t=0)).any()) for row in L)
        long_errors = sum(int(rpa_list_decode(row, code, lcfg=ListConfig(t=4)).any()) for row in L)
        assert long_errors <= short_errors + 3 * np.sqrt(max(short_errors, 1))

    @pytest.mark.slow
    def test_list_rpa_close_to_ml(self):
        code = build_code(4, 2)
        ch = channel_from_param(ChannelKind.AWGN, 2.0, code.rate)
        zero = np.zeros(code.n, dtype=np.uint8)
        lcfg = ListConfig(t=4)
        L = np.stack([llr(ch, transmit(ch, zero, trial_rng(99, 0, t))) for t in range(10 ** 4)])

        words = codebook(code)
        ml_errors = int(words[np.argmax(L @ (1.0 - 2.0 * words.astype(np.float64)).T, axis=1)].any(axis=1).sum())
        list_errors = sum(int(rpa_list_decode(row, code, lcfg=lcfg).any()) for row in L)

        assert ml_errors > 0
        assert list_errors <= 1.5 * ml_errors
