# -*- coding: utf-8 -*-
"""
测试用例：Reed-Muller 码的构造、投影与 Reed 译码
Test Cases: Reed-Muller construction, coset projections and Reed's decoder
"""

from itertools import combinations

import numpy as np
import pytest

from src.utils.rm_core import (
    CodeParameterError, build_code, codebook, encode, enumerate_1d_subspaces,
    enumerate_subspaces, gf2_rank, index_bits, is_codeword, make_subspace, monomial_row,
    pack_rows, project, reed_decode, rm_dimension
)


def _error_patterns(n: int, max_weight: int) -> np.ndarray:
    patterns = []
    for w in range(1, max_weight + 1):
        for positions in combinations(range(n), w):
            e = np.zeros(n, dtype=np.uint8)
            e[list(positions)] = 1
            patterns.append(e)
    return np.array(patterns)


class TestDimensions:
    """Code dimension and basis construction."""

    @pytest.mark.parametrize("m,r,k", [(8, 2, 37), (9, 3, 130), (4, 4, 16), (5, 0, 1), (4, 2, 11)])
    def test_rm_dimension(self, m, r, k):
        assert rm_dimension(m, r) == k
        assert build_code(m, r).k == k

    @pytest.mark.parametrize("m,r", [(3, 4), (-1, 0), (31, 1)])
    def test_invalid_parameters(self, m, r):
        with pytest.raises(CodeParameterError):
            rm_dimension(m, r)

    def test_index_bits_lsb_first(self):
        bits = index_bits(3)
        assert bits.shape == (8, 3)
        assert bits[5].tolist() == [1, 0, 1]
        assert bits[6].tolist() == [0, 1, 1]

    def test_monomial_order(self):
        code = build_code(4, 2)
        assert code.monomials[0] == ()
        assert code.monomials[1:5] == ((0,), (1,), (2,), (3,))
        assert code.monomials[5] == (0, 1)
        assert code.generator.shape == (11, 16)
        np.testing.assert_array_equal(code.generator[1], index_bits(4)[:, 0])

    def test_code_properties(self):
        code = build_code(6, 2)
        assert code.n == 64
        assert code.k == 22
        assert code.min_distance == 16
        assert code.rate == pytest.approx(22 / 64)


class TestEncoding:
    """Encoder and codeword membership."""

    @pytest.fixture
    def rng(self):
        return np.random.default_rng(2024)

    def test_zero_message(self):
        code = build_code(4, 2)
        assert not encode(code, np.zeros(code.k, dtype=np.uint8)).any()

    def test_constant_monomial_gives_all_ones(self):
        code = build_code(4, 2)
        message = np.zeros(code.k, dtype=np.uint8)
        message[0] = 1
        assert encode(code, message).all()

    def test_linearity(self, rng):
        code = build_code(5, 2)
        a = rng.integers(0, 2, code.k)
        b = rng.integers(0, 2, code.k)
        np.testing.assert_array_equal(encode(code, a ^ b), encode(code, a) ^ encode(code, b))

    def test_batch_encoding(self, rng):
        code = build_code(5, 3)
        messages = rng.integers(0, 2, (10, code.k))
        batch = encode(code, messages)
        for i in range(10):
            np.testing.assert_array_equal(batch[i], encode(code, messages[i]))

    def test_wrong_message_length(self):
        with pytest.raises(CodeParameterError):
            encode(build_code(4, 2), [1, 0, 1])

    def test_is_codeword(self, rng):
        code = build_code(3, 1)
        assert is_codeword(code, np.zeros(8, dtype=np.uint8))
        weight_one = np.zeros(8, dtype=np.uint8)
        weight_one[3] = 1
        assert not is_codeword(code, weight_one)
        assert is_codeword(code, encode(code, rng.integers(0, 2, code.k)))

    def test_codebook_minimum_weight(self):
        code = build_code(4, 2)
        words = codebook(code)
        assert words.shape == (2 ** 11, 16)
        assert len({w.tobytes() for w in words}) == 2 ** 11
        weights = words.sum(axis=1)
        assert weights[1:].min() == code.min_distance == 4

    @pytest.mark.parametrize("m,r", [(m, r) for m in range(1, 6) for r in range(m + 1)])
    def test_minimum_weight(self, m, r):
        code = build_code(m, r)
        d = code.min_distance
        if code.k <= 16:
            assert codebook(code).sum(axis=1)[1:].min() == d
            return
        # too many codewords to list: no light word is a codeword, a degree-r monomial reaches d
        assert not any(is_codeword(code, e) for e in _error_patterns(code.n, d - 1))
        lightest = monomial_row(m, tuple(range(r)))
        assert lightest.sum() == d
        assert is_codeword(code, lightest)

    def test_codebook_too_large(self):
        with pytest.raises(CodeParameterError):
            codebook(build_code(6, 2))


class TestGf2:
    """Packed F_2 rank computations."""

    def test_pack_rows_width(self):
        assert pack_rows(np.ones((3, 70), dtype=np.uint8)).shape == (3, 2)

    def test_rank_across_limbs(self):
        assert gf2_rank(np.eye(70, dtype=np.uint8)) == 70

    def test_rank_of_dependent_rows(self):
        rows = np.array([[1, 1, 0, 0], [0, 1, 1, 0], [1, 0, 1, 0], [0, 0, 0, 1]], dtype=np.uint8)
        assert gf2_rank(rows) == 3

    def test_generator_full_rank(self):
        code = build_code(7, 3)
        assert gf2_rank(code.generator) == code.k


class TestSubspaces:
    """Subspace enumeration and coset tables."""

    def test_one_dimensional_enumeration(self):
        subspaces = enumerate_1d_subspaces(2)
        assert [sub.z0 for sub in subspaces] == [1, 2, 3]
        assert len(enumerate_1d_subspaces(8)) == 255

    def test_coset_table(self):
        sub = make_subspace(3, [1])
        np.testing.assert_array_equal(sub.members, [[0, 1], [2, 3], [4, 5], [6, 7]])
        np.testing.assert_array_equal(sub.coset_index, [0, 0, 1, 1, 2, 2, 3, 3])

    def test_cosets_ordered_by_minimum(self):
        sub = make_subspace(3, [3, 5])
        assert sub.num_cosets == 2
        np.testing.assert_array_equal(sub.members, [[0, 3, 5, 6], [1, 2, 4, 7]])

    @pytest.mark.parametrize("basis", [[0], [8], [3, 3], [1, 2, 3]])
    def test_invalid_basis(self, basis):
        with pytest.raises(CodeParameterError):
            make_subspace(3, basis)

    def test_random_subspaces(self):
        subspaces = enumerate_subspaces(5, 2, np.random.default_rng(1), count=6)
        assert len(subspaces) == 6
        assert all(sub.s == 2 and sub.members.shape == (8, 4) for sub in subspaces)


class TestProjection:
    """Coset projections map RM(m, r) into RM(m - s, r - s)."""

    def test_zero_word(self):
        sub = make_subspace(4, [5])
        assert not project(np.zeros(16, dtype=np.uint8), sub).any()

    def test_length_mismatch(self):
        with pytest.raises(CodeParameterError):
            project(np.zeros(8, dtype=np.uint8), make_subspace(4, [1]))

    def test_projection_of_rm53_on_plane(self):
        rng = np.random.default_rng(5)
        code = build_code(5, 3)
        target = build_code(3, 1)
        for sub in enumerate_subspaces(5, 2, rng, count=50):
            word = encode(code, rng.integers(0, 2, code.k))
            assert is_codeword(target, project(word, sub))

    @staticmethod
    def _projection_failures(pairs: int, seed: int) -> int:
        rng = np.random.default_rng(seed)
        failures = 0
        for _ in range(pairs):
            m = int(rng.integers(2, 8))
            s = int(rng.integers(1, 3)) if m >= 3 else 1
            r = int(rng.integers(s, m + 1))
            code = build_code(m, r)
            sub = enumerate_subspaces(m, s, rng, count=1)[0]
            word = encode(code, rng.integers(0, 2, code.k))
            if not is_codeword(build_code(m - s, r - s), project(word, sub)):
                failures += 1
        return failures

    def test_projected_codewords_stay_in_code(self):
        assert self._projection_failures(2000, seed=11) == 0

    @pytest.mark.slow
    def test_projected_codewords_stay_in_code_ten_thousand_pairs(self):
        assert self._projection_failures(10 ** 4, seed=12) == 0


class TestReedDecoder:
    """Reed's majority-logic decoder."""

    def test_noiseless_round_trip(self):
        rng = np.random.default_rng(3)
        code = build_code(4, 2)
        message = rng.integers(0, 2, code.k).astype(np.uint8)
        decoded, codeword = reed_decode(code, encode(code, message))
        np.testing.assert_array_equal(decoded, message)
        np.testing.assert_array_equal(codeword, encode(code, message))

    def test_corrects_up_to_three_errors_rm41(self):
        rng = np.random.default_rng(4)
        code = build_code(4, 1)
        codeword = encode(code, rng.integers(0, 2, code.k))
        errors = _error_patterns(16, 3)
        assert len(errors) == 16 + 120 + 560
        _, decoded = reed_decode(code, codeword[None, :] ^ errors)
        assert (decoded == codeword).all()

    def test_corrects_single_errors_rm42(self):
        code = build_code(4, 2)
        codeword = encode(code, np.random.default_rng(6).integers(0, 2, code.k))
        _, decoded = reed_decode(code, codeword[None, :] ^ _error_patterns(16, 1))
        assert (decoded == codeword).all()

    def test_batch_matches_single(self):
        rng = np.random.default_rng(8)
        code = build_code(5, 2)
        words = rng.integers(0, 2, (12, code.n)).astype(np.uint8)
        messages, codewords = reed_decode(code, words)
        for i in range(12):
            message, codeword = reed_decode(code, words[i])
            np.testing.assert_array_equal(messages[i], message)
            np.testing.assert_array_equal(codewords[i], codeword)

    def test_output_is_codeword(self):
        rng = np.random.default_rng(9)
        code = build_code(5, 2)
        _, codeword = reed_decode(code, rng.integers(0, 2, code.n).astype(np.uint8))
        assert is_codeword(code, codeword)
