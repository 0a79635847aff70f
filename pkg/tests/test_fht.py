# -*- coding: utf-8 -*-
"""
测试用例：快速 Hadamard 变换与 RM(m,1) 最大似然译码
Test Cases: Fast Hadamard Transform and ML decoding of first-order codes
"""

import numpy as np
import pytest
from scipy.linalg import hadamard

from src.utils.fht import correlation_score, fht, first_order_codeword, first_order_codewords, ml_decode_order1
from src.utils.rm_core import CodeParameterError, build_code, codebook, encode, index_bits


def _brute_force_transform(x: np.ndarray) -> np.ndarray:
    n = len(x)
    m = n.bit_length() - 1
    bits = index_bits(m).astype(np.int64)
    parity = (bits @ bits.T) & 1
    return ((1 - 2 * parity) * x[None, :]).sum(axis=1)


class TestFht:
    """Transform values."""

    def test_constant_vector(self):
        np.testing.assert_array_equal(fht(np.ones(4)), [4, 0, 0, 0])

    def test_single_spectral_line(self):
        np.testing.assert_array_equal(fht(np.array([1.0, -1.0, -1.0, 1.0])), [0, 0, 0, 4])

    def test_matches_brute_force(self):
        x = np.random.default_rng(0).normal(size=16)
        np.testing.assert_allclose(fht(x), _brute_force_transform(x), atol=1e-9)

    @pytest.mark.parametrize("m", [1, 3, 6])
    def test_matches_sylvester_hadamard(self, m):
        # natural-order Sylvester matrix has entry (-1)^(u . z)
        x = np.random.default_rng(m).normal(size=(5, 1 << m))
        np.testing.assert_allclose(fht(x), x @ hadamard(1 << m).T, atol=1e-9)

    def test_linearity(self):
        x, y = np.random.default_rng(1).normal(size=(2, 64))
        np.testing.assert_allclose(fht(1.7 * x - 0.4 * y), 1.7 * fht(x) - 0.4 * fht(y), rtol=1e-9, atol=1e-9)

    def test_rejects_bad_length(self):
        with pytest.raises(CodeParameterError):
            fht(np.ones(6))


class TestFirstOrderCodewords:
    """Affine polynomial evaluation."""

    def test_matches_encoder(self):
        code = build_code(4, 1)
        # basis order: 1, z_1, ..., z_4
        message = np.array([1, 0, 1, 1, 0], dtype=np.uint8)
        np.testing.assert_array_equal(first_order_codeword(4, 1, 0b0110), encode(code, message))

    def test_all_codewords(self):
        m = 3
        u = np.repeat(np.arange(8), 2)
        u0 = np.tile([0, 1], 8)
        words = first_order_codewords(m, u0, u)
        assert {w.tobytes() for w in words} == {w.tobytes() for w in codebook(build_code(3, 1))}


class TestMlDecodeOrder1:
    """Maximum-likelihood decoding of RM(m, 1)."""

    def test_all_positive(self):
        assert not ml_decode_order1(np.full(16, 3.0), 4).any()

    def test_noiseless_codeword(self):
        c = first_order_codeword(5, 1, 0b10011)
        np.testing.assert_array_equal(ml_decode_order1(2.0 * (1.0 - 2.0 * c), 5), c)

    @pytest.mark.parametrize("m", [3, 4, 5])
    def test_exhaustive_ml_oracle(self, m):
        rng = np.random.default_rng(100 + m)
        L = rng.normal(size=(1000, 1 << m)) * 2.0
        words = codebook(build_code(m, 1))
        best = (L @ (1.0 - 2.0 * words.astype(np.float64)).T).max(axis=1)
        decoded = ml_decode_order1(L, m)
        np.testing.assert_allclose(correlation_score(decoded, L), best, rtol=1e-9, atol=1e-9)

    def test_negated_llrs_give_complement(self):
        L = np.random.default_rng(13).normal(size=(200, 32))
        decoded = ml_decode_order1(L, 5)
        flipped = ml_decode_order1(-L, 5)
        np.testing.assert_array_equal(flipped, 1 - decoded)
        np.testing.assert_allclose(correlation_score(flipped, -L), correlation_score(decoded, L), atol=1e-12)

    def test_tie_smallest_index(self):
        # spectrum is 4 at u = 0 and u = 1
        L = np.array([2.0, 0.0, 2.0, 0.0])
        assert not ml_decode_order1(L, 2).any()

    def test_equivariant_tie_break(self):
        rng = np.random.default_rng(12)
        m = 4
        code = build_code(m, 1)
        for _ in range(50):
            y = rng.integers(0, 2, 1 << m)
            L = 1.0 - 2.0 * y
            c0 = encode(code, rng.integers(0, 2, code.k))
            first = ml_decode_order1(L, m, equivariant_ties=True)
            second = ml_decode_order1((1.0 - 2.0 * c0) * L, m, equivariant_ties=True)
            np.testing.assert_array_equal(first ^ c0, second)

    def test_wrong_length(self):
        with pytest.raises(CodeParameterError):
            ml_decode_order1(np.ones(8), 4)
