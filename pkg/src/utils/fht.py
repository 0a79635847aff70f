"""
Fast Hadamard Transform and maximum-likelihood decoding of RM(m, 1).

The transform of L is L^(u) = sum_z (-1)^(u . z) L(z). Correlating L with a
first-order codeword u0 + sum u_i z_i gives (-1)^u0 L^(u), so the ML codeword
sits at the largest |L^(u)| with u0 taken from its sign.
"""

import logging

import numpy as np

from .rm_core import CodeParameterError, index_bits

logger = logging.getLogger(__name__)


def fht(x: np.ndarray) -> np.ndarray:
    """
    Hadamard transform along the last axis in m butterfly stages.

    Stage i pairs indices that differ in bit i, so the output is in natural
    order. Leading axes are treated as a batch.

    Raises:
        CodeParameterError: If the length is not a power of two
    """
    y = np.array(x, dtype=np.float64)
    n = y.shape[-1] if y.ndim else 0
    if n < 1 or n & (n - 1):
        raise CodeParameterError(f"Transform length must be a power of two, got {n}")
    lead = y.shape[:-1]
    h = 1
    while h < n:
        y = y.reshape(lead + (n // (2 * h), 2, h))
        a = y[..., 0, :]
        b = y[..., 1, :]
        y = np.stack((a + b, a - b), axis=-2)
        h *= 2
    return y.reshape(lead + (n,))


def first_order_codewords(m: int, u0: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Evaluations of u0 + sum_i u_i z_i for batches of (u0, u)."""
    u = np.asarray(u, dtype=np.int64)
    u0 = np.asarray(u0, dtype=np.int64)
    ubits = (u[..., None] >> np.arange(m, dtype=np.int64)) & 1
    return ((ubits @ index_bits(m).T.astype(np.int64) + u0[..., None]) & 1).astype(np.uint8)


def first_order_codeword(m: int, u0: int, u: int) -> np.ndarray:
    """Codeword of the affine polynomial u0 + sum_i u_i z_i, u given as an integer."""
    return first_order_codewords(m, np.array([u0]), np.array([u]))[0]


def _break_tie(L: np.ndarray, spectrum: np.ndarray, magnitude: np.ndarray, m: int) -> np.ndarray:
    """
    Among all spectral maxima pick the codeword whose sign-residual pattern
    (-1)^c(z) L(z) < 0 is lexicographically smallest.

    The residual is unchanged when L and the candidates are translated by the
    same codeword, so this choice commutes with that translation.
    """
    us = np.flatnonzero(magnitude == magnitude.max())
    u0s = (spectrum[us] < 0).astype(np.int64)
    candidates = first_order_codewords(m, u0s, us)
    residual_negative = (np.where(candidates == 1, -L, L) < 0)
    order = np.lexsort(residual_negative.T[::-1])
    return candidates[order[0]]


def ml_decode_order1(L: np.ndarray, m: int, equivariant_ties: bool = False) -> np.ndarray:
    """
    ML decoding of RM(m, 1) from LLRs; a (B, 2^m) batch decodes row by row.

    The maximiser of |L^(u)| is taken at the smallest u, and u0 = 1 only when
    L^(u*) < 0. With ``equivariant_ties`` exact ties between maxima are instead
    resolved by the sign-residual rule of ``_break_tie``.

    Raises:
        CodeParameterError: If the LLR length is not 2^m
    """
    L = np.asarray(L, dtype=np.float64)
    if L.shape[-1] != (1 << m):
        raise CodeParameterError(f"LLR length {L.shape[-1]} does not match 2^{m}")
    single = L.ndim == 1
    rows = np.atleast_2d(L)

    spectrum = fht(rows)
    magnitude = np.abs(spectrum)
    u_star = magnitude.argmax(axis=-1)
    value = np.take_along_axis(spectrum, u_star[:, None], axis=-1)[:, 0]
    codewords = first_order_codewords(m, (value < 0).astype(np.int64), u_star)

    if equivariant_ties:
        best = np.take_along_axis(magnitude, u_star[:, None], axis=-1)
        tied = np.flatnonzero((magnitude == best).sum(axis=-1) > 1)
        for row in tied:
            codewords[row] = _break_tie(rows[row], spectrum[row], magnitude[row], m)

    return codewords[0] if single else codewords


def correlation_score(codeword: np.ndarray, L: np.ndarray) -> np.ndarray:
    """sum_z (-1)^c(z) L(z), the quantity ML decoding maximises."""
    signs = 1.0 - 2.0 * np.asarray(codeword, dtype=np.float64)
    return (signs * np.asarray(L, dtype=np.float64)).sum(axis=-1)
