"""
Reed-Muller code construction, encoding and Reed's majority-logic decoder.

Coordinates of a length-2^m word are indexed by z in {0,1}^m, and z maps to
the integer sum(z_i * 2^(i-1)): z_1 is the least significant bit. Every module
of the package uses this convention, so that projections, transforms and
encoders agree on what coordinate z means.

Words are numpy uint8 arrays holding 0/1 values. F_2 elimination works on
rows packed into little-endian 64-bit limbs.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import comb

logger = logging.getLogger(__name__)

MAX_M = 30
MAX_CODEBOOK_DIMENSION = 16
LIMB_BITS = 64


class CodeParameterError(ValueError):
    """Raised for invalid code parameters, lengths or subspaces."""
    pass


def rm_dimension(m: int, r: int) -> int:
    """
    Dimension of RM(m, r): sum of C(m, i) for i = 0..r.

    Raises:
        CodeParameterError: If the parameters violate 0 <= r <= m <= 30
    """
    if m < 0 or r < 0:
        raise CodeParameterError(f"Parameters must be non-negative, got m={m}, r={r}")
    if r > m:
        raise CodeParameterError(f"Order r={r} exceeds number of variables m={m}")
    if m > MAX_M:
        raise CodeParameterError(f"m={m} exceeds the supported maximum {MAX_M}")
    return int(sum(comb(m, i, exact=True) for i in range(r + 1)))


@lru_cache(maxsize=None)
def index_bits(m: int) -> np.ndarray:
    """(2^m, m) matrix whose row z holds (z_1, ..., z_m)."""
    z = np.arange(1 << m, dtype=np.int64)
    bits = ((z[:, None] >> np.arange(m, dtype=np.int64)) & 1).astype(np.uint8)
    bits.setflags(write=False)
    return bits


# --- packed F_2 linear algebra ---------------------------------------------

def pack_rows(rows: np.ndarray) -> np.ndarray:
    """Pack 0/1 rows of width n into (..., ceil(n/64)) little-endian uint64 limbs."""
    rows = np.asarray(rows, dtype=np.uint8)
    pad = (-rows.shape[-1]) % LIMB_BITS
    if pad:
        widths = [(0, 0)] * (rows.ndim - 1) + [(0, pad)]
        rows = np.pad(rows, widths)
    packed = np.packbits(rows, axis=-1, bitorder='little')
    return np.ascontiguousarray(packed).view('<u8')


def _lowest_set_bit(limbs: np.ndarray) -> int:
    nonzero = np.flatnonzero(limbs)
    if nonzero.size == 0:
        return -1
    idx = int(nonzero[0])
    word = int(limbs[idx])
    return idx * LIMB_BITS + (word & -word).bit_length() - 1


def _test_bit(limbs: np.ndarray, col: int) -> bool:
    return bool((int(limbs[col // LIMB_BITS]) >> (col % LIMB_BITS)) & 1)


class Gf2RowSpace:
    """
    Echelon basis of a row space over F_2, built incrementally.

    Each stored row is reduced against all earlier rows, so its pivot (lowest
    set column) is clear in every earlier row and reduction in insertion order
    is complete.
    """

    def __init__(self, width: int):
        self.width = width
        self.rows: List[np.ndarray] = []
        self.pivots: List[int] = []

    def reduce(self, limbs: np.ndarray) -> np.ndarray:
        limbs = limbs.copy()
        for pivot, row in zip(self.pivots, self.rows):
            if _test_bit(limbs, pivot):
                limbs ^= row
        return limbs

    def add(self, limbs: np.ndarray) -> bool:
        """Insert a packed row; returns False if it was already in the span."""
        reduced = self.reduce(limbs)
        pivot = _lowest_set_bit(reduced)
        if pivot < 0:
            return False
        self.rows.append(reduced)
        self.pivots.append(pivot)
        return True

    def contains(self, limbs: np.ndarray) -> bool:
        return _lowest_set_bit(self.reduce(limbs)) < 0

    @property
    def rank(self) -> int:
        return len(self.pivots)


def gf2_rank(rows: np.ndarray) -> int:
    """Rank over F_2 of a 0/1 matrix."""
    rows = np.atleast_2d(np.asarray(rows, dtype=np.uint8))
    space = Gf2RowSpace(rows.shape[1])
    for limbs in pack_rows(rows):
        space.add(limbs)
    return space.rank


# --- codes -------------------------------------------------------------------

@dataclass(frozen=True)
class RmCode:
    """
    The Reed-Muller code RM(m, r).

    ``monomials`` lists the sets A (0-based variable indices) in degree-ascending
    then lexicographic order; row i of ``generator`` is the evaluation
    v_m(A, z) = prod_{j in A} z_j over all z.
    """
    m: int
    r: int
    monomials: Tuple[Tuple[int, ...], ...]
    generator: np.ndarray = field(repr=False, compare=False)
    _row_space: Gf2RowSpace = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return 1 << self.m

    @property
    def k(self) -> int:
        return len(self.monomials)

    @property
    def min_distance(self) -> int:
        return 1 << (self.m - self.r)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def monomial_index(self) -> Dict[Tuple[int, ...], int]:
        return {A: i for i, A in enumerate(self.monomials)}


def monomial_row(m: int, A: Sequence[int]) -> np.ndarray:
    """Evaluation of the monomial prod_{j in A} z_j at every z."""
    bits = index_bits(m)
    if len(A) == 0:
        return np.ones(1 << m, dtype=np.uint8)
    return np.bitwise_and.reduce(bits[:, list(A)], axis=1).astype(np.uint8)


@lru_cache(maxsize=64)
def build_code(m: int, r: int) -> RmCode:
    """
    Construct RM(m, r) with its monomial generator basis.

    Raises:
        CodeParameterError: As rm_dimension
    """
    k = rm_dimension(m, r)
    monomials = tuple(A for d in range(r + 1) for A in combinations(range(m), d))
    generator = np.stack([monomial_row(m, A) for A in monomials])
    generator.setflags(write=False)

    space = Gf2RowSpace(1 << m)
    for limbs in pack_rows(generator):
        space.add(limbs)
    if space.rank != k:
        raise CodeParameterError(f"Generator of RM({m},{r}) has rank {space.rank}, expected {k}")

    logger.debug(f"Built RM({m},{r}): n={1 << m}, k={k}")
    return RmCode(m=m, r=r, monomials=monomials, generator=generator, _row_space=space)


def _check_length(code: RmCode, word: np.ndarray) -> None:
    if word.shape[-1] != code.n:
        raise CodeParameterError(f"Word length {word.shape[-1]} does not match code length {code.n}")


def encode(code: RmCode, message: Sequence[int]) -> np.ndarray:
    """
    Encode a length-k message (aligned with the basis order); batches of
    messages (shape (B, k)) are encoded row by row.
    """
    message = np.asarray(message, dtype=np.int64)
    if message.shape[-1] != code.k:
        raise CodeParameterError(f"Message length {message.shape[-1]} does not match dimension {code.k}")
    return ((message & 1) @ code.generator.astype(np.int64) & 1).astype(np.uint8)


def is_codeword(code: RmCode, word: np.ndarray) -> bool:
    """True iff the word lies in the row space of the generator."""
    word = np.asarray(word, dtype=np.uint8)
    if word.ndim != 1:
        raise CodeParameterError("is_codeword expects a single word")
    _check_length(code, word)
    return code._row_space.contains(pack_rows(word))


def codebook(code: RmCode) -> np.ndarray:
    """All 2^k codewords, message integer order; only for k <= 16."""
    if code.k > MAX_CODEBOOK_DIMENSION:
        raise CodeParameterError(f"Codebook of dimension {code.k} is too large to enumerate")
    messages = (np.arange(1 << code.k, dtype=np.int64)[:, None] >> np.arange(code.k)) & 1
    return encode(code, messages)


# --- subspaces and projections -----------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """
    An s-dimensional subspace B of F_2^m with its coset table.

    Cosets are ordered by their minimum element; ``coset_index[z]`` is the
    position of the coset containing z and ``members[t]`` lists the elements of
    coset t in ascending order.
    """
    m: int
    basis: Tuple[int, ...]
    coset_index: np.ndarray = field(repr=False, compare=False)
    members: np.ndarray = field(repr=False, compare=False)

    @property
    def s(self) -> int:
        return len(self.basis)

    @property
    def z0(self) -> int:
        """Nonzero element of a one-dimensional subspace."""
        if self.s != 1:
            raise CodeParameterError("z0 is only defined for one-dimensional subspaces")
        return self.basis[0]

    @property
    def num_cosets(self) -> int:
        return 1 << (self.m - self.s)


def _span(basis: Sequence[int]) -> np.ndarray:
    span = np.zeros(1, dtype=np.int64)
    for b in basis:
        span = np.concatenate([span, span ^ b])
    return span


def make_subspace(m: int, basis_vectors: Sequence[int]) -> Subspace:
    """
    Build the coset table of span(basis_vectors).

    Raises:
        CodeParameterError: If a vector is zero or out of range, or the vectors
            are dependent
    """
    basis = tuple(int(b) for b in basis_vectors)
    if not 1 <= len(basis) <= m:
        raise CodeParameterError(f"Subspace dimension must be in [1, {m}], got {len(basis)}")
    if any(b <= 0 or b >= (1 << m) for b in basis):
        raise CodeParameterError(f"Basis vectors must be nonzero elements of F_2^{m}: {basis}")
    span = _span(basis)
    if len(np.unique(span)) != len(span):
        raise CodeParameterError(f"Basis vectors are linearly dependent: {basis}")

    z = np.arange(1 << m, dtype=np.int64)
    representatives = (z[:, None] ^ span[None, :]).min(axis=1)
    cosets = np.unique(representatives)
    coset_index = np.searchsorted(cosets, representatives)
    members = np.sort(cosets[:, None] ^ span[None, :], axis=1)
    coset_index.setflags(write=False)
    members.setflags(write=False)
    return Subspace(m=m, basis=basis, coset_index=coset_index, members=members)


@lru_cache(maxsize=None)
def enumerate_1d_subspaces(m: int) -> Tuple[Subspace, ...]:
    """All 2^m - 1 subspaces {0, z0}, ordered by the integer value of z0."""
    if m < 1:
        raise CodeParameterError(f"m must be >= 1, got {m}")
    return tuple(make_subspace(m, [z0]) for z0 in range(1, 1 << m))


def enumerate_subspaces(m: int, s: int, rng: Optional[np.random.Generator] = None,
                        count: Optional[int] = None) -> List[Subspace]:
    """
    s-dimensional subspaces of F_2^m.

    For s = 1 without ``count`` this is the full enumeration. Otherwise
    ``count`` random subspaces are drawn by rejection sampling of independent
    basis vectors.
    """
    if not 1 <= s <= m:
        raise CodeParameterError(f"Subspace dimension must be in [1, {m}], got {s}")
    if s == 1 and count is None:
        return list(enumerate_1d_subspaces(m))
    rng = rng if rng is not None else np.random.default_rng()
    count = 1 if count is None else count
    subspaces = []
    while len(subspaces) < count:
        vectors = rng.integers(1, 1 << m, size=s)
        try:
            subspaces.append(make_subspace(m, vectors))
        except CodeParameterError:
            continue
    return subspaces


def project(word: np.ndarray, sub: Subspace) -> np.ndarray:
    """
    XOR-compress a word over the cosets of ``sub``; output length 2^(m-s).

    Raises:
        CodeParameterError: If the word length is not 2^m for the subspace's m
    """
    word = np.asarray(word, dtype=np.uint8)
    if word.shape[-1] != (1 << sub.m):
        raise CodeParameterError(
            f"Word length {word.shape[-1]} does not match subspace ambient length {1 << sub.m}")
    return np.bitwise_xor.reduce(word[..., sub.members], axis=-1)


# --- Reed's decoder -------------------------------------------------------------

def _majority(votes: np.ndarray) -> np.ndarray:
    """Strict majority of 0/1 votes along the last axis; ties resolve to 0."""
    ones = votes.sum(axis=-1, dtype=np.int64)
    return (2 * ones > votes.shape[-1]).astype(np.uint8)


def reed_decode(code: RmCode, word: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Classical majority-logic decoding.

    For each degree d from r down to 0 every coefficient u(A), |A| = d, is the
    majority of the 2^(m-d) coset sums of the residual over span{e_j : j in A};
    the recovered layer is then removed from the residual. Accepts a single
    word or a (B, n) batch.

    Returns:
        (message bits, re-encoded codeword)
    """
    word = np.asarray(word, dtype=np.uint8)
    _check_length(code, word)
    single = word.ndim == 1
    residual = np.atleast_2d(word).copy()
    batch = residual.shape[0]
    m = code.m
    message = np.zeros((batch, code.k), dtype=np.uint8)
    index = code.monomial_index()

    for d in range(code.r, -1, -1):
        layer = [A for A in code.monomials if len(A) == d]
        cube = residual.reshape((batch,) + (2,) * m)
        for A in layer:
            # axis 1 of the cube is z_m, axis m is z_1
            axes = tuple(m - j for j in A)
            votes = cube.sum(axis=axes, dtype=np.int64).reshape(batch, -1) & 1
            message[:, index[A]] = _majority(votes)
        rows = [index[A] for A in layer]
        residual ^= (message[:, rows].astype(np.int64) @ code.generator[rows].astype(np.int64) & 1).astype(np.uint8)

    codeword = encode(code, message)
    if single:
        return message[0], codeword[0]
    return message, codeword
