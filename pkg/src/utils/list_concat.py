"""
Chase-style list decoding around RPA and outer-code concatenation.

The t least reliable coordinates of the LLR word are overwritten with every
sign pattern of +/-L_max; each of the 2^t candidates is decoded by RPA,
projected onto the code by Reed's decoder and scored by its correlation with
the original LLRs. The concatenated variant only keeps candidates whose
information bits pass a small random parity check.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Optional

import numpy as np

from ..models import DecodeResult, DecoderConfig, ListConfig
from .fht import correlation_score
from .rm_core import CodeParameterError, RmCode, codebook, gf2_rank, reed_decode
from .rpa import rpa_decode

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OuterCode:
    """
    Random parity-check code on the k information bits of the inner RM code.

    ``parity_check`` is a q x k binary matrix whose trailing q x q block is
    invertible, so the last q information bits can always be completed.
    """
    k: int
    parity_check: np.ndarray

    @property
    def q(self) -> int:
        return self.parity_check.shape[0]

    @classmethod
    def random(cls, k: int, q: int, seed: int = 0) -> "OuterCode":
        """Sample H i.i.d. Bernoulli(1/2), resampling until the trailing block is invertible."""
        if q < 1 or q > k:
            raise CodeParameterError(f"Parity count must be in [1, {k}], got {q}")
        rng = np.random.default_rng(seed)
        while True:
            H = rng.integers(0, 2, size=(q, k), dtype=np.uint8)
            if gf2_rank(H[:, k - q:]) == q:
                H.setflags(write=False)
                return cls(k=k, parity_check=H)

    def syndrome(self, info: np.ndarray) -> np.ndarray:
        info = np.asarray(info, dtype=np.int64)
        return (info @ self.parity_check.T.astype(np.int64)) & 1

    def contains(self, info: np.ndarray) -> np.ndarray:
        """H . info = 0 over F_2; batches give one flag per row."""
        info = np.asarray(info)
        if info.shape[-1] != self.k:
            raise CodeParameterError(f"Information length {info.shape[-1]} does not match outer k={self.k}")
        return ~self.syndrome(info).any(axis=-1)

    def complete(self, info_free: np.ndarray) -> np.ndarray:
        """Append the q parity bits that make the information word pass the check."""
        info_free = np.asarray(info_free, dtype=np.uint8)
        if info_free.shape[-1] != self.k - self.q:
            raise CodeParameterError(f"Expected {self.k - self.q} free information bits, got {info_free.shape[-1]}")
        for tail in product((0, 1), repeat=self.q):
            info = np.concatenate([info_free, np.array(tail, dtype=np.uint8)])
            if self.contains(info):
                return info
        raise CodeParameterError("Parity-check matrix has a singular trailing block")

    def effective_rate(self, n: int) -> float:
        return (self.k - self.q) / n


@dataclass
class ListOutcome:
    """Every candidate of one list decode and the selected position."""
    codewords: np.ndarray  # (2^t, n)
    messages: np.ndarray   # (2^t, k)
    scores: np.ndarray     # (2^t,)
    selected: int

    @property
    def codeword(self) -> np.ndarray:
        return self.codewords[self.selected]


def chase_candidates(L: np.ndarray, cfg: ListConfig) -> np.ndarray:
    """
    The 2^t candidate LLR words of a Chase list.

    The t coordinates with smallest |L| (ties to the smaller index) are set to
    +/-L_max, L_max = l_max_mult * max|L|. Candidate j carries -L_max at the
    b-th chosen coordinate iff bit b of j is set, so candidate 0 is all +L_max.

    Raises:
        CodeParameterError: If t exceeds the word length
    """
    L = np.asarray(L, dtype=np.float64)
    n = L.shape[-1]
    if cfg.t > n:
        raise CodeParameterError(f"List exponent t={cfg.t} exceeds word length {n}")
    candidates = np.repeat(L[None, :], cfg.list_size, axis=0)
    if cfg.t == 0:
        return candidates
    positions = np.argsort(np.abs(L), kind='stable')[:cfg.t]
    l_max = cfg.l_max_mult * np.abs(L).max()
    patterns = (np.arange(cfg.list_size)[:, None] >> np.arange(cfg.t)) & 1
    candidates[:, positions] = l_max * (1.0 - 2.0 * patterns)
    return candidates


def ml_score(candidate: np.ndarray, L_original: np.ndarray) -> np.ndarray:
    """
    Correlation sum_z (-1)^c(z) L(z) with the unmodified LLRs.

    Raises:
        CodeParameterError: If the lengths differ
    """
    candidate = np.asarray(candidate)
    L_original = np.asarray(L_original, dtype=np.float64)
    if candidate.shape[-1] != L_original.shape[-1]:
        raise CodeParameterError("Candidate and LLR lengths differ")
    return correlation_score(candidate, L_original)


def extract_message(code: RmCode, codeword: np.ndarray) -> np.ndarray:
    """Information bits of a codeword (exact on codewords)."""
    return reed_decode(code, codeword)[0]


def list_decode(L: np.ndarray, code: RmCode, dcfg: Optional[DecoderConfig] = None,
                lcfg: Optional[ListConfig] = None) -> ListOutcome:
    """Decode every Chase candidate and select the best score (first on ties)."""
    dcfg = dcfg or DecoderConfig()
    lcfg = lcfg or ListConfig()
    L = np.asarray(L, dtype=np.float64)
    if L.ndim != 1 or L.shape[0] != code.n:
        raise CodeParameterError(f"Expected one LLR word of length {code.n}, got shape {L.shape}")

    candidates = chase_candidates(L, lcfg)
    hard = rpa_decode(candidates, code.m, code.r, dcfg)
    messages, codewords = reed_decode(code, hard)
    scores = ml_score(codewords, L)
    selected = int(np.argmax(scores))
    logger.debug(f"List of {lcfg.list_size}: selected candidate {selected} with score {scores[selected]:.4f}")
    return ListOutcome(codewords=codewords, messages=messages, scores=scores, selected=selected)


def rpa_list_decode(L: np.ndarray, code: RmCode, dcfg: Optional[DecoderConfig] = None,
                    lcfg: Optional[ListConfig] = None) -> np.ndarray:
    """RPA list decoding; the result is always a codeword of ``code``."""
    return list_decode(L, code, dcfg, lcfg).codeword


def rpa_list_concat_decode(L: np.ndarray, code: RmCode, dcfg: Optional[DecoderConfig],
                           lcfg: Optional[ListConfig], outer: OuterCode) -> DecodeResult:
    """
    List decoding restricted to candidates whose information bits lie in the outer code.

    When no candidate survives the all-zero codeword is returned with
    ``failure`` set.

    Raises:
        CodeParameterError: If the outer code length differs from the RM dimension
    """
    if outer.k != code.k:
        raise CodeParameterError(f"Outer code length {outer.k} does not match RM dimension {code.k}")
    outcome = list_decode(L, code, dcfg, lcfg)
    survivors = outer.contains(outcome.messages)
    if not survivors.any():
        logger.debug("No list candidate satisfies the outer parity checks")
        return DecodeResult(codeword=np.zeros(code.n, dtype=np.uint8), failure=True)
    scores = np.where(survivors, outcome.scores, -np.inf)
    return DecodeResult(codeword=outcome.codewords[int(np.argmax(scores))].copy(), failure=False)


@lru_cache(maxsize=8)
def _cached_codebook(code: RmCode) -> np.ndarray:
    return codebook(code)


def ml_decode_exhaustive(L: np.ndarray, code: RmCode) -> np.ndarray:
    """Brute-force ML decoding over the whole codebook (k <= 16); first maximiser wins."""
    L = np.asarray(L, dtype=np.float64)
    if L.shape[-1] != code.n:
        raise CodeParameterError(f"LLR length {L.shape[-1]} does not match code length {code.n}")
    words = _cached_codebook(code)
    return words[int(np.argmax(correlation_score(words, L)))].copy()
