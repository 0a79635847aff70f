"""
Recursive Projection-Aggregation decoders for Reed-Muller codes.

Both decoders project the current word onto the cosets of one-dimensional
subspaces B = {0, z0}, decode every projection as an RM(m-1, r-1) word, and
aggregate the results back into an estimate of the length-2^m word:

* ``rpa_decode_bsc`` works on hard bits and flips a bit when a strict majority
  of the projections disagree with it;
* ``rpa_decode`` works on LLRs, projects with the boxplus rule and replaces
  every L(z) by the sign-corrected average of its partners L(z + z0).

Iterations stop at a fixed point (BSC) or when every LLR moved by at most
theta relative to its previous value. Internally every level works on a batch
of words, so the projections of one level are decoded together and the rows
of a batch never interact.
"""

import os
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..models import DecoderConfig
from .channels import hard_decide
from .fht import ml_decode_order1
from .rm_core import CodeParameterError, Subspace, enumerate_1d_subspaces

logger = logging.getLogger(__name__)

ZERO_LLR_TOLERANCE = 1e-12
SURROGATE_BSC_MAGNITUDE = 1.0


# --- subspace tables ------------------------------------------------------------

@dataclass(frozen=True)
class _LevelTables:
    """Gather tables for a fixed list of one-dimensional subspaces."""
    first: np.ndarray    # (V, n/2) smaller element of each coset
    second: np.ndarray   # (V, n/2) larger element of each coset
    coset: np.ndarray    # (V, n) coset position of z
    partner: np.ndarray  # (V, n) z xor z0

    @property
    def size(self) -> int:
        return self.first.shape[0]


def _tables_for(subspaces: Sequence[Subspace]) -> _LevelTables:
    if not subspaces:
        raise CodeParameterError("At least one subspace is required")
    if any(sub.s != 1 for sub in subspaces):
        raise CodeParameterError("Projection-aggregation uses one-dimensional subspaces only")
    n = 1 << subspaces[0].m
    z = np.arange(n, dtype=np.int64)
    return _LevelTables(
        first=np.stack([sub.members[:, 0] for sub in subspaces]),
        second=np.stack([sub.members[:, 1] for sub in subspaces]),
        coset=np.stack([sub.coset_index for sub in subspaces]),
        partner=np.stack([z ^ sub.z0 for sub in subspaces]),
    )


@lru_cache(maxsize=256)
def _level_tables(m: int, positions: Tuple[int, ...]) -> _LevelTables:
    subspaces = enumerate_1d_subspaces(m)
    return _tables_for([subspaces[p] for p in positions])


@lru_cache(maxsize=256)
def select_voting_set(m: int, size: Optional[int], seed: int = 0) -> Tuple[int, ...]:
    """
    Positions (in enumeration order, z0 = position + 1) of a voting set.

    ``size`` subspaces are drawn uniformly without replacement; None or a size
    covering everything returns the full set.
    """
    total = (1 << m) - 1
    if size is None or size >= total:
        return tuple(range(total))
    if size < 1:
        raise CodeParameterError(f"Voting set size must be >= 1, got {size}")
    rng = np.random.default_rng([seed, m])
    return tuple(sorted(int(p) for p in rng.choice(total, size=size, replace=False)))


def _level_positions(cfg: DecoderConfig, m: int, top_m: int) -> Tuple[int, ...]:
    """
    Voting set for a recursion level of ambient dimension m.

    An explicit ``voting_set`` applies at the top level. Deeper levels keep the
    same fraction of their own subspaces, sampled with ``voting_seed``.
    """
    total = (1 << m) - 1
    if not cfg.restricts_voting:
        return tuple(range(total))
    top_size = len(cfg.voting_set) if cfg.voting_set is not None else cfg.voting_set_size
    if m == top_m:
        if cfg.voting_set is not None:
            if cfg.voting_set[0] < 0 or cfg.voting_set[-1] >= total:
                raise CodeParameterError(f"Voting set {cfg.voting_set} out of range [0, {total}) for m={m}")
            return cfg.voting_set
        return select_voting_set(m, top_size, cfg.voting_seed)
    size = -(-top_size * total // ((1 << top_m) - 1))
    return select_voting_set(m, max(1, size), cfg.voting_seed)


# --- projection and aggregation ---------------------------------------------------

def boxplus(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """
    LLR of the XOR of two bits with LLRs a and b.

    ln(e^(a+b) + 1) - ln(e^a + e^b), evaluated as
    sign(a)sign(b)min(|a|,|b|) + ln(1+e^-|a+b|) - ln(1+e^-|a-b|), which is exact
    and stays finite for any finite inputs. The result is odd in each argument.
    """
    sign = np.sign(a) * np.sign(b)
    magnitude = np.minimum(np.abs(a), np.abs(b))
    correction = np.log1p(np.exp(-np.abs(a + b))) - np.log1p(np.exp(-np.abs(a - b)))
    return sign * magnitude + correction


def project_llr(L: np.ndarray, sub: Subspace) -> np.ndarray:
    """
    Projected LLRs over the cosets {z, z + z0} of a one-dimensional subspace.

    Raises:
        CodeParameterError: If the subspace is not one-dimensional or lengths differ
    """
    if sub.s != 1:
        raise CodeParameterError(f"LLR projection needs a one-dimensional subspace, got s={sub.s}")
    L = np.asarray(L, dtype=np.float64)
    if L.shape[-1] != (1 << sub.m):
        raise CodeParameterError(f"LLR length {L.shape[-1]} does not match 2^{sub.m}")
    return boxplus(L[..., sub.members[:, 0]], L[..., sub.members[:, 1]])


def _aggregate_llr_rows(L: np.ndarray, decoded: np.ndarray, tables: _LevelTables) -> np.ndarray:
    """(b, n) LLRs and (b, V, n/2) decoded projections -> (b, n) updated LLRs."""
    views = np.arange(tables.size)[:, None]
    signs = 1.0 - 2.0 * decoded.astype(np.float64)
    alpha = signs[:, views, tables.coset]          # (b, V, n)
    cumulative = (alpha * L[:, tables.partner]).sum(axis=1)
    return cumulative / tables.size


def _changevotes(projected: np.ndarray, decoded: np.ndarray, tables: _LevelTables) -> np.ndarray:
    """(b, V, n/2) projections and decodings -> (b, n) disagreement counts."""
    views = np.arange(tables.size)[:, None]
    disagree = (projected != decoded)
    return disagree[:, views, tables.coset].sum(axis=1, dtype=np.int64)


def _check_aligned(word: np.ndarray, per_subspace: np.ndarray, subspaces: Sequence[Subspace]) -> None:
    n = word.shape[-1]
    if per_subspace.ndim != 2 or per_subspace.shape != (len(subspaces), n // 2):
        raise CodeParameterError(
            f"Expected {len(subspaces)} projections of length {n // 2}, got shape {per_subspace.shape}")
    if any((1 << sub.m) != n for sub in subspaces):
        raise CodeParameterError("Subspaces do not live in the word's ambient space")


def aggregate_bsc(y: np.ndarray, proj_in: np.ndarray, decoded: np.ndarray,
                  subspaces: Optional[Sequence[Subspace]] = None) -> np.ndarray:
    """
    Majority-vote aggregation for hard words.

    changevote(z) counts the subspaces whose decoded projection disagrees with
    the received projection at the coset of z; y(z) flips iff more than half
    of the V subspaces disagree (a tie keeps the bit).

    Args:
        y: Current word of length n
        proj_in: (V, n/2) projections of y
        decoded: (V, n/2) decoded projections, same subspace order
        subspaces: The V subspaces (default: all n-1 in enumeration order)
    """
    y = np.asarray(y, dtype=np.uint8)
    m = y.shape[-1].bit_length() - 1
    subspaces = list(enumerate_1d_subspaces(m)) if subspaces is None else list(subspaces)
    proj_in = np.asarray(proj_in, dtype=np.uint8)
    decoded = np.asarray(decoded, dtype=np.uint8)
    _check_aligned(y, proj_in, subspaces)
    _check_aligned(y, decoded, subspaces)
    tables = _tables_for(subspaces)
    votes = _changevotes(proj_in[None], decoded[None], tables)[0]
    return y ^ (2 * votes > tables.size).astype(np.uint8)


def aggregate_llr(L: np.ndarray, decoded: np.ndarray,
                  subspaces: Optional[Sequence[Subspace]] = None) -> np.ndarray:
    """
    LLR aggregation: L^(z) = (1/V) sum_i (1 - 2 y^_i([z + B_i])) L(z + z_i).

    Args:
        L: Current LLRs of length n
        decoded: (V, n/2) decoded projections, aligned with ``subspaces``
        subspaces: The V subspaces (default: all n-1 in enumeration order)
    """
    L = np.asarray(L, dtype=np.float64)
    m = L.shape[-1].bit_length() - 1
    subspaces = list(enumerate_1d_subspaces(m)) if subspaces is None else list(subspaces)
    decoded = np.asarray(decoded, dtype=np.uint8)
    _check_aligned(L, decoded, subspaces)
    return _aggregate_llr_rows(L[None], decoded[None], _tables_for(subspaces))[0]


def _is_stable(updated: np.ndarray, current: np.ndarray, theta: float) -> np.ndarray:
    """Per row: |L^(z) - L(z)| <= theta |L(z)| everywhere (|L^(z)| <= 1e-12 where L(z) = 0)."""
    within = np.abs(updated - current) <= theta * np.abs(current)
    zero = current == 0
    within[zero] = np.abs(updated[zero]) <= ZERO_LLR_TOLERANCE
    return within.all(axis=-1)


# --- recursion -------------------------------------------------------------------

@dataclass(frozen=True)
class _Run:
    """Settings shared by every level of one decode."""
    cfg: DecoderConfig
    top_m: int
    n_max: int
    workers: int


def _make_run(cfg: DecoderConfig, m: int) -> _Run:
    workers = cfg.workers or os.cpu_count() or 1
    return _Run(cfg=cfg, top_m=m, n_max=cfg.resolved_n_max(m), workers=workers)


def _map_rows(fn: Callable[[np.ndarray], np.ndarray], rows: np.ndarray, run: _Run, parallel: bool) -> np.ndarray:
    """Apply ``fn`` to row chunks, optionally on a thread pool; order is preserved."""
    if not parallel or run.workers < 2 or rows.shape[0] < 2:
        return fn(rows)
    chunks = np.array_split(rows, min(run.workers, rows.shape[0]))
    with ThreadPoolExecutor(max_workers=run.workers) as pool:
        return np.concatenate(list(pool.map(fn, chunks)))


def _decode_llr_rows(L: np.ndarray, m: int, r: int, run: _Run,
                     parallel: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Decode a (b, 2^m) batch; returns hard words and iterations used per row."""
    if r == 1:
        return ml_decode_order1(L, m, equivariant_ties=True), np.zeros(L.shape[0], dtype=np.int64)

    tables = _level_tables(m, _level_positions(run.cfg, m, run.top_m))
    half = 1 << (m - 1)
    L = L.copy()
    active = np.ones(L.shape[0], dtype=bool)
    iterations = np.zeros(L.shape[0], dtype=np.int64)

    def sub_decode(rows: np.ndarray) -> np.ndarray:
        return _decode_llr_rows(rows, m - 1, r - 1, run)[0]

    for iteration in range(1, run.n_max + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        current = L[idx]
        iterations[idx] = iteration
        projected = boxplus(current[:, tables.first], current[:, tables.second])
        decoded = _map_rows(sub_decode, projected.reshape(-1, half), run, parallel)
        updated = _aggregate_llr_rows(current, decoded.reshape(idx.size, tables.size, half), tables)
        stable = _is_stable(updated, current, run.cfg.theta)
        L[idx[~stable]] = updated[~stable]
        active[idx[stable]] = False
        if m == run.top_m:
            logger.debug(f"RPA RM({m},{r}) iteration {iteration}: {int(stable.sum())}/{idx.size} rows stable")

    return hard_decide(L), iterations


def _decode_bsc_rows(y: np.ndarray, m: int, r: int, run: _Run, magnitude: float,
                     parallel: bool = False) -> Tuple[np.ndarray, np.ndarray]:
    """Hard-decision decode of a (b, 2^m) batch; returns words and iterations per row."""
    if r == 1:
        L = magnitude * (1.0 - 2.0 * y.astype(np.float64))
        return ml_decode_order1(L, m, equivariant_ties=True), np.zeros(y.shape[0], dtype=np.int64)

    tables = _level_tables(m, _level_positions(run.cfg, m, run.top_m))
    half = 1 << (m - 1)
    y = y.copy()
    active = np.ones(y.shape[0], dtype=bool)
    iterations = np.zeros(y.shape[0], dtype=np.int64)

    def sub_decode(rows: np.ndarray) -> np.ndarray:
        return _decode_bsc_rows(rows, m - 1, r - 1, run, magnitude)[0]

    for iteration in range(1, run.n_max + 1):
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        current = y[idx]
        iterations[idx] = iteration
        projected = current[:, tables.first] ^ current[:, tables.second]
        decoded = _map_rows(sub_decode, projected.reshape(-1, half), run, parallel)
        votes = _changevotes(projected, decoded.reshape(idx.size, tables.size, half), tables)
        flips = (2 * votes > tables.size).astype(np.uint8)
        changed = flips.any(axis=-1)
        y[idx[changed]] = current[changed] ^ flips[changed]
        active[idx[~changed]] = False
        if m == run.top_m:
            logger.debug(f"RPA-BSC RM({m},{r}) iteration {iteration}: {int(flips.sum())} flips")

    return y, iterations


def _check_decode_args(word: np.ndarray, m: int, r: int) -> None:
    if not 1 <= r <= m:
        raise CodeParameterError(f"RPA needs 1 <= r <= m, got m={m}, r={r}")
    if word.shape[-1] != (1 << m) or word.ndim > 2:
        raise CodeParameterError(f"Expected words of length {1 << m}, got shape {word.shape}")


def rpa_decode(L: np.ndarray, m: int, r: int, cfg: Optional[DecoderConfig] = None,
               return_iterations: bool = False):
    """
    Soft-decision RPA decoding of RM(m, r) from LLRs.

    r = 1 is decoded exactly with the Fast Hadamard Transform. Otherwise up to
    n_max rounds of projection, recursive decoding and aggregation are run; the
    result is the sign pattern of the final LLRs (not always a codeword).
    A (B, 2^m) batch decodes every row independently.

    Raises:
        CodeParameterError: If r is not in [1, m], the length is wrong or an
            LLR is not finite
    """
    cfg = cfg or DecoderConfig()
    L = np.asarray(L, dtype=np.float64)
    _check_decode_args(L, m, r)
    if not np.isfinite(L).all():
        raise CodeParameterError("LLRs must be finite")
    run = _make_run(cfg, m)
    words, iterations = _decode_llr_rows(np.atleast_2d(L), m, r, run, cfg.parallel_projections)
    if L.ndim == 1:
        words, iterations = words[0], iterations[0]
    return (words, iterations) if return_iterations else words


def rpa_decode_bsc(y: np.ndarray, m: int, r: int, cfg: Optional[DecoderConfig] = None,
                   p: Optional[float] = None, return_iterations: bool = False):
    """
    Hard-decision RPA decoding of RM(m, r) for the BSC.

    Projections of first-order codes are decoded by the FHT on the LLRs
    +/-ln((1-p)/p) (magnitude 1.0 when p is unknown). Exits as soon as an
    aggregation flips nothing. A (B, 2^m) batch decodes every row independently.

    Raises:
        CodeParameterError: If r is not in [1, m] or the length is wrong
    """
    cfg = cfg or DecoderConfig()
    y = np.asarray(y, dtype=np.uint8)
    _check_decode_args(y, m, r)
    magnitude = SURROGATE_BSC_MAGNITUDE if p is None else float(np.log((1.0 - p) / p))
    run = _make_run(cfg, m)
    words, iterations = _decode_bsc_rows(np.atleast_2d(y), m, r, run, magnitude, cfg.parallel_projections)
    if y.ndim == 1:
        words, iterations = words[0], iterations[0]
    return (words, iterations) if return_iterations else words
