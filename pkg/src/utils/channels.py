"""
Binary-input memoryless channel models.

BSC(p) flips each bit with probability p. AWGN(sigma) sends BPSK symbols
(0 -> +1, 1 -> -1) through additive Gaussian noise. Both are symmetric: the
output involution is a bit flip for the BSC and negation for the AWGN channel.

AWGN grids are given in Eb/N0 (dB) and converted with
sigma^2 = 1 / (2 * R * 10^(EbN0/10)), R = k/n.
"""

import math
import logging
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..models import ChannelKind

logger = logging.getLogger(__name__)

LLR_CLAMP = 1e9
EBN0_CONVENTION = "AWGN parameter is Eb/N0 in dB; sigma^2 = 1/(2*R*10^(EbN0/10)), R = k/n, BPSK 0->+1 1->-1"

SeedLike = Union[int, np.random.Generator, np.random.SeedSequence]


class ChannelError(ValueError):
    """Raised for invalid channel parameters or received alphabets."""
    pass


@dataclass(frozen=True)
class ChannelModel:
    """A BSC with crossover probability ``p`` or a BPSK-AWGN channel with noise ``sigma``."""
    kind: ChannelKind
    p: Optional[float] = None
    sigma: Optional[float] = None

    def __post_init__(self):
        if self.kind is ChannelKind.BSC:
            if self.p is None or not 0.0 < self.p < 0.5:
                raise ChannelError(f"BSC crossover probability must lie in (0, 0.5), got {self.p}")
        elif self.kind is ChannelKind.AWGN:
            if self.sigma is None or not self.sigma > 0.0:
                raise ChannelError(f"AWGN noise standard deviation must be > 0, got {self.sigma}")

    @classmethod
    def bsc(cls, p: float) -> "ChannelModel":
        return cls(ChannelKind.BSC, p=p)

    @classmethod
    def awgn(cls, sigma: float) -> "ChannelModel":
        return cls(ChannelKind.AWGN, sigma=sigma)

    @property
    def bsc_llr_magnitude(self) -> float:
        """ln((1-p)/p) for a BSC."""
        if self.kind is not ChannelKind.BSC:
            raise ChannelError("LLR magnitude is only constant for the BSC")
        return math.log((1.0 - self.p) / self.p)


def ebn0_to_sigma(ebn0_db: float, rate: float) -> float:
    """Noise standard deviation for a given Eb/N0 (dB) and code rate."""
    if not 0.0 < rate <= 1.0:
        raise ChannelError(f"Code rate must lie in (0, 1], got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def channel_from_param(kind: ChannelKind, param: float, rate: float) -> ChannelModel:
    """Channel for a sweep grid value: p for the BSC, Eb/N0 in dB for AWGN."""
    if kind is ChannelKind.BSC:
        return ChannelModel.bsc(param)
    return ChannelModel.awgn(ebn0_to_sigma(param, rate))


def trial_rng(master_seed: int, grid_index: int, trial_index: int, stream: int = 0) -> np.random.Generator:
    """
    Independent generator for one trial, keyed by (master seed, grid point, trial, stream).

    Any trial can be re-run in isolation and parallel workers reproduce the
    sequential streams exactly.
    """
    sequence = np.random.SeedSequence([master_seed, grid_index, trial_index, stream])
    return np.random.Generator(np.random.PCG64(sequence))


def transmit(ch: ChannelModel, codeword: np.ndarray, seed: SeedLike) -> np.ndarray:
    """
    Send a codeword through the channel.

    Returns:
        Flipped bits (uint8) for the BSC, real channel outputs for AWGN
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    codeword = np.asarray(codeword, dtype=np.uint8)
    if ch.kind is ChannelKind.BSC:
        flips = (rng.random(codeword.shape) < ch.p).astype(np.uint8)
        return codeword ^ flips
    symbols = 1.0 - 2.0 * codeword.astype(np.float64)
    return symbols + rng.normal(0.0, ch.sigma, size=codeword.shape)


def llr(ch: ChannelModel, received: np.ndarray) -> np.ndarray:
    """
    Log-likelihood ratios ln(W(y|0) / W(y|1)), clamped to +/-1e9.

    Raises:
        ChannelError: If a BSC output is not binary
    """
    received = np.asarray(received)
    if ch.kind is ChannelKind.BSC:
        if not np.isin(received, (0, 1)).all():
            raise ChannelError("BSC outputs must be 0/1")
        magnitude = ch.bsc_llr_magnitude
        values = np.where(received == 0, magnitude, -magnitude)
    else:
        values = 2.0 * received.astype(np.float64) / ch.sigma ** 2
    return np.clip(values, -LLR_CLAMP, LLR_CLAMP)


def hard_decide(L: np.ndarray) -> np.ndarray:
    """Bit z is 1 iff L(z) < 0; zero LLRs decide 0."""
    return (np.asarray(L) < 0).astype(np.uint8)
