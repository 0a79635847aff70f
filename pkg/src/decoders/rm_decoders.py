"""
Concrete Reed-Muller decoders.

Each class adapts one decoding function of ``src.utils`` to the BaseDecoder
interface and registers itself under its decoder variant.
"""

from typing import Any, Optional

import numpy as np

from ..models import DecodeResult, DecoderConfig, DecoderVariant, ListConfig
from ..utils.channels import hard_decide
from ..utils.list_concat import OuterCode, ml_decode_exhaustive, rpa_list_concat_decode, rpa_list_decode
from ..utils.rm_core import RmCode, reed_decode
from ..utils.rpa import rpa_decode, rpa_decode_bsc
from .base_decoder import BaseDecoder, DecoderError, decoder_registry


@decoder_registry.register(DecoderVariant.REED)
class ReedDecoder(BaseDecoder):
    """Reed's majority-logic decoder on the hard decisions."""

    def process(self, L: np.ndarray) -> DecodeResult:
        _, codeword = reed_decode(self.code, hard_decide(L))
        return DecodeResult(codeword=codeword)


@decoder_registry.register(DecoderVariant.RPA_BSC)
class RpaBscDecoder(BaseDecoder):
    """Hard-decision RPA; ``crossover`` sets the LLR magnitude of the first-order base case."""

    def __init__(self, code: RmCode, decoder_config: Optional[DecoderConfig] = None,
                 list_config: Optional[ListConfig] = None, name: Optional[str] = None,
                 crossover: Optional[float] = None):
        super().__init__(code, decoder_config, list_config, name)
        self.crossover = crossover
        self.last_iterations = 0

    @classmethod
    def from_options(cls, code: RmCode, decoder_config: Optional[DecoderConfig] = None,
                     list_config: Optional[ListConfig] = None, **options: Any) -> "RpaBscDecoder":
        return cls(code, decoder_config, list_config, crossover=options.get('crossover'))

    def process(self, L: np.ndarray) -> DecodeResult:
        word, iterations = rpa_decode_bsc(hard_decide(L), self.code.m, self.code.r,
                                          self.decoder_config, p=self.crossover, return_iterations=True)
        self.last_iterations = int(iterations)
        return DecodeResult(codeword=word)


@decoder_registry.register(DecoderVariant.RPA)
class RpaDecoder(BaseDecoder):
    """Soft-decision RPA on the LLRs."""

    def __init__(self, code: RmCode, decoder_config: Optional[DecoderConfig] = None,
                 list_config: Optional[ListConfig] = None, name: Optional[str] = None):
        super().__init__(code, decoder_config, list_config, name)
        self.last_iterations = 0

    def process(self, L: np.ndarray) -> DecodeResult:
        word, iterations = rpa_decode(L, self.code.m, self.code.r, self.decoder_config, return_iterations=True)
        self.last_iterations = int(iterations)
        return DecodeResult(codeword=word)


@decoder_registry.register(DecoderVariant.RPA_LIST)
class RpaListDecoder(BaseDecoder):
    """Chase list of RPA decodes followed by correlation selection."""

    def process(self, L: np.ndarray) -> DecodeResult:
        return DecodeResult(codeword=rpa_list_decode(L, self.code, self.decoder_config, self.list_config))


@decoder_registry.register(DecoderVariant.RPA_LIST_CONCAT)
class RpaListConcatDecoder(BaseDecoder):
    """List decoding filtered by an outer random parity-check code."""

    def __init__(self, code: RmCode, decoder_config: Optional[DecoderConfig] = None,
                 list_config: Optional[ListConfig] = None, name: Optional[str] = None,
                 outer: Optional[OuterCode] = None):
        super().__init__(code, decoder_config, list_config, name)
        if outer is None:
            raise DecoderError(f"{self.name} requires an outer code")
        self.outer = outer

    @classmethod
    def from_options(cls, code: RmCode, decoder_config: Optional[DecoderConfig] = None,
                     list_config: Optional[ListConfig] = None, **options: Any) -> "RpaListConcatDecoder":
        return cls(code, decoder_config, list_config, outer=options.get('outer'))

    def process(self, L: np.ndarray) -> DecodeResult:
        return rpa_list_concat_decode(L, self.code, self.decoder_config, self.list_config, self.outer)


@decoder_registry.register(DecoderVariant.ML)
class MlDecoder(BaseDecoder):
    """Exhaustive maximum-likelihood decoding over the codebook (k <= 16)."""

    def process(self, L: np.ndarray) -> DecodeResult:
        return DecodeResult(codeword=ml_decode_exhaustive(L, self.code))


def create_decoder(variant: DecoderVariant, code: RmCode,
                   decoder_config: Optional[DecoderConfig] = None,
                   list_config: Optional[ListConfig] = None,
                   outer: Optional[OuterCode] = None,
                   crossover: Optional[float] = None) -> BaseDecoder:
    """
    Instantiate the registered decoder for ``variant``.

    Raises:
        DecoderError: If the variant is not registered or requirements are missing
    """
    cls = decoder_registry.get(variant)
    if cls is None:
        raise DecoderError(f"No decoder registered for '{variant.value}'")
    return cls.from_options(code, decoder_config, list_config, outer=outer, crossover=crossover)
