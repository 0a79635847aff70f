"""
Base decoder class for RMRPA system.

This module defines the abstract base class that all decoders inherit from,
ensuring consistent interface and behavior across the harness and the CLI.
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Type
import time

import numpy as np

from ..models import DecodeResult, DecoderConfig, DecoderVariant, ListConfig
from ..utils.logging_config import LoggerMixin
from ..utils.rm_core import RmCode


class BaseDecoder(ABC, LoggerMixin):
    """
    Abstract base class for all RMRPA decoders.

    A decoder is bound to one RM code and turns an LLR word of length n into a
    DecodeResult. Hard-decision decoders look only at the LLR signs.
    """

    variant: DecoderVariant

    def __init__(self, code: RmCode, decoder_config: Optional[DecoderConfig] = None,
                 list_config: Optional[ListConfig] = None, name: Optional[str] = None):
        """
        Initialize the decoder.

        Args:
            code: Reed-Muller code being decoded
            decoder_config: RPA iteration and voting settings
            list_config: Chase list settings (list decoders only)
            name: Optional decoder name (defaults to class name)
        """
        self.code = code
        self.decoder_config = decoder_config or DecoderConfig()
        self.list_config = list_config or ListConfig()
        self.name = name or self.__class__.__name__
        self.metrics: Dict[str, Any] = {}

        self.logger.debug(f"Initialized {self.name} for RM({code.m},{code.r})")

    @classmethod
    def from_options(cls, code: RmCode, decoder_config: Optional[DecoderConfig] = None,
                     list_config: Optional[ListConfig] = None, **options: Any) -> "BaseDecoder":
        """
        Build the decoder from shared settings plus decoder-specific options.

        Options a decoder does not use are ignored, so callers can pass the
        same keyword set to every registered class.
        """
        return cls(code, decoder_config, list_config)

    @abstractmethod
    def process(self, L: np.ndarray) -> DecodeResult:
        """
        Decode one LLR word.

        Args:
            L: LLR word of length n

        Returns:
            DecodeResult with the decoded word
        """
        pass

    def run(self, L: np.ndarray) -> DecodeResult:
        """
        Run the decoder with timing and error handling.

        Args:
            L: LLR word of length n

        Returns:
            Decoding result

        Raises:
            DecoderError: If decoding fails
        """
        start = time.perf_counter()
        try:
            L = np.asarray(L, dtype=np.float64)
            self._validate_input(L)
            result = self.process(L)
            self._validate_output(result)
        except Exception as e:
            self.logger.error(f"Error in {self.name}: {str(e)}")
            raise DecoderError(f"{self.name} decoding failed: {str(e)}") from e

        self._update_metrics(result, time.perf_counter() - start)
        return result

    def _validate_input(self, L: np.ndarray) -> None:
        """
        Validate the LLR word.

        Raises:
            DecoderError: If the shape is wrong or an entry is not finite
        """
        if L.shape != (self.code.n,):
            raise DecoderError(f"{self.name} expects an LLR word of length {self.code.n}, got shape {L.shape}")
        if not np.isfinite(L).all():
            raise DecoderError(f"{self.name} requires finite LLRs")

    def _validate_output(self, result: DecodeResult) -> None:
        """
        Validate the decoded word.

        Raises:
            DecoderError: If the output is not a binary word of length n
        """
        if result is None or result.codeword.shape != (self.code.n,):
            raise DecoderError(f"{self.name} produced a malformed word")
        if result.codeword.max(initial=0) > 1:
            raise DecoderError(f"{self.name} produced non-binary output")

    def _update_metrics(self, result: DecodeResult, duration: float) -> None:
        self.metrics.update({
            'last_run_duration': duration,
            'total_runs': self.metrics.get('total_runs', 0) + 1,
            'total_duration': self.metrics.get('total_duration', 0.0) + duration,
            'failures': self.metrics.get('failures', 0) + int(result.failure),
        })

    def get_metrics(self) -> Dict[str, Any]:
        """
        Get decoder performance metrics.

        Returns:
            Dictionary containing performance metrics
        """
        metrics = self.metrics.copy()
        if metrics.get('total_runs', 0) > 0:
            metrics['average_duration'] = metrics['total_duration'] / metrics['total_runs']
        return metrics

    def reset_metrics(self) -> None:
        """Reset decoder performance metrics."""
        self.metrics.clear()


class DecoderError(Exception):
    """Exception raised by decoders during processing."""
    pass


class DecoderRegistry:
    """Registry mapping decoder variants to decoder classes."""

    def __init__(self):
        self._decoders: Dict[DecoderVariant, Type[BaseDecoder]] = {}

    def register(self, variant: DecoderVariant):
        """
        Class decorator registering a decoder under ``variant``.

        Args:
            variant: Decoder variant served by the class
        """
        def decorator(cls: Type[BaseDecoder]) -> Type[BaseDecoder]:
            cls.variant = variant
            self._decoders[variant] = cls
            return cls
        return decorator

    def get(self, variant: DecoderVariant) -> Optional[Type[BaseDecoder]]:
        """
        Get decoder class by variant.

        Args:
            variant: Decoder variant

        Returns:
            Decoder class or None if not registered
        """
        return self._decoders.get(variant)

    def list_decoders(self) -> List[str]:
        """
        Get list of registered decoder names.

        Returns:
            List of decoder variant names
        """
        return [variant.value for variant in self._decoders]


# Global decoder registry
decoder_registry = DecoderRegistry()
