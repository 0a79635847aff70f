"""
Decoder modules for RMRPA system.

This package wraps each decoding algorithm in a common interface with timing,
validation and metrics, and registers it under its decoder variant name.
"""

from .base_decoder import BaseDecoder, DecoderError, DecoderRegistry, decoder_registry
from . import rm_decoders  # noqa: F401  registers the concrete decoders
from .rm_decoders import create_decoder

__all__ = ['BaseDecoder', 'DecoderError', 'DecoderRegistry', 'decoder_registry', 'create_decoder']
