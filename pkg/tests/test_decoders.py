# -*- coding: utf-8 -*-
"""
测试用例：译码器注册表与统一接口
Test Cases: decoder registry and the common decoder interface
"""

import numpy as np
import pytest

from src.decoders import BaseDecoder, DecoderError, create_decoder, decoder_registry
from src.decoders.rm_decoders import RpaBscDecoder, RpaDecoder, RpaListConcatDecoder
from src.models import DecodeResult, DecoderVariant, ListConfig
from src.utils.list_concat import OuterCode
from src.utils.rm_core import build_code, encode


@pytest.fixture
def code():
    return build_code(4, 2)


@pytest.fixture
def codeword(code):
    return encode(code, np.random.default_rng(8).integers(0, 2, code.k))


class TestRegistry:
    """Every decoder variant is served by a registered class."""

    def test_all_variants_registered(self):
        assert sorted(decoder_registry.list_decoders()) == sorted(v.value for v in DecoderVariant)

    def test_variant_attribute(self):
        for variant in DecoderVariant:
            assert decoder_registry.get(variant).variant is variant

    def test_create_passes_options(self, code):
        decoder = create_decoder(DecoderVariant.RPA_BSC, code, crossover=0.05)
        assert isinstance(decoder, RpaBscDecoder)
        assert decoder.crossover == 0.05

    def test_unused_options_ignored(self, code):
        outer = OuterCode.random(code.k, 1)
        for variant in (DecoderVariant.REED, DecoderVariant.RPA, DecoderVariant.ML):
            decoder = create_decoder(variant, code, outer=outer, crossover=0.1)
            assert decoder.variant is variant

    def test_registered_class_builds_itself(self, code):
        registry = type(decoder_registry)()

        @registry.register(DecoderVariant.RPA)
        class TunedDecoder(RpaDecoder):
            @classmethod
            def from_options(cls, code, decoder_config=None, list_config=None, **options):
                decoder = cls(code, decoder_config, list_config)
                decoder.options = options
                return decoder

        decoder = registry.get(DecoderVariant.RPA).from_options(code, crossover=0.2, outer=None)
        assert isinstance(decoder, TunedDecoder)
        assert decoder.options == {'crossover': 0.2, 'outer': None}

    def test_concat_requires_outer(self, code):
        with pytest.raises(DecoderError):
            create_decoder(DecoderVariant.RPA_LIST_CONCAT, code)
        decoder = create_decoder(DecoderVariant.RPA_LIST_CONCAT, code, outer=OuterCode.random(code.k, 1))
        assert isinstance(decoder, RpaListConcatDecoder)


class TestDecoderRun:
    """Validation, metrics and noiseless decoding through ``run``."""

    @pytest.mark.parametrize("variant", [v for v in DecoderVariant if v is not DecoderVariant.RPA_LIST_CONCAT])
    def test_noiseless_word(self, variant, code, codeword):
        decoder = create_decoder(variant, code, list_config=ListConfig(t=1))
        result = decoder.run(3.0 * (1.0 - 2.0 * codeword))
        assert not result.failure
        np.testing.assert_array_equal(result.codeword, codeword)

    def test_wrong_length(self, code):
        with pytest.raises(DecoderError):
            create_decoder(DecoderVariant.RPA, code).run(np.ones(8))

    def test_non_finite(self, code):
        L = np.ones(code.n)
        L[0] = np.inf
        with pytest.raises(DecoderError):
            create_decoder(DecoderVariant.REED, code).run(L)

    def test_metrics(self, code):
        decoder = create_decoder(DecoderVariant.RPA, code)
        decoder.run(np.ones(code.n))
        decoder.run(-np.ones(code.n))
        metrics = decoder.get_metrics()
        assert metrics['total_runs'] == 2
        assert metrics['failures'] == 0
        assert metrics['average_duration'] >= 0.0
        decoder.reset_metrics()
        assert decoder.get_metrics() == {}

    def test_iterations_recorded(self, code):
        decoder = create_decoder(DecoderVariant.RPA, code)
        decoder.run(np.full(code.n, 2.0))
        assert isinstance(decoder, RpaDecoder)
        assert decoder.last_iterations == 1

    def test_processing_errors_wrapped(self, code):
        class BrokenDecoder(BaseDecoder):
            def process(self, L):
                return DecodeResult(codeword=np.full(3, 2, dtype=np.uint8))

        with pytest.raises(DecoderError):
            BrokenDecoder(code).run(np.ones(code.n))
