# -*- coding: utf-8 -*-

"""Tests du codec LZ et de la façade de compression."""

import random
import sys

import numpy as np
import pytest

from src.cleaning.cleaner import CleanedSample
from src.compression import lz_codec
from src.compression.compressor import (
    CompressorKind, CompressorSpec, compress, cross_check, measure,
)
from src.utils.errors import ConfigurationError, MeasurementError, SkippedEmpty

ZLIB_COMMAND = (
    sys.executable, "-c",
    "import sys, zlib; sys.stdout.buffer.write(zlib.compress(sys.stdin.buffer.read(), 9))",
)


def pseudo_source(rng, size, header="// generated module\n"):
    """Texte ressemblant à du code, déterministe pour une graine donnée."""
    words = ["int", "return", "if", "for", "value", "index", "count", "result", "buffer", "node"]
    out = [header]
    total = len(header)
    while total < size:
        line = "    " * rng.randint(0, 3) + " ".join(rng.choice(words) for _ in range(rng.randint(2, 7)))
        line += f" = {rng.randint(0, 999)};\n"
        out.append(line)
        total += len(line)
    return "".join(out).encode("utf-8")[:size]


def sample_of(data, system="sys", language="java"):
    return CleanedSample(system, language, data, data.count(b"\n"), len(data), 1)


def test_round_trip_mixed_inputs():
    rng = random.Random(7)
    np_rng = np.random.default_rng(7)
    for i in range(120):
        kind = i % 4
        size = rng.choice([0, 1, 3, 4, 5, 17, 255, 1024, 4096, 20000])
        if kind == 0:
            data = np_rng.integers(0, 256, size, dtype=np.uint8).tobytes()
        elif kind == 1:
            data = pseudo_source(rng, size)
        elif kind == 2:
            data = bytes([rng.randrange(3)]) * size
        else:
            data = (b"abcab" * (size // 5 + 1))[:size]
        assert lz_codec.decode(lz_codec.encode(data)) == data


def test_header_format():
    blob = lz_codec.encode(b"hello hello hello hello")
    assert blob[:2] == lz_codec.MAGIC
    assert blob[2] == lz_codec.FORMAT_VERSION
    assert blob[3] in (lz_codec.MODE_CODED, lz_codec.MODE_STORED)


def test_incompressible_input_is_stored_with_bounded_overhead():
    data = np.random.default_rng(1).integers(0, 256, 128 * 1024, dtype=np.uint8).tobytes()
    blob = lz_codec.encode(data)
    assert blob[3] == lz_codec.MODE_STORED
    assert len(blob) <= len(data) + lz_codec.MAX_HEADER_BYTES
    ratio = len(data) / len(blob)
    assert 0.98 <= ratio <= 1.01


def test_repetition_across_the_whole_stream_is_found():
    data = pseudo_source(random.Random(3), 64 * 1024, header="/* unique header 0x5eed */\n")
    single = len(lz_codec.encode(data))
    double = len(lz_codec.encode(data + data))
    assert double <= 1.10 * single


def test_redundant_text_has_high_ratio():
    data = pseudo_source(random.Random(11), 32 * 1024)
    assert len(data) / compress(data, CompressorSpec()) > 2.0


def test_bounded_window_still_round_trips():
    data = pseudo_source(random.Random(5), 8000)
    assert lz_codec.decode(lz_codec.encode(data, window=16 * 1024 * 1024)) == data


def test_corrupt_stream_is_rejected():
    with pytest.raises(ValueError):
        lz_codec.decode(b"XX\x01\x00\x05hello")
    blob = bytearray(lz_codec.encode(b"abc" * 100))
    blob[2] = 99
    with pytest.raises(ValueError):
        lz_codec.decode(bytes(blob))


def test_truncated_payload_is_rejected():
    blob = lz_codec.encode(pseudo_source(random.Random(8), 16 * 1024))
    assert blob[3] == lz_codec.MODE_CODED
    with pytest.raises(ValueError):
        lz_codec.decode(blob[:len(blob) // 2])


def test_dictionary_covers_the_input_within_the_window():
    assert lz_codec.dict_size_for(10) == lz_codec.MIN_DICT_SIZE
    assert lz_codec.dict_size_for(5_000_000) == 5_000_000
    assert lz_codec.dict_size_for(5_000_000, window=16 * 1024 * 1024) == 5_000_000
    assert lz_codec.dict_size_for(40_000_000, window=16 * 1024 * 1024) == 16 * 1024 * 1024
    assert lz_codec.dict_size_for(2 ** 40) == lz_codec.MAX_DICT_SIZE


@pytest.mark.parametrize("seed", range(6))
def test_concatenation_costs_at_most_the_parts(seed):
    rng = random.Random(seed)
    np_rng = np.random.default_rng(seed)
    spec = CompressorSpec()
    x = pseudo_source(rng, rng.randint(1, 40_000))
    if seed % 2:
        y = np_rng.integers(0, 256, rng.randint(1, 20_000), dtype=np.uint8).tobytes()
    else:
        y = pseudo_source(rng, rng.randint(1, 40_000), header="// other module\n")
    assert compress(x + y, spec) <= compress(x, spec) + compress(y, spec) + 1024


def test_empty_input_is_a_precondition_violation():
    with pytest.raises(ValueError):
        compress(b"", CompressorSpec())


def test_small_window_is_rejected():
    with pytest.raises(ConfigurationError):
        CompressorSpec(window_bytes=1024)
    assert CompressorSpec(window_bytes=0).window_bytes == 0


def test_spec_from_config_splits_command():
    spec = CompressorSpec.from_config({"kind": "external", "name": "xz", "external_command": "xz -9 -c"})
    assert spec.kind is CompressorKind.EXTERNAL
    assert spec.external_command == ("xz", "-9", "-c")
    with pytest.raises(ConfigurationError):
        CompressorSpec.from_config({"kind": "zip"})


def test_measure_computes_original_over_compressed():
    data = pseudo_source(random.Random(2), 4096)
    measurement = measure(sample_of(data), CompressorSpec())
    assert measurement.original_bytes == len(data)
    assert measurement.compression_ratio == len(data) / measurement.compressed_bytes
    assert measurement.compressor_name == "builtin-lz"


def test_empty_sample_is_skipped():
    with pytest.raises(SkippedEmpty):
        measure(sample_of(b""), CompressorSpec())


def test_external_compressor():
    spec = CompressorSpec(name="zlib", kind=CompressorKind.EXTERNAL, external_command=ZLIB_COMMAND)
    data = pseudo_source(random.Random(4), 4096)
    assert 0 < compress(data, spec) < len(data)


def test_external_failure_keeps_stderr():
    command = (sys.executable, "-c", "import sys; sys.stderr.write('boom'); sys.exit(3)")
    spec = CompressorSpec(name="broken", kind=CompressorKind.EXTERNAL, external_command=command)
    with pytest.raises(MeasurementError) as info:
        compress(b"data", spec)
    assert "boom" in info.value.stderr


def test_cross_check_between_two_compressors():
    rng = random.Random(9)
    samples = [
        sample_of(pseudo_source(rng, 6000), system=f"s{i}", language=lang)
        for i, lang in enumerate(["java", "python", "shell"])
    ]
    external = CompressorSpec(name="zlib", kind=CompressorKind.EXTERNAL, external_command=ZLIB_COMMAND)
    result = cross_check(samples, CompressorSpec(), external)
    assert len(result.rows) == 3
    assert result.max_relative_difference >= 0.0
    assert result.ranking_rho is None or -1.0 <= result.ranking_rho <= 1.0
