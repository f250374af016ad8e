# -*- coding: utf-8 -*-

"""
Vérifications lourdes, activées par variables d'environnement :
- CONCISION_ACCEPTANCE=1 : 10 000 allers-retours du codec (jusqu'à 8 Mio), 1 Mio aléatoire
- CONCISION_CORPUS : corpus réel (répétition inter-blocs, compresseur de référence)
- ANTLR_ROOT + CONCISION_BENCHMARK : pondération d'un dépôt ANTLR 4
"""

import os
import random
import shutil

import numpy as np
import pytest
import yaml

from main import EXIT_OK, main
from src.analysis.benchmark import weighted_median
from src.cleaning.cleaner import clean_sample
from src.compression import lz_codec
from src.compression.compressor import CompressorKind, CompressorSpec, compress, cross_check
from src.corpus.profiles import load_language_profiles, profiles_by_id
from src.corpus.scanner import scan_corpus

MIB = 1024 * 1024

heavy = pytest.mark.skipif(os.environ.get("CONCISION_ACCEPTANCE") != "1",
                           reason="CONCISION_ACCEPTANCE=1 non défini")
needs_corpus = pytest.mark.skipif(not os.environ.get("CONCISION_CORPUS"), reason="CONCISION_CORPUS non défini")
needs_antlr = pytest.mark.skipif(
    not (os.environ.get("ANTLR_ROOT") and os.environ.get("CONCISION_BENCHMARK")),
    reason="ANTLR_ROOT et CONCISION_BENCHMARK requis",
)


def random_input(rng, np_rng):
    # Surtout de petites entrées, quelques-unes jusqu'à 8 Mio
    if rng.random() < 0.001:
        size = rng.randint(MIB, 8 * MIB)
    else:
        size = rng.choice([0, 1, 7, 100, 1000, 4096, 16_384, 65_536])
    kind = rng.randrange(3)
    if kind == 0:
        return np_rng.integers(0, 256, size, dtype=np.uint8).tobytes()
    if kind == 1:
        alphabet = np_rng.integers(0, 256, rng.randint(1, 16), dtype=np.uint8)
        return np_rng.choice(alphabet, size).astype(np.uint8).tobytes()
    chunk = np_rng.integers(32, 127, rng.randint(1, 2000), dtype=np.uint8).tobytes()
    return (chunk * (size // len(chunk) + 1))[:size]


@heavy
def test_ten_thousand_round_trips():
    rng = random.Random(2024)
    np_rng = np.random.default_rng(2024)
    for _ in range(10_000):
        data = random_input(rng, np_rng)
        assert lz_codec.decode(lz_codec.encode(data)) == data


@heavy
def test_one_mebibyte_of_noise_is_incompressible():
    data = np.random.default_rng(3).integers(0, 256, MIB, dtype=np.uint8).tobytes()
    ratio = len(data) / compress(data, CompressorSpec())
    assert 0.98 <= ratio <= 1.01


@heavy
def test_weighted_median_oracle_on_thousand_sets():
    rng = random.Random(31)
    for _ in range(1000):
        n = rng.randint(1, 30)
        values = [rng.choice([1.5, 2.0, 2.5, rng.uniform(1.0, 9.0)]) for _ in range(n)]
        weights = [rng.randint(1, 10_000) for _ in range(n)]
        total = sum(weights)
        expected = min(c for c in values if 2 * sum(w for v, w in zip(values, weights) if v <= c) >= total)
        assert weighted_median(values, weights) == expected


def corpus_samples(min_bytes):
    profiles = load_language_profiles()
    by_id = profiles_by_id(profiles)
    manifest = scan_corpus([os.environ["CONCISION_CORPUS"]], profiles)
    samples = []
    for system, language_id in manifest.pairs():
        paths = system.paths(language_id)
        sample = clean_sample(paths, by_id[language_id], system.system_id)
        if sample.original_bytes_count >= min_bytes:
            samples.append(sample)
    return samples


@needs_corpus
def test_repetition_across_blocks_on_real_samples():
    samples = corpus_samples(8 * MIB)[:5]
    if not samples:
        pytest.skip("aucun échantillon >= 8 Mio dans le corpus")
    spec = CompressorSpec()
    for sample in samples:
        data = sample.cleaned_bytes
        assert compress(data + data, spec) <= 1.10 * compress(data, spec)


@needs_corpus
def test_reference_compressor_agrees():
    command = None
    if shutil.which("xz"):
        command = ("xz", "-9e", "--lzma2=dict=64MiB", "-c")
    elif shutil.which("zstd"):
        command = ("zstd", "--ultra", "-22", "--long=27", "-c")
    if command is None:
        pytest.skip("ni xz ni zstd disponibles")
    samples = corpus_samples(MIB)
    if len(samples) < 10:
        pytest.skip("moins de dix échantillons >= 1 Mio")
    reference = CompressorSpec(name=command[0], kind=CompressorKind.EXTERNAL, external_command=command)
    result = cross_check(samples, CompressorSpec(), reference)
    assert result.max_relative_difference <= 0.05
    if result.ranking_rho is not None:
        assert result.ranking_rho == 1.0


@needs_antlr
def test_antlr_weighting(tmp_path, capsys):
    out = tmp_path / "antlr.yaml"
    code = main([
        "weigh", os.environ["ANTLR_ROOT"], "--benchmark", os.environ["CONCISION_BENCHMARK"],
        "--fallback", "cr=median", "--compare", "python,csharp", "-o", str(out), "-q",
    ])
    assert code == EXIT_OK
    report = yaml.safe_load(out.read_text(encoding="utf-8"))
    languages = {e["language_id"] for e in report["volume"]["languages"]}
    assert {"java", "csharp", "python", "javascript", "shell"} <= languages

    inversion = report["metadata"].get("inversion")
    assert inversion is not None
    if not inversion["inverted"]:
        # signalé, pas bloquant : dépend du benchmark local
        with capsys.disabled():
            print(f"\nInversion python/csharp non reproduite: {inversion['summary']}")
