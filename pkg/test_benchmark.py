# -*- coding: utf-8 -*-

"""Tests de l'agrégation en benchmark et de sa persistance."""

import io
import logging
import random

import pytest
import yaml

from src.analysis.benchmark import (
    SCHEMA_VERSION, aggregate, benchmark_to_dict, factors_csv, load_benchmark, load_measurements,
    measure_corpus, measurements_csv, measurements_to_document, reaggregate, save_benchmark,
    weighted_median,
)
from src.compression.compressor import CompressionMeasurement, CompressorSpec
from src.corpus.scanner import scan_corpus
from src.utils.errors import ConfigurationError, ParseError, SchemaVersionError
from src.utils.storage import dump_document


def m(system, language, cr, loc, size=200_000, compressor="builtin-lz"):
    """Mesure synthétique de taux `cr` (tailles entières cohérentes)."""
    compressed = max(1, round(size / cr))
    return CompressionMeasurement.from_sizes(system, language, size, compressed, loc, compressor)


def brute_force_median(values, weights):
    total = sum(weights)
    for candidate in sorted(values):
        if 2 * sum(w for v, w in zip(values, weights) if v <= candidate) >= total:
            return candidate
    raise AssertionError("aucune coupure")


def test_weighted_median_known_values():
    assert weighted_median([2.0, 3.0, 10.0], [100, 100, 100]) == 3.0
    assert weighted_median([2.0, 9.0, 10.0], [1000, 10, 10]) == 2.0
    assert weighted_median([5.0], [1]) == 5.0


def test_weighted_median_matches_definition():
    rng = random.Random(42)
    for _ in range(500):
        n = rng.randint(1, 12)
        values = [round(rng.uniform(1.0, 8.0), rng.choice([0, 1, 3])) for _ in range(n)]
        weights = [rng.randint(1, 5000) for _ in range(n)]
        assert weighted_median(values, weights) == brute_force_median(values, weights)


def test_weighted_median_invariances():
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(1, 10)
        values = [rng.uniform(1.0, 6.0) for _ in range(n)]
        weights = [rng.randint(1, 100) for _ in range(n)]
        reference = weighted_median(values, weights)
        order = list(range(n))
        rng.shuffle(order)
        assert weighted_median([values[i] for i in order], [weights[i] for i in order]) == reference
        assert weighted_median(values * 2, weights * 2) == reference


def test_aggregate_thresholds_and_characteristic_value():
    measurements = [
        m("a", "java", 2.0, 100), m("b", "java", 3.0, 100), m("c", "java", 10.0, 100),
        m("a", "python", 2.5, 100), m("b", "python", 2.6, 100, size=10),
    ]
    db = aggregate(measurements, min_sample_bytes=1000, min_systems=3)
    assert db.factor("java").cr_characteristic == pytest.approx(3.0)
    assert db.factor("java").sample_count == 3
    assert db.factor("java").total_loc == 300
    assert db.insufficient_data == ("python",)
    assert len(db.provenance) == 5


def test_characteristic_value_is_bounded_by_samples():
    rng = random.Random(8)
    measurements = [m(f"s{i}", "go", rng.uniform(1.5, 6.0), rng.randint(10, 5000)) for i in range(9)]
    factor = aggregate(measurements, min_systems=5).factor("go")
    ratios = [x.compression_ratio for x in measurements]
    assert min(ratios) <= factor.cr_characteristic <= max(ratios)
    assert factor.cr_p25 <= factor.cr_p75


def test_aggregate_is_permutation_and_duplication_invariant():
    rng = random.Random(13)
    measurements = [m(f"s{i}", rng.choice(["c", "go"]), rng.uniform(2, 5), rng.randint(1, 900))
                    for i in range(20)]
    reference = aggregate(measurements, min_systems=2).factors
    shuffled = list(measurements)
    rng.shuffle(shuffled)
    assert aggregate(shuffled, min_systems=2).factors == reference
    assert aggregate(measurements + measurements, min_systems=2).factors == reference


def test_conflicting_duplicates_are_rejected():
    with pytest.raises(ConfigurationError):
        aggregate([m("a", "c", 2.0, 10), m("a", "c", 3.0, 10)])


def test_mixed_compressors_are_rejected():
    with pytest.raises(ConfigurationError):
        aggregate([m("a", "c", 2.0, 10), m("b", "c", 2.0, 10, compressor="xz")])


def test_empty_input_gives_empty_benchmark():
    db = aggregate([])
    assert db.factors == {}
    assert db.insufficient_data == ()


def test_reaggregate_changes_thresholds_without_compressing():
    measurements = [m(f"s{i}", "rust", 2.0 + i / 10, 100) for i in range(3)]
    db = aggregate(measurements, min_systems=5)
    assert db.factor("rust") is None
    relaxed = reaggregate(db, min_systems=3)
    assert relaxed.factor("rust").cr_characteristic == pytest.approx(2.1, rel=1e-3)


def test_save_and_load_benchmark(tmp_path):
    db = aggregate([m(f"s{i}", "java", 3.0 + i, 100 * (i + 1)) for i in range(5)], created_at=None)
    path = tmp_path / "bench.yaml"
    save_benchmark(db, path)
    assert load_benchmark(path) == db

    buffer = io.StringIO()
    save_benchmark(db, buffer, fmt="json")
    buffer.seek(0)
    assert load_benchmark(buffer) == db


def test_truncated_benchmark_is_detected(tmp_path):
    db = aggregate([m(f"s{i}", "java", 3.0, 100) for i in range(5)])
    data = benchmark_to_dict(db)
    data["provenance"] = data["provenance"][:-1]
    path = tmp_path / "bench.yaml"
    path.write_text(dump_document(data))
    with pytest.raises(ParseError):
        load_benchmark(path)


def test_schema_version_mismatch_names_both(tmp_path):
    data = benchmark_to_dict(aggregate([]))
    data["schema_version"] = SCHEMA_VERSION + 1
    path = tmp_path / "bench.yaml"
    path.write_text(yaml.safe_dump(data))
    with pytest.raises(SchemaVersionError) as info:
        load_benchmark(path)
    assert str(SCHEMA_VERSION + 1) in str(info.value) and str(SCHEMA_VERSION) in str(info.value)


def test_measurement_tables(tmp_path):
    measurements = [m("a", "java", 2.0, 10), m("b", "python", 3.0, 20)]
    csv_path = tmp_path / "m.csv"
    csv_path.write_text(measurements_csv(measurements))
    assert load_measurements(csv_path) == measurements
    yaml_path = tmp_path / "m.yaml"
    yaml_path.write_text(dump_document(measurements_to_document(measurements)))
    assert load_measurements(yaml_path) == measurements
    assert csv_path.read_text().splitlines()[0] == "system,language,original_bytes,compressed_bytes,cr,loc,files,compressor"


def test_factors_csv_header():
    db = aggregate([m(f"s{i}", "java", 4.0, 100) for i in range(5)])
    lines = factors_csv(db).splitlines()
    assert lines[0] == "language,cr,samples,loc"
    assert lines[1].startswith("java,4.0,5,500")


def test_measure_corpus_is_independent_of_jobs(make_tree, profiles):
    files = {}
    for system in ("one", "two", "three"):
        files[f"{system}/Main.java"] = "class Main {\n  int x = 1;\n}\n" * 20
        files[f"{system}/tool.py"] = "def f(x):\n    return x + 1\n" * 15
        files[f"{system}/doc.py"] = "# comment only\n"
    files["empty/notes.txt"] = "nothing\n"
    manifest = scan_corpus([make_tree(files)], profiles)
    sequential = measure_corpus(manifest, profiles, CompressorSpec(), jobs=1)
    parallel = measure_corpus(manifest, profiles, CompressorSpec(), jobs=2)
    assert sequential == parallel
    assert [(x.system_id, x.language_id) for x in sequential] == [
        ("one", "java"), ("one", "python"), ("three", "java"), ("three", "python"),
        ("two", "java"), ("two", "python"),
    ]


def test_system_with_only_unknown_files_gives_no_measurement(make_tree, profiles, caplog):
    root = make_tree({"docs/README": "text\n", "docs/notes.txt": "more text\n", "docs/Makefile": "all:\n"})
    manifest = scan_corpus([root], profiles)
    with caplog.at_level(logging.WARNING, logger="Concision.Benchmark"):
        measurements = measure_corpus(manifest, profiles, CompressorSpec())
    assert measurements == []
    warnings = [r for r in caplog.records if r.name == "Concision.Benchmark" and "docs" in r.getMessage()]
    assert len(warnings) == 1
