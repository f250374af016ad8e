# -*- coding: utf-8 -*-

"""
Fixtures partagées des tests.
"""

from pathlib import Path

import pytest

from src.analysis.benchmark import BenchmarkDb, ConcisenessFactor, ProvenanceEntry
from src.corpus.profiles import load_language_profiles, profiles_by_id

ROOT = Path(__file__).resolve().parent
GOLDEN_DIR = ROOT / "fixtures" / "golden"


@pytest.fixture(scope="session")
def profiles():
    return load_language_profiles()


@pytest.fixture(scope="session")
def profile_map(profiles):
    return profiles_by_id(profiles)


def write_tree(root, files):
    """Crée une arborescence {chemin relatif: contenu (str ou bytes)}."""
    root = Path(root)
    for rel, content in files.items():
        path = root / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(content, bytes):
            path.write_bytes(content)
        else:
            path.write_text(content, encoding="utf-8")
    return root


@pytest.fixture
def make_tree(tmp_path):
    def _make(files, name="corpus"):
        return write_tree(tmp_path / name, files)
    return _make


def make_benchmark(crs, compressor="builtin-lz"):
    """BenchmarkDb minimal à partir de {langage: CR caractéristique}."""
    factors = {
        lang: ConcisenessFactor(
            language_id=lang, cr_characteristic=float(cr), sample_count=5, total_loc=1000,
            cr_p25=float(cr), cr_p75=float(cr), min_sample_bytes=0, min_systems=1,
        )
        for lang, cr in crs.items()
    }
    provenance = tuple(
        ProvenanceEntry(f"sys-{lang}", lang, float(cr), 1000, 3000, int(3000 / cr))
        for lang, cr in sorted(crs.items())
    )
    return BenchmarkDb(
        created_at=None, compressor_name=compressor, min_sample_bytes=0, min_systems=1,
        factors=factors, provenance=provenance,
    )


@pytest.fixture
def benchmark_factory():
    return make_benchmark


def golden_cases():
    """Fichiers de référence du nettoyeur : (langage, chemin du `.input`)."""
    return sorted(
        (path.parent.name, path) for path in GOLDEN_DIR.glob("*/*.input")
    )


def read_golden(path):
    """
    Lit un cas de référence : `<nom>.input` est le source tel quel,
    `<nom>.expected` donne une classe (C, K ou B) par ligne physique.

    Returns:
        tuple[str, list[str]]: Texte source, classes attendues
    """
    text = path.read_bytes().decode("utf-8")
    expected_text = path.with_suffix(".expected").read_text(encoding="utf-8")
    expected = [line.strip() for line in expected_text.splitlines() if line.strip()]
    return text, expected
