# -*- coding: utf-8 -*-

"""
Module du Benchmark
-------------------
Agrège les mesures par échantillon de nombreux systèmes en un facteur
de concision caractéristique par langage, après exclusion des petits
échantillons, puis sauvegarde/recharge le benchmark.

La valeur caractéristique est la médiane pondérée par les LOC :
le plus petit CR c tel que les échantillons de CR <= c réunissent
au moins la moitié des LOC du langage.
"""

import logging
import multiprocessing as mp
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

import numpy as np

from ..cleaning.cleaner import clean_sample
from ..compression.compressor import CompressionMeasurement, measure
from ..corpus.profiles import profiles_by_id
from ..utils.errors import (
    ConfigurationError, MeasurementError, ParseError, SchemaVersionError, SkippedEmpty,
)
from ..utils.storage import (
    atomic_write_text, dump_document, format_ratio, load_document, read_csv, render_csv,
)

SCHEMA_VERSION = 1
DEFAULT_MIN_SAMPLE_BYTES = 100 * 1024
DEFAULT_MIN_SYSTEMS = 5

MEASUREMENT_COLUMNS = (
    "system", "language", "original_bytes", "compressed_bytes", "cr", "loc", "files", "compressor",
)
FACTOR_COLUMNS = ("language", "cr", "samples", "loc")

logger = logging.getLogger('Concision.Benchmark')


@dataclass(frozen=True)
class ConcisenessFactor:
    """Facteur de concision caractéristique d'un langage."""
    language_id: str
    cr_characteristic: float
    sample_count: int
    total_loc: int
    cr_p25: float
    cr_p75: float
    min_sample_bytes: int
    min_systems: int


@dataclass(frozen=True)
class ProvenanceEntry:
    """Trace d'un échantillon mesuré (permet de ré-agréger sans recompresser)."""
    system_id: str
    language_id: str
    cr: float
    loc: int
    bytes: int
    compressed_bytes: int
    files: int = 0


@dataclass(frozen=True)
class BenchmarkDb:
    """Benchmark complet : facteurs, langages insuffisants et provenance."""
    created_at: Optional[str]
    compressor_name: str
    min_sample_bytes: int
    min_systems: int
    factors: dict = field(default_factory=dict)
    insufficient_data: tuple = ()
    provenance: tuple = ()
    schema_version: int = SCHEMA_VERSION

    def factor(self, language_id):
        return self.factors.get(language_id)

    def median_factor(self):
        """Médiane (non pondérée) des CR caractéristiques; None si aucun facteur."""
        if not self.factors:
            return None
        return float(np.median([f.cr_characteristic for f in self.factors.values()]))

    def measurements(self):
        """Reconstruit les mesures depuis la provenance."""
        return [
            CompressionMeasurement.from_sizes(
                p.system_id, p.language_id, p.bytes, p.compressed_bytes, p.loc, self.compressor_name,
                p.files,
            )
            for p in self.provenance
        ]


def weighted_median(values, weights):
    """
    Médiane pondérée : plus petite valeur c telle que le poids cumulé des
    valeurs <= c atteigne au moins la moitié du poids total.

    Args:
        values (array-like): Valeurs
        weights (array-like): Poids positifs ou nuls

    Returns:
        float
    """
    values = np.asarray(values, dtype=float)
    weights = np.asarray(weights, dtype=np.int64)
    if values.size == 0:
        raise ValueError("Médiane pondérée d'un ensemble vide")
    order = np.argsort(values, kind="stable")
    cumulative = np.cumsum(weights[order])
    total = cumulative[-1]
    if total <= 0:
        return float(np.median(values))
    index = int(np.argmax(2 * cumulative >= total))
    return float(values[order][index])


def _measure_task(task):
    """Nettoie puis mesure un couple (système, langage); exécuté dans un processus de travail."""
    system_id, language_id, paths, profile, spec = task
    try:
        sample = clean_sample(paths, profile, system_id)
        return "ok", system_id, language_id, measure(sample, spec)
    except SkippedEmpty as e:
        return "empty", system_id, language_id, str(e)
    except (MeasurementError, OSError, ValueError) as e:
        return "error", system_id, language_id, str(e)


class CorpusMeasurer:
    """
    Orchestration nettoyage + compression sur tout un manifeste.
    Les erreurs par échantillon sont collectées sans interrompre l'exécution.
    """

    def __init__(self, profiles, spec, jobs=1):
        """
        Args:
            profiles (list[LanguageProfile]): Profils actifs
            spec (CompressorSpec): Compresseur
            jobs (int): Nombre de processus de travail
        """
        self.logger = logging.getLogger('Concision.Benchmark')
        self.profiles = profiles_by_id(profiles)
        self.spec = spec
        self.jobs = max(1, int(jobs))
        self.failures = []
        self.skipped_empty = []

    def _tasks(self, manifest):
        for system in manifest.systems:
            if not system.files:
                self.logger.warning(f"Système {system.system_id}: aucun fichier de langage reconnu")
                self.skipped_empty.append((system.system_id, None))
                continue
            for language_id in system.languages:
                yield (system.system_id, language_id, system.paths(language_id),
                       self.profiles[language_id], self.spec)

    def run(self, manifest):
        """
        Mesure chaque couple (système, langage) du manifeste.

        Returns:
            list[CompressionMeasurement]: Triée par (système, langage)
        """
        tasks = list(self._tasks(manifest))
        if self.jobs > 1 and len(tasks) > 1:
            with mp.Pool(processes=self.jobs) as pool:
                results = pool.map(_measure_task, tasks, chunksize=1)
        else:
            results = [_measure_task(task) for task in tasks]

        measurements = []
        for status, system_id, language_id, payload in results:
            if status == "ok":
                measurements.append(payload)
            elif status == "empty":
                self.skipped_empty.append((system_id, language_id))
                self.logger.info(f"Échantillon vide ignoré: {system_id}/{language_id}")
            else:
                self.failures.append((system_id, language_id, payload))
                self.logger.error(f"Échec de mesure {system_id}/{language_id}: {payload}")

        measurements.sort(key=lambda m: (m.system_id, m.language_id))
        self.logger.info(
            f"{len(measurements)} mesures, {len(self.skipped_empty)} vides, {len(self.failures)} échecs"
        )
        return measurements


def measure_corpus(manifest, profiles, spec, jobs=1):
    """
    Mesure un corpus complet (raccourci de CorpusMeasurer).

    Returns:
        list[CompressionMeasurement]
    """
    return CorpusMeasurer(profiles, spec, jobs).run(manifest)


def _check_single_compressor(measurements):
    names = sorted({m.compressor_name for m in measurements})
    if len(names) > 1:
        raise ConfigurationError(f"Mesures issues de plusieurs compresseurs: {', '.join(names)}")
    return names[0] if names else ""


def _deduplicate(measurements):
    """Élimine les doublons identiques; refuse les doublons contradictoires."""
    unique = {}
    for m in measurements:
        key = (m.system_id, m.language_id)
        if key in unique and unique[key] != m:
            raise ConfigurationError(f"Mesures contradictoires pour {key[0]}/{key[1]}")
        unique[key] = m
    return [unique[key] for key in sorted(unique)]


def aggregate(measurements, min_sample_bytes=DEFAULT_MIN_SAMPLE_BYTES, min_systems=DEFAULT_MIN_SYSTEMS,
              created_at=None):
    """
    Agrège des mesures en benchmark.

    Args:
        measurements (list[CompressionMeasurement]): Mesures d'un seul compresseur
        min_sample_bytes (int): Taille minimale d'un échantillon retenu
        min_systems (int): Nombre minimal de systèmes par langage
        created_at (str | None): Horodatage (None en mode reproductible)

    Returns:
        BenchmarkDb
    """
    if min_systems < 1 or min_sample_bytes < 0:
        raise ConfigurationError("Seuils invalides")
    measurements = _deduplicate(measurements)
    compressor_name = _check_single_compressor(measurements)

    by_language = {}
    for m in measurements:
        by_language.setdefault(m.language_id, []).append(m)

    factors = {}
    insufficient = []
    for language_id in sorted(by_language):
        surviving = [m for m in by_language[language_id] if m.original_bytes >= min_sample_bytes]
        if len(surviving) < min_systems:
            insufficient.append(language_id)
            logger.info(
                f"{language_id}: {len(surviving)} systèmes retenus < {min_systems}, données insuffisantes"
            )
            continue
        ratios = np.array([m.compression_ratio for m in surviving], dtype=float)
        locs = np.array([m.loc for m in surviving], dtype=np.int64)
        factors[language_id] = ConcisenessFactor(
            language_id=language_id,
            cr_characteristic=weighted_median(ratios, locs),
            sample_count=len(surviving),
            total_loc=int(locs.sum()),
            cr_p25=float(np.percentile(ratios, 25)),
            cr_p75=float(np.percentile(ratios, 75)),
            min_sample_bytes=int(min_sample_bytes),
            min_systems=int(min_systems),
        )

    provenance = tuple(
        ProvenanceEntry(m.system_id, m.language_id, m.compression_ratio, m.loc, m.original_bytes,
                        m.compressed_bytes, m.files_included)
        for m in measurements
    )
    return BenchmarkDb(
        created_at=created_at,
        compressor_name=compressor_name,
        min_sample_bytes=int(min_sample_bytes),
        min_systems=int(min_systems),
        factors=factors,
        insufficient_data=tuple(insufficient),
        provenance=provenance,
    )


def reaggregate(db, min_sample_bytes=None, min_systems=None, created_at=None):
    """Ré-agrège un benchmark avec de nouveaux seuils, sans recompresser."""
    return aggregate(
        db.measurements(),
        db.min_sample_bytes if min_sample_bytes is None else min_sample_bytes,
        db.min_systems if min_systems is None else min_systems,
        created_at=created_at,
    )


def now_timestamp():
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


# --- Persistance -----------------------------------------------------------

def benchmark_to_dict(db):
    return {
        'schema_version': db.schema_version,
        'metadata': {'created_at': db.created_at},
        'compressor': db.compressor_name,
        'thresholds': {'min_sample_bytes': db.min_sample_bytes, 'min_systems': db.min_systems},
        'counts': {
            'factors': len(db.factors),
            'insufficient_data': len(db.insufficient_data),
            'provenance': len(db.provenance),
        },
        'factors': {lang: asdict(f) for lang, f in sorted(db.factors.items())},
        'insufficient_data': list(db.insufficient_data),
        'provenance': [asdict(p) for p in db.provenance],
    }


def _require(mapping, key, where):
    if not isinstance(mapping, dict) or key not in mapping:
        raise ParseError(f"Champ manquant '{key}'", where)
    return mapping[key]


def benchmark_from_dict(data, source="<benchmark>"):
    """
    Reconstruit un BenchmarkDb en validant la structure.

    Raises:
        SchemaVersionError: version différente de SCHEMA_VERSION
        ParseError: structure incomplète (fichier tronqué)
    """
    if not isinstance(data, dict):
        raise ParseError("Le benchmark doit être un dictionnaire", source)
    version = _require(data, 'schema_version', source)
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(version, SCHEMA_VERSION)
    try:
        thresholds = _require(data, 'thresholds', source)
        counts = _require(data, 'counts', source)
        factors = {
            lang: ConcisenessFactor(**entry)
            for lang, entry in (_require(data, 'factors', source) or {}).items()
        }
        insufficient = tuple(_require(data, 'insufficient_data', source) or ())
        provenance = tuple(ProvenanceEntry(**entry) for entry in (_require(data, 'provenance', source) or []))
        db = BenchmarkDb(
            created_at=(_require(data, 'metadata', source) or {}).get('created_at'),
            compressor_name=str(_require(data, 'compressor', source) or ""),
            min_sample_bytes=int(_require(thresholds, 'min_sample_bytes', source)),
            min_systems=int(_require(thresholds, 'min_systems', source)),
            factors=factors,
            insufficient_data=insufficient,
            provenance=provenance,
        )
    except TypeError as e:
        raise ParseError(f"Entrée invalide: {str(e)}", source) from e

    expected = (counts.get('factors'), counts.get('insufficient_data'), counts.get('provenance'))
    found = (len(db.factors), len(db.insufficient_data), len(db.provenance))
    if expected != found:
        raise ParseError(f"Benchmark incomplet (attendu {expected}, lu {found})", source)
    return db


def save_benchmark(db, sink, fmt='yaml'):
    """
    Sauvegarde un benchmark.

    Args:
        db (BenchmarkDb): Benchmark
        sink (str | Path | flux texte): Destination (écriture atomique pour un chemin)
        fmt (str): 'yaml' ou 'json'
    """
    text = dump_document(benchmark_to_dict(db), 'json' if fmt == 'json' else 'yaml')
    if hasattr(sink, 'write'):
        sink.write(text)
    else:
        atomic_write_text(sink, text)
        logger.info(f"Benchmark sauvegardé: {sink}")


def load_benchmark(source):
    """
    Charge un benchmark.

    Args:
        source (str | Path | flux texte): Origine

    Returns:
        BenchmarkDb
    """
    if hasattr(source, 'read'):
        text, name = source.read(), "<flux>"
    else:
        text, name = Path(source).read_text(encoding='utf-8'), str(source)
    return benchmark_from_dict(load_document(text, name), name)


def factors_csv(db):
    """Export CSV des facteurs : language,cr,samples,loc."""
    rows = [
        (lang, format_ratio(f.cr_characteristic), f.sample_count, f.total_loc)
        for lang, f in sorted(db.factors.items())
    ]
    return render_csv(FACTOR_COLUMNS, rows)


# --- Tables de mesures -----------------------------------------------------

def measurements_to_document(measurements, created_at=None):
    return {
        'schema_version': SCHEMA_VERSION,
        'metadata': {'created_at': created_at},
        'measurements': [m.to_dict() for m in measurements],
    }


def measurements_csv(measurements):
    rows = [
        (m.system_id, m.language_id, m.original_bytes, m.compressed_bytes,
         format_ratio(m.compression_ratio), m.loc, m.files_included, m.compressor_name)
        for m in measurements
    ]
    return render_csv(MEASUREMENT_COLUMNS, rows)


def load_measurements(path):
    """
    Charge une table de mesures (YAML/JSON ou CSV selon l'extension).
    Les taux sont recalculés à partir des tailles.

    Returns:
        list[CompressionMeasurement]
    """
    path = Path(path)
    try:
        if path.suffix.lower() == '.csv':
            return [
                CompressionMeasurement.from_sizes(
                    row['system'], row['language'], row['original_bytes'], row['compressed_bytes'],
                    row['loc'], row['compressor'], row.get('files') or 0,
                )
                for row in read_csv(path, MEASUREMENT_COLUMNS)
            ]
        document = load_document(path.read_text(encoding='utf-8'), str(path))
        if not isinstance(document, dict):
            raise ParseError("Table de mesures invalide", str(path))
        version = _require(document, 'schema_version', str(path))
        if version != SCHEMA_VERSION:
            raise SchemaVersionError(version, SCHEMA_VERSION)
        return [
            CompressionMeasurement.from_sizes(
                e['system_id'], e['language_id'], e['original_bytes'], e['compressed_bytes'],
                e['loc'], e['compressor_name'], e.get('files_included', 0),
            )
            for e in _require(document, 'measurements', str(path)) or []
        ]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"Mesure invalide: {str(e)}", str(path)) from e
