# -*- coding: utf-8 -*-

"""
Module du Compresseur
---------------------
Estime le contenu en information d'un échantillon nettoyé par
compression en flux continu (aucune frontière de bloc).

Le taux de compression (CR) est toujours original / compressé :
une valeur élevée signale un langage redondant, donc verbeux.
"""

import logging
import shlex
import subprocess
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional

from . import lz_codec
from ..analysis.validation import spearman
from ..utils.errors import (
    ConfigurationError, InsufficientData, MeasurementError, SkippedEmpty, UndefinedCorrelation,
)

MIB = 1024 * 1024
DEFAULT_WINDOW = 64 * MIB
MIN_BOUNDED_WINDOW = 16 * MIB

logger = logging.getLogger('Concision.Compressor')


class CompressorKind(Enum):
    """Types de compresseurs."""
    BUILTIN_LZ = "builtin_lz"
    EXTERNAL = "external"


@dataclass(frozen=True)
class CompressorSpec:
    """
    Description d'un compresseur.

    `external_command` est la ligne de commande (liste d'arguments) d'un
    programme lisant l'entrée standard et écrivant le flux compressé sur
    la sortie standard; seule la longueur de la sortie est utilisée.
    """
    name: str = "builtin-lz"
    kind: CompressorKind = CompressorKind.BUILTIN_LZ
    window_bytes: int = DEFAULT_WINDOW
    external_command: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.name:
            raise ConfigurationError("Compresseur sans nom")
        if self.kind is CompressorKind.BUILTIN_LZ:
            if self.window_bytes != 0 and self.window_bytes < MIN_BOUNDED_WINDOW:
                raise ConfigurationError(
                    f"Fenêtre {self.window_bytes} trop petite: 0 (illimitée) ou >= {MIN_BOUNDED_WINDOW} octets"
                )
        elif not self.external_command:
            raise ConfigurationError(f"Compresseur externe {self.name} sans commande")

    @classmethod
    def from_config(cls, config):
        """
        Construit une spécification depuis la section `compressor` de la configuration.

        Args:
            config (dict): name, kind, window_bytes, external_command (liste ou chaîne)
        """
        try:
            kind = CompressorKind(str(config.get('kind', 'builtin_lz')).lower())
        except ValueError as e:
            raise ConfigurationError(f"Type de compresseur inconnu: {config.get('kind')}") from e
        command = config.get('external_command') or ()
        if isinstance(command, str):
            command = shlex.split(command)
        return cls(
            name=str(config.get('name') or kind.value),
            kind=kind,
            window_bytes=int(config.get('window_bytes', DEFAULT_WINDOW)),
            external_command=tuple(command),
        )


@dataclass(frozen=True)
class CompressionMeasurement:
    """Mesure d'un échantillon (système, langage)."""
    system_id: str
    language_id: str
    original_bytes: int
    compressed_bytes: int
    compression_ratio: float
    loc: int
    compressor_name: str
    files_included: int = 0

    def __post_init__(self):
        if self.original_bytes <= 0 or self.compressed_bytes <= 0:
            raise ValueError("Mesure invalide: tailles nulles")

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_sizes(cls, system_id, language_id, original_bytes, compressed_bytes, loc,
                   compressor_name, files_included=0):
        """Construit une mesure en recalculant le taux à partir des tailles."""
        return cls(
            system_id=system_id,
            language_id=language_id,
            original_bytes=int(original_bytes),
            compressed_bytes=int(compressed_bytes),
            compression_ratio=int(original_bytes) / int(compressed_bytes),
            loc=int(loc),
            compressor_name=compressor_name,
            files_included=int(files_included),
        )


def _compress_external(data, spec):
    try:
        result = subprocess.run(list(spec.external_command), input=data, capture_output=True)
    except OSError as e:
        raise MeasurementError(f"Lancement impossible de {spec.name}", str(e)) from e
    if result.returncode != 0:
        raise MeasurementError(
            f"Le compresseur {spec.name} a échoué (code {result.returncode})",
            result.stderr.decode('utf-8', errors='replace'),
        )
    if not result.stdout:
        raise MeasurementError(f"Le compresseur {spec.name} n'a rien produit")
    return len(result.stdout)


def compress(data, spec):
    """
    Compresse un flux et retourne la taille compressée.

    Args:
        data (bytes): Entrée non vide
        spec (CompressorSpec): Compresseur

    Returns:
        int: Nombre d'octets compressés

    Raises:
        ValueError: entrée vide
        MeasurementError: échec du compresseur externe
    """
    if not data:
        raise ValueError("Précondition: l'entrée à compresser est vide")
    if spec.kind is CompressorKind.EXTERNAL:
        return _compress_external(bytes(data), spec)
    return len(lz_codec.encode(data, spec.window_bytes))


def measure(sample, spec):
    """
    Mesure le taux de compression d'un échantillon nettoyé.

    Args:
        sample (CleanedSample): Échantillon
        spec (CompressorSpec): Compresseur

    Returns:
        CompressionMeasurement

    Raises:
        SkippedEmpty: échantillon vide (signal, pas une erreur)
    """
    if sample.original_bytes_count == 0:
        raise SkippedEmpty(f"Échantillon vide: {sample.system_id}/{sample.language_id}")
    compressed = compress(sample.cleaned_bytes, spec)
    measurement = CompressionMeasurement.from_sizes(
        sample.system_id, sample.language_id, sample.original_bytes_count, compressed,
        sample.loc, spec.name, sample.files_included,
    )
    logger.debug(
        f"{sample.system_id}/{sample.language_id}: {sample.original_bytes_count} -> {compressed} octets "
        f"(CR {measurement.compression_ratio:.3f})"
    )
    return measurement


@dataclass(frozen=True)
class CrossCheck:
    """Comparaison de deux compresseurs sur les mêmes échantillons."""
    rows: tuple
    max_relative_difference: float
    ranking_rho: Optional[float] = None


def cross_check(samples, spec_a, spec_b):
    """
    Mesure chaque échantillon avec deux compresseurs.

    Returns:
        CrossCheck: lignes (système, langage, CR a, CR b, écart relatif),
        écart maximal et rho de Spearman des classements de langages
        (None si moins de trois langages)
    """
    rows = []
    per_language = {}
    for sample in samples:
        if sample.is_empty:
            continue
        cr_a = measure(sample, spec_a).compression_ratio
        cr_b = measure(sample, spec_b).compression_ratio
        difference = abs(cr_a - cr_b) / cr_b
        rows.append((sample.system_id, sample.language_id, cr_a, cr_b, difference))
        per_language.setdefault(sample.language_id, []).append((cr_a, cr_b))

    rho = None
    if len(per_language) >= 3:
        pairs = [
            (sum(a for a, _ in values) / len(values), sum(b for _, b in values) / len(values))
            for values in per_language.values()
        ]
        try:
            rho = spearman(pairs)
        except (InsufficientData, UndefinedCorrelation) as e:
            logger.warning(f"Classement non comparable: {str(e)}")
    return CrossCheck(
        rows=tuple(rows),
        max_relative_difference=max((r[4] for r in rows), default=0.0),
        ranking_rho=rho,
    )
