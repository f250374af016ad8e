# -*- coding: utf-8 -*-

"""
Module des Métriques Pondérées
------------------------------
Applique les facteurs de concision aux volumes de code :
- LOC pondérées (LOC / CR caractéristique),
- répartition des volumes par langage, brute et pondérée,
- ratio LOC par point de McCabe, brut et pondéré, normalisé
  de sorte que 100 % soit la moyenne sur les langages.

Les chiffres bruts et pondérés sont toujours produits côte à côte.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Optional

from ..utils.errors import ConfigurationError, InsufficientData, MissingFactor
from ..utils.storage import format_ratio, render_csv

logger = logging.getLogger('Concision.Metrics')

VOLUME_COLUMNS = ("language", "raw_loc", "weighted_loc", "raw_share", "weighted_share")
MCCABE_COLUMNS = (
    "language", "raw_loc", "weighted_loc", "total_mccabe", "raw_ratio", "weighted_ratio",
    "normalized_raw", "normalized_weighted",
)

MCCABE_NOTES = (
    "McCabe agrégé par langage (points de décision + fonctions), pas de moyenne par fonction",
    "Nombre de fonctions estimé par mots-clés et motifs nom(...){, imprécis",
)


class FallbackPolicy:
    """
    Politique choisie par l'appelant pour un langage sans facteur :
    'error' (défaut), 'cr=1.0' ou 'cr=median'. Jamais silencieuse.
    """

    ERROR = "error"
    UNIT = "cr=1.0"
    MEDIAN = "cr=median"
    CHOICES = (ERROR, UNIT, MEDIAN)

    def __init__(self, policy=ERROR):
        policy = (policy or self.ERROR).strip().lower()
        if policy in ("cr=1", "cr=1.0"):
            policy = self.UNIT
        if policy not in self.CHOICES:
            raise ConfigurationError(
                f"Politique de repli inconnue: {policy!r} (choix: {', '.join(self.CHOICES)})"
            )
        self.policy = policy

    def resolve(self, benchmark, language_id):
        """
        Retourne (CR, repli appliqué) pour un langage.

        Raises:
            MissingFactor: langage absent et politique 'error'
        """
        factor = benchmark.factor(language_id)
        if factor is not None:
            return factor.cr_characteristic, False
        if self.policy == self.UNIT:
            return 1.0, True
        if self.policy == self.MEDIAN:
            median = benchmark.median_factor()
            if median is not None:
                return median, True
        raise MissingFactor(language_id)


def weighted_loc(loc, factor):
    """
    LOC pondérées par la concision du langage.

    Args:
        loc (int): Lignes de code (>= 0)
        factor (ConcisenessFactor | None): Facteur du langage

    Returns:
        float: loc / cr_characteristic

    Raises:
        MissingFactor: facteur absent
    """
    if factor is None:
        raise MissingFactor("<inconnu>")
    if loc < 0:
        raise ValueError("LOC négatives")
    if factor.cr_characteristic <= 0:
        raise ValueError(f"CR invalide pour {factor.language_id}")
    return loc / factor.cr_characteristic


def equivalent_loc(loc, source_factor, target_factor):
    """
    Estime les LOC nécessaires pour exprimer la même information dans un
    autre langage : loc / CR(source) * CR(cible).
    """
    return weighted_loc(loc, source_factor) * target_factor.cr_characteristic


@dataclass(frozen=True)
class LanguageVolume:
    """Volume d'un langage, brut et pondéré."""
    language_id: str
    raw_loc: int
    cr: float
    weighted_loc: float
    raw_share: float
    weighted_share: float
    fallback_applied: bool = False


@dataclass(frozen=True)
class VolumeBreakdown:
    """Répartition des volumes d'un système."""
    entries: tuple
    missing: tuple = ()

    def entry(self, language_id):
        return next((e for e in self.entries if e.language_id == language_id), None)

    def to_dict(self):
        return {
            'languages': [asdict(e) for e in self.entries],
            'missing_factor': [{'language_id': lang, 'raw_loc': loc} for lang, loc in self.missing],
        }

    def to_csv(self):
        rows = [
            (e.language_id, e.raw_loc, format_ratio(e.weighted_loc), format_ratio(e.raw_share),
             format_ratio(e.weighted_share))
            for e in self.entries
        ]
        return render_csv(VOLUME_COLUMNS, rows)

    def plot_series(self):
        """Séries pour un histogramme empilé à deux colonnes (brut, pondéré)."""
        lines = ["language\traw\tweighted"]
        lines += [f"{e.language_id}\t{e.raw_share!r}\t{e.weighted_share!r}" for e in self.entries]
        return "\n".join(lines) + "\n"


def volume_breakdown(language_loc, benchmark, fallback=FallbackPolicy.ERROR):
    """
    Calcule la répartition brute et pondérée des volumes d'un système.

    Args:
        language_loc (dict): langage -> LOC du système
        benchmark (BenchmarkDb): Benchmark de référence
        fallback (str | FallbackPolicy): Politique pour les langages sans facteur

    Returns:
        VolumeBreakdown: parts calculées sur les langages ayant un facteur
        (ou un repli explicite); les autres sont listés dans `missing`

    Raises:
        MissingFactor: aucun langage n'a de facteur
    """
    policy = fallback if isinstance(fallback, FallbackPolicy) else FallbackPolicy(fallback)
    resolved = []
    missing = []
    for language_id in sorted(language_loc):
        loc = int(language_loc[language_id])
        if loc <= 0:
            continue
        try:
            cr, applied = policy.resolve(benchmark, language_id)
        except MissingFactor:
            missing.append((language_id, loc))
            logger.warning(f"{language_id}: pas de facteur, exclu des parts pondérées")
            continue
        if applied:
            logger.warning(f"{language_id}: facteur de repli {policy.policy} (CR {cr:.3f})")
        resolved.append((language_id, loc, cr, applied))

    if not resolved:
        raise MissingFactor([lang for lang, _ in missing] or ["<aucun langage>"])

    total_raw = sum(loc for _, loc, _, _ in resolved)
    weighted = [loc / cr for _, loc, cr, _ in resolved]
    total_weighted = sum(weighted)
    entries = tuple(
        LanguageVolume(
            language_id=lang,
            raw_loc=loc,
            cr=cr,
            weighted_loc=w,
            raw_share=loc / total_raw,
            weighted_share=w / total_weighted,
            fallback_applied=applied,
        )
        for (lang, loc, cr, applied), w in zip(resolved, weighted)
    )
    return VolumeBreakdown(entries=entries, missing=tuple(missing))


@dataclass(frozen=True)
class InversionCheck:
    """Compare l'ordre brut et l'ordre pondéré de deux langages."""
    language_a: str
    language_b: str
    raw_a: int
    raw_b: int
    weighted_a: float
    weighted_b: float

    @property
    def raw_a_smaller(self):
        return self.raw_a < self.raw_b

    @property
    def weighted_a_at_least(self):
        return self.weighted_a >= self.weighted_b

    @property
    def inverted(self):
        """Vrai si a a moins de LOC brutes que b mais au moins autant de volume pondéré."""
        return self.raw_a_smaller and self.weighted_a_at_least

    def describe(self):
        raw = "<" if self.raw_a_smaller else ">="
        weighted = ">=" if self.weighted_a_at_least else "<"
        return (
            f"LOC brutes: {self.language_a} {raw} {self.language_b} ({self.raw_a} / {self.raw_b}); "
            f"volume pondéré: {self.language_a} {weighted} {self.language_b} "
            f"({self.weighted_a:.1f} / {self.weighted_b:.1f})"
        )


def inversion_check(breakdown, language_a, language_b):
    """
    Vérifie l'inversion d'ordre entre volumes bruts et pondérés.

    Raises:
        MissingFactor: un des deux langages est absent de la répartition
    """
    a, b = breakdown.entry(language_a), breakdown.entry(language_b)
    absent = [lang for lang, e in ((language_a, a), (language_b, b)) if e is None]
    if absent:
        raise MissingFactor(absent)
    return InversionCheck(language_a, language_b, a.raw_loc, b.raw_loc, a.weighted_loc, b.weighted_loc)


@dataclass(frozen=True)
class LanguageComplexity:
    """Volume et complexité agrégés d'un langage dans un système."""
    language_id: str
    raw_loc: int
    decisions: int
    functions: int

    @property
    def total_mccabe(self):
        return self.decisions + self.functions


@dataclass(frozen=True)
class McCabeEntry:
    language_id: str
    raw_loc: int
    weighted_loc: float
    total_mccabe: int
    raw_ratio: float
    weighted_ratio: float
    normalized_raw: float
    normalized_weighted: float
    fallback_applied: bool = False


@dataclass(frozen=True)
class McCabeReport:
    """Ratios LOC / McCabe bruts et pondérés, normalisés en pourcentage de la moyenne."""
    entries: tuple
    excluded: tuple = ()
    notes: tuple = MCCABE_NOTES

    def entry(self, language_id):
        return next((e for e in self.entries if e.language_id == language_id), None)

    def to_dict(self):
        return {
            'languages': [asdict(e) for e in self.entries],
            'excluded': [{'language_id': lang, 'reason': reason} for lang, reason in self.excluded],
            'notes': list(self.notes),
        }

    def to_csv(self):
        rows = [
            (e.language_id, e.raw_loc, format_ratio(e.weighted_loc), e.total_mccabe,
             format_ratio(e.raw_ratio), format_ratio(e.weighted_ratio),
             format_ratio(e.normalized_raw), format_ratio(e.normalized_weighted))
            for e in self.entries
        ]
        return render_csv(MCCABE_COLUMNS, rows)

    def plot_series(self):
        lines = ["language\traw\tweighted"]
        lines += [f"{e.language_id}\t{e.normalized_raw!r}\t{e.normalized_weighted!r}" for e in self.entries]
        return "\n".join(lines) + "\n"


def mccabe_report(complexities, benchmark, fallback=FallbackPolicy.ERROR):
    """
    Calcule les ratios LOC par point de McCabe d'un système.

    Args:
        complexities (list[LanguageComplexity]): Données par langage
        benchmark (BenchmarkDb): Benchmark de référence
        fallback (str | FallbackPolicy): Politique pour les langages sans facteur

    Returns:
        McCabeReport: normalisation par la moyenne non pondérée des ratios

    Raises:
        InsufficientData: moins de deux langages exploitables
    """
    policy = fallback if isinstance(fallback, FallbackPolicy) else FallbackPolicy(fallback)
    rows = []
    excluded = []
    for item in sorted(complexities, key=lambda c: c.language_id):
        if item.raw_loc <= 0:
            continue
        if item.total_mccabe <= 0:
            excluded.append((item.language_id, "mccabe=0"))
            logger.warning(f"{item.language_id}: McCabe nul, langage exclu")
            continue
        try:
            cr, applied = policy.resolve(benchmark, item.language_id)
        except MissingFactor:
            excluded.append((item.language_id, "missing-factor"))
            logger.warning(f"{item.language_id}: pas de facteur, langage exclu")
            continue
        weighted = item.raw_loc / cr
        rows.append((item, weighted, item.raw_loc / item.total_mccabe, weighted / item.total_mccabe, applied))

    if len(rows) < 2:
        raise InsufficientData(
            f"Rapport McCabe: {len(rows)} langage(s) exploitable(s), au moins 2 requis"
        )

    mean_raw = sum(r[2] for r in rows) / len(rows)
    mean_weighted = sum(r[3] for r in rows) / len(rows)
    entries = tuple(
        McCabeEntry(
            language_id=item.language_id,
            raw_loc=item.raw_loc,
            weighted_loc=weighted,
            total_mccabe=item.total_mccabe,
            raw_ratio=raw_ratio,
            weighted_ratio=weighted_ratio,
            normalized_raw=100.0 * raw_ratio / mean_raw,
            normalized_weighted=100.0 * weighted_ratio / mean_weighted,
            fallback_applied=applied,
        )
        for item, weighted, raw_ratio, weighted_ratio, applied in rows
    )
    return McCabeReport(entries=entries, excluded=tuple(excluded))


def report_metadata(benchmark, fallback, compare: Optional[InversionCheck] = None):
    """Métadonnées communes aux rapports de pondération."""
    metadata = {
        'compressor': benchmark.compressor_name,
        'fallback': fallback.policy if isinstance(fallback, FallbackPolicy) else fallback,
        'cr_direction': 'original/compressed',
    }
    if compare is not None:
        metadata['inversion'] = {
            'languages': [compare.language_a, compare.language_b],
            'raw_a_smaller': compare.raw_a_smaller,
            'weighted_a_at_least': compare.weighted_a_at_least,
            'inverted': compare.inverted,
            'summary': compare.describe(),
        }
    return metadata
