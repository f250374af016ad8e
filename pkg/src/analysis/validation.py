# -*- coding: utf-8 -*-

"""
Module de Validation
--------------------
Mesure l'accord entre le classement local des langages (CR caractéristique)
et des classements externes fournis en CSV (`language,score`), par la
corrélation de rangs de Spearman (rangs moyens en cas d'égalité).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.stats import rankdata

from ..utils.errors import InsufficientData, ParseError, UndefinedCorrelation
from ..utils.storage import read_csv

logger = logging.getLogger('Concision.Validation')

MIN_PAIRS = 3

RANKING_COLUMNS = ("language", "score")
ALIAS_COLUMNS = ("alias", "canonical")

BUILTIN_ALIASES = {
    "c#": "csharp",
    "cs": "csharp",
    "c++": "cpp",
    "cplusplus": "cpp",
    "js": "javascript",
    "node": "javascript",
    "ts": "typescript",
    "bash": "shell",
    "sh": "shell",
    "golang": "go",
    "py": "python",
    "python3": "python",
    "rb": "ruby",
    "kt": "kotlin",
    "rs": "rust",
}


def spearman(pairs):
    """
    Corrélation de rangs de Spearman.

    Args:
        pairs (list[tuple[float, float]]): Couples (x, y)

    Returns:
        float: rho dans [-1, 1]

    Raises:
        InsufficientData: moins de 3 couples
        UndefinedCorrelation: variance nulle d'un des vecteurs de rangs
    """
    pairs = list(pairs)
    if len(pairs) < MIN_PAIRS:
        raise InsufficientData(f"Spearman: {len(pairs)} couple(s), au moins {MIN_PAIRS} requis")
    data = np.asarray(pairs, dtype=float)
    rx = rankdata(data[:, 0], method='average')
    ry = rankdata(data[:, 1], method='average')
    dx = rx - rx.mean()
    dy = ry - ry.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        raise UndefinedCorrelation("Spearman indéfini: tous les rangs sont égaux d'un côté")
    rho = float(np.dot(dx, dy)) / float(np.sqrt(sxx * syy))
    return min(1.0, max(-1.0, rho))


class Orientation(Enum):
    """Sens du score externe par rapport au CR (un CR élevé signale un langage verbeux)."""
    SAME = "same"
    INVERTED = "inverted"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError as e:
            raise ValueError(f"Orientation inconnue: {value!r} (same | inverted)") from e


def normalize_language(name, aliases=None):
    """
    Ramène un nom de langage au vocabulaire des profils.

    Args:
        name (str): Nom tel qu'écrit par la source
        aliases (dict | None): Table alias -> canonique (en plus des alias intégrés)
    """
    key = name.strip().lower()
    if aliases and key in aliases:
        return aliases[key]
    return BUILTIN_ALIASES.get(key, key)


def load_alias_csv(path):
    """Charge une table d'alias (`alias,canonical`); les clés sont en minuscules."""
    table = {}
    for row in read_csv(path, ALIAS_COLUMNS):
        table[row['alias'].strip().lower()] = row['canonical'].strip().lower()
    logger.debug(f"{len(table)} alias chargés depuis {path}")
    return table


@dataclass(frozen=True)
class ExternalRanking:
    """
    Classement externe : langage -> score (plus élevé = plus expressif).

    L'orientation indique comment comparer ce score au CR local.
    """
    source_name: str
    entries: dict
    orientation: Orientation = Orientation.SAME

    def __post_init__(self):
        if len(self.entries) < MIN_PAIRS:
            raise InsufficientData(
                f"Classement {self.source_name}: {len(self.entries)} langage(s), au moins {MIN_PAIRS} requis"
            )


def load_ranking_csv(path, aliases=None, orientation=Orientation.SAME, source_name=None):
    """
    Charge un classement externe (`language,score`).

    Raises:
        ParseError: score non numérique, ou langage présent deux fois
                    après résolution des alias
    """
    entries = {}
    for line_no, row in enumerate(read_csv(path, RANKING_COLUMNS), start=2):
        language = normalize_language(row['language'], aliases)
        try:
            score = float(row['score'])
        except ValueError as e:
            raise ParseError(f"Score non numérique {row['score']!r}", f"{path}, ligne {line_no}") from e
        if language in entries:
            raise ParseError(f"Langage en double après alias: {language}", f"{path}, ligne {line_no}")
        entries[language] = score
    return ExternalRanking(
        source_name=source_name or str(path),
        entries=entries,
        orientation=Orientation.parse(orientation),
    )


@dataclass(frozen=True)
class ValidationReport:
    source_name: str
    orientation: Orientation
    n: int
    rho: float
    matched: tuple = field(default_factory=tuple)
    unmatched_local: tuple = field(default_factory=tuple)
    unmatched_external: tuple = field(default_factory=tuple)

    def to_dict(self):
        return {
            'source': self.source_name,
            'orientation': self.orientation.value,
            'n': self.n,
            'rho': self.rho,
            'matched': [
                {'language_id': lang, 'cr': cr, 'external_score': score}
                for lang, cr, score in self.matched
            ],
            'unmatched_local': list(self.unmatched_local),
            'unmatched_external': list(self.unmatched_external),
        }


def compare(benchmark, external, orientation=None):
    """
    Compare le classement local au classement externe.

    Args:
        benchmark (BenchmarkDb): Benchmark local (score = CR caractéristique)
        external (ExternalRanking): Classement externe
        orientation (Orientation | str | None): Remplace celle du classement

    Returns:
        ValidationReport

    Raises:
        InsufficientData: moins de 3 langages communs (l'intersection est nommée)
    """
    orientation = Orientation.parse(orientation) if orientation is not None else external.orientation
    sign = -1.0 if orientation is Orientation.INVERTED else 1.0
    local = {lang: f.cr_characteristic for lang, f in benchmark.factors.items()}
    common = sorted(set(local) & set(external.entries))
    if len(common) < MIN_PAIRS:
        raise InsufficientData(
            f"Validation contre {external.source_name}: {len(common)} langage(s) commun(s) "
            f"[{', '.join(common)}], au moins {MIN_PAIRS} requis"
        )
    matched = tuple((lang, local[lang], external.entries[lang]) for lang in common)
    rho = spearman([(cr, sign * score) for _, cr, score in matched])
    report = ValidationReport(
        source_name=external.source_name,
        orientation=orientation,
        n=len(common),
        rho=rho,
        matched=matched,
        unmatched_local=tuple(sorted(set(local) - set(common))),
        unmatched_external=tuple(sorted(set(external.entries) - set(common))),
    )
    logger.info(f"Validation {external.source_name}: n={report.n}, rho={report.rho:.4f}")
    return report
