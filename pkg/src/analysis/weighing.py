# -*- coding: utf-8 -*-

"""
Module de Pesée d'un Système
----------------------------
Explore un système unique, nettoie chaque langage et en extrait les
LOC et le McCabe agrégé (compté fichier par fichier), données
d'entrée des rapports pondérés.
"""

import logging

from .mccabe import count_functions, mccabe_estimate
from .metrics import LanguageComplexity
from ..cleaning.cleaner import SampleCleaner
from ..corpus.profiles import profiles_by_id
from ..corpus.scanner import ScanOptions, scan_corpus

logger = logging.getLogger('Concision.Weighing')


def analyze_system(root, profiles, exclude_globs=(), follow_symlinks=False):
    """
    Mesure les volumes et la complexité d'un système.

    Args:
        root (str | Path): Racine du système (elle-même, pas ses sous-répertoires)
        profiles (list[LanguageProfile]): Profils actifs
        exclude_globs (tuple): Motifs exclus
        follow_symlinks (bool): Suivre les liens symboliques

    Returns:
        list[LanguageComplexity]: Triée par langage, langages vides exclus
    """
    options = ScanOptions(
        follow_symlinks=follow_symlinks, exclude_globs=tuple(exclude_globs), single_system=True,
    )
    manifest = scan_corpus([root], profiles, options)
    by_id = profiles_by_id(profiles)
    results = []
    for system, language_id in manifest.pairs():
        profile = by_id[language_id]
        counts = {'decisions': 0, 'functions': 0}

        def count_file(path, kept, profile=profile, counts=counts):
            # Un fichier à la fois : une chaîne non fermée ne déborde pas sur le suivant
            text = "\n".join(kept)
            counts['decisions'] += mccabe_estimate(text, profile)
            counts['functions'] += count_functions(text, profile)

        sample = SampleCleaner(profile).clean(system.paths(language_id), system.system_id, on_file=count_file)
        if sample.is_empty:
            logger.info(f"{language_id}: aucune ligne de code")
            continue
        results.append(LanguageComplexity(
            language_id=language_id,
            raw_loc=sample.loc,
            decisions=counts['decisions'],
            functions=counts['functions'],
        ))
        logger.debug(f"{language_id}: {sample.loc} LOC, {sample.files_included} fichiers")
    return results
