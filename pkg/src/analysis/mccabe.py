# -*- coding: utf-8 -*-

"""
Module d'Estimation de McCabe
-----------------------------
Comptage léger des points de décision et des fonctions, par mots-clés
et opérateurs, sur le texte privé des commentaires et des chaînes.
Aucun analyseur syntaxique : l'imprécision est assumée et signalée
dans les rapports.
"""

import re
from functools import lru_cache

from ..cleaning.cleaner import code_only_text

# Mots-clés de contrôle exclus de l'heuristique « nom(...) { » des langages à accolades
_CONTROL_WORDS = (
    "if", "for", "while", "switch", "catch", "synchronized", "foreach", "using", "lock",
    "fixed", "return", "sizeof", "elif", "until", "with", "when", "do", "else", "new",
)

_BRACE_FUNCTION = re.compile(
    r"\b(?!(?:" + "|".join(_CONTROL_WORDS) + r")\b)[A-Za-z_]\w*\s*"
    r"\((?:[^(){};]|\([^(){};]*\))*\)\s*"
    r"(?:const\s*|noexcept\s*|override\s*|throws\s+[\w.,\s]+?)*\{"
)

# `?` ternaire uniquement. Exclus : `?.`, `??`, `?:`, `?>`, `?[`, `?=`,
# jokers génériques (`<?`, `? extends`, `?>`), types nullables
# (`int? n =`, `string? s;`, `?int $x`, `T? f(`) et `?` en fin d'expression.
_TERNARY = re.compile(
    r"(?<![?<(])\?"
    r"(?![.?:>\[=])"
    r"(?![ \t]*(?:[;,)\]}>=]|$))"
    r"(?![ \t]+(?:extends|super)\b)"
    r"(?!(?<=[,:][ \t]\?)[A-Za-z_\\])"
    r"(?!(?<=[\w>\]]\?)[ \t]+[A-Za-z_]\w*[ \t]*(?:[=;,(){]|$))",
    re.MULTILINE,
)


@lru_cache(maxsize=64)
def _decision_patterns(profile):
    flags = re.IGNORECASE if profile.case_insensitive else 0
    patterns = []
    if profile.decision_keywords:
        words = "|".join(re.escape(k) for k in sorted(profile.decision_keywords, key=len, reverse=True))
        patterns.append(re.compile(rf"\b(?:{words})\b", flags))
    for operator in profile.decision_operators:
        patterns.append(_TERNARY if operator == "?" else re.compile(re.escape(operator)))
    return tuple(patterns)


@lru_cache(maxsize=64)
def _function_pattern(profile):
    if not profile.function_keywords:
        return None
    flags = re.IGNORECASE if profile.case_insensitive else 0
    words = "|".join(re.escape(k) for k in profile.function_keywords)
    return re.compile(rf"\b(?:{words})\b", flags)


def mccabe_estimate(text, profile):
    """
    Compte les points de décision d'un texte nettoyé.

    Les mots-clés et opérateurs sont cherchés aux frontières de jetons,
    hors chaînes littérales et commentaires.

    Args:
        text (str): Texte nettoyé
        profile (LanguageProfile): Profil du langage

    Returns:
        int: Nombre de points de décision
    """
    if not text:
        return 0
    code = code_only_text(text, profile)
    return sum(len(pattern.findall(code)) for pattern in _decision_patterns(profile))


def count_functions(text, profile):
    """
    Estime le nombre de fonctions : mots-clés de définition (def, function,
    func, fn...) et, pour les langages à accolades, motifs `nom(...) {`.
    """
    if not text:
        return 0
    code = code_only_text(text, profile)
    count = 0
    keyword_pattern = _function_pattern(profile)
    if keyword_pattern is not None:
        count += len(keyword_pattern.findall(code))
    if profile.brace_functions:
        count += len(_BRACE_FUNCTION.findall(code))
    return count


def mccabe_total(text, profile):
    """McCabe agrégé d'un texte : points de décision + nombre de fonctions."""
    return mccabe_estimate(text, profile) + count_functions(text, profile)
