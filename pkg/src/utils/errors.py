# -*- coding: utf-8 -*-

"""
Module des Erreurs
------------------
Hiérarchie d'exceptions commune à toute la chaîne de mesure.
Le point d'entrée traduit ces exceptions en codes de sortie.
"""


class ConcisionError(Exception):
    """Erreur de base du projet."""


class ConfigurationError(ConcisionError):
    """Configuration invalide (profils, seuils, politique de repli...)."""


class ParseError(ConcisionError):
    """
    Document illisible ou incomplet.

    Args:
        message (str): Description du problème
        location (str): Position dans le document (ex: "ligne 3, colonne 7")
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{message} ({location})"
        super().__init__(message)


class SchemaVersionError(ParseError):
    """Version de schéma inattendue; nomme les deux versions."""

    def __init__(self, found, expected):
        self.found = found
        self.expected = expected
        super().__init__(
            f"Version de schéma {found!r} non supportée (attendue: {expected!r})"
        )


class MeasurementError(ConcisionError):
    """Échec d'un compresseur externe; conserve la sortie d'erreur."""

    def __init__(self, message, stderr=""):
        self.stderr = stderr
        if stderr:
            message = f"{message}: {stderr.strip()}"
        super().__init__(message)


class SkippedEmpty(ConcisionError):
    """Signal: échantillon vide, jamais mesuré. Ce n'est pas un échec."""


class MissingFactor(ConcisionError):
    """Langage absent du benchmark."""

    def __init__(self, languages):
        if isinstance(languages, str):
            languages = [languages]
        self.languages = sorted(languages)
        super().__init__(
            f"Aucun facteur de concision pour: {', '.join(self.languages)}"
        )


class InsufficientData(ConcisionError):
    """Trop peu de données pour un calcul significatif."""


class UndefinedCorrelation(ConcisionError):
    """Variance nulle dans un des vecteurs de rangs."""
