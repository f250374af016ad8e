# -*- coding: utf-8 -*-

"""
Module des Profils de Langage
-----------------------------
Décrit comment reconnaître et analyser lexicalement chaque langage :
extensions de fichiers, marqueurs de commentaires, délimiteurs de chaînes,
et le vocabulaire utilisé pour l'estimation de McCabe.

Les profils intégrés peuvent être complétés ou redéfinis par un
document YAML (voir README, section « Profils de langage »).
"""

import logging
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import PurePath
from typing import Optional

import yaml

from ..utils.errors import ConfigurationError, ParseError

logger = logging.getLogger('Concision.Profiles')

# Identifiant réservé aux fichiers non reconnus
UNKNOWN = "unknown"

DEFAULT_DECISION_KEYWORDS = ("if", "for", "while", "case", "catch")
DEFAULT_DECISION_OPERATORS = ("&&", "||", "?")


@dataclass(frozen=True)
class StringDelimiter:
    """Délimiteur de chaîne : ouverture, fermeture, caractère d'échappement."""
    open: str
    close: str
    escape: Optional[str] = None
    multiline: bool = False


@dataclass(frozen=True)
class LanguageProfile:
    """
    Profil lexical d'un langage.

    Les listes sont stockées sous forme de tuples pour que le profil
    reste hachable (mise en cache des analyseurs).
    """
    language_id: str
    extensions: frozenset
    line_comment_markers: tuple = ()
    block_comment_pairs: tuple = ()
    string_delimiters: tuple = ()
    nestable_block_comments: bool = False
    decision_keywords: tuple = DEFAULT_DECISION_KEYWORDS
    decision_operators: tuple = DEFAULT_DECISION_OPERATORS
    function_keywords: tuple = ()
    brace_functions: bool = False
    case_insensitive: bool = False
    char_literals: bool = False

    def __post_init__(self):
        if not self.language_id or not self.language_id.strip():
            raise ConfigurationError("Profil sans identifiant de langage")
        if self.language_id == UNKNOWN:
            raise ConfigurationError(f"L'identifiant {UNKNOWN!r} est réservé")
        if not self.extensions:
            raise ConfigurationError(f"Profil {self.language_id}: aucune extension")
        for pair in self.block_comment_pairs:
            if len(pair) != 2 or not pair[0] or not pair[1]:
                raise ConfigurationError(
                    f"Profil {self.language_id}: commentaire bloc invalide {pair!r}"
                )
        for delimiter in self.string_delimiters:
            if not delimiter.open or not delimiter.close:
                raise ConfigurationError(
                    f"Profil {self.language_id}: délimiteur de chaîne vide"
                )
        if any(not marker for marker in self.line_comment_markers):
            raise ConfigurationError(f"Profil {self.language_id}: marqueur de commentaire vide")


def _strings(*specs):
    return tuple(StringDelimiter(*spec) for spec in specs)


C_STRINGS = _strings(('"', '"', '\\'), ("'", "'", '\\'))
C_COMMENTS = {"line_comment_markers": ("//",), "block_comment_pairs": (("/*", "*/"),)}


def _builtin_profiles():
    """Jeu de profils intégré (au moins 15 langages)."""
    profiles = [
        LanguageProfile(
            "java", frozenset({".java"}), **C_COMMENTS,
            string_delimiters=_strings(('"""', '"""', '\\', True)) + C_STRINGS,
            brace_functions=True,
        ),
        LanguageProfile(
            "csharp", frozenset({".cs"}), **C_COMMENTS,
            # Chaînes verbatim @"..." : pas d'échappement ("" se lit comme deux chaînes)
            string_delimiters=_strings(('@"', '"', None, True), ('$"', '"', '\\')) + C_STRINGS,
            brace_functions=True,
        ),
        LanguageProfile(
            "python", frozenset({".py"}),
            line_comment_markers=("#",),
            # Approximation documentée : les triples guillemets sont des chaînes multilignes
            string_delimiters=_strings(
                ('"""', '"""', '\\', True), ("'''", "'''", '\\', True),
                ('"', '"', '\\'), ("'", "'", '\\'),
            ),
            decision_keywords=("if", "elif", "for", "while", "case", "except", "and", "or"),
            decision_operators=(),
            function_keywords=("def",),
        ),
        LanguageProfile(
            "javascript", frozenset({".js", ".mjs", ".cjs", ".jsx"}), **C_COMMENTS,
            string_delimiters=_strings(('`', '`', '\\', True)) + C_STRINGS,
            function_keywords=("function",),
        ),
        LanguageProfile(
            "typescript", frozenset({".ts", ".tsx", ".d.ts", ".mts", ".cts"}), **C_COMMENTS,
            string_delimiters=_strings(('`', '`', '\\', True)) + C_STRINGS,
            function_keywords=("function",),
        ),
        LanguageProfile(
            "shell", frozenset({".sh", ".bash", ".zsh", ".ksh"}),
            line_comment_markers=("#",),
            string_delimiters=_strings(('"', '"', '\\', True), ("'", "'", None, True)),
            decision_keywords=("if", "elif", "for", "while", "case", "until"),
            decision_operators=("&&", "||"),
            function_keywords=("function",),
            brace_functions=True,
        ),
        LanguageProfile(
            "c", frozenset({".c", ".h"}), **C_COMMENTS,
            string_delimiters=C_STRINGS, brace_functions=True,
        ),
        LanguageProfile(
            "cpp", frozenset({".cpp", ".cc", ".cxx", ".c++", ".hpp", ".hh", ".hxx", ".h++"}),
            **C_COMMENTS, string_delimiters=C_STRINGS, brace_functions=True,
        ),
        LanguageProfile(
            "go", frozenset({".go"}), **C_COMMENTS,
            string_delimiters=_strings(('`', '`', None, True)) + C_STRINGS,
            decision_keywords=("if", "for", "case", "select"),
            decision_operators=("&&", "||"),
            function_keywords=("func",),
        ),
        LanguageProfile(
            "ruby", frozenset({".rb", ".rake", ".gemspec"}),
            line_comment_markers=("#",),
            block_comment_pairs=(("=begin", "=end"),),
            string_delimiters=_strings(('"', '"', '\\', True), ("'", "'", '\\', True)),
            decision_keywords=("if", "elsif", "unless", "for", "while", "until", "when", "rescue"),
            decision_operators=("&&", "||"),
            function_keywords=("def",),
        ),
        LanguageProfile(
            "php", frozenset({".php", ".phtml"}),
            line_comment_markers=("//", "#"),
            block_comment_pairs=(("/*", "*/"),),
            string_delimiters=_strings(('"', '"', '\\', True), ("'", "'", '\\', True)),
            decision_keywords=("if", "elseif", "for", "foreach", "while", "case", "catch"),
            function_keywords=("function",),
        ),
        LanguageProfile(
            "sql", frozenset({".sql"}),
            line_comment_markers=("--",),
            block_comment_pairs=(("/*", "*/"),),
            # '' à l'intérieur d'une chaîne se lit comme fermeture + ouverture
            string_delimiters=_strings(("'", "'", None, True), ('"', '"', None)),
            decision_keywords=("if", "when", "while", "loop", "and", "or"),
            decision_operators=(),
            function_keywords=("function", "procedure"),
            case_insensitive=True,
        ),
        LanguageProfile(
            "kotlin", frozenset({".kt", ".kts"}), **C_COMMENTS,
            nestable_block_comments=True,
            string_delimiters=_strings(('"""', '"""', None, True)) + C_STRINGS,
            decision_keywords=("if", "for", "while", "when", "catch"),
            decision_operators=("&&", "||"),
            function_keywords=("fun",),
        ),
        LanguageProfile(
            "swift", frozenset({".swift"}), **C_COMMENTS,
            nestable_block_comments=True,
            string_delimiters=_strings(('"""', '"""', '\\', True), ('"', '"', '\\')),
            decision_keywords=("if", "guard", "for", "while", "case", "catch"),
            # Les optionnels (`String?`, `as?`, `try?`) rendent `?` inexploitable
            decision_operators=("&&", "||"),
            function_keywords=("func",),
        ),
        LanguageProfile(
            "rust", frozenset({".rs"}), **C_COMMENTS,
            nestable_block_comments=True,
            # Apostrophes : littéraux caractère uniquement, pas les durées de vie
            string_delimiters=_strings(('"', '"', '\\', True)),
            char_literals=True,
            decision_keywords=("if", "for", "while", "loop", "match"),
            decision_operators=("&&", "||"),
            function_keywords=("fn",),
        ),
    ]
    return {p.language_id: p for p in profiles}


BUILTIN_PROFILES = _builtin_profiles()

_FIELD_KEYS = {
    "extensions", "line_comments", "block_comments", "strings", "nestable_block_comments",
    "decision_keywords", "decision_operators", "function_keywords", "brace_functions",
    "case_insensitive", "char_literals",
}


def _as_str_tuple(value, key, language_id):
    if isinstance(value, str):
        value = [value]
    if not isinstance(value, (list, tuple)) or not all(isinstance(v, str) for v in value):
        raise ConfigurationError(f"Profil {language_id}: '{key}' doit être une liste de chaînes")
    return tuple(value)


def _normalize_extension(extension):
    extension = extension.strip().lower()
    return extension if extension.startswith(".") else f".{extension}"


def _profile_fields(entry, language_id):
    """Convertit une entrée YAML en champs de LanguageProfile."""
    unknown = set(entry) - _FIELD_KEYS
    if unknown:
        raise ConfigurationError(f"Profil {language_id}: clés inconnues {sorted(unknown)}")
    fields = {}
    if "extensions" in entry:
        fields["extensions"] = frozenset(
            _normalize_extension(e) for e in _as_str_tuple(entry["extensions"], "extensions", language_id)
        )
    if "line_comments" in entry:
        fields["line_comment_markers"] = _as_str_tuple(entry["line_comments"], "line_comments", language_id)
    if "block_comments" in entry:
        pairs = []
        for pair in entry["block_comments"] or []:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise ConfigurationError(f"Profil {language_id}: paire de commentaire invalide {pair!r}")
            pairs.append((str(pair[0]), str(pair[1])))
        fields["block_comment_pairs"] = tuple(pairs)
    if "strings" in entry:
        delimiters = []
        for spec in entry["strings"] or []:
            if not isinstance(spec, (list, tuple)) or not 2 <= len(spec) <= 4:
                raise ConfigurationError(f"Profil {language_id}: délimiteur invalide {spec!r}")
            open_, close = str(spec[0]), str(spec[1])
            escape = spec[2] if len(spec) > 2 else None
            multiline = bool(spec[3]) if len(spec) > 3 else False
            delimiters.append(StringDelimiter(open_, close, escape, multiline))
        fields["string_delimiters"] = tuple(delimiters)
    for key in ("decision_keywords", "decision_operators", "function_keywords"):
        if key in entry:
            fields[key] = _as_str_tuple(entry[key] or [], key, language_id)
    for key in ("nestable_block_comments", "brace_functions", "case_insensitive", "char_literals"):
        if key in entry:
            fields[key] = bool(entry[key])
    return fields


def check_extension_conflicts(profiles):
    """
    Vérifie qu'aucune extension n'appartient à deux profils.

    Raises:
        ConfigurationError: nomme les deux langages en conflit
    """
    owner = {}
    seen_ids = set()
    for profile in profiles:
        if profile.language_id in seen_ids:
            raise ConfigurationError(f"Langage défini deux fois: {profile.language_id}")
        seen_ids.add(profile.language_id)
        for extension in sorted(profile.extensions):
            extension = extension.lower()
            if extension in owner and owner[extension] != profile.language_id:
                first, second = sorted((owner[extension], profile.language_id))
                raise ConfigurationError(
                    f"Extension {extension} revendiquée par deux profils: {first} et {second}"
                )
            owner[extension] = profile.language_id


def load_language_profiles(config_source=None):
    """
    Charge les profils de langage.

    Args:
        config_source (bytes | str | None): Document YAML de configuration.
            Absent ou vide : le jeu intégré est retourné.

    Returns:
        list[LanguageProfile]: Profils triés par identifiant

    Raises:
        ParseError: YAML invalide (avec position)
        ConfigurationError: invariant de profil violé
    """
    if isinstance(config_source, bytes):
        config_source = config_source.decode('utf-8', errors='replace')
    profiles = dict(BUILTIN_PROFILES)
    if not config_source or not config_source.strip():
        return sorted(profiles.values(), key=lambda p: p.language_id)

    try:
        document = yaml.safe_load(config_source)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        location = f"ligne {mark.line + 1}, colonne {mark.column + 1}" if mark else None
        raise ParseError(f"Configuration de profils invalide: {getattr(e, 'problem', None) or e}", location) from e

    if document is None:
        document = {}
    if not isinstance(document, dict):
        raise ParseError("La configuration de profils doit être un dictionnaire")
    languages = document.get("languages") or {}
    if not isinstance(languages, dict):
        raise ParseError("'languages' doit être un dictionnaire identifiant -> profil")
    if document.get("replace_defaults"):
        profiles = {}

    for raw_id, entry in languages.items():
        language_id = str(raw_id).strip().lower()
        if not isinstance(entry, dict):
            raise ConfigurationError(f"Profil {language_id}: entrée invalide")
        fields = _profile_fields(entry, language_id)
        if language_id in profiles:
            base = profiles[language_id]
            if "extensions" in fields:
                fields["extensions"] = base.extensions | fields["extensions"]
            profiles[language_id] = replace(base, **fields)
            logger.debug(f"Profil {language_id} fusionné")
        else:
            if "extensions" not in fields:
                raise ConfigurationError(f"Nouveau profil {language_id}: 'extensions' obligatoire")
            profiles[language_id] = LanguageProfile(language_id=language_id, **fields)
            logger.debug(f"Profil {language_id} ajouté")

    result = sorted(profiles.values(), key=lambda p: p.language_id)
    check_extension_conflicts(result)
    logger.info(f"{len(result)} profils de langage chargés")
    return result


@lru_cache(maxsize=32)
def _suffix_table(profiles):
    table = {}
    for profile in profiles:
        for extension in profile.extensions:
            table[extension.lower()] = profile.language_id
    # Les suffixes les plus longs d'abord
    return tuple(sorted(table.items(), key=lambda item: (-len(item[0]), item[0])))


def detect_language(path, profiles):
    """
    Détermine le langage d'un fichier par son suffixe.

    Le suffixe enregistré le plus long gagne; la comparaison ignore la casse.

    Args:
        path (str | Path): Chemin du fichier
        profiles (list[LanguageProfile]): Profils actifs

    Returns:
        str: Identifiant du langage, ou UNKNOWN
    """
    name = PurePath(path).name.lower()
    for suffix, language_id in _suffix_table(tuple(profiles)):
        if name.endswith(suffix) and len(name) > len(suffix):
            return language_id
    return UNKNOWN


def profiles_by_id(profiles):
    """Index identifiant -> profil."""
    return {p.language_id: p for p in profiles}
