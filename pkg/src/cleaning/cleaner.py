# -*- coding: utf-8 -*-

"""
Module de Nettoyage
-------------------
Classe chaque ligne d'un fichier source (code, commentaire seul, vide)
et construit l'échantillon nettoyé d'un couple (système, langage) :
la concaténation des seules lignes de code, qui sera compressée.

L'analyse lexicale est un automate à trois états qui suit les chaînes
littérales et les commentaires blocs (éventuellement imbriqués);
l'état persiste d'une ligne à l'autre.
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

logger = logging.getLogger('Concision.Cleaner')

_LINE_BREAK = re.compile(r"\r\n|\r|\n")

# 'x', '\n', '\'', '\x7f', '\u{1F600}'; une durée de vie ('a) n'a pas d'apostrophe fermante
_CHAR_LITERAL = r"(?P<char>'(?:\\(?:u\{[0-9a-fA-F]{1,6}\}|x[0-9a-fA-F]{2}|.)|[^'\\\n])')"


class LineClass(Enum):
    """Classe d'une ligne; la valeur est la lettre utilisée dans les fichiers de référence."""
    CODE = "C"
    COMMENT_ONLY = "K"
    BLANK = "B"


class LexMode(Enum):
    """États possibles de l'analyseur lexical."""
    CODE = "code"
    BLOCK_COMMENT = "block_comment"
    STRING = "string"


class _LexState:
    """État mutable de l'automate, transporté de ligne en ligne."""
    __slots__ = ("mode", "block", "depth", "delimiter")

    def __init__(self):
        self.mode = LexMode.CODE
        self.block = None
        self.depth = 0
        self.delimiter = None


@dataclass(frozen=True)
class CleanedSample:
    """
    Échantillon nettoyé d'un couple (système, langage).

    `cleaned_bytes` contient les lignes de code retenues, chacune terminée
    par un LF; `original_bytes_count` est la taille avant toute compression.
    """
    system_id: str
    language_id: str
    cleaned_bytes: bytes
    loc: int
    original_bytes_count: int
    files_included: int
    physical_lines: int = 0
    decode_warnings: int = 0
    unterminated_comments: int = 0
    unreadable_files: int = 0

    @property
    def is_empty(self):
        return self.original_bytes_count == 0


class _Lexer:
    """Analyseur compilé pour un profil (expressions régulières précalculées)."""

    LINE, BLOCK, STRING = "line", "block", "string"

    def __init__(self, profile):
        flags = re.IGNORECASE if profile.case_insensitive else 0
        self.nestable = profile.nestable_block_comments
        openers = {}
        for marker in profile.line_comment_markers:
            openers.setdefault(marker, (self.LINE, None))
        for pair in profile.block_comment_pairs:
            openers.setdefault(pair[0], (self.BLOCK, tuple(pair)))
        for delimiter in profile.string_delimiters:
            openers.setdefault(delimiter.open, (self.STRING, delimiter))
        # Les ouvrants les plus longs d'abord (""" avant ")
        ordered = sorted(openers, key=lambda t: (-len(t), t))
        self.kinds = {t.lower() if flags else t: openers[t] for t in ordered}
        alternatives = [re.escape(t) for t in ordered]
        if profile.char_literals:
            alternatives.insert(0, _CHAR_LITERAL)
        self.opener_re = re.compile("|".join(alternatives), flags) if alternatives else None
        self.case_insensitive = bool(flags)

        self.block_re = {}
        for pair in profile.block_comment_pairs:
            alternatives = [f"(?P<close>{re.escape(pair[1])})"]
            if self.nestable:
                alternatives.append(f"(?P<open>{re.escape(pair[0])})")
            self.block_re[tuple(pair)] = re.compile("|".join(alternatives), flags)

        self.string_re = {}
        for delimiter in profile.string_delimiters:
            alternatives = []
            if delimiter.escape:
                alternatives.append(f"(?P<esc>{re.escape(delimiter.escape)}(?:.|$))")
            alternatives.append(f"(?P<close>{re.escape(delimiter.close)})")
            self.string_re[delimiter] = re.compile("|".join(alternatives))

    def lookup(self, token):
        return self.kinds[token.lower() if self.case_insensitive else token]

    def scan_line(self, line, state, code_parts=None):
        """
        Analyse une ligne et fait évoluer l'état.

        Args:
            line (str): Ligne sans terminaison
            state (_LexState): État courant (modifié)
            code_parts (list | None): Reçoit les fragments de code hors chaînes et commentaires

        Returns:
            bool: La ligne contient au moins un caractère de code
        """
        has_code = False
        pos = 0
        n = len(line)
        continued = False

        while pos < n:
            if state.mode is LexMode.CODE:
                match = self.opener_re.search(line, pos) if self.opener_re else None
                end = match.start() if match else n
                fragment = line[pos:end]
                if fragment.strip():
                    has_code = True
                if code_parts is not None:
                    code_parts.append(fragment)
                if match is None:
                    break
                if match.lastgroup == "char":
                    has_code = True
                    if code_parts is not None:
                        code_parts.append(" ")
                    pos = match.end()
                    continue
                kind, payload = self.lookup(match.group())
                if kind == self.LINE:
                    break
                if kind == self.BLOCK:
                    state.mode, state.block, state.depth = LexMode.BLOCK_COMMENT, payload, 1
                else:
                    state.mode, state.delimiter = LexMode.STRING, payload
                    has_code = True
                if code_parts is not None:
                    code_parts.append(" ")
                pos = match.end()

            elif state.mode is LexMode.BLOCK_COMMENT:
                match = self.block_re[state.block].search(line, pos)
                if match is None:
                    break
                if match.lastgroup == "close":
                    state.depth -= 1
                    if state.depth == 0:
                        state.mode, state.block = LexMode.CODE, None
                else:
                    state.depth += 1
                pos = match.end()

            else:
                has_code = True
                match = self.string_re[state.delimiter].search(line, pos)
                if match is None:
                    break
                if match.lastgroup == "close":
                    state.mode, state.delimiter = LexMode.CODE, None
                elif match.end() == n and match.group().strip() == state.delimiter.escape:
                    # Échappement en fin de ligne : continuation
                    continued = True
                pos = match.end()

        if state.mode is LexMode.STRING:
            has_code = True
            if not state.delimiter.multiline and not continued:
                state.mode, state.delimiter = LexMode.CODE, None
        return has_code


@lru_cache(maxsize=64)
def _lexer_for(profile):
    return _Lexer(profile)


def split_lines(text):
    """Découpe un texte en lignes physiques (CRLF, CR et LF reconnus)."""
    if not text:
        return []
    lines = _LINE_BREAK.split(text)
    if lines and lines[-1] == "":
        lines.pop()
    return lines


def _classify(lines, profile):
    lexer = _lexer_for(profile)
    state = _LexState()
    classes = []
    for line in lines:
        has_code = lexer.scan_line(line, state)
        if not line.strip():
            classes.append(LineClass.BLANK)
        elif has_code:
            classes.append(LineClass.CODE)
        else:
            classes.append(LineClass.COMMENT_ONLY)
    return classes, state.mode is LexMode.BLOCK_COMMENT


def classify_lines(text, profile):
    """
    Classe chaque ligne d'un texte décodé.

    Une ligne est BLANK si elle ne contient que des blancs, COMMENT_ONLY si
    elle ne contient aucun caractère de code hors commentaires, CODE sinon.
    Un commentaire bloc non terminé classe les lignes restantes en COMMENT_ONLY.

    Args:
        text (str): Contenu du fichier
        profile (LanguageProfile): Profil du langage

    Returns:
        list[LineClass]: Une classe par ligne physique
    """
    classes, _ = _classify(split_lines(text), profile)
    return classes


def code_only_text(text, profile):
    """
    Retourne le texte privé des commentaires et du contenu des chaînes.

    Chaque chaîne ou commentaire est remplacé par un espace; les lignes
    sont conservées (utile au comptage de points de décision).
    """
    lexer = _lexer_for(profile)
    state = _LexState()
    out = []
    for line in split_lines(text):
        parts = []
        lexer.scan_line(line, state, parts)
        out.append("".join(parts))
    return "\n".join(out)


def decode_source(data):
    """
    Décode des octets en UTF-8, les octets invalides étant remplacés.

    Returns:
        tuple[str, bool]: Texte et indicateur de remplacement
    """
    try:
        return data.decode('utf-8'), False
    except UnicodeDecodeError:
        return data.decode('utf-8', errors='replace'), True


class SampleCleaner:
    """
    Construit les échantillons nettoyés.
    Les fichiers sont concaténés dans l'ordre du manifeste.
    """

    def __init__(self, profile):
        """
        Args:
            profile (LanguageProfile): Profil du langage des fichiers
        """
        self.logger = logging.getLogger('Concision.Cleaner')
        self.profile = profile

    def clean_text(self, text):
        """
        Nettoie un texte : lignes de code seules, blancs finaux retirés.

        Returns:
            tuple[list[str], int, bool]: Lignes retenues, lignes physiques,
            commentaire bloc non terminé
        """
        lines = split_lines(text)
        classes, unterminated = _classify(lines, self.profile)
        kept = [line.rstrip() for line, cls in zip(lines, classes) if cls is LineClass.CODE]
        return kept, len(lines), unterminated

    def clean(self, files, system_id="", on_file=None):
        """
        Construit l'échantillon nettoyé d'une liste de fichiers.

        Args:
            files (list[str]): Fichiers, dans l'ordre du manifeste
            system_id (str): Identifiant du système
            on_file (callable | None): Appelé avec (chemin, lignes retenues) pour chaque fichier lu

        Returns:
            CleanedSample
        """
        retained = []
        physical = 0
        decode_warnings = 0
        unterminated_count = 0
        unreadable = 0
        included = 0

        for path in files:
            try:
                with open(path, 'rb') as f:
                    data = f.read()
            except OSError as e:
                self.logger.error(f"Lecture impossible {path}: {str(e)}")
                unreadable += 1
                continue

            text, replaced = decode_source(data)
            if replaced:
                decode_warnings += 1
                self.logger.warning(f"Octets UTF-8 invalides remplacés: {path}")

            kept, n_lines, unterminated = self.clean_text(text)
            if unterminated:
                unterminated_count += 1
                self.logger.warning(f"Commentaire bloc non terminé en fin de fichier: {path}")
            if on_file is not None:
                on_file(path, kept)
            retained.extend(kept)
            physical += n_lines
            included += 1

        cleaned = "".join(line + "\n" for line in retained).encode('utf-8')
        return CleanedSample(
            system_id=system_id,
            language_id=self.profile.language_id,
            cleaned_bytes=cleaned,
            loc=len(retained),
            original_bytes_count=len(cleaned),
            files_included=included,
            physical_lines=physical,
            decode_warnings=decode_warnings,
            unterminated_comments=unterminated_count,
            unreadable_files=unreadable,
        )


def clean_sample(files, profile, system_id=""):
    """
    Raccourci fonctionnel de SampleCleaner.clean.

    Args:
        files (list[str]): Fichiers ordonnés, tous du langage du profil
        profile (LanguageProfile): Profil du langage
        system_id (str): Identifiant du système

    Returns:
        CleanedSample
    """
    return SampleCleaner(profile).clean(files, system_id)


def count_loc(cleaned_bytes):
    """Nombre de lignes d'un contenu nettoyé (la dernière compte même sans LF final)."""
    if not cleaned_bytes:
        return 0
    return cleaned_bytes.count(b"\n") + (0 if cleaned_bytes.endswith(b"\n") else 1)
