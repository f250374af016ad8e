# -*- coding: utf-8 -*-

"""
Module d'Exploration du Corpus
------------------------------
Parcourt une ou plusieurs arborescences de systèmes, attribue chaque
fichier à un langage et produit le manifeste (système, langage) -> fichiers.

Chaque fichier régulier est soit attribué à exactement un couple
(système, langage), soit listé dans `skipped` avec une raison.
"""

import fnmatch
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path

from .profiles import UNKNOWN, detect_language

# Taille de l'en-tête inspecté pour la détection des fichiers binaires
BINARY_SNIFF_BYTES = 8 * 1024

SKIP_BINARY = "binary"
SKIP_EXCLUDED = "excluded"
SKIP_UNKNOWN = "unknown-language"
SKIP_SYMLINK = "symlink"
SKIP_UNREADABLE = "unreadable"
SKIP_OUTSIDE = "outside-system"


@dataclass(frozen=True)
class ScanOptions:
    """Options d'exploration."""
    follow_symlinks: bool = False
    exclude_globs: tuple = ()
    single_system: bool = False


@dataclass(frozen=True)
class SystemEntry:
    """
    Un système du corpus.

    `files` associe chaque langage à la liste ordonnée des chemins
    relatifs (format POSIX) à `root`.
    """
    system_id: str
    root: str
    files: dict = field(default_factory=dict)

    def paths(self, language_id):
        """Chemins absolus des fichiers d'un langage, dans l'ordre du manifeste."""
        return [str(Path(self.root, rel)) for rel in self.files.get(language_id, ())]

    @property
    def languages(self):
        return sorted(self.files)


@dataclass(frozen=True)
class CorpusManifest:
    """Manifeste immuable du corpus."""
    systems: tuple = ()
    skipped: tuple = ()

    def to_dict(self):
        return {
            'systems': [
                {
                    'system_id': s.system_id,
                    'root': s.root,
                    'files': {lang: list(paths) for lang, paths in sorted(s.files.items())},
                }
                for s in self.systems
            ],
            'skipped': [[path, reason] for path, reason in self.skipped],
        }

    def pairs(self):
        """Itère sur les couples (système, langage) dans l'ordre déterministe."""
        for system in self.systems:
            for language_id in system.languages:
                yield system, language_id


def is_binary(path):
    """Un fichier est binaire s'il contient un octet NUL dans ses 8 premiers Kio."""
    with open(path, 'rb') as f:
        return b"\x00" in f.read(BINARY_SNIFF_BYTES)


def matches_any(relative_path, patterns):
    """
    Teste un chemin relatif POSIX contre des motifs glob.

    `**` traverse les répertoires (fnmatch laisse `*` franchir `/`);
    le chemin est aussi testé préfixé de `/` pour que `**/x/**`
    s'applique au premier niveau.
    """
    candidates = (relative_path, "/" + relative_path)
    return any(fnmatch.fnmatchcase(c, pattern) for pattern in patterns for c in candidates)


class CorpusScanner:
    """
    Explorateur de corpus.
    Produit un manifeste déterministe, indépendant de l'ordre du système de fichiers.
    """

    def __init__(self, profiles, options=None):
        """
        Initialise l'explorateur.

        Args:
            profiles (list[LanguageProfile]): Profils actifs
            options (ScanOptions): Options d'exploration
        """
        self.logger = logging.getLogger('Concision.Corpus')
        self.profiles = list(profiles)
        self.options = options or ScanOptions()

    def scan(self, roots):
        """
        Explore les racines et construit le manifeste.

        Args:
            roots (list[str | Path]): Répertoires racines

        Returns:
            CorpusManifest: Manifeste trié

        Raises:
            NotADirectoryError / FileNotFoundError / PermissionError: racine illisible
        """
        systems = []
        skipped = []
        for root in roots:
            root = Path(root)
            if not root.is_dir():
                raise NotADirectoryError(f"Racine introuvable ou non répertoire: {root}")
            if not os.access(root, os.R_OK | os.X_OK):
                raise PermissionError(f"Racine illisible: {root}")

            if self.options.single_system:
                systems.append(self._scan_system(root.resolve().name, root, root, skipped))
                continue

            for child in sorted(root.iterdir(), key=lambda p: p.name):
                rel = child.relative_to(root).as_posix()
                if child.is_symlink() and not self.options.follow_symlinks:
                    skipped.append((str(child), SKIP_SYMLINK))
                elif child.is_dir():
                    systems.append(self._scan_system(child.name, child, root, skipped))
                elif child.is_file():
                    reason = SKIP_EXCLUDED if matches_any(rel, self.options.exclude_globs) else SKIP_OUTSIDE
                    skipped.append((str(child), reason))

        systems = self._disambiguate(systems)
        manifest = CorpusManifest(
            systems=tuple(sorted(systems, key=lambda s: s.system_id)),
            skipped=tuple(sorted(skipped)),
        )
        self.logger.info(
            f"Corpus exploré: {len(manifest.systems)} systèmes, {len(manifest.skipped)} fichiers ignorés"
        )
        return manifest

    def _scan_system(self, system_id, system_root, scan_root, skipped):
        """Parcourt un système et classe ses fichiers par langage."""
        files = {}
        for dirpath, dirnames, filenames in os.walk(system_root, followlinks=self.options.follow_symlinks):
            dirnames.sort()
            current = Path(dirpath)
            if not self.options.follow_symlinks:
                for name in [d for d in dirnames if (current / d).is_symlink()]:
                    skipped.append((str(current / name), SKIP_SYMLINK))
                    dirnames.remove(name)

            for name in sorted(filenames):
                path = current / name
                rel_in_root = path.relative_to(scan_root).as_posix()
                reason = self._skip_reason(path, rel_in_root)
                if reason:
                    skipped.append((str(path), reason))
                    continue
                language_id = detect_language(name, self.profiles)
                if language_id == UNKNOWN:
                    skipped.append((str(path), SKIP_UNKNOWN))
                    continue
                files.setdefault(language_id, []).append(path.relative_to(system_root).as_posix())

        return SystemEntry(
            system_id=system_id,
            root=str(system_root.resolve()),
            files={lang: tuple(sorted(set(paths))) for lang, paths in sorted(files.items())},
        )

    def _skip_reason(self, path, relative_path):
        if path.is_symlink() and not self.options.follow_symlinks:
            return SKIP_SYMLINK
        if not path.is_file():
            return SKIP_UNREADABLE
        if matches_any(relative_path, self.options.exclude_globs):
            return SKIP_EXCLUDED
        try:
            if is_binary(path):
                return SKIP_BINARY
        except OSError as e:
            self.logger.warning(f"Fichier illisible {path}: {str(e)}")
            return SKIP_UNREADABLE
        return None

    def _disambiguate(self, systems):
        """Préfixe par le nom de la racine les systèmes homonymes issus de racines différentes."""
        counts = {}
        for system in systems:
            counts[system.system_id] = counts.get(system.system_id, 0) + 1
        result = []
        for system in systems:
            if counts[system.system_id] > 1:
                parent = Path(system.root).parent.name
                system = SystemEntry(f"{parent}/{system.system_id}", system.root, system.files)
            result.append(system)
        return result


def scan_corpus(roots, profiles, options=None):
    """
    Explore un corpus (raccourci fonctionnel de CorpusScanner).

    Args:
        roots (list): Répertoires racines; chaque sous-répertoire immédiat est un système
            (sauf en mode `single_system`, où la racine elle-même est le système)
        profiles (list[LanguageProfile]): Profils actifs
        options (ScanOptions): Options

    Returns:
        CorpusManifest
    """
    return CorpusScanner(profiles, options).scan(roots)
