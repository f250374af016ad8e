# -*- coding: utf-8 -*-

"""
Module de Configuration
---------------------
Gère les paramètres d'exécution de la chaîne de mesure.
Permet de charger les configurations depuis un fichier YAML,
puis de les résoudre en un RunConfig avec les options de la ligne de commande.
"""

import copy
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import yaml

from .errors import ConfigurationError

MIB = 1024 * 1024

OUTPUT_FORMATS = ("yaml", "json", "csv")


class Configuration:
    """
    Gestionnaire de configuration du système.
    Centralise tous les paramètres configurables.
    """

    def __init__(self, config_file=None):
        """
        Initialise la configuration.

        Args:
            config_file (str): Chemin vers le fichier de configuration (optionnel)
        """
        self.logger = logging.getLogger('Concision.Config')
        self.config_file = Path(config_file) if config_file else None

        # Configuration par défaut
        self.default_config = {
            'corpus': {
                'exclude_globs': ['**/.git/**', '**/.svn/**', '**/.hg/**'],
                'follow_symlinks': False,
                'single_system': False,
            },
            'compressor': {
                'name': 'builtin-lz',
                'kind': 'builtin_lz',
                'window_bytes': 64 * MIB,
                'external_command': [],
            },
            'benchmark': {
                'min_sample_bytes': 100 * 1024,
                'min_systems': 5,
            },
            'metrics': {
                'fallback': 'error',
            },
            'execution': {
                'jobs': 1,
            },
            'output': {
                'format': 'yaml',
                'reproducible': False,
            },
            'logging': {
                'level': 'INFO',
                'file': None,
            },
        }

        # Chargement de la configuration
        self.config = self.load_config()

    def load_config(self):
        """
        Charge la configuration depuis le fichier.
        Utilise les valeurs par défaut si aucun fichier n'est donné.

        Returns:
            dict: Configuration chargée

        Raises:
            ConfigurationError: fichier absent ou YAML invalide
        """
        config = copy.deepcopy(self.default_config)
        if self.config_file is None:
            return config

        if not self.config_file.exists():
            raise ConfigurationError(
                f"Fichier de configuration non trouvé: {self.config_file}"
            )

        try:
            with open(self.config_file, 'r', encoding='utf-8') as f:
                loaded_config = yaml.safe_load(f) or {}
        except yaml.YAMLError as e:
            mark = getattr(e, 'problem_mark', None)
            where = f" (ligne {mark.line + 1}, colonne {mark.column + 1})" if mark else ""
            raise ConfigurationError(
                f"Configuration invalide {self.config_file}{where}: {str(e)}"
            ) from e

        if not isinstance(loaded_config, dict):
            raise ConfigurationError(
                f"La configuration {self.config_file} doit être un dictionnaire"
            )

        # Fusion avec la configuration par défaut
        self._deep_update(config, loaded_config)
        self.logger.info(f"Configuration chargée: {self.config_file}")
        return config

    def _deep_update(self, base_dict, update_dict):
        """
        Met à jour récursivement un dictionnaire.

        Args:
            base_dict (dict): Dictionnaire de base
            update_dict (dict): Nouvelles valeurs
        """
        for key, value in update_dict.items():
            if isinstance(value, dict) and isinstance(base_dict.get(key), dict):
                self._deep_update(base_dict[key], value)
            else:
                base_dict[key] = value

    def get(self, key, default=None):
        """
        Récupère une valeur de configuration.

        Args:
            key (str): Clé de configuration (notation pointée possible)
            default: Valeur par défaut si la clé n'existe pas

        Returns:
            Valeur de configuration
        """
        try:
            # Gestion des clés imbriquées (e.g., "benchmark.min_systems")
            value = self.config
            for k in key.split('.'):
                value = value[k]
            return value
        except (KeyError, TypeError):
            return default


def _parse_compare(value):
    """`python,csharp` -> ('python', 'csharp')."""
    if not value:
        return ()
    names = tuple(part.strip().lower() for part in value.split(',') if part.strip())
    if len(names) != 2:
        raise ConfigurationError(f"--compare attend deux langages séparés par une virgule: {value!r}")
    return names


@dataclass
class RunConfig:
    """Paramètres résolus d'une exécution (option CLI > fichier > défaut)."""

    subcommand: str
    roots: list = field(default_factory=list)
    inputs: list = field(default_factory=list)
    profiles_path: Optional[str] = None
    compressor: dict = field(default_factory=dict)
    min_sample_bytes: int = 100 * 1024
    min_systems: int = 5
    exclude_globs: list = field(default_factory=list)
    follow_symlinks: bool = False
    single_system: bool = False
    benchmark: Optional[str] = None
    ranking: Optional[str] = None
    aliases: Optional[str] = None
    orientation: str = 'same'
    compare: tuple = ()
    output: Optional[str] = None
    manifest: Optional[str] = None
    output_format: str = 'yaml'
    fallback: str = 'error'
    jobs: int = 1
    reproducible: bool = False
    log_level: str = 'INFO'
    log_file: Optional[str] = None

    def __post_init__(self):
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigurationError(
                f"Format de sortie inconnu: {self.output_format!r} (choix: {', '.join(OUTPUT_FORMATS)})"
            )
        if self.orientation not in ('same', 'inverted'):
            raise ConfigurationError(f"Orientation inconnue: {self.orientation!r} (same | inverted)")
        if int(self.jobs) < 1:
            raise ConfigurationError(f"--jobs doit être >= 1 (reçu {self.jobs})")
        if int(self.min_systems) < 1 or int(self.min_sample_bytes) < 0:
            raise ConfigurationError("Seuils de benchmark invalides")
        if self.output:
            parent = Path(self.output).resolve().parent
            if parent.exists() and not parent.is_dir():
                raise ConfigurationError(f"Répertoire de sortie invalide: {parent}")

    @classmethod
    def resolve(cls, args, configuration):
        """
        Combine les options de la ligne de commande et la configuration.

        Args:
            args (argparse.Namespace): Options analysées
            configuration (Configuration): Configuration chargée

        Returns:
            RunConfig: Paramètres effectifs
        """
        def pick(name, key):
            value = getattr(args, name, None)
            return configuration.get(key) if value is None else value

        compressor = dict(configuration.get('compressor', {}))
        if getattr(args, 'external_command', None):
            compressor['kind'] = 'external'
            compressor['external_command'] = args.external_command
            compressor['name'] = getattr(args, 'compressor_name', None) or 'external'
        elif getattr(args, 'compressor_name', None):
            compressor['name'] = args.compressor_name
        if getattr(args, 'window_bytes', None) is not None:
            compressor['window_bytes'] = args.window_bytes

        excludes = list(configuration.get('corpus.exclude_globs', []) or [])
        excludes.extend(getattr(args, 'exclude', None) or [])

        return cls(
            subcommand=args.command,
            roots=list(getattr(args, 'roots', None) or []),
            inputs=list(getattr(args, 'inputs', None) or []),
            profiles_path=getattr(args, 'profiles', None),
            compressor=compressor,
            min_sample_bytes=int(pick('min_sample_bytes', 'benchmark.min_sample_bytes')),
            min_systems=int(pick('min_systems', 'benchmark.min_systems')),
            exclude_globs=excludes,
            follow_symlinks=bool(getattr(args, 'follow_symlinks', False)
                                 or configuration.get('corpus.follow_symlinks')),
            single_system=bool(getattr(args, 'single_system', False)
                               or configuration.get('corpus.single_system')),
            benchmark=getattr(args, 'benchmark', None),
            ranking=getattr(args, 'ranking', None),
            aliases=getattr(args, 'aliases', None),
            orientation=getattr(args, 'orientation', None) or 'same',
            compare=_parse_compare(getattr(args, 'compare', None)),
            output=getattr(args, 'output', None),
            manifest=getattr(args, 'manifest', None),
            output_format=pick('format', 'output.format'),
            fallback=pick('fallback', 'metrics.fallback'),
            jobs=int(pick('jobs', 'execution.jobs')),
            reproducible=bool(getattr(args, 'reproducible', False)
                              or configuration.get('output.reproducible')),
            log_level=pick('log_level', 'logging.level'),
            log_file=pick('log_file', 'logging.file'),
        )
