#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Concision - Programme Principal
-------------------------------
Point d'entrée de la chaîne de mesure de la concision des langages.
Il orchestre les différents modules pour :
- Mesurer les taux de compression d'un corpus (measure)
- Agréger les mesures en benchmark (benchmark)
- Pondérer les volumes d'un système (weigh)
- Valider le classement contre un classement externe (validate)
- Exporter les facteurs d'un benchmark (report)

Codes de sortie : 0 succès, 1 erreur d'entrée/sortie, 2 configuration
ou usage, 3 données insuffisantes.
"""

import argparse
import logging
import sys
from pathlib import Path

from src.analysis.benchmark import (
    aggregate, factors_csv, load_benchmark, load_measurements, measure_corpus, measurements_csv,
    measurements_to_document, benchmark_to_dict, now_timestamp, save_benchmark,
)
from src.analysis.metrics import (
    FallbackPolicy, inversion_check, mccabe_report, report_metadata, volume_breakdown,
)
from src.analysis.validation import compare, load_alias_csv, load_ranking_csv
from src.analysis.weighing import analyze_system
from src.compression.compressor import CompressorSpec
from src.corpus.profiles import load_language_profiles
from src.corpus.scanner import ScanOptions, scan_corpus
from src.utils.config import OUTPUT_FORMATS, Configuration, RunConfig
from src.utils.errors import (
    ConcisionError, ConfigurationError, InsufficientData, MissingFactor, ParseError, UndefinedCorrelation,
)
from src.utils.storage import atomic_write_text, dump_document, load_document, render_csv

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_INSUFFICIENT = 3

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


class ConcisionController:
    """
    Classe principale de la chaîne de mesure.
    Charge les profils et le compresseur, puis exécute une sous-commande.
    """

    def __init__(self, run_config):
        """
        Initialise le contrôleur.

        Args:
            run_config (RunConfig): Paramètres résolus
        """
        self.config = run_config
        self._setup_logging()
        self.logger.debug(f"Sous-commande: {run_config.subcommand}")

        try:
            self.fallback = FallbackPolicy(run_config.fallback)
            self.profiles = self._load_profiles()
            self.compressor = CompressorSpec.from_config(run_config.compressor)
        except ConcisionError as e:
            self.logger.error(f"Erreur lors de l'initialisation: {str(e)}")
            raise

    def _setup_logging(self):
        """
        Configure le logging : console (stderr) toujours, fichier si demandé.
        Les journaux ne font jamais partie des fichiers produits.
        """
        handlers = [logging.StreamHandler(sys.stderr)]
        if self.config.log_file:
            handlers.append(logging.FileHandler(self.config.log_file, encoding='utf-8'))
        logging.basicConfig(
            level=getattr(logging, str(self.config.log_level).upper(), logging.INFO),
            format=LOG_FORMAT,
            handlers=handlers,
            force=True,
        )
        self.logger = logging.getLogger('Concision')

    def _load_profiles(self):
        path = self.config.profiles_path
        if not path:
            return load_language_profiles()
        try:
            return load_language_profiles(Path(path).read_bytes())
        except ParseError as e:
            raise ConfigurationError(f"Profils {path}: {str(e)}") from e

    # --- Sorties ------------------------------------------------------------

    def _created_at(self):
        return None if self.config.reproducible else now_timestamp()

    def _emit(self, text, path=None):
        """Écrit un texte dans un fichier (atomiquement) ou sur la sortie standard."""
        target = path if path is not None else self.config.output
        if target:
            atomic_write_text(target, text)
            self.logger.info(f"Écrit: {target}")
        else:
            sys.stdout.write(text)

    def _emit_document(self, document, csv_text):
        if self.config.output_format == 'csv':
            self._emit(csv_text)
        else:
            self._emit(dump_document(document, self.config.output_format))

    # --- Sous-commandes -----------------------------------------------------

    def cmd_measure(self):
        """Explore le corpus, nettoie et mesure chaque couple (système, langage)."""
        options = ScanOptions(
            follow_symlinks=self.config.follow_symlinks,
            exclude_globs=tuple(self.config.exclude_globs),
            single_system=self.config.single_system,
        )
        manifest = scan_corpus(self.config.roots, self.profiles, options)
        if self.config.manifest:
            atomic_write_text(self.config.manifest, dump_document(manifest.to_dict()))
        measurements = measure_corpus(manifest, self.profiles, self.compressor, self.config.jobs)
        self._emit_document(
            measurements_to_document(measurements, self._created_at()),
            measurements_csv(measurements),
        )
        return EXIT_OK

    def _read_inputs(self):
        """Lit les tables de mesures et/ou les benchmarks précédents (ré-agrégation)."""
        measurements = []
        for path in self.config.inputs:
            path = Path(path)
            if path.suffix.lower() != '.csv':
                document = load_document(path.read_text(encoding='utf-8'), str(path))
                if isinstance(document, dict) and 'factors' in document:
                    measurements.extend(load_benchmark(path).measurements())
                    self.logger.info(f"Benchmark ré-agrégé depuis sa provenance: {path}")
                    continue
            measurements.extend(load_measurements(path))
        return measurements

    def cmd_benchmark(self):
        """Agrège des mesures en benchmark."""
        db = aggregate(
            self._read_inputs(),
            min_sample_bytes=self.config.min_sample_bytes,
            min_systems=self.config.min_systems,
            created_at=self._created_at(),
        )
        self.logger.info(
            f"Benchmark: {len(db.factors)} facteurs, {len(db.insufficient_data)} langages insuffisants"
        )
        if self.config.output_format == 'csv':
            self._emit(factors_csv(db))
        elif self.config.output:
            save_benchmark(db, self.config.output, self.config.output_format)
        else:
            save_benchmark(db, sys.stdout, self.config.output_format)
        return EXIT_OK

    def cmd_weigh(self):
        """Pondère les volumes d'un système et produit les rapports de volume et de McCabe."""
        if not self.config.benchmark:
            raise ConfigurationError("weigh: --benchmark est obligatoire")
        benchmark = load_benchmark(self.config.benchmark)
        root = self.config.roots[0]
        complexities = analyze_system(
            root, self.profiles, self.config.exclude_globs, self.config.follow_symlinks,
        )
        if not complexities:
            raise InsufficientData(f"Aucune ligne de code à pondérer dans {root}")

        volumes = volume_breakdown(
            {c.language_id: c.raw_loc for c in complexities}, benchmark, self.fallback,
        )
        try:
            mccabe = mccabe_report(complexities, benchmark, self.fallback)
        except InsufficientData as e:
            self.logger.warning(f"Rapport McCabe non calculé: {str(e)}")
            mccabe = None

        inversion = None
        if self.config.compare:
            try:
                inversion = inversion_check(volumes, *self.config.compare)
                if inversion.inverted:
                    self.logger.info(f"Inversion constatée: {inversion.describe()}")
                else:
                    self.logger.warning(f"Inversion non reproduite par ce benchmark: {inversion.describe()}")
            except MissingFactor as e:
                self.logger.warning(f"Comparaison impossible: {str(e)}")

        document = {
            'metadata': dict(report_metadata(benchmark, self.fallback, inversion), created_at=self._created_at()),
            'volume': volumes.to_dict(),
            'mccabe': mccabe.to_dict() if mccabe else {'unavailable': 'moins de deux langages exploitables'},
        }
        if self.config.output and Path(self.config.output).suffix == '':
            self._write_weigh_directory(Path(self.config.output), document, volumes, mccabe)
        elif self.config.output_format == 'csv':
            text = volumes.to_csv()
            if mccabe is not None:
                text += "\n" + mccabe.to_csv()
            self._emit(text)
        else:
            self._emit(dump_document(document, self.config.output_format))
        return EXIT_OK

    def _write_weigh_directory(self, directory, document, volumes, mccabe):
        """Écrit les rapports et les séries de tracé dans un répertoire."""
        fmt = self.config.output_format
        if fmt != 'csv':
            self._emit(dump_document(document, fmt), directory / f"weigh.{fmt}")
        self._emit(volumes.to_csv(), directory / "volume.csv")
        self._emit(volumes.plot_series(), directory / "volume_plot.tsv")
        if mccabe is not None:
            self._emit(mccabe.to_csv(), directory / "mccabe.csv")
            self._emit(mccabe.plot_series(), directory / "mccabe_plot.tsv")

    def cmd_validate(self):
        """Compare le classement du benchmark à un classement externe."""
        if not self.config.benchmark or not self.config.ranking:
            raise ConfigurationError("validate: --benchmark et --ranking sont obligatoires")
        benchmark = load_benchmark(self.config.benchmark)
        aliases = load_alias_csv(self.config.aliases) if self.config.aliases else None
        ranking = load_ranking_csv(self.config.ranking, aliases, self.config.orientation)
        report = compare(benchmark, ranking)
        rows = [(lang, repr(cr), repr(score)) for lang, cr, score in report.matched]
        self._emit_document(report.to_dict(), render_csv(("language", "cr", "external_score"), rows))
        return EXIT_OK

    def cmd_report(self):
        """Exporte les facteurs d'un benchmark (CSV) ou un résumé structuré."""
        if not self.config.benchmark:
            raise ConfigurationError("report: --benchmark est obligatoire")
        db = load_benchmark(self.config.benchmark)
        full = benchmark_to_dict(db)
        summary = {
            'compressor': db.compressor_name,
            'cr_direction': 'original/compressed',
            'thresholds': full['thresholds'],
            'factors': [
                {
                    'language': lang,
                    'cr': f.cr_characteristic,
                    'cr_p25': f.cr_p25,
                    'cr_p75': f.cr_p75,
                    'samples': f.sample_count,
                    'loc': f.total_loc,
                }
                for lang, f in sorted(db.factors.items())
            ],
            'insufficient_data': list(db.insufficient_data),
        }
        self._emit_document(summary, factors_csv(db))
        return EXIT_OK

    def run(self):
        """Exécute la sous-commande demandée."""
        handler = getattr(self, f"cmd_{self.config.subcommand}")
        return handler()


def build_parser():
    """Construit l'analyseur de ligne de commande (défauts à None : la configuration complète)."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', help="Fichier de configuration YAML")
    common.add_argument('--profiles', help="Profils de langage YAML")
    common.add_argument('--jobs', type=int, help="Processus de travail")
    common.add_argument('--format', choices=OUTPUT_FORMATS, help="Format de sortie")
    common.add_argument('--reproducible', action='store_true', default=None,
                        help="Sorties identiques octet pour octet (pas d'horodatage)")
    common.add_argument('-o', '--output', help="Fichier (ou répertoire pour weigh) de sortie")
    common.add_argument('--log-file', dest='log_file', help="Journal")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', dest='log_level', action='store_const', const='DEBUG')
    verbosity.add_argument('-q', '--quiet', dest='log_level', action='store_const', const='WARNING')

    corpus = argparse.ArgumentParser(add_help=False)
    corpus.add_argument('--exclude', action='append', help="Motif glob exclu (répétable)")
    corpus.add_argument('--follow-symlinks', dest='follow_symlinks', action='store_true', default=None)

    parser = argparse.ArgumentParser(prog='concision', description=__doc__.split('\n')[1])
    commands = parser.add_subparsers(dest='command', required=True)

    measure = commands.add_parser('measure', parents=[common, corpus], help="Mesurer un corpus")
    measure.add_argument('roots', nargs='+', help="Racines du corpus (un sous-répertoire = un système)")
    measure.add_argument('--single-system', dest='single_system', action='store_true', default=None)
    measure.add_argument('--manifest', help="Écrire le manifeste du corpus")
    measure.add_argument('--window-bytes', dest='window_bytes', type=int)
    measure.add_argument('--external-command', dest='external_command',
                         help="Commande d'un compresseur externe (stdin -> stdout)")
    measure.add_argument('--compressor-name', dest='compressor_name')

    benchmark = commands.add_parser('benchmark', parents=[common], help="Agréger des mesures")
    benchmark.add_argument('inputs', nargs='+', help="Tables de mesures ou benchmarks à ré-agréger")
    benchmark.add_argument('--min-sample-bytes', dest='min_sample_bytes', type=int)
    benchmark.add_argument('--min-systems', dest='min_systems', type=int)

    weigh = commands.add_parser('weigh', parents=[common, corpus], help="Pondérer un système")
    weigh.add_argument('roots', nargs=1, metavar='root', help="Racine du système")
    weigh.add_argument('--benchmark', required=True)
    weigh.add_argument('--fallback', help="error | cr=1.0 | cr=median")
    weigh.add_argument('--compare', help="Deux langages à comparer, ex: python,csharp")

    validate = commands.add_parser('validate', parents=[common], help="Valider contre un classement externe")
    validate.add_argument('--benchmark', required=True)
    validate.add_argument('--ranking', required=True, help="CSV language,score")
    validate.add_argument('--aliases', help="CSV alias,canonical")
    validate.add_argument('--orientation', choices=('same', 'inverted'))

    report = commands.add_parser('report', parents=[common], help="Exporter les facteurs")
    report.add_argument('benchmark', help="Fichier de benchmark")

    return parser


def _exit_code(error, command):
    if isinstance(error, InsufficientData):
        return EXIT_USAGE if command == 'validate' else EXIT_INSUFFICIENT
    if isinstance(error, (MissingFactor, UndefinedCorrelation)):
        return EXIT_INSUFFICIENT
    if isinstance(error, ConfigurationError):
        return EXIT_USAGE
    return EXIT_IO


def main(argv=None):
    """
    Point d'entrée.

    Returns:
        int: Code de sortie
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        run_config = RunConfig.resolve(args, Configuration(args.config))
    except ConfigurationError as e:
        print(f"concision: {str(e)}", file=sys.stderr)
        return EXIT_USAGE
    except (TypeError, ValueError) as e:
        print(f"concision: configuration invalide: {str(e)}", file=sys.stderr)
        return EXIT_USAGE

    logger = logging.getLogger('Concision')
    try:
        controller = ConcisionController(run_config)
        return controller.run()
    except ConcisionError as e:
        logger.error(str(e))
        return _exit_code(e, run_config.subcommand)
    except OSError as e:
        logger.error(f"Erreur d'entrée/sortie: {str(e)}")
        return EXIT_IO
    except KeyboardInterrupt:
        logger.info("Arrêt demandé par l'utilisateur")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
