# -*- coding: utf-8 -*-

"""
Module de Stockage
------------------
Écriture atomique des fichiers produits et (dé)sérialisation
des documents structurés (YAML / JSON) et des tables CSV.
"""

import csv
import io
import json
import logging
import os
import tempfile
from pathlib import Path

import yaml

from .errors import ParseError

logger = logging.getLogger('Concision.Storage')


def atomic_write_text(path, text):
    """
    Écrit un fichier texte de façon atomique (fichier temporaire + renommage).

    Args:
        path (str | Path): Fichier cible
        text (str): Contenu
    """
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{target.name}.", suffix=".tmp", dir=target.parent)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as f:
            f.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise
    logger.debug(f"Fichier écrit: {target}")


def dump_document(data, fmt='yaml'):
    """Sérialise un arbre de dictionnaires/listes en YAML ou JSON."""
    if fmt == 'json':
        return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    return yaml.safe_dump(data, default_flow_style=False, sort_keys=False, allow_unicode=True)


def load_document(text, source="<document>"):
    """
    Charge un document YAML (JSON étant un sous-ensemble de YAML).

    Raises:
        ParseError: document invalide, avec la position de l'erreur
    """
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, 'problem_mark', None)
        location = f"{source}, ligne {mark.line + 1}, colonne {mark.column + 1}" if mark else source
        raise ParseError(f"Document illisible: {getattr(e, 'problem', None) or str(e)}", location) from e


def render_csv(header, rows):
    """Produit une table CSV (séparateur ',', fins de ligne LF)."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buffer.getvalue()


def read_csv(path, required_columns):
    """
    Lit une table CSV avec en-tête.

    Args:
        path (str | Path): Fichier CSV (UTF-8)
        required_columns (tuple): Colonnes obligatoires

    Returns:
        list[dict]: Une entrée par ligne
    """
    with open(path, 'r', encoding='utf-8', newline='') as f:
        reader = csv.DictReader(f)
        header = reader.fieldnames or []
        missing = [c for c in required_columns if c not in header]
        if missing:
            raise ParseError(
                f"Colonnes manquantes {missing} (en-tête: {header})", str(path)
            )
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if any(row.get(c) in (None, "") for c in required_columns):
                raise ParseError("Ligne incomplète", f"{path}, ligne {line_no}")
            rows.append(row)
        return rows


def format_ratio(value):
    """Représentation texte stable d'un flottant pour les tables CSV."""
    return repr(float(value))
