# -*- coding: utf-8 -*-

"""
Module du Codec LZ
------------------
Compresseur LZ77 à fenêtre unique (pas de blocs) : flux LZMA2 brut,
sans conteneur xz ni somme de contrôle. Les correspondances sont
cherchées par chaînes de hachage (hc4) dans un dictionnaire qui couvre
toute l'entrée, dans la limite de la fenêtre demandée; les jetons sont
codés par plages avec des modèles adaptatifs.

Format du flux :
    b"CZ" | version (1 octet) | mode (1 octet) | longueur d'origine (varint)
          | [taille du dictionnaire (varint), mode 0 seulement] | charge utile
mode 0 : charge utile LZMA2; mode 1 : charge utile stockée telle quelle.
Le mode stocké borne la sortie à longueur + 13 octets.

La sortie est déterministe pour une version donnée de liblzma.
Le décodeur n'existe que pour vérifier l'aller-retour dans les tests.
"""

import lzma

MAGIC = b"CZ"
FORMAT_VERSION = 2
MODE_CODED = 0
MODE_STORED = 1
MAX_HEADER_BYTES = 4 + 9 + 5

MIN_DICT_SIZE = 4096
MAX_DICT_SIZE = 1536 * 1024 * 1024
PRESET = 9


def _write_varint(out, value):
    while True:
        byte = value & 0x7F
        value >>= 7
        if value:
            out.append(byte | 0x80)
        else:
            out.append(byte)
            return


def _read_varint(data, pos):
    value = 0
    shift = 0
    while True:
        if pos >= len(data):
            raise ValueError("En-tête tronqué")
        byte = data[pos]
        pos += 1
        value |= (byte & 0x7F) << shift
        if not byte & 0x80:
            return value, pos
        shift += 7
        if shift > 63:
            raise ValueError("Longueur invalide dans l'en-tête")


def dict_size_for(length, window=0):
    """
    Taille du dictionnaire : toute l'entrée, bornée par la fenêtre.

    Args:
        length (int): Taille de l'entrée
        window (int): Fenêtre en octets (0 = illimitée)

    Returns:
        int: Taille de dictionnaire acceptée par LZMA2
    """
    limit = min(window, MAX_DICT_SIZE) if window else MAX_DICT_SIZE
    return max(MIN_DICT_SIZE, min(limit, length))


def _filters(dict_size, encoding):
    spec = {"id": lzma.FILTER_LZMA2, "dict_size": dict_size}
    if encoding:
        spec.update(preset=PRESET, mf=lzma.MF_HC4)
    return [spec]


def encode(data, window=0):
    """
    Compresse des octets.

    Args:
        data (bytes): Données à compresser
        window (int): Taille de fenêtre en octets (0 = illimitée)

    Returns:
        bytes: Flux compressé (en-tête inclus)
    """
    data = bytes(data)
    header = bytearray(MAGIC)
    header.append(FORMAT_VERSION)
    dict_size = dict_size_for(len(data), window)
    payload = lzma.compress(data, format=lzma.FORMAT_RAW, filters=_filters(dict_size, True)) if data else b""
    if not data or len(payload) >= len(data):
        header.append(MODE_STORED)
        _write_varint(header, len(data))
        return bytes(header) + data
    header.append(MODE_CODED)
    _write_varint(header, len(data))
    _write_varint(header, dict_size)
    return bytes(header) + payload


def decode(blob):
    """
    Décompresse un flux produit par encode.

    Raises:
        ValueError: flux invalide
    """
    blob = bytes(blob)
    if blob[:2] != MAGIC or len(blob) < 4:
        raise ValueError("Flux non reconnu")
    if blob[2] != FORMAT_VERSION:
        raise ValueError(f"Version de format non supportée: {blob[2]}")
    mode = blob[3]
    size, pos = _read_varint(blob, 4)
    if mode == MODE_STORED:
        out = blob[pos:pos + size]
        if len(out) != size:
            raise ValueError("Flux stocké tronqué")
        return out
    if mode != MODE_CODED:
        raise ValueError(f"Mode inconnu: {mode}")

    dict_size, pos = _read_varint(blob, pos)
    if not MIN_DICT_SIZE <= dict_size <= MAX_DICT_SIZE:
        raise ValueError(f"Taille de dictionnaire invalide: {dict_size}")
    try:
        out = lzma.decompress(blob[pos:], format=lzma.FORMAT_RAW, filters=_filters(dict_size, False))
    except lzma.LZMAError as e:
        raise ValueError(f"Charge utile corrompue: {str(e)}") from e
    if len(out) != size:
        raise ValueError(f"Longueur décodée {len(out)} au lieu de {size}")
    return out
