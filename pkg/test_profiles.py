# -*- coding: utf-8 -*-

"""Tests des profils de langage et de la détection par extension."""

import pytest

from src.corpus.profiles import (
    BUILTIN_PROFILES, UNKNOWN, LanguageProfile, check_extension_conflicts, detect_language,
    load_language_profiles, profiles_by_id,
)
from src.utils.errors import ConfigurationError, ParseError


def test_builtin_set_covers_at_least_fifteen_languages(profiles):
    assert len(BUILTIN_PROFILES) >= 15
    for language in ("java", "csharp", "python", "javascript", "shell"):
        assert language in BUILTIN_PROFILES
    check_extension_conflicts(profiles)


def test_profiles_are_sorted_by_id(profiles):
    ids = [p.language_id for p in profiles]
    assert ids == sorted(ids)


@pytest.mark.parametrize("path,expected", [
    ("src/Main.java", "java"),
    ("Program.CS", "csharp"),
    ("lib/index.d.ts", "typescript"),
    ("app.ts", "typescript"),
    ("run.sh", "shell"),
    ("main.c", "c"),
    ("util.h", "c"),
    ("Makefile", UNKNOWN),
    ("archive.tar.gz", UNKNOWN),
    (".py", UNKNOWN),
])
def test_detect_language(profiles, path, expected):
    assert detect_language(path, profiles) == expected


def test_longest_suffix_wins():
    short = LanguageProfile("short", frozenset({".ts"}))
    long = LanguageProfile("decl", frozenset({".d.ts"}))
    assert detect_language("types.d.ts", [short, long]) == "decl"
    assert detect_language("app.ts", [short, long]) == "short"


def test_merge_adds_extensions_to_builtin():
    profiles = profiles_by_id(load_language_profiles("languages:\n  java:\n    extensions: [jav]\n"))
    assert {".java", ".jav"} <= profiles["java"].extensions


def test_new_profile_requires_extensions():
    with pytest.raises(ConfigurationError):
        load_language_profiles("languages:\n  cobol:\n    line_comments: ['*>']\n")


def test_new_profile_with_strings():
    source = (
        "languages:\n"
        "  lua:\n"
        "    extensions: [.lua]\n"
        "    line_comments: ['--']\n"
        "    block_comments: [['--[[', ']]']]\n"
        "    strings: [['\"', '\"', '\\'], ['[[', ']]', null, true]]\n"
    )
    lua = profiles_by_id(load_language_profiles(source))["lua"]
    assert lua.line_comment_markers == ("--",)
    assert lua.block_comment_pairs == (("--[[", "]]"),)
    assert lua.string_delimiters[1].multiline is True
    assert lua.string_delimiters[1].escape is None


def test_extension_conflict_names_both_languages():
    with pytest.raises(ConfigurationError) as info:
        load_language_profiles("languages:\n  groovy:\n    extensions: [.java]\n")
    message = str(info.value)
    assert "groovy" in message and "java" in message


def test_invalid_yaml_reports_position():
    with pytest.raises(ParseError) as info:
        load_language_profiles("languages:\n  java: [unclosed\n")
    assert "ligne" in str(info.value)


def test_unknown_key_is_rejected():
    with pytest.raises(ConfigurationError):
        load_language_profiles("languages:\n  java:\n    comments: ['//']\n")


def test_replace_defaults_drops_builtin_set():
    profiles = load_language_profiles(
        "replace_defaults: true\nlanguages:\n  tiny:\n    extensions: [.tiny]\n"
    )
    assert [p.language_id for p in profiles] == ["tiny"]


def test_reserved_identifier():
    with pytest.raises(ConfigurationError):
        LanguageProfile(UNKNOWN, frozenset({".x"}))


def test_empty_source_returns_builtin(profiles):
    assert load_language_profiles(b"") == profiles
