"""Exception hierarchy shared across the toolkit.

Every error carries a short machine-readable ``code`` so the command line
front end can map failures onto stable exit codes and ``error[CODE]``
prefixes without string matching.
"""

from __future__ import annotations


class TracelinkError(Exception):
    """Base class for all toolkit errors."""

    code = "error"
    exit_code = 1


class ParseError(TracelinkError):
    """A source file could not be parsed (malformed JSON, RLE, lexicon...)."""

    code = "parse"
    exit_code = 4


class IntegrityError(TracelinkError):
    """Inputs parsed but contradict each other or their own metadata."""

    code = "integrity"
    exit_code = 5


class ConfigError(TracelinkError):
    """Bad configuration: unknown keys, missing paths, invalid values."""

    code = "config"
    exit_code = 3


class MissingInputError(TracelinkError):
    """A referenced narrative, image or file is absent."""

    code = "missing-input"
    exit_code = 6
