"""Probabilistic EL++ reasoner: MAP inference, classification, exact world enumeration.

Every function takes knowledge-base text in the line format accepted by the
``mel`` command. Reports come back as plain dictionaries with the same keys as
``mel <command> --format json``; rationals are decimal strings.
"""

import json

from . import _core
from ._core import (
    DEFAULT_MAX_WORLDS,
    CapExceededError,
    IncoherentError,
    MelError,
    ParseError,
    ValidationError,
)

__all__ = [
    "DEFAULT_MAX_WORLDS",
    "CapExceededError",
    "IncoherentError",
    "MelError",
    "ParseError",
    "ValidationError",
    "classify",
    "dump_ilp",
    "normalize",
    "oracle",
    "probability",
    "solve",
    "validate",
]


def solve(kb_text, domain="real", explain=False, forced=None):
    """MAP world of ``kb_text``.

    ``forced`` maps uncertain-statement indices to True (must be entailed) or
    False (must not be).
    """
    return json.loads(_core.solve(kb_text, domain, explain, dict(forced or {})))


def classify(kb_text, domain="real"):
    return json.loads(_core.classify(kb_text, domain))


def oracle(kb_text, max_worlds=DEFAULT_MAX_WORLDS, domain="real"):
    return json.loads(_core.oracle(kb_text, max_worlds, domain))


def probability(kb_text, query_text, max_worlds=DEFAULT_MAX_WORLDS, domain="real"):
    return json.loads(_core.probability(kb_text, query_text, max_worlds, domain))


def dump_ilp(kb_text, domain="real"):
    return _core.dump_ilp(kb_text, domain)


def normalize(kb_text):
    """Returns ``(normal_form_text, fresh_names)``."""
    return _core.normalize(kb_text)


def validate(kb_text):
    """Reasons the knowledge base is malformed; empty when it is valid."""
    return _core.validate(kb_text)
