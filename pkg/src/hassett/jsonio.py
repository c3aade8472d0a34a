"""Canonical JSON emission.

Identical values must serialize to identical bytes regardless of how the
emitting dict was built, so every emitter in the package funnels through
:func:`canonical_dumps`: sorted keys, no optional whitespace, ASCII-only
escapes. Rationals are already lowest-term strings by the time they reach
this layer (``Fraction`` normalizes on construction).
"""

from __future__ import annotations

import json


def canonical_dumps(obj: object) -> str:
    """Serialize to the canonical single-line JSON form."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def canonical_line(obj: object) -> str:
    """Canonical form with the trailing newline used on standard output."""
    return canonical_dumps(obj) + "\n"
