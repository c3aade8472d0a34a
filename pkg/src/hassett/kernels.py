"""Backend selector for the integer kernels.

Imports the compiled extension when it is available and falls back to the
pure-Python twin otherwise. ``HASSETT_PURE=1`` in the environment forces the
fallback, which the test suite uses to compare the two backends and the
benchmark uses to time them.
"""

from __future__ import annotations

import os

if os.environ.get("HASSETT_PURE") == "1":
    from hassett import _purekern as _impl
else:
    try:
        from hassett import _fastkern as _impl  # type: ignore[no-redef]
    except ImportError:
        from hassett import _purekern as _impl  # type: ignore[no-redef]

BACKEND: str = _impl.BACKEND

enumerate_small_subsets = _impl.enumerate_small_subsets
find_subset_in_interval = _impl.find_subset_in_interval
close_permutations = _impl.close_permutations

__all__ = [
    "BACKEND",
    "enumerate_small_subsets",
    "find_subset_in_interval",
    "close_permutations",
]
