"""Backend selection for the hot search kernel.

The compiled ``_search`` extension is used when it imports; otherwise the
pure-Python ``_search_py`` module, which produces identical results.
"""

from __future__ import annotations

try:
    from stripsym._search import ml_search_batch
    BACKEND = "cython"
except ImportError:  # extension not built
    from stripsym._search_py import ml_search_batch
    BACKEND = "python"

__all__ = ["BACKEND", "ml_search_batch"]
