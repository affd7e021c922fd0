"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

__all__ = ["thread_count", "ordered_map"]


def thread_count() -> int:
    """Worker cap from EHF_THREADS (default: all cores)."""
    raw = os.environ.get("EHF_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            raise ValueError(f"EHF_THREADS must be an integer, got {raw!r}")
        if n < 1:
            raise ValueError("EHF_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def ordered_map(fn, items):
    """Map preserving input order, threaded when it can help."""
    items = list(items)
    workers = min(thread_count(), len(items))
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
