"""
Counters and timing for simulation runs
"""

import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, fields, replace

COUNTER_FIELDS = (
    "gates_applied",
    "traversals",
    "blocks_read",
    "blocks_written",
    "bytes_read",
    "bytes_written",
    "cache_hits",
    "cache_misses",
    "cache_evictions",
    "multiply_adds",
)


@dataclass
class Metrics:
    """Monotone counters of one run, one worker or one gate.

    ``peak_cache_bytes`` is a high-water mark and merges by max; every
    other counter merges by sum.
    """

    n_qubits: int = 0
    strategy: str = ""
    workers: int = 1
    gates_applied: int = 0
    traversals: int = 0
    blocks_read: int = 0
    blocks_written: int = 0
    bytes_read: int = 0
    bytes_written: int = 0
    cache_hits: int = 0
    cache_misses: int = 0
    cache_evictions: int = 0
    multiply_adds: int = 0
    peak_cache_bytes: int = 0
    wall_ms: float = 0.0
    _lock: threading.Lock = field(
        default_factory=threading.Lock, init=False, repr=False, compare=False
    )

    def record_read(self, block_bytes):
        with self._lock:
            self.blocks_read += 1
            self.bytes_read += block_bytes

    def record_write(self, block_bytes):
        with self._lock:
            self.blocks_written += 1
            self.bytes_written += block_bytes

    def record_peak(self, resident_bytes):
        with self._lock:
            self.peak_cache_bytes = max(self.peak_cache_bytes, resident_bytes)

    def absorb(self, other):
        """Merge ``other`` into this instance in place"""

        with self._lock:
            for name in COUNTER_FIELDS:
                setattr(self, name, getattr(self, name) + getattr(other, name))
            self.peak_cache_bytes = max(self.peak_cache_bytes, other.peak_cache_bytes)

    def snapshot(self):
        with self._lock:
            return replace(self)

    def delta(self, earlier):
        """Counters accumulated since ``earlier`` (a snapshot of self)"""

        current = self.snapshot()
        for name in COUNTER_FIELDS:
            setattr(current, name, getattr(current, name) - getattr(earlier, name))

        return current

    @contextmanager
    def timed(self):
        """Add the elapsed wall time of the block to ``wall_ms``"""

        start = time.perf_counter()
        try:
            yield self
        finally:
            elapsed = (time.perf_counter() - start) * 1000
            with self._lock:
                self.wall_ms += elapsed


def merge(a, b):
    """Sum the counters of two metrics, keep the larger peak"""

    merged = a.snapshot()
    merged.absorb(b)
    merged.wall_ms = a.wall_ms + b.wall_ms
    merged.n_qubits = a.n_qubits or b.n_qubits
    merged.strategy = a.strategy or b.strategy
    merged.workers = max(a.workers, b.workers)

    return merged


def counters(metrics):
    """Plain dict of every dataclass field except the lock"""

    return {f.name: getattr(metrics, f.name) for f in fields(metrics) if f.init}
