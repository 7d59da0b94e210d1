"""
Bounded sliding window of block buffers over a block store.

Blocks are loaded on demand, updated in memory and written back when they
leave the window. Eviction is oldest-inserted-first; pinned blocks (at
most one pair unit, two blocks) are never evicted.
"""

import logging
from collections import OrderedDict
from contextlib import contextmanager
from dataclasses import dataclass

from simulator.exceptions import CapacityTooSmallError, PinLimitError
from simulator.gates import S_STATE

logger = logging.getLogger(__name__)

MAX_PINS = 2


def cache_capacity_states(capacity_bytes):
    """Amplitudes that fit in a cache of ``capacity_bytes``"""

    if capacity_bytes < S_STATE:
        raise CapacityTooSmallError(f"cache of {capacity_bytes} bytes holds no amplitude")

    return capacity_bytes // S_STATE


@dataclass(frozen=True)
class CacheConfig:
    """Cache budget in bytes; ``None`` means unbounded"""

    capacity_bytes: int | None
    block_amps: int

    def __post_init__(self):
        if self.capacity_bytes is not None and self.capacity_bytes < self.block_bytes:
            raise CapacityTooSmallError(
                f"cache of {self.capacity_bytes} bytes cannot hold one "
                f"{self.block_bytes}-byte block"
            )

    @property
    def block_bytes(self):
        return self.block_amps * S_STATE

    @property
    def capacity_states(self):
        if self.capacity_bytes is None:
            return None

        return cache_capacity_states(self.capacity_bytes)

    @property
    def capacity_blocks(self):
        if self.capacity_bytes is None:
            return None

        return self.capacity_bytes // self.block_bytes

    def fits(self, blocks):
        return self.capacity_blocks is None or self.capacity_blocks >= blocks


class CacheWindow:
    """Window over one store, owned by a single worker"""

    def __init__(self, config, store, metrics=None):
        self.config = config
        self.store = store
        self.metrics = metrics
        self.resident = OrderedDict()
        self._pins = {}
        self.hits = 0
        self.misses = 0
        self.evictions = 0
        self.peak_bytes = 0

    @classmethod
    def for_store(cls, store, capacity_bytes, metrics=None):
        return cls(CacheConfig(capacity_bytes, store.block_amps), store, metrics)

    @property
    def resident_bytes(self):
        return len(self.resident) * self.config.block_bytes

    def _evict_oldest(self):
        for block_id in self.resident:
            if block_id not in self._pins:
                break
        else:
            raise CapacityTooSmallError(
                f"all {len(self.resident)} resident blocks are pinned; "
                "cache cannot hold the current pair unit"
            )

        buf = self.resident.pop(block_id)
        if buf.dirty:
            self.store.write_block(buf, self.metrics)
        self.evictions += 1
        if self.metrics is not None:
            self.metrics.cache_evictions += 1
        logger.debug("Evicted block %d (dirty=%s)", block_id, buf.dirty)

    def acquire(self, block_id):
        """Return the resident buffer for ``block_id``, loading it on a miss.

        The block stays pinned until :meth:`release`.
        """

        if block_id not in self._pins and len(self._pins) >= MAX_PINS:
            raise PinLimitError(f"cannot pin more than {MAX_PINS} blocks at once")

        buf = self.resident.get(block_id)
        if buf is not None:
            self.hits += 1
            if self.metrics is not None:
                self.metrics.cache_hits += 1
        else:
            capacity = self.config.capacity_blocks
            while capacity is not None and len(self.resident) >= capacity:
                self._evict_oldest()
            buf = self.store.read_block(block_id, self.metrics)
            self.resident[block_id] = buf
            self.misses += 1
            if self.metrics is not None:
                self.metrics.cache_misses += 1

        self._pins[block_id] = self._pins.get(block_id, 0) + 1
        self.peak_bytes = max(self.peak_bytes, self.resident_bytes)
        if self.metrics is not None:
            self.metrics.record_peak(self.resident_bytes)

        return buf

    def release(self, block_id):
        count = self._pins.get(block_id, 0)
        if count <= 1:
            self._pins.pop(block_id, None)
        else:
            self._pins[block_id] = count - 1

    @contextmanager
    def hold(self, *block_ids):
        """Acquire distinct blocks for the duration of the block"""

        unique = list(dict.fromkeys(block_ids))
        acquired = []
        try:
            for block_id in unique:
                acquired.append(self.acquire(block_id))
            yield acquired
        finally:
            for buf in acquired:
                self.release(buf.block_id)

    def mark_dirty(self, block_id):
        self.resident[block_id].dirty = True

    def flush(self):
        """Write back every dirty block and empty the window"""

        while self.resident:
            _, buf = self.resident.popitem(last=False)
            if buf.dirty:
                self.store.write_block(buf, self.metrics)
        self._pins.clear()
