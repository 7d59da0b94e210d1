"""
Disk-backed block storage of the full state vector.

File layout (little-endian):

    0-3    magic b"QVSV"
    4-7    version (u32)
    8-11   n_qubits (u32)
    12-19  block_amps (u64)
    20-31  reserved, zero
    32-    2^n amplitudes, float64 real then float64 imag, index ascending

Blocks are read and written with positional I/O on a shared descriptor,
so concurrent reads and writes to disjoint blocks need no locking.
"""

import heapq
import logging
import math
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from simulator.exceptions import (
    BlockRangeError,
    InvalidBlockSizeError,
    StoreExistsError,
    StoreFormatError,
    StoreOverflowError,
)
from simulator.gates import AMP_DTYPE, S_STATE, check_finite

logger = logging.getLogger(__name__)

MAGIC = b"QVSV"
VERSION = 1
HEADER = struct.Struct("<4sIIQ12x")
HEADER_BYTES = HEADER.size
MAX_QUBITS = 58
DEFAULT_BLOCK_AMPS = 65536


def _is_power_of_two(value):
    return value >= 1 and not value & (value - 1)


def total_bytes(n):
    """Bytes of amplitude data for n qubits (2^n * 16)"""

    if n < 1:
        raise InvalidBlockSizeError(f"need at least one qubit, got {n}")
    if n > MAX_QUBITS:
        raise StoreOverflowError(f"{n} qubits overflows a 64-bit byte count")

    return (1 << n) * S_STATE


def block_layout(n, block_amps):
    """Number of blocks the state is divided into"""

    if not _is_power_of_two(block_amps) or block_amps > (1 << n):
        raise InvalidBlockSizeError(
            f"block_amps must be a power of two in [1, 2^{n}], got {block_amps}"
        )

    return total_bytes(n) // (block_amps * S_STATE)


@dataclass(frozen=True)
class StoreHeader:
    n_qubits: int
    block_amps: int
    magic: bytes = MAGIC
    version: int = VERSION

    def pack(self):
        return HEADER.pack(self.magic, self.version, self.n_qubits, self.block_amps)

    @classmethod
    def unpack(cls, raw):
        if len(raw) < HEADER_BYTES:
            raise StoreFormatError(f"header truncated: {len(raw)} of {HEADER_BYTES} bytes")
        magic, version, n_qubits, block_amps = HEADER.unpack(raw[:HEADER_BYTES])
        if magic != MAGIC:
            raise StoreFormatError(f"bad magic {magic!r}")
        if version != VERSION:
            raise StoreFormatError(f"version mismatch: file {version}, expected {VERSION}")

        return cls(n_qubits=n_qubits, block_amps=block_amps, magic=magic, version=version)


@dataclass
class BlockBuffer:
    """In-memory copy of one block"""

    block_id: int
    amps: np.ndarray
    dirty: bool = False

    @property
    def nbytes(self):
        return self.amps.nbytes


class BlockStore:
    """An open state file"""

    def __init__(self, path, header, fd):
        self.path = Path(path)
        self.header = header
        self.n_blocks = block_layout(header.n_qubits, header.block_amps)
        self._fd = fd

    @property
    def n_qubits(self):
        return self.header.n_qubits

    @property
    def block_amps(self):
        return self.header.block_amps

    @property
    def block_bytes(self):
        return self.block_amps * S_STATE

    @property
    def n_amps(self):
        return 1 << self.n_qubits

    def __repr__(self):
        return (
            f"BlockStore({str(self.path)!r}, n_qubits={self.n_qubits}, "
            f"block_amps={self.block_amps}, n_blocks={self.n_blocks})"
        )

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def close(self):
        if self._fd is not None:
            os.close(self._fd)
            self._fd = None

    def _offset(self, block_id):
        if not 0 <= block_id < self.n_blocks:
            raise BlockRangeError(f"block {block_id} outside [0, {self.n_blocks})")

        return HEADER_BYTES + block_id * self.block_bytes

    def read_block(self, block_id, metrics=None):
        """Load amplitudes [b * block_amps, (b + 1) * block_amps)"""

        offset = self._offset(block_id)
        raw = os.pread(self._fd, self.block_bytes, offset)
        if len(raw) != self.block_bytes:
            raise StoreFormatError(f"short read on block {block_id}: {len(raw)} bytes")
        if metrics is not None:
            metrics.record_read(self.block_bytes)

        return BlockBuffer(block_id, np.frombuffer(raw, dtype=AMP_DTYPE).copy())

    def write_block(self, buf, metrics=None):
        """Persist a block buffer and clear its dirty flag"""

        offset = self._offset(buf.block_id)
        if buf.amps.shape != (self.block_amps,):
            raise BlockRangeError(
                f"block {buf.block_id} holds {buf.amps.shape[0]} amplitudes, "
                f"expected {self.block_amps}"
            )

        data = np.ascontiguousarray(buf.amps, dtype=AMP_DTYPE)
        written = os.pwrite(self._fd, data.tobytes(), offset)
        if written != self.block_bytes:
            raise OSError(f"short write on block {buf.block_id}: {written} bytes")
        buf.dirty = False
        if metrics is not None:
            metrics.record_write(self.block_bytes)

    def read_amplitude(self, i, metrics=None):
        if not 0 <= i < self.n_amps:
            raise BlockRangeError(f"index {i} outside [0, {self.n_amps})")
        block_id, offset = divmod(i, self.block_amps)

        return complex(self.read_block(block_id, metrics).amps[offset])

    def blocks(self, metrics=None):
        """Stream every block once, in ascending order"""

        for block_id in range(self.n_blocks):
            yield self.read_block(block_id, metrics)

    def norm(self, metrics=None):
        """sqrt(sum |a_i|^2), streaming each block exactly once"""

        partials = [float(np.vdot(buf.amps, buf.amps).real) for buf in self.blocks(metrics)]
        return math.sqrt(math.fsum(partials))

    def sync(self):
        """Flush written blocks to the device"""

        os.fsync(self._fd)


def create_store(path, n, block_amps=DEFAULT_BLOCK_AMPS, overwrite=False):
    """Create a full-length state file holding |0...0>"""

    path = Path(path)
    size = total_bytes(n)
    block_layout(n, block_amps)
    if path.exists() and not overwrite:
        raise StoreExistsError(f"{path} exists; pass overwrite to replace it")

    header = StoreHeader(n_qubits=n, block_amps=block_amps)
    fd = os.open(path, os.O_RDWR | os.O_CREAT | os.O_TRUNC, 0o644)
    try:
        os.pwrite(fd, header.pack(), 0)
        os.ftruncate(fd, HEADER_BYTES + size)
        os.pwrite(fd, np.array([1], dtype=AMP_DTYPE).tobytes(), HEADER_BYTES)
    except OSError:
        os.close(fd)
        raise

    store = BlockStore(path, header, fd)
    logger.info("Created state %s: %d qubits, %d blocks", path, n, store.n_blocks)
    return store


def open_store(path):
    """Open an existing state file, validating its header and length"""

    path = Path(path)
    fd = os.open(path, os.O_RDWR)
    try:
        header = StoreHeader.unpack(os.pread(fd, HEADER_BYTES, 0))
        expected = HEADER_BYTES + total_bytes(header.n_qubits)
        block_layout(header.n_qubits, header.block_amps)
        actual = os.fstat(fd).st_size
        if actual != expected:
            raise StoreFormatError(
                f"length mismatch: file {actual} bytes, expected {expected}"
            )
    except Exception:
        os.close(fd)
        raise

    logger.info("Opened state %s: %d qubits", path, header.n_qubits)
    return BlockStore(path, header, fd)


def open_or_create_store(path, n, block_amps=DEFAULT_BLOCK_AMPS):
    """Open ``path`` when present, otherwise create |0...0> there"""

    if Path(path).exists():
        return open_store(path)

    return create_store(path, n, block_amps)


def load_state(store, metrics=None):
    """Whole state vector as one array"""

    return np.concatenate([buf.amps for buf in store.blocks(metrics)])


def write_state(store, amps, metrics=None):
    """Overwrite the whole state vector block by block"""

    amps = check_finite(amps)
    if amps.shape != (store.n_amps,):
        raise BlockRangeError(f"expected {store.n_amps} amplitudes, got {amps.shape}")

    for block_id in range(store.n_blocks):
        start = block_id * store.block_amps
        chunk = amps[start : start + store.block_amps]
        store.write_block(BlockBuffer(block_id, chunk), metrics)


def top_amplitudes(store, k, metrics=None):
    """The k largest-magnitude amplitudes as (index, amplitude), one pass"""

    if k <= 0:
        return []

    best = []
    for buf in store.blocks(metrics):
        probs = np.abs(buf.amps) ** 2
        count = min(k, probs.shape[0])
        candidates = np.argpartition(probs, -count)[-count:]
        base = buf.block_id * store.block_amps
        for offset in candidates:
            item = (float(probs[offset]), -(base + int(offset)), complex(buf.amps[offset]))
            if len(best) < k:
                heapq.heappush(best, item)
            else:
                heapq.heappushpop(best, item)

    ranked = sorted(best, reverse=True)
    return [(-neg_index, amp) for _, neg_index, amp in ranked]
