"""
Tests for the disk block store
"""

import os
import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from simulator import store as qstore
from simulator.exceptions import (
    BlockRangeError,
    InvalidAmplitudeError,
    InvalidBlockSizeError,
    StoreExistsError,
    StoreFormatError,
    StoreOverflowError,
)
from simulator.metrics import Metrics


class SizingTests(SimpleTestCase):
    """Test state sizing arithmetic"""

    def test_total_bytes(self):
        """Test total bytes for known qubit counts"""

        self.assertEqual(qstore.total_bytes(1), 32)
        self.assertEqual(qstore.total_bytes(26), 1_073_741_824)
        self.assertEqual(qstore.total_bytes(29), 8 * 1024**3)

    def test_total_bytes_overflow(self):
        """Test qubit counts past 64-bit byte counts are refused"""

        with self.assertRaises(StoreOverflowError):
            qstore.total_bytes(64)

    def test_total_bytes_zero_qubits(self):
        """Test zero qubits is refused"""

        with self.assertRaises(InvalidBlockSizeError):
            qstore.total_bytes(0)

    def test_block_layout(self):
        """Test block counts"""

        self.assertEqual(qstore.block_layout(24, 65536), 256)
        self.assertEqual(qstore.block_layout(4, 4), 4)
        self.assertEqual(qstore.block_layout(7, 1 << 7), 1)

    def test_block_layout_invalid_sizes(self):
        """Test non power of two and oversized blocks are refused"""

        for block_amps in (0, 3, 12, 32):
            with self.subTest(block_amps=block_amps):
                with self.assertRaises(InvalidBlockSizeError):
                    qstore.block_layout(4, block_amps)


class BlockStoreTests(SimpleTestCase):
    """Test creating, opening and streaming state files"""

    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.addCleanup(self.tmp.cleanup)
        self.path = Path(self.tmp.name) / "state.qvsv"

    def create(self, n=2, block_amps=2, **kwargs):
        store = qstore.create_store(self.path, n, block_amps, **kwargs)
        self.addCleanup(store.close)
        return store

    def test_create_store(self):
        """Test a fresh store is |0...0> with the right length"""

        store = self.create(2, 2)

        self.assertEqual(os.path.getsize(self.path), 32 + 64)
        np.testing.assert_array_equal(qstore.load_state(store), [1, 0, 0, 0])
        self.assertEqual(store.norm(), 1.0)
        self.assertEqual(store.read_amplitude(0), complex(1, 0))

    def test_header_bytes(self):
        """Test the header layout on disk"""

        self.create(3, 4).close()
        raw = self.path.read_bytes()[: qstore.HEADER_BYTES]

        self.assertEqual(raw[:4], b"QVSV")
        self.assertEqual(int.from_bytes(raw[4:8], "little"), 1)
        self.assertEqual(int.from_bytes(raw[8:12], "little"), 3)
        self.assertEqual(int.from_bytes(raw[12:20], "little"), 4)
        self.assertEqual(raw[20:32], bytes(12))

    def test_create_existing_without_overwrite(self):
        """Test creating over an existing file is refused"""

        self.create().close()

        with self.assertRaises(StoreExistsError):
            qstore.create_store(self.path, 2, 2)

    def test_create_with_overwrite(self):
        """Test overwrite resets the state"""

        store = self.create(2, 2)
        qstore.write_state(store, np.array([0, 1, 0, 0], dtype=complex))
        store.close()

        store = self.create(2, 2, overwrite=True)

        np.testing.assert_array_equal(qstore.load_state(store), [1, 0, 0, 0])

    def test_open_store(self):
        """Test reopening keeps header and contents"""

        store = self.create(3, 2)
        qstore.write_state(store, np.arange(8, dtype=complex))
        store.close()

        with qstore.open_store(self.path) as reopened:
            self.assertEqual(reopened.n_qubits, 3)
            self.assertEqual(reopened.block_amps, 2)
            self.assertEqual(reopened.n_blocks, 4)
            np.testing.assert_array_equal(qstore.load_state(reopened), np.arange(8))

    def test_open_bad_magic(self):
        """Test a foreign file is refused"""

        self.path.write_bytes(b"NOPE" + bytes(28 + 32))

        with self.assertRaises(StoreFormatError):
            qstore.open_store(self.path)

    def test_open_wrong_version(self):
        """Test a future version is refused"""

        header = qstore.HEADER.pack(qstore.MAGIC, 2, 1, 1)
        self.path.write_bytes(header + bytes(32))

        with self.assertRaisesRegex(StoreFormatError, "version"):
            qstore.open_store(self.path)

    def test_open_truncated(self):
        """Test a file shorter than its header promises is refused"""

        self.create(3, 2).close()
        with open(self.path, "r+b") as f:
            f.truncate(qstore.HEADER_BYTES + 16)

        with self.assertRaisesRegex(StoreFormatError, "length mismatch"):
            qstore.open_store(self.path)

    def test_open_or_create(self):
        """Test open_or_create creates once and reopens afterwards"""

        store = qstore.open_or_create_store(self.path, 2, 2)
        qstore.write_state(store, np.array([0, 0, 1, 0], dtype=complex))
        store.close()

        with qstore.open_or_create_store(self.path, 2, 2) as again:
            self.assertEqual(again.read_amplitude(2), complex(1, 0))

    def test_read_blocks(self):
        """Test first and last blocks of a fresh store"""

        store = self.create(4, 4)

        self.assertEqual(store.read_block(0).amps[0], complex(1, 0))
        np.testing.assert_array_equal(store.read_block(3).amps, np.zeros(4))

    def test_block_out_of_range(self):
        """Test block ids outside the layout are refused"""

        store = self.create(4, 4)

        with self.assertRaises(BlockRangeError):
            store.read_block(4)
        with self.assertRaises(BlockRangeError):
            store.read_block(-1)

    def test_write_block(self):
        """Test writing a block clears dirty and lands on disk"""

        store = self.create(4, 4)
        buf = store.read_block(2)
        buf.amps[:] = [1j, 2, 3, 4]
        buf.dirty = True

        store.write_block(buf)

        self.assertFalse(buf.dirty)
        self.assertEqual(store.read_amplitude(8), 1j)
        self.assertEqual(store.read_amplitude(11), 4)

    def test_write_block_wrong_shape(self):
        """Test a block buffer of the wrong size is refused"""

        store = self.create(4, 4)

        with self.assertRaises(BlockRangeError):
            store.write_block(qstore.BlockBuffer(0, np.zeros(2, dtype=complex)))

    def test_io_metrics(self):
        """Test reads and writes are counted in blocks and bytes"""

        store = self.create(4, 4)
        metrics = Metrics()

        for buf in store.blocks(metrics):
            store.write_block(buf, metrics)

        self.assertEqual(metrics.blocks_read, 4)
        self.assertEqual(metrics.blocks_written, 4)
        self.assertEqual(metrics.bytes_read, 4 * 4 * 16)
        self.assertEqual(metrics.bytes_written, metrics.bytes_read)

    def test_norm_of_zeroed_store(self):
        """Test an all-zero state has norm 0"""

        store = self.create(3, 2)
        qstore.write_state(store, np.zeros(8, dtype=complex))

        self.assertEqual(store.norm(), 0.0)

    def test_write_state_rejects_nan(self):
        """Test non-finite amplitudes never reach disk"""

        store = self.create(1, 1)

        with self.assertRaises(InvalidAmplitudeError):
            qstore.write_state(store, np.array([np.nan, 0], dtype=complex))

    def test_top_amplitudes(self):
        """Test top amplitudes are ordered by probability then index"""

        store = self.create(3, 2)
        amps = np.array([0.1, 0.5, 0, 0.5j, 0.2, 0, 0, -0.6], dtype=complex)
        qstore.write_state(store, amps)

        top = qstore.top_amplitudes(store, 3)

        self.assertEqual([index for index, _ in top], [7, 1, 3])
        self.assertEqual(top[0][1], complex(-0.6, 0))
        self.assertEqual(qstore.top_amplitudes(store, 0), [])
        self.assertEqual(len(qstore.top_amplitudes(store, 20)), 8)


class StateRoundTripTests(SimpleTestCase):
    """Test state write/read round trips on randomized inputs"""

    @settings(max_examples=200, deadline=None)
    @given(
        n=st.integers(min_value=1, max_value=6),
        log_block=st.integers(min_value=0, max_value=6),
        data=st.data(),
    )
    def test_write_then_read_is_exact(self, n, log_block, data):
        """Test every amplitude survives a write and reopen bit-exactly"""

        block_amps = 1 << min(log_block, n)
        parts = arrays(
            np.float64,
            (2, 1 << n),
            elements=st.floats(allow_nan=False, allow_infinity=False, width=64),
        )
        raw = data.draw(parts)
        amps = raw[0] + 1j * raw[1]

        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "state.qvsv"
            with qstore.create_store(path, n, block_amps) as store:
                qstore.write_state(store, amps)
            with qstore.open_store(path) as store:
                loaded = qstore.load_state(store)

        self.assertEqual(loaded.tobytes(), amps.astype("<c16").tobytes())
