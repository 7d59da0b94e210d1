"""
Tests for the paired streaming kernel
"""

import tempfile
from pathlib import Path

import numpy as np
from django.test import SimpleTestCase
from hypothesis import given, settings
from hypothesis import strategies as st

from simulator import dense, gates, kernel
from simulator.cache import CacheWindow
from simulator.exceptions import (
    CapacityTooSmallError,
    DimensionMismatchError,
    InvalidCircuitError,
    MismatchedPairBlocksError,
    StrideTooLargeError,
)
from simulator.metrics import Metrics
from simulator.store import BlockBuffer, create_store, load_state, write_state

SQRT1_2 = 0.7071067811865476

H = gates.make_gate("h")
X = gates.make_gate("x")


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return amps / np.linalg.norm(amps)


class PlanTests(SimpleTestCase):
    """Test pair unit planning"""

    def test_intra_block_units(self):
        """Test a stride below the block size pairs each block with itself"""

        units = kernel.plan_block_pairs(4, 4, 1)
        pairs = [(u.block_a, u.block_b) for u in units]

        self.assertEqual(pairs, [(0, 0), (1, 1), (2, 2), (3, 3)])
        self.assertFalse(any(u.is_cross for u in units))

    def test_distant_block_units(self):
        """Test stride 8 over blocks of 4 pairs blocks two apart"""

        units = kernel.plan_block_pairs(4, 4, 3)

        self.assertEqual([(u.block_a, u.block_b) for u in units], [(0, 2), (1, 3)])

    def test_adjacent_block_units(self):
        """Test stride equal to the block size pairs adjacent blocks"""

        units = kernel.plan_block_pairs(4, 4, 2)

        self.assertEqual([(u.block_a, u.block_b) for u in units], [(0, 1), (2, 3)])
        self.assertEqual(units[0].blocks, (0, 1))

    def test_units_cover_every_block_once(self):
        """Test every block appears in exactly one unit for every stride"""

        for n in range(1, 9):
            for log_block in range(n + 1):
                for k in range(n):
                    units = kernel.plan_block_pairs(n, 1 << log_block, k)
                    seen = sorted(b for u in units for b in u.blocks)
                    self.assertEqual(seen, list(range(1 << (n - log_block))))

    def test_plan_gate(self):
        """Test a gate plan knows its working set"""

        plan = kernel.plan_gate(gates.single("h", 3), 4, 4)

        self.assertTrue(plan.is_cross)
        self.assertEqual(plan.blocks_needed, 2)
        self.assertEqual(len(plan.units), 2)


class InBlockKernelTests(SimpleTestCase):
    """Test updates inside one block"""

    def test_hadamard_on_one_qubit(self):
        """Test H|0> inside a single block"""

        buf = BlockBuffer(0, np.array([1, 0], dtype=complex))

        kernel.apply_gate_in_block(buf, H, 0, 0)

        np.testing.assert_array_equal(buf.amps, [SQRT1_2, SQRT1_2])

    def test_identity_is_bit_exact(self):
        """Test the identity gate leaves every bit unchanged"""

        amps = random_state(5, 1)
        buf = BlockBuffer(0, amps.copy())

        for k in range(5):
            kernel.apply_gate_in_block(buf, gates.identity_gate(), k, 0)

        self.assertEqual(buf.amps.tobytes(), amps.tobytes())

    def test_matches_dense_oracle(self):
        """Test X on qubit 1 of a random 3-qubit state"""

        amps = random_state(3, 2)
        buf = BlockBuffer(0, amps.copy())

        kernel.apply_gate_in_block(buf, X, 1, 0)

        expected = dense.apply_dense(dense.expand_gate(X, 1, 3), dense.DenseState(3, amps))
        np.testing.assert_allclose(buf.amps, expected.amps, rtol=0, atol=1e-15)

    def test_controlled_matches_dense_oracle(self):
        """Test controlled gates inside one block"""

        amps = random_state(4, 3)
        for control, target in [(0, 2), (3, 1), (2, 0)]:
            buf = BlockBuffer(0, amps.copy())
            kernel.apply_gate_in_block(buf, X, target, 0, control)

            expected = dense.apply_dense(
                dense.expand_controlled(control, target, X, 4), dense.DenseState(4, amps)
            )
            np.testing.assert_allclose(buf.amps, expected.amps, rtol=0, atol=1e-15)

    def test_stride_too_large(self):
        """Test a stride that leaves the block is refused"""

        buf = BlockBuffer(0, np.zeros(4, dtype=complex))

        with self.assertRaises(StrideTooLargeError):
            kernel.apply_gate_in_block(buf, H, 2, 0)


class CrossBlockKernelTests(SimpleTestCase):
    """Test updates across two partner blocks"""

    def test_hadamard_on_high_qubit(self):
        """Test H on qubit 1 with blocks of two amplitudes"""

        buf_a = BlockBuffer(0, np.array([1, 0], dtype=complex))
        buf_b = BlockBuffer(1, np.array([0, 0], dtype=complex))

        kernel.apply_gate_cross_block(buf_a, buf_b, H, 1)

        np.testing.assert_array_equal(buf_a.amps, [SQRT1_2, 0])
        np.testing.assert_array_equal(buf_b.amps, [SQRT1_2, 0])

    def test_identity_is_bit_exact(self):
        """Test the identity gate leaves both blocks unchanged"""

        amps = random_state(2, 4)
        buf_a = BlockBuffer(0, amps[:2].copy())
        buf_b = BlockBuffer(1, amps[2:].copy())

        kernel.apply_gate_cross_block(buf_a, buf_b, gates.identity_gate(), 1)

        self.assertEqual(buf_a.amps.tobytes(), amps[:2].tobytes())
        self.assertEqual(buf_b.amps.tobytes(), amps[2:].tobytes())

    def test_control_selects_part_of_block(self):
        """Test a low control qubit only updates odd positions"""

        buf_a = BlockBuffer(0, np.array([1, 1], dtype=complex))
        buf_b = BlockBuffer(1, np.array([0, 0], dtype=complex))

        kernel.apply_gate_cross_block(buf_a, buf_b, X, 1, control=0)

        np.testing.assert_array_equal(buf_a.amps, [1, 0])
        np.testing.assert_array_equal(buf_b.amps, [0, 1])

    def test_control_off_for_whole_block(self):
        """Test a high control qubit that is 0 skips the pair"""

        buf_a = BlockBuffer(0, np.array([1, 2], dtype=complex))
        buf_b = BlockBuffer(2, np.array([3, 4], dtype=complex))

        kernel.apply_gate_cross_block(buf_a, buf_b, X, 2, control=1)

        np.testing.assert_array_equal(buf_a.amps, [1, 2])

    def test_stride_inside_block(self):
        """Test a stride that stays inside a block is refused"""

        buf_a = BlockBuffer(0, np.zeros(4, dtype=complex))
        buf_b = BlockBuffer(1, np.zeros(4, dtype=complex))

        with self.assertRaises(MismatchedPairBlocksError):
            kernel.apply_gate_cross_block(buf_a, buf_b, H, 1)

    def test_blocks_not_partners(self):
        """Test blocks that are not XOR partners are refused"""

        buf_a = BlockBuffer(0, np.zeros(2, dtype=complex))
        buf_b = BlockBuffer(3, np.zeros(2, dtype=complex))

        with self.assertRaises(MismatchedPairBlocksError):
            kernel.apply_gate_cross_block(buf_a, buf_b, H, 1)


class StreamedCircuitTests(SimpleTestCase):
    """Test whole-store streaming"""

    def setUp(self):
        tmp = tempfile.TemporaryDirectory()
        self.addCleanup(tmp.cleanup)
        self.dir = Path(tmp.name)

    def create(self, n, block_amps):
        store = create_store(self.dir / f"state-{n}-{block_amps}.qvsv", n, block_amps)
        self.addCleanup(store.close)
        return store

    def test_bell_state(self):
        """Test the Bell circuit through a cache of one pair unit"""

        store = self.create(2, 1)
        circuit = gates.Circuit(2, [gates.single("h", 0), gates.controlled("cx", 0, 1)])

        kernel.apply_circuit_streamed(store, circuit, 2 * 16)

        np.testing.assert_allclose(
            load_state(store), [SQRT1_2, 0, 0, SQRT1_2], rtol=0, atol=1e-16
        )

    def test_single_traversal_per_gate(self):
        """Test every gate reads and writes each block exactly once"""

        store = self.create(10, 64)
        metrics = Metrics()
        cache = CacheWindow.for_store(store, 2 * store.block_bytes, metrics)
        circuit = gates.random_circuit(10, 20, np.random.default_rng(5))

        for op in circuit:
            before = metrics.snapshot()
            kernel.apply_gate_streamed(store, cache, op)
            step = metrics.delta(before)

            self.assertEqual(step.traversals, 1)
            self.assertEqual(step.blocks_read, store.n_blocks)
            self.assertEqual(step.blocks_written, store.n_blocks)
            self.assertEqual(step.bytes_read, store.n_blocks * store.block_bytes)

    def test_gate_counters_follow_the_cache(self):
        """Test traversals and block I/O are counted on the window's metrics"""

        store = self.create(6, 8)
        metrics = Metrics()
        cache = CacheWindow.for_store(store, 2 * store.block_bytes, metrics)

        kernel.apply_gate_streamed(store, cache, gates.single("h", 5))

        self.assertEqual(metrics.traversals, 1)
        self.assertEqual(metrics.blocks_read, store.n_blocks)
        self.assertEqual(metrics.blocks_written, store.n_blocks)

        untracked = CacheWindow.for_store(store, 2 * store.block_bytes)
        kernel.apply_gate_streamed(store, untracked, gates.single("h", 5))

        np.testing.assert_allclose(load_state(store)[:2], [1, 0], rtol=0, atol=1e-15)

    def test_blocks_read_halves_when_blocks_double(self):
        """Test blocks read per gate equals 2^n / block_amps"""

        circuit = gates.benchmark_circuit(12)
        for block_amps in (64, 128, 256):
            store = self.create(12, block_amps)
            metrics = Metrics()

            kernel.apply_circuit_streamed(store, circuit, 2 * store.block_bytes, metrics)

            self.assertEqual(metrics.blocks_read / metrics.gates_applied, 4096 // block_amps)
            self.assertEqual(metrics.traversals, metrics.gates_applied)

    def test_peak_within_budget(self):
        """Test resident bytes never exceed the cache budget"""

        store = self.create(10, 16)
        metrics = Metrics()
        budget = 4 * store.block_bytes

        kernel.apply_circuit_streamed(
            store, gates.random_circuit(10, 10, np.random.default_rng(8)), budget, metrics
        )

        self.assertLessEqual(metrics.peak_cache_bytes, budget)
        self.assertGreater(metrics.peak_cache_bytes, 0)

    def test_matches_dense_oracle(self):
        """Test a depth-30 random circuit at n=8 against the oracle"""

        circuit = gates.random_circuit(8, 30, np.random.default_rng(7))
        expected = dense.simulate_dense(circuit).amps
        for block_amps in (1, 4, 256):
            store = self.create(8, block_amps)

            kernel.apply_circuit_streamed(store, circuit, 2 * store.block_bytes)

            self.assertLessEqual(np.max(np.abs(load_state(store) - expected)), 1e-12)

    def test_norm_is_conserved(self):
        """Test a deep random circuit keeps the norm at 1"""

        store = self.create(10, 32)
        circuit = gates.random_circuit(10, 100, np.random.default_rng(9))

        kernel.apply_circuit_streamed(store, circuit, 8 * store.block_bytes)

        self.assertAlmostEqual(store.norm(), 1.0, delta=1e-10)

    def test_cross_block_gate_needs_two_blocks(self):
        """Test a one-block cache cannot run a cross-block gate"""

        store = self.create(3, 2)
        circuit = gates.Circuit(3, [gates.single("h", 0), gates.single("h", 2)])

        with self.assertRaises(CapacityTooSmallError):
            kernel.apply_circuit_streamed(store, circuit, store.block_bytes)

    def test_circuit_size_mismatch(self):
        """Test a circuit for another register size is refused"""

        store = self.create(3, 2)

        with self.assertRaises(DimensionMismatchError):
            kernel.apply_circuit_streamed(store, gates.Circuit(2, []), None)

    def test_invalid_circuit(self):
        """Test invalid circuits are refused before touching the store"""

        store = self.create(2, 2)
        circuit = gates.Circuit(2, [gates.single("h", 4)])

        with self.assertRaises(InvalidCircuitError):
            kernel.apply_circuit_streamed(store, circuit, None)

        np.testing.assert_array_equal(load_state(store), [1, 0, 0, 0])

    @settings(max_examples=25, deadline=None)
    @given(
        n=st.integers(min_value=1, max_value=6),
        log_block=st.integers(min_value=0, max_value=6),
        seed=st.integers(min_value=0, max_value=2**32 - 1),
    )
    def test_any_block_size_matches_oracle(self, n, log_block, seed):
        """Test block size never changes the result"""

        block_amps = 1 << min(log_block, n)
        circuit = gates.random_circuit(n, 15, np.random.default_rng(seed))
        expected = dense.simulate_dense(circuit).amps
        with tempfile.TemporaryDirectory() as tmp:
            with create_store(Path(tmp) / "s.qvsv", n, block_amps) as store:
                kernel.apply_circuit_streamed(store, circuit, 2 * store.block_bytes)
                actual = load_state(store)

        self.assertLessEqual(np.max(np.abs(actual - expected)), 1e-12)

    def test_restarts_from_existing_state(self):
        """Test streaming continues from whatever the store holds"""

        store = self.create(3, 2)
        amps = random_state(3, 11)
        write_state(store, amps)
        op = gates.single("ry", 2, 0.4)

        kernel.apply_circuit_streamed(store, gates.Circuit(3, [op]), None)

        expected = dense.apply_dense(dense.expand_op(op, 3), dense.DenseState(3, amps))
        np.testing.assert_allclose(load_state(store), expected.amps, rtol=0, atol=1e-15)
