"""
Paired streaming kernel.

A gate on qubit k only couples amplitudes i and i ^ 2**k. Lifting that
pairing from indices to block ids turns every gate into one sweep over
disjoint pair units: a single block when the stride fits inside a block,
otherwise the two XOR-related blocks. Every block is read once and
written once per gate.
"""

import logging
from dataclasses import dataclass

import numpy as np

from simulator.cache import CacheWindow
from simulator.exceptions import (
    CapacityTooSmallError,
    DimensionMismatchError,
    MismatchedPairBlocksError,
    StrideTooLargeError,
)
from simulator.gates import ensure_valid
from simulator.store import block_layout

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PairUnit:
    block_a: int
    block_b: int

    @property
    def is_cross(self):
        return self.block_a != self.block_b

    @property
    def blocks(self):
        if self.is_cross:
            return (self.block_a, self.block_b)

        return (self.block_a,)


@dataclass(frozen=True)
class GatePlan:
    op: object
    units: tuple
    block_amps: int

    @property
    def is_cross(self):
        return (1 << self.op.target) >= self.block_amps

    @property
    def blocks_needed(self):
        return 2 if self.is_cross else 1


def plan_block_pairs(n, block_amps, k):
    """Pair units of a gate on qubit k, ordered by ascending block_a"""

    n_blocks = block_layout(n, block_amps)
    stride = 1 << k
    if stride < block_amps:
        return [PairUnit(b, b) for b in range(n_blocks)]

    distance = stride // block_amps
    return [PairUnit(b, b ^ distance) for b in range(n_blocks) if not b & distance]


def plan_gate(op, n, block_amps):
    return GatePlan(op, tuple(plan_block_pairs(n, block_amps, op.target)), block_amps)


def _pair_update(gate, a, b):
    """(u00 a + u01 b, u10 a + u11 b) with a fixed operation order per pair.

    Written out in real arithmetic so the rounding of each pair does not
    depend on array shape or layout.
    """

    u00, u01, u10, u11 = gate.entries
    ar, ai, br, bi = a.real, a.imag, b.real, b.imag

    new_a = np.empty_like(a)
    new_a.real = (u00.real * ar - u00.imag * ai) + (u01.real * br - u01.imag * bi)
    new_a.imag = (u00.real * ai + u00.imag * ar) + (u01.real * bi + u01.imag * br)

    new_b = np.empty_like(b)
    new_b.real = (u10.real * ar - u10.imag * ai) + (u11.real * br - u11.imag * bi)
    new_b.imag = (u10.real * ai + u10.imag * ar) + (u11.real * bi + u11.imag * br)

    return new_a, new_b


def _control_mask(base_index, length, control, shape=None):
    """Boolean mask of positions whose global index has the control bit set,
    or a plain bool when the whole range shares one control value"""

    if (1 << control) >= length:
        return bool((base_index >> control) & 1)

    index = base_index + np.arange(length)
    if shape is not None:
        index = index.reshape(shape)[:, 0, :]

    return ((index >> control) & 1).astype(bool)


def apply_gate_in_block(buf, gate, k, base_index, control=None):
    """Update every pair (j, j + 2^k) inside one block, in place"""

    amps = buf.amps
    stride = 1 << k
    if stride >= amps.shape[0]:
        raise StrideTooLargeError(
            f"stride {stride} does not fit in a block of {amps.shape[0]} amplitudes"
        )

    view = amps.reshape(-1, 2, stride)
    a, b = view[:, 0, :], view[:, 1, :]

    if control is None:
        new_a, new_b = _pair_update(gate, a, b)
    else:
        active = _control_mask(base_index, amps.shape[0], control, view.shape)
        if active is False:
            return buf
        new_a, new_b = _pair_update(gate, a, b)
        if active is not True:
            new_a = np.where(active, new_a, a)
            new_b = np.where(active, new_b, b)

    view[:, 0, :] = new_a
    view[:, 1, :] = new_b

    return buf


def apply_gate_cross_block(buf_a, buf_b, gate, k, control=None):
    """Update every pair (buf_a[j], buf_b[j]) of two XOR-partner blocks"""

    block_amps = buf_a.amps.shape[0]
    stride = 1 << k
    if stride < block_amps:
        raise MismatchedPairBlocksError(
            f"stride {stride} stays inside blocks of {block_amps} amplitudes"
        )

    distance = stride // block_amps
    if buf_a.block_id & distance or buf_b.block_id != buf_a.block_id ^ distance:
        raise MismatchedPairBlocksError(
            f"blocks {buf_a.block_id} and {buf_b.block_id} are not partners at distance "
            f"{distance}"
        )

    a, b = buf_a.amps, buf_b.amps
    if control is None:
        new_a, new_b = _pair_update(gate, a, b)
    else:
        active = _control_mask(buf_a.block_id * block_amps, block_amps, control)
        if active is False:
            return buf_a, buf_b
        new_a, new_b = _pair_update(gate, a, b)
        if active is not True:
            new_a = np.where(active, new_a, a)
            new_b = np.where(active, new_b, b)

    a[:] = new_a
    b[:] = new_b

    return buf_a, buf_b


def sweep_units(cache, op, units):
    """Apply ``op`` to each unit through ``cache``; return pairs visited"""

    block_amps = cache.config.block_amps
    pairs = 0
    for unit in units:
        with cache.hold(*unit.blocks) as bufs:
            if unit.is_cross:
                apply_gate_cross_block(bufs[0], bufs[1], op.gate, op.target, op.control)
                pairs += block_amps
            else:
                buf = bufs[0]
                apply_gate_in_block(
                    buf, op.gate, op.target, buf.block_id * block_amps, op.control
                )
                pairs += block_amps // 2
            for buf in bufs:
                cache.mark_dirty(buf.block_id)

    return pairs


def check_capacity(plan, capacity):
    if not capacity.fits(plan.blocks_needed):
        raise CapacityTooSmallError(
            f"gate on qubit {plan.op.target} needs {plan.blocks_needed} resident blocks, "
            f"cache holds {capacity.capacity_blocks}"
        )


def apply_gate_streamed(store, cache, op):
    """One planned traversal of the store for ``op``, flushed at the end.

    Traversal and I/O counters all land in ``cache.metrics``.
    """

    plan = plan_gate(op, store.n_qubits, store.block_amps)
    check_capacity(plan, cache.config)

    logger.debug("Applying %s over %d units", op, len(plan.units))
    pairs = sweep_units(cache, op, plan.units)
    cache.flush()

    if cache.metrics is not None:
        cache.metrics.traversals += 1
        cache.metrics.gates_applied += 1

    return pairs


def apply_circuit_streamed(store, circuit, capacity_bytes, metrics=None):
    """Apply every op of ``circuit`` in order through one cache window"""

    ensure_valid(circuit)
    if circuit.n_qubits != store.n_qubits:
        raise DimensionMismatchError(
            f"circuit has {circuit.n_qubits} qubits, state has {store.n_qubits}"
        )

    cache = CacheWindow.for_store(store, capacity_bytes, metrics)
    for op in circuit.ops:
        apply_gate_streamed(store, cache, op)

    return cache
