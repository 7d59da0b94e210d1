"""
Dense-matrix baseline: every gate is expanded to the full 2^n x 2^n
operator with Kronecker products and multiplied into the state.

This is the correctness oracle for the streamed engine and the O(2^2n)
reference point of the benchmarks.
"""

import logging
from dataclasses import dataclass
from functools import reduce

import numpy as np
from django.conf import settings

from simulator.exceptions import (
    ControlEqualsTargetError,
    DimensionMismatchError,
    OracleLimitExceeded,
)
from simulator.gates import AMP_DTYPE, GateKind, ensure_valid

logger = logging.getLogger(__name__)

_I2 = np.eye(2, dtype=AMP_DTYPE)
_P0 = np.array([[1, 0], [0, 0]], dtype=AMP_DTYPE)
_P1 = np.array([[0, 0], [0, 1]], dtype=AMP_DTYPE)


@dataclass(frozen=True)
class DenseMatrix:
    dim: int
    entries: np.ndarray

    def __post_init__(self):
        if self.dim < 1 or self.dim & (self.dim - 1):
            raise DimensionMismatchError(f"dimension {self.dim} is not a power of two")
        if self.entries.shape != (self.dim, self.dim):
            raise DimensionMismatchError(
                f"expected {self.dim}x{self.dim} entries, got {self.entries.shape}"
            )


@dataclass(frozen=True)
class DenseState:
    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if self.amps.shape != (1 << self.n_qubits,):
            raise DimensionMismatchError(
                f"{self.n_qubits} qubits need {1 << self.n_qubits} amplitudes, "
                f"got {self.amps.shape}"
            )

    @classmethod
    def zero(cls, n_qubits):
        amps = np.zeros(1 << n_qubits, dtype=AMP_DTYPE)
        amps[0] = 1
        return cls(n_qubits, amps)

    def norm(self):
        return float(np.linalg.norm(self.amps))


def check_oracle_limit(n, limit=None):
    if limit is None:
        limit = settings.QVEC_ORACLE_LIMIT
    if n > limit:
        logger.warning("Dense oracle refused %d qubits (limit %d)", n, limit)
        raise OracleLimitExceeded(f"{n} qubits exceeds the dense oracle limit of {limit}")


def _embed(factors, n):
    """Kronecker chain over qubits n-1..0, identity where no factor given"""

    return reduce(np.kron, (factors.get(q, _I2) for q in reversed(range(n))))


def expand_gate(gate, k, n, limit=None):
    """I_(2^(n-k-1)) (x) U (x) I_(2^k)"""

    check_oracle_limit(n, limit)
    if not 0 <= k < n:
        raise DimensionMismatchError(f"qubit {k} outside {n} qubits")

    return DenseMatrix(1 << n, _embed({k: gate.matrix}, n))


def expand_controlled(control, target, gate, n, limit=None):
    """Apply ``gate`` on ``target`` where bit ``control`` is 1, identity elsewhere"""

    check_oracle_limit(n, limit)
    if control == target:
        raise ControlEqualsTargetError(f"control and target are both {control}")
    if not (0 <= control < n and 0 <= target < n):
        raise DimensionMismatchError(f"qubits ({control}, {target}) outside {n} qubits")

    entries = _embed({control: _P0}, n) + _embed({control: _P1, target: gate.matrix}, n)
    return DenseMatrix(1 << n, entries)


def expand_op(op, n, limit=None):
    if op.kind is GateKind.CONTROLLED:
        return expand_controlled(op.control, op.target, op.gate, n, limit)

    return expand_gate(op.gate, op.target, n, limit)


def apply_dense(matrix, state, metrics=None):
    """Full matrix-vector product, dim^2 multiply-adds"""

    if matrix.dim != state.amps.shape[0]:
        raise DimensionMismatchError(
            f"matrix dimension {matrix.dim} does not match state of {state.n_qubits} qubits"
        )
    if metrics is not None:
        metrics.multiply_adds += matrix.dim * matrix.dim

    return DenseState(state.n_qubits, matrix.entries @ state.amps)


def apply_op_matrix_free(op, state, limit=None):
    """Apply one op row by row without materializing the 2^n operator"""

    n = state.n_qubits
    if limit is None:
        limit = settings.QVEC_MATRIX_FREE_LIMIT
    check_oracle_limit(n, limit)

    # axis 1 of the view is bit k of the index
    k = op.target
    view = state.amps.reshape(1 << (n - k - 1), 2, 1 << k)
    updated = np.einsum("ab,ibj->iaj", op.gate.matrix, view)

    if op.kind is GateKind.CONTROLLED:
        index = np.arange(1 << n).reshape(view.shape)
        active = ((index >> op.control) & 1).astype(bool)
        updated = np.where(active, updated, view)

    return DenseState(n, updated.reshape(-1))


def simulate_dense(circuit, materialize=True, limit=None, metrics=None, initial=None):
    """Apply every op in circuit order, from ``initial`` or |0...0>"""

    ensure_valid(circuit)
    n = circuit.n_qubits
    if materialize:
        check_oracle_limit(n, limit)

    if initial is None:
        state = DenseState.zero(n)
    elif initial.n_qubits != n:
        raise DimensionMismatchError(
            f"circuit has {n} qubits, initial state has {initial.n_qubits}"
        )
    else:
        state = initial
    for op in circuit.ops:
        if materialize:
            state = apply_dense(expand_op(op, n, limit), state, metrics)
        else:
            state = apply_op_matrix_free(op, state)
        if metrics is not None:
            metrics.gates_applied += 1

    return state
