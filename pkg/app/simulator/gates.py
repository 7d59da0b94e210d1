"""
Gates, circuits and the index arithmetic of amplitude pairing.

Qubit 0 is the least-significant bit of a state index, so a gate on qubit
k couples amplitudes i and i ^ 2**k.
"""

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from django.conf import settings

from simulator.exceptions import (
    GateArityError,
    InvalidAmplitudeError,
    InvalidCircuitError,
    NonUnitaryGateError,
    UnknownGateError,
)

logger = logging.getLogger(__name__)

# One amplitude: little-endian complex128, real part first.
AMP_DTYPE = np.dtype("<c16")
S_STATE = AMP_DTYPE.itemsize

BUILTIN_TOLERANCE = 1e-9
CUSTOM_ARITY = 8

_SQRT1_2 = 1 / math.sqrt(2)


def _fixed(u00, u01, u10, u11):
    return lambda: (complex(u00), complex(u01), complex(u10), complex(u11))


def _rx(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return (complex(c, 0), complex(0, -s), complex(0, -s), complex(c, 0))


def _ry(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return (complex(c, 0), complex(-s, 0), complex(s, 0), complex(c, 0))


def _rz(theta):
    half = theta / 2
    return (
        complex(math.cos(half), -math.sin(half)),
        0j,
        0j,
        complex(math.cos(half), math.sin(half)),
    )


_T_PHASE = complex(_SQRT1_2, _SQRT1_2)

FIXED_GATES = {
    "h": _fixed(_SQRT1_2, _SQRT1_2, _SQRT1_2, -_SQRT1_2),
    "x": _fixed(0, 1, 1, 0),
    "y": _fixed(0, -1j, 1j, 0),
    "z": _fixed(1, 0, 0, -1),
    "s": _fixed(1, 0, 0, 1j),
    "sdg": _fixed(1, 0, 0, -1j),
    "t": _fixed(1, 0, 0, _T_PHASE),
    "tdg": _fixed(1, 0, 0, _T_PHASE.conjugate()),
}

ROTATION_GATES = {
    "rx": _rx,
    "ry": _ry,
    "rz": _rz,
}

CUSTOM_GATE = "u"

# Controlled instruction name -> gate applied on the target.
CONTROLLED_GATES = {
    "cx": "x",
    "cz": "z",
}

SINGLE_GATE_NAMES = tuple(FIXED_GATES) + tuple(ROTATION_GATES) + (CUSTOM_GATE,)


def unitarity_error(matrix):
    """Max entrywise deviation of U^dagger U from the identity"""

    product = matrix.conj().T @ matrix
    return float(np.max(np.abs(product - np.eye(matrix.shape[0]))))


def check_finite(values):
    """Reject NaN or infinite amplitudes"""

    array = np.asarray(values, dtype=AMP_DTYPE)
    if not np.all(np.isfinite(array)):
        raise InvalidAmplitudeError("amplitudes must be finite")

    return array


@dataclass(frozen=True)
class Gate2x2:
    """A 2x2 complex matrix with the name and parameters it was built from"""

    name: str
    params: tuple = ()
    entries: tuple = field(default=(1 + 0j, 0j, 0j, 1 + 0j))

    @property
    def matrix(self):
        return np.array(self.entries, dtype=AMP_DTYPE).reshape(2, 2)

    def __str__(self):
        if not self.params:
            return self.name

        return f"{self.name}({', '.join(f'{p:.6g}' for p in self.params)})"


def identity_gate():
    return Gate2x2("id", (), (1 + 0j, 0j, 0j, 1 + 0j))


def make_gate(name, params=(), strict=False, tolerance=None):
    """Build a library gate by name.

    Custom ``u`` gates take eight reals (re00 im00 re01 im01 re10 im10 re11
    im11). They are accepted with a warning when they miss the unitarity
    tolerance, unless ``strict`` is set, in which case they are refused.
    """

    name = name.lower()
    params = tuple(float(p) for p in params)

    if name in FIXED_GATES:
        if params:
            raise GateArityError(f"gate '{name}' takes no parameters, got {len(params)}")
        return Gate2x2(name, (), FIXED_GATES[name]())

    if name in ROTATION_GATES:
        if len(params) != 1:
            raise GateArityError(f"gate '{name}' takes 1 angle, got {len(params)}")
        if not math.isfinite(params[0]):
            raise InvalidAmplitudeError(f"gate '{name}' angle must be finite")
        return Gate2x2(name, params, ROTATION_GATES[name](params[0]))

    if name == CUSTOM_GATE:
        if len(params) != CUSTOM_ARITY:
            raise GateArityError(f"gate 'u' takes {CUSTOM_ARITY} reals, got {len(params)}")
        entries = tuple(complex(params[i], params[i + 1]) for i in range(0, CUSTOM_ARITY, 2))
        gate = Gate2x2(name, params, entries)
        check_finite(entries)
        _check_custom_unitarity(gate, strict, tolerance)
        return gate

    raise UnknownGateError(f"unknown gate '{name}'")


def _check_custom_unitarity(gate, strict, tolerance):
    if tolerance is None:
        if strict:
            tolerance = settings.QVEC_STRICT_UNITARY_TOLERANCE
        else:
            tolerance = settings.QVEC_UNITARY_TOLERANCE

    deviation = unitarity_error(gate.matrix)
    if deviation <= tolerance:
        return

    if strict:
        raise NonUnitaryGateError(
            f"custom gate deviates from unitary by {deviation:.3e} (tolerance {tolerance:g})"
        )
    logger.warning(
        "Accepting non-unitary custom gate: deviation %.3e above %g", deviation, tolerance
    )


class GateKind(enum.Enum):
    SINGLE = "single"
    CONTROLLED = "controlled"


@dataclass(frozen=True)
class GateOp:
    """A gate placed on a target qubit, optionally behind a control qubit"""

    kind: GateKind
    gate: Gate2x2
    target: int
    control: int | None = None

    @property
    def qubits(self):
        if self.control is None:
            return (self.target,)

        return (self.control, self.target)

    def __str__(self):
        if self.kind is GateKind.CONTROLLED:
            return f"c{self.gate.name} {self.control} {self.target}"

        return f"{self.gate} {self.target}"


def single(name, target, *params, strict=False):
    """Single-qubit op from the gate library"""

    return GateOp(GateKind.SINGLE, make_gate(name, params, strict=strict), target)


def controlled(name, control, target):
    """Controlled op (``cx`` or ``cz``)"""

    name = name.lower()
    if name not in CONTROLLED_GATES:
        raise UnknownGateError(f"unknown controlled gate '{name}'")

    return GateOp(GateKind.CONTROLLED, make_gate(CONTROLLED_GATES[name]), target, control)


@dataclass(frozen=True)
class Circuit:
    """Ordered sequence of gate operations on n qubits"""

    n_qubits: int
    ops: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))

    def __len__(self):
        return len(self.ops)

    def __iter__(self):
        return iter(self.ops)


@dataclass(frozen=True)
class Violation:
    position: int | None
    message: str

    def __str__(self):
        if self.position is None:
            return f"circuit: {self.message}"

        return f"op {self.position}: {self.message}"


def validate_circuit(circuit):
    """Return every qubit-range or control violation, empty when valid"""

    n = circuit.n_qubits
    violations = []

    if n < 1:
        violations.append(Violation(None, f"n_qubits must be positive, got {n}"))

    for position, op in enumerate(circuit.ops):
        if not 0 <= op.target < n:
            violations.append(Violation(position, f"target {op.target} >= n ({n})"))
        if op.kind is GateKind.CONTROLLED:
            if op.control is None:
                violations.append(Violation(position, "controlled op without control"))
            elif op.control == op.target:
                violations.append(Violation(position, "control equals target"))
            elif not 0 <= op.control < n:
                violations.append(Violation(position, f"control {op.control} >= n ({n})"))

    return violations


def ensure_valid(circuit):
    violations = validate_circuit(circuit)
    if violations:
        raise InvalidCircuitError(violations)

    return circuit


def pair_index(i, k):
    """Partner of index i for a gate on qubit k"""

    return i ^ (1 << k)


def is_pair_base(i, k):
    """True when i is the lower member of its pair (bit k clear)"""

    return not (i >> k) & 1


def _random_unitary_params(rng):
    alpha, beta, gamma, delta = rng.uniform(0, 2 * math.pi, size=4)
    u00, _, _, u11 = _rz(beta)
    c, s = math.cos(gamma / 2), math.sin(gamma / 2)
    e_d0, e_d1 = _rz(delta)[0], _rz(delta)[3]
    phase = complex(math.cos(alpha), math.sin(alpha))
    entries = (
        phase * u00 * c * e_d0,
        -phase * u00 * s * e_d1,
        phase * u11 * s * e_d0,
        phase * u11 * c * e_d1,
    )
    return [part for z in entries for part in (z.real, z.imag)]


def random_circuit(n_qubits, depth, rng):
    """Random circuit drawn uniformly over the full gate set.

    Angles are uniform in [0, 2*pi); controlled gates appear only when
    there are at least two qubits.
    """

    names = list(SINGLE_GATE_NAMES)
    if n_qubits > 1:
        names += list(CONTROLLED_GATES)

    ops = []
    for _ in range(depth):
        name = names[int(rng.integers(len(names)))]
        if name in CONTROLLED_GATES:
            control, target = (int(q) for q in rng.choice(n_qubits, size=2, replace=False))
            ops.append(controlled(name, control, target))
            continue

        target = int(rng.integers(n_qubits))
        if name in ROTATION_GATES:
            ops.append(single(name, target, float(rng.uniform(0, 2 * math.pi))))
        elif name == CUSTOM_GATE:
            ops.append(single(name, target, *_random_unitary_params(rng)))
        else:
            ops.append(single(name, target))

    return Circuit(n_qubits, ops)


def benchmark_circuit(n_qubits):
    """One Hadamard per qubit: touches every stride class once"""

    return Circuit(n_qubits, [single("h", q) for q in range(n_qubits)])
