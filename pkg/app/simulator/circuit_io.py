"""
Text format for circuits.

One instruction per line, ``#`` starts a comment, blank lines are ignored:

    qubits 3
    h 0
    rz 1 0.785398
    u 2 re00 im00 re01 im01 re10 im10 re11 im11
    cx 0 1
    cz 1 2

Angles are radians. Qubit 0 is the least-significant bit.
"""

from simulator.exceptions import (
    CircuitParseError,
    GateArityError,
    InvalidAmplitudeError,
    NonUnitaryGateError,
    QubitCountConflictError,
    UnknownGateError,
)
from simulator.gates import (
    CONTROLLED_GATES,
    CUSTOM_ARITY,
    CUSTOM_GATE,
    FIXED_GATES,
    ROTATION_GATES,
    Circuit,
    GateKind,
    controlled,
    single,
)

QUBITS_DIRECTIVE = "qubits"

_CONTROLLED_BY_GATE = {gate: name for name, gate in CONTROLLED_GATES.items()}


def _int(token, line, what):
    try:
        value = int(token)
    except ValueError:
        raise CircuitParseError(line, f"{what} must be an integer, got '{token}'") from None
    if value < 0:
        raise CircuitParseError(line, f"{what} must be non-negative, got {value}")

    return value


def _float(token, line):
    try:
        return float(token)
    except ValueError:
        raise CircuitParseError(line, f"expected a number, got '{token}'") from None


def _expect(args, count, name, line):
    if len(args) != count:
        raise CircuitParseError(
            line, f"arity: '{name}' takes {count} arguments, got {len(args)}"
        )


def _parse_op(name, args, line, strict):
    if name in CONTROLLED_GATES:
        _expect(args, 2, name, line)
        control = _int(args[0], line, "control")
        target = _int(args[1], line, "target")
        if control == target:
            raise CircuitParseError(line, f"control equals target ({control})")
        return controlled(name, control, target)

    if name in FIXED_GATES:
        _expect(args, 1, name, line)
        return single(name, _int(args[0], line, "qubit"))

    if name in ROTATION_GATES:
        _expect(args, 2, name, line)
        return single(name, _int(args[0], line, "qubit"), _float(args[1], line))

    if name == CUSTOM_GATE:
        _expect(args, 1 + CUSTOM_ARITY, name, line)
        params = [_float(token, line) for token in args[1:]]
        return single(name, _int(args[0], line, "qubit"), *params, strict=strict)

    raise CircuitParseError(line, f"unknown instruction '{name}'")


def parse_circuit(text, n_override=None, strict=False):
    """Parse circuit text into a :class:`Circuit`"""

    declared = None
    ops = []
    lines = []

    for line_no, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if not tokens:
            continue
        name, args = tokens[0].lower(), tokens[1:]

        if name == QUBITS_DIRECTIVE:
            if declared is not None or ops:
                raise CircuitParseError(line_no, "'qubits' must be the first instruction")
            _expect(args, 1, name, line_no)
            declared = _int(args[0], line_no, "qubit count")
            if declared < 1:
                raise CircuitParseError(line_no, "qubit count must be positive")
            if n_override is not None and n_override != declared:
                raise QubitCountConflictError(
                    line_no, f"file declares {declared} qubits, {n_override} requested"
                )
            continue

        try:
            ops.append(_parse_op(name, args, line_no, strict))
        except (
            GateArityError,
            InvalidAmplitudeError,
            NonUnitaryGateError,
            UnknownGateError,
        ) as e:
            raise CircuitParseError(line_no, str(e)) from e
        lines.append(line_no)

    n = declared if declared is not None else n_override
    if n is None:
        n = 1 + max((q for op in ops for q in op.qubits), default=0)

    for op, line_no in zip(ops, lines):
        for qubit in op.qubits:
            if qubit >= n:
                raise CircuitParseError(line_no, f"qubit {qubit} >= n ({n})")

    return Circuit(n, ops)


def _number(value):
    return format(value, ".17g")


def _serialize_op(op):
    if op.kind is GateKind.CONTROLLED:
        return f"{_CONTROLLED_BY_GATE[op.gate.name]} {op.control} {op.target}"

    parts = [op.gate.name, str(op.target)]
    parts.extend(_number(p) for p in op.gate.params)
    return " ".join(parts)


def serialize_circuit(circuit):
    """Render ``circuit`` so that parse_circuit gives it back unchanged"""

    lines = [f"{QUBITS_DIRECTIVE} {circuit.n_qubits}"]
    lines.extend(_serialize_op(op) for op in circuit.ops)

    return "\n".join(lines) + "\n"
