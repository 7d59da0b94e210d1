"""
Argument helpers shared by the simulator commands
"""

from argparse import ArgumentTypeError


def params_to_ints(value):
    """Convert a comma separated list of strings to integers"""

    try:
        return [int(item) for item in value.split(",") if item.strip()]
    except ValueError:
        raise ArgumentTypeError(f"expected comma separated integers, got '{value}'") from None


def params_to_list(value):
    """Split a comma separated list of names"""

    return [item.strip() for item in value.split(",") if item.strip()]


def binary_index(index, n_qubits):
    """Basis label of ``index``, qubit 0 rightmost"""

    return format(index, f"0{n_qubits}b")
