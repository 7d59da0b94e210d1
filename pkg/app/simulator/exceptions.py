"""
Errors raised by the simulation engine
"""


class SimulationError(Exception):
    """Base class for every engine error"""


class UnknownGateError(SimulationError, ValueError):
    """Gate name is not part of the gate library"""


class GateArityError(SimulationError, ValueError):
    """Wrong number of parameters or qubits for a gate"""


class NonUnitaryGateError(SimulationError, ValueError):
    """Custom gate fails the unitarity check"""


class InvalidAmplitudeError(SimulationError, ValueError):
    """NaN or infinite value offered as an amplitude or matrix entry"""


class InvalidCircuitError(SimulationError, ValueError):
    """Circuit holds out-of-range or malformed operations"""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class ControlEqualsTargetError(SimulationError, ValueError):
    """Controlled gate uses the same qubit as control and target"""


class OracleLimitExceeded(SimulationError, ValueError):
    """Dense oracle refuses qubit counts above its configured limit"""


class DimensionMismatchError(SimulationError, ValueError):
    """Matrix and state dimensions differ"""


class InvalidBlockSizeError(SimulationError, ValueError):
    """Block size is not a power of two in [1, 2^n]"""


class StoreOverflowError(SimulationError, OverflowError):
    """State vector size does not fit in a 64-bit byte count"""


class StoreFormatError(SimulationError, ValueError):
    """State file has a bad magic, version or length"""


class StoreExistsError(SimulationError, FileExistsError):
    """State file exists and overwrite was not requested"""


class BlockRangeError(SimulationError, IndexError):
    """Block id or state index outside the store"""


class CapacityTooSmallError(SimulationError, ValueError):
    """Cache window cannot hold the blocks a pair unit needs"""


class PinLimitError(SimulationError, RuntimeError):
    """More blocks pinned than one pair unit needs"""


class StrideTooLargeError(SimulationError, ValueError):
    """In-block kernel called with a stride that crosses blocks"""


class MismatchedPairBlocksError(SimulationError, ValueError):
    """Cross-block kernel called with blocks that are not XOR partners"""


class InvalidWorkerCountError(SimulationError, ValueError):
    """Worker count below one or above the work domain"""


class WorkerFailureError(SimulationError, RuntimeError):
    """A parallel worker failed and the gate was aborted"""

    def __init__(self, worker_id, gate_index, error):
        self.worker_id = worker_id
        self.gate_index = gate_index
        self.error = error
        super().__init__(f"worker {worker_id} failed on gate {gate_index}: {error}")


class CircuitParseError(SimulationError, ValueError):
    """Circuit text could not be parsed"""

    def __init__(self, line, message):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")


class QubitCountConflictError(CircuitParseError):
    """Qubit directive disagrees with the requested qubit count"""
