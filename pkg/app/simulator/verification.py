"""
Oracle harness: random circuits run through the dense baseline and the
streamed engines, compared amplitude by amplitude.
"""

import logging
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from simulator import dense
from simulator.engine import Strategy, simulate
from simulator.gates import S_STATE, Circuit, random_circuit
from simulator.store import create_store, load_state

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EngineConfig:
    strategy: str
    block_amps: int
    workers: int = 1

    @property
    def cache_bytes(self):
        # the tightest window that still holds one pair unit per worker
        return 2 * self.workers * self.block_amps * S_STATE

    def __str__(self):
        return f"{self.strategy}(block_amps={self.block_amps}, workers={self.workers})"


@dataclass
class TrialResult:
    trial: int
    config: EngineConfig
    max_deviation: float
    divergent_gate: int | None = None


@dataclass
class VerifyReport:
    n_qubits: int
    tolerance: float
    results: list = field(default_factory=list)

    @property
    def max_deviation(self):
        return max((r.max_deviation for r in self.results), default=0.0)

    @property
    def failures(self):
        return [r for r in self.results if r.max_deviation > self.tolerance]

    @property
    def passed(self):
        return not self.failures


def engine_configs(n, block_amps_choices, worker_choices):
    """Streamed configurations to check at n qubits, block sizes capped at 2^n"""

    sizes = sorted({min(b, 1 << n) for b in block_amps_choices})
    configs = [EngineConfig(Strategy.PAIRED_CACHED.value, b) for b in sizes]
    configs += [
        EngineConfig(Strategy.PAIRED_CACHED_PARALLEL.value, b, c)
        for b in sizes
        for c in worker_choices
    ]
    return configs


def run_streamed(circuit, config, scratch_dir):
    """Final state of ``circuit`` under one streamed configuration"""

    path = Path(scratch_dir) / "verify.qvsv"
    with create_store(path, circuit.n_qubits, config.block_amps, overwrite=True) as store:
        simulate(store, circuit, config.strategy, config.cache_bytes, config.workers)
        return load_state(store)


def max_deviation(a, b):
    return float(np.max(np.abs(a - b)))


def locate_divergence(circuit, config, scratch_dir, tolerance):
    """Index of the first op after which the engine leaves the dense result"""

    n = circuit.n_qubits
    reference = dense.DenseState.zero(n)
    path = Path(scratch_dir) / "divergence.qvsv"
    with create_store(path, n, config.block_amps, overwrite=True) as store:
        for position, op in enumerate(circuit.ops):
            reference = dense.apply_dense(dense.expand_op(op, n), reference)
            step = Circuit(n, [op])
            simulate(store, step, config.strategy, config.cache_bytes, config.workers)
            if max_deviation(load_state(store), reference.amps) > tolerance:
                return position

    return None


def verify_circuits(
    n,
    trials,
    depth,
    seed,
    block_amps_choices=(1, 4, 65536),
    worker_choices=(2,),
    tolerance=1e-12,
    scratch_dir=None,
):
    """Compare every streamed configuration against the dense oracle"""

    rng = np.random.default_rng(seed)
    report = VerifyReport(n, tolerance)
    configs = engine_configs(n, block_amps_choices, worker_choices)

    with tempfile.TemporaryDirectory(prefix="qvec-verify-", dir=scratch_dir) as workdir:
        for trial in range(trials):
            circuit = random_circuit(n, depth, rng)
            expected = dense.simulate_dense(circuit).amps
            for config in configs:
                deviation = max_deviation(run_streamed(circuit, config, workdir), expected)
                result = TrialResult(trial, config, deviation)
                if deviation > tolerance:
                    result.divergent_gate = locate_divergence(
                        circuit, config, workdir, tolerance
                    )
                    logger.error(
                        "Trial %d diverged under %s: deviation %.3e, first divergent gate %s",
                        trial,
                        config,
                        deviation,
                        result.divergent_gate,
                    )
                report.results.append(result)

    return report
