"""
Strategy dispatch shared by the management commands
"""

import logging
from dataclasses import dataclass

from django.db import models

from simulator import dense, kernel, parallel
from simulator.exceptions import InvalidWorkerCountError
from simulator.metrics import Metrics
from simulator.store import load_state, write_state

logger = logging.getLogger(__name__)


class Strategy(models.TextChoices):
    DENSE = "dense", "Dense matrix baseline"
    PAIRED = "paired", "Amplitude pairing, unbounded window"
    PAIRED_CACHED = "paired-cached", "Amplitude pairing, bounded window"
    PAIRED_CACHED_PARALLEL = "paired-cached-parallel", "Amplitude pairing, parallel workers"


@dataclass
class SimulationResult:
    metrics: Metrics
    gate_reports: list


def simulate(store, circuit, strategy, cache_bytes=None, workers=1, metrics=None):
    """Apply ``circuit`` to ``store`` with the chosen strategy.

    ``wall_ms`` covers gate execution up to the final write-back.
    """

    strategy = Strategy(strategy)
    if metrics is None:
        metrics = Metrics()
    metrics.n_qubits = circuit.n_qubits
    metrics.strategy = strategy.value
    metrics.workers = workers if strategy == Strategy.PAIRED_CACHED_PARALLEL else 1
    gate_reports = []

    logger.info(
        "Simulating %d ops on %d qubits with %s (workers=%d, cache_bytes=%s)",
        len(circuit),
        circuit.n_qubits,
        strategy.value,
        metrics.workers,
        cache_bytes,
    )

    with metrics.timed():
        if strategy == Strategy.DENSE:
            dense.check_oracle_limit(circuit.n_qubits)
            initial = dense.DenseState(store.n_qubits, load_state(store, metrics))
            state = dense.simulate_dense(circuit, metrics=metrics, initial=initial)
            write_state(store, state.amps, metrics)
        elif strategy == Strategy.PAIRED:
            kernel.apply_circuit_streamed(store, circuit, None, metrics)
        elif strategy == Strategy.PAIRED_CACHED:
            kernel.apply_circuit_streamed(store, circuit, cache_bytes, metrics)
        else:
            if workers < 1:
                raise InvalidWorkerCountError(f"worker count {workers} must be at least 1")
            run = parallel.run_parallel(store, circuit, workers, cache_bytes, metrics)
            gate_reports = run.gate_reports
        store.sync()

    logger.info(
        "Finished in %.1f ms: %d traversals, %d blocks read, %d written",
        metrics.wall_ms,
        metrics.traversals,
        metrics.blocks_read,
        metrics.blocks_written,
    )
    return SimulationResult(metrics, gate_reports)
