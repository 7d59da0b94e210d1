"""
Partitioned parallel execution.

Each gate's pair units are split into contiguous chunks, one per worker.
Units never straddle workers, so every block is touched by exactly one
worker per gate. Workers run with private cache windows over the shared
store, and all of them flush before the next gate starts.
"""

import logging
import time
from concurrent.futures import ALL_COMPLETED, ThreadPoolExecutor, wait
from dataclasses import dataclass

from simulator.cache import CacheConfig, CacheWindow
from simulator.exceptions import (
    DimensionMismatchError,
    InvalidWorkerCountError,
    WorkerFailureError,
)
from simulator.gates import ensure_valid
from simulator.kernel import check_capacity, plan_gate, sweep_units
from simulator.metrics import Metrics

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PartitionPlan:
    workers: int
    ranges: tuple

    @property
    def sizes(self):
        return tuple(len(r) for r in self.ranges)


@dataclass(frozen=True)
class WorkerReport:
    worker_id: int
    gate_index: int
    units_processed: int
    pairs_processed: int
    metrics: Metrics
    wall_ms: float


@dataclass
class ParallelRun:
    store: object
    metrics: Metrics
    gate_reports: list

    def reports_for_worker(self, worker_id):
        return [r for gate in self.gate_reports for r in gate if r.worker_id == worker_id]


def partition_indices(total, workers):
    """Split [0, total) into ``workers`` contiguous ranges.

    Range i is [floor(total*i/C), floor(total*(i+1)/C)), the even split of
    the state index space across C nodes.
    """

    if workers < 1 or workers > total:
        raise InvalidWorkerCountError(f"worker count {workers} not in [1, {total}]")

    bounds = [total * i // workers for i in range(workers + 1)]
    ranges = tuple(range(bounds[i], bounds[i + 1]) for i in range(workers))
    return PartitionPlan(workers, ranges)


def assign_pair_units(units, workers):
    """Contiguous chunks of ``units``; the first ``len % workers`` get one extra"""

    if workers < 1:
        raise InvalidWorkerCountError(f"worker count {workers} must be at least 1")

    size, extra = divmod(len(units), workers)
    chunks = []
    start = 0
    for worker_id in range(workers):
        stop = start + size + (1 if worker_id < extra else 0)
        chunks.append(list(units[start:stop]))
        start = stop

    return chunks


def _run_worker(store, config, op, units, worker_id, gate_index):
    metrics = Metrics(n_qubits=store.n_qubits)
    cache = CacheWindow(config, store, metrics)
    start = time.perf_counter()
    pairs = sweep_units(cache, op, units)
    cache.flush()
    wall_ms = (time.perf_counter() - start) * 1000

    return WorkerReport(worker_id, gate_index, len(units), pairs, metrics, wall_ms)


def _worker_config(store, cache_bytes, workers):
    if cache_bytes is None:
        return CacheConfig(None, store.block_amps)

    return CacheConfig(cache_bytes // workers, store.block_amps)


def run_parallel(store, circuit, workers, cache_bytes, metrics=None):
    """Apply ``circuit`` to ``store`` with ``workers`` concurrent workers.

    The cache budget is split evenly so the total stays within
    ``cache_bytes`` (``None`` for unbounded windows).
    """

    ensure_valid(circuit)
    if workers < 1:
        raise InvalidWorkerCountError(f"worker count {workers} must be at least 1")
    if circuit.n_qubits != store.n_qubits:
        raise DimensionMismatchError(
            f"circuit has {circuit.n_qubits} qubits, state has {store.n_qubits}"
        )
    if metrics is None:
        metrics = Metrics(n_qubits=store.n_qubits)
    metrics.workers = workers

    config = _worker_config(store, cache_bytes, workers)
    gate_reports = []

    with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="qvec-worker") as pool:
        for gate_index, op in enumerate(circuit.ops):
            plan = plan_gate(op, store.n_qubits, store.block_amps)
            check_capacity(plan, config)
            chunks = assign_pair_units(plan.units, workers)

            futures = {
                pool.submit(_run_worker, store, config, op, chunk, worker_id, gate_index): (
                    worker_id
                )
                for worker_id, chunk in enumerate(chunks)
            }
            # barrier: every worker has flushed this gate before the next starts
            wait(futures, return_when=ALL_COMPLETED)

            reports = []
            for future, worker_id in futures.items():
                error = future.exception()
                if error is not None:
                    raise WorkerFailureError(worker_id, gate_index, error) from error
                reports.append(future.result())
            reports.sort(key=lambda r: r.worker_id)

            for report in reports:
                metrics.absorb(report.metrics)
            metrics.traversals += 1
            metrics.gates_applied += 1
            gate_reports.append(reports)
            logger.debug("Gate %d (%s) done on %d workers", gate_index, op, workers)

    return ParallelRun(store, metrics, gate_reports)
