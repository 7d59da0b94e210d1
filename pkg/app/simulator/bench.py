"""
Benchmark harness: fixed one-H-per-qubit circuit over a range of qubit
counts, strategies and worker counts.
"""

import csv
import logging
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

from django.conf import settings

from simulator.engine import Strategy, simulate
from simulator.gates import benchmark_circuit
from simulator.store import create_store, total_bytes

logger = logging.getLogger(__name__)

REPORT_COLUMNS = [
    "qubits",
    "data_size_bytes",
    "strategy",
    "workers",
    "wall_ms",
    "blocks_read_per_gate",
    "speedup_vs_1_worker",
]

_SIZE_UNITS = ["", "K", "M", "G", "T", "P"]


@dataclass
class BenchRow:
    qubits: int
    data_size_bytes: int
    strategy: str
    workers: int
    wall_ms: float
    blocks_read_per_gate: float
    speedup_vs_1_worker: float | None = None


def data_size_label(n_bytes):
    """1048576 -> '1M', 1073741824 -> '1G'"""

    value = n_bytes
    for unit in _SIZE_UNITS:
        if value < 1024 or unit == _SIZE_UNITS[-1]:
            return f"{value:g}{unit}"
        value /= 1024

    return str(n_bytes)


def _worker_counts(strategy, workers_list):
    if strategy == Strategy.PAIRED_CACHED_PARALLEL:
        return sorted(set(workers_list))

    return [1]


def run_bench(
    min_qubits,
    max_qubits,
    strategies,
    workers_list=(1,),
    block_amps=None,
    cache_bytes=None,
    scratch_dir=None,
):
    """Time every (n, strategy, workers) combination"""

    block_amps = block_amps or settings.QVEC_BLOCK_AMPS
    cache_bytes = cache_bytes or settings.QVEC_CACHE_BYTES
    rows = []

    with tempfile.TemporaryDirectory(prefix="qvec-bench-", dir=scratch_dir) as workdir:
        path = Path(workdir) / "bench.qvsv"
        for n in range(min_qubits, max_qubits + 1):
            circuit = benchmark_circuit(n)
            amps_per_block = min(block_amps, 1 << n)
            for strategy in (Strategy(s) for s in strategies):
                if strategy == Strategy.DENSE and n > settings.QVEC_ORACLE_LIMIT:
                    logger.warning("Skipping dense strategy at %d qubits", n)
                    continue
                baseline = None
                for workers in _worker_counts(strategy, workers_list):
                    with create_store(path, n, amps_per_block, overwrite=True) as store:
                        result = simulate(store, circuit, strategy, cache_bytes, workers)
                    metrics = result.metrics
                    row = BenchRow(
                        qubits=n,
                        data_size_bytes=total_bytes(n),
                        strategy=strategy.value,
                        workers=workers,
                        wall_ms=round(metrics.wall_ms, 3),
                        blocks_read_per_gate=(
                            metrics.blocks_read / max(metrics.gates_applied, 1)
                        ),
                    )
                    if workers == 1:
                        baseline = metrics.wall_ms
                        row.speedup_vs_1_worker = 1.0
                    elif baseline is not None and metrics.wall_ms > 0:
                        row.speedup_vs_1_worker = round(baseline / metrics.wall_ms, 3)
                    rows.append(row)
                    logger.info("Bench %s", row)

    return rows


def growth_factors(rows, strategy, workers=1):
    """Wall-time ratio between consecutive qubit counts"""

    times = {
        r.qubits: r.wall_ms for r in rows if r.strategy == strategy and r.workers == workers
    }
    return {
        n: times[n] / times[n - 1]
        for n in sorted(times)
        if n - 1 in times and times[n - 1] > 0
    }


def write_report(path, rows):
    """Comma-delimited table with a header row"""

    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=REPORT_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow(asdict(row))

    return path
