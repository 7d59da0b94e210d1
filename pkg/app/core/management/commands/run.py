"""Django command to apply a circuit to a disk-backed state"""

import logging
from pathlib import Path

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError
from django.db import DatabaseError

from core.management.options import binary_index
from core.models import SimulationRun
from simulator.circuit_io import parse_circuit
from simulator.engine import Strategy, simulate
from simulator.exceptions import (
    CircuitParseError,
    DimensionMismatchError,
    SimulationError,
)
from simulator.metrics import Metrics
from simulator.serializers import write_metrics
from simulator.store import open_or_create_store, top_amplitudes

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    """Run a circuit file against a state file with one strategy"""

    help = "Apply a circuit to a state file and write a metrics document"

    def add_arguments(self, parser):
        parser.add_argument("--circuit", required=True, help="Circuit text file")
        parser.add_argument("--qubits", type=int, help="Qubit count (must match the file)")
        parser.add_argument("--state", required=True, help="State file, created if absent")
        parser.add_argument("--block-amps", type=int, default=settings.QVEC_BLOCK_AMPS)
        parser.add_argument("--cache-bytes", type=int, default=settings.QVEC_CACHE_BYTES)
        parser.add_argument("--workers", type=int, default=settings.QVEC_WORKERS)
        parser.add_argument(
            "--strategy",
            choices=Strategy.values,
            default=Strategy.PAIRED_CACHED.value,
        )
        parser.add_argument("--metrics", help="Where to write the metrics document")
        parser.add_argument(
            "--strict", action="store_true", help="Refuse non-unitary custom gates"
        )
        parser.add_argument("--top", type=int, default=8, help="Amplitudes to print")

    def handle(self, *args, **options):
        """Entrypoint for command"""

        strategy = options["strategy"]
        workers = options["workers"] if strategy == Strategy.PAIRED_CACHED_PARALLEL else 1
        metrics = Metrics(n_qubits=options["qubits"] or 0, strategy=strategy, workers=workers)
        outcome = {"norm": None, "succeeded": False, "error": "", "block_amps": 0}

        try:
            top = self._run(options, metrics, outcome)
            outcome["succeeded"] = True
        except (SimulationError, OSError) as e:
            outcome["error"] = str(e)
            logger.error("Run failed: %s", e)
            raise CommandError(str(e)) from e
        finally:
            if options["metrics"]:
                write_metrics(options["metrics"], metrics)
            if settings.QVEC_RECORD_RUNS:
                self._record(metrics, options, outcome)

        self.stdout.write(f"norm: {outcome['norm']:.12f}")
        for index, amp in top:
            label = binary_index(index, metrics.n_qubits)
            self.stdout.write(f"  |{label}> [{index}] {amp.real:+.10f} {amp.imag:+.10f}j")
        self.stdout.write(
            self.style.SUCCESS(
                f"{metrics.gates_applied} gates, {metrics.traversals} traversals, "
                f"{metrics.blocks_read} blocks read in {metrics.wall_ms:.1f} ms"
            )
        )

    def _record(self, metrics, options, outcome):
        try:
            SimulationRun.record(
                metrics,
                circuit_path=options["circuit"],
                state_path=options["state"],
                cache_bytes=options["cache_bytes"],
                **outcome,
            )
        except DatabaseError as e:
            logger.warning("Run not recorded (run migrate first?): %s", e)

    def _run(self, options, metrics, outcome):
        try:
            text = Path(options["circuit"]).read_text(encoding="utf-8")
        except UnicodeDecodeError as e:
            line = e.object[: e.start].count(b"\n") + 1
            raise CircuitParseError(line, f"not UTF-8 text: {e.reason}") from e
        circuit = parse_circuit(text, options["qubits"], strict=options["strict"])
        metrics.n_qubits = circuit.n_qubits

        block_amps = min(options["block_amps"], 1 << circuit.n_qubits)
        with open_or_create_store(options["state"], circuit.n_qubits, block_amps) as store:
            if store.n_qubits != circuit.n_qubits:
                raise DimensionMismatchError(
                    f"state holds {store.n_qubits} qubits, circuit needs {circuit.n_qubits}"
                )
            outcome["block_amps"] = store.block_amps
            simulate(
                store,
                circuit,
                metrics.strategy,
                cache_bytes=options["cache_bytes"],
                workers=metrics.workers,
                metrics=metrics,
            )
            outcome["norm"] = store.norm()
            return top_amplitudes(store, options["top"])
