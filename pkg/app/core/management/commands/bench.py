"""Django command to benchmark the simulation strategies"""

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.management.options import params_to_ints, params_to_list
from simulator.bench import data_size_label, growth_factors, run_bench, write_report
from simulator.engine import Strategy
from simulator.exceptions import SimulationError


class Command(BaseCommand):
    """Time the one-H-per-qubit circuit across qubit counts"""

    help = "Benchmark strategies over a qubit range and write a delimited report"

    def add_arguments(self, parser):
        parser.add_argument("--min-qubits", type=int, required=True)
        parser.add_argument("--max-qubits", type=int, required=True)
        parser.add_argument(
            "--strategies",
            type=params_to_list,
            default=[Strategy.PAIRED_CACHED.value],
            help="Comma separated strategies",
        )
        parser.add_argument(
            "--workers", type=params_to_ints, default=[1, 2], help="Comma separated counts"
        )
        parser.add_argument("--report", required=True, help="Where to write the table")
        parser.add_argument("--block-amps", type=int, default=settings.QVEC_BLOCK_AMPS)
        parser.add_argument("--cache-bytes", type=int, default=settings.QVEC_CACHE_BYTES)

    def handle(self, *args, **options):
        """Entrypoint for command"""

        unknown = set(options["strategies"]) - set(Strategy.values)
        if unknown:
            raise CommandError(f"unknown strategies: {', '.join(sorted(unknown))}")
        if options["min_qubits"] > options["max_qubits"]:
            raise CommandError("--min-qubits must not exceed --max-qubits")

        try:
            rows = run_bench(
                options["min_qubits"],
                options["max_qubits"],
                options["strategies"],
                options["workers"],
                block_amps=options["block_amps"],
                cache_bytes=options["cache_bytes"],
                scratch_dir=settings.QVEC_SCRATCH_DIR,
            )
        except (SimulationError, OSError) as e:
            raise CommandError(str(e)) from e
        write_report(options["report"], rows)

        self.stdout.write(f"{'qubits':>6} {'size':>6} {'strategy':<24} {'C':>2} {'ms':>10}")
        for row in rows:
            self.stdout.write(
                f"{row.qubits:>6} {data_size_label(row.data_size_bytes):>6} "
                f"{row.strategy:<24} {row.workers:>2} {row.wall_ms:>10.3f}"
            )

        for strategy in options["strategies"]:
            for n, factor in growth_factors(rows, strategy).items():
                self.stdout.write(f"growth {strategy} {n - 1}->{n}: {factor:.2f}x")
        for row in rows:
            if row.workers > 1 and row.speedup_vs_1_worker is not None:
                self.stdout.write(
                    f"speedup {row.strategy} n={row.qubits} C={row.workers}: "
                    f"{row.speedup_vs_1_worker:.2f}x"
                )

        self.stdout.write(self.style.SUCCESS(f"Report written to {options['report']}"))
