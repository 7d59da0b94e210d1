"""Django command to check the streamed engines against the dense oracle"""

from django.conf import settings
from django.core.management.base import BaseCommand, CommandError

from core.management.options import params_to_ints
from simulator.exceptions import SimulationError
from simulator.verification import verify_circuits


class Command(BaseCommand):
    """Random-circuit equivalence check"""

    help = "Run random circuits through the dense oracle and every streamed engine"

    def add_arguments(self, parser):
        parser.add_argument("--qubits", type=int, required=True)
        parser.add_argument("--trials", type=int, default=100)
        parser.add_argument("--depth", type=int, default=20)
        parser.add_argument("--seed", type=int, default=42)
        parser.add_argument(
            "--block-amps",
            type=params_to_ints,
            default=[1, 4, 65536],
            help="Comma separated block sizes, capped at 2^n",
        )
        parser.add_argument(
            "--workers",
            type=params_to_ints,
            default=[2],
            help="Comma separated worker counts for the parallel engine",
        )
        parser.add_argument(
            "--tolerance", type=float, default=settings.QVEC_VERIFY_TOLERANCE
        )

    def handle(self, *args, **options):
        """Entrypoint for command"""

        self.stdout.write(
            f"Verifying {options['trials']} circuits of depth {options['depth']} "
            f"on {options['qubits']} qubits (seed {options['seed']})..."
        )
        try:
            report = verify_circuits(
                options["qubits"],
                options["trials"],
                options["depth"],
                options["seed"],
                block_amps_choices=options["block_amps"],
                worker_choices=options["workers"],
                tolerance=options["tolerance"],
                scratch_dir=settings.QVEC_SCRATCH_DIR,
            )
        except SimulationError as e:
            raise CommandError(str(e)) from e

        self.stdout.write(
            f"{len(report.results)} comparisons, max deviation {report.max_deviation:.3e}"
        )
        if report.passed:
            self.stdout.write(self.style.SUCCESS(f"PASS (tolerance {report.tolerance:g})"))
            return

        for failure in report.failures:
            self.stdout.write(
                self.style.ERROR(
                    f"trial {failure.trial} {failure.config}: deviation "
                    f"{failure.max_deviation:.3e}, "
                    f"first divergent gate {failure.divergent_gate}"
                )
            )
        raise CommandError(
            f"FAIL: {len(report.failures)} comparisons above tolerance {report.tolerance:g}"
        )
