"""Django command to inspect a state file"""

from django.core.management.base import BaseCommand, CommandError

from core.management.options import binary_index
from simulator.exceptions import SimulationError
from simulator.store import open_store, top_amplitudes


class Command(BaseCommand):
    """Print header fields, norm and largest amplitudes of a state"""

    help = "Show a state file's header, norm and top amplitudes"

    def add_arguments(self, parser):
        parser.add_argument("--state", required=True)
        parser.add_argument("--top", type=int, default=8)

    def handle(self, *args, **options):
        """Entrypoint for command"""

        try:
            with open_store(options["state"]) as store:
                header = store.header
                self.stdout.write(f"magic:      {header.magic.decode('ascii')}")
                self.stdout.write(f"version:    {header.version}")
                self.stdout.write(f"n_qubits:   {header.n_qubits}")
                self.stdout.write(f"block_amps: {header.block_amps}")
                self.stdout.write(f"n_blocks:   {store.n_blocks}")
                self.stdout.write(f"norm:       {store.norm():.12f}")
                for index, amp in top_amplitudes(store, options["top"]):
                    probability = abs(amp) ** 2
                    self.stdout.write(
                        f"  |{binary_index(index, header.n_qubits)}> "
                        f"{amp.real:+.10f} {amp.imag:+.10f}j  p={probability:.6f}"
                    )
        except (SimulationError, OSError) as e:
            raise CommandError(str(e)) from e
