"""Django command to wait for the run-record database to be available"""

import logging
import time

from django.core.management.base import BaseCommand, CommandError
from django.db.utils import OperationalError
from psycopg2 import OperationalError as Psycopg2OpError

logger = logging.getLogger(__name__)


class Command(BaseCommand):
    """Block until the database accepts connections or the timeout passes"""

    help = "Wait for the database that stores simulation runs"

    def add_arguments(self, parser):
        parser.add_argument(
            "--timeout",
            type=int,
            default=60,
            help="Seconds to wait before giving up (0 waits forever)",
        )

    def handle(self, *args, **options):
        """Entrypoint for command"""

        self.stdout.write("Waiting for database...")
        timeout = options["timeout"]
        waited = 0
        while True:
            try:
                self.check(databases=["default"])
                break
            except (Psycopg2OpError, OperationalError) as e:
                if timeout and waited >= timeout:
                    raise CommandError(f"Database unavailable after {waited}s: {e}") from e
                logger.debug("Database unavailable: %s", e)
                self.stdout.write("Database unavailable, waiting 1 more second...")
                time.sleep(1)
                waited += 1
        self.stdout.write(self.style.SUCCESS("Database available!"))
