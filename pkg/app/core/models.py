"""
Database Models
"""

from django.db import models

from simulator.engine import Strategy


class SimulationRun(models.Model):
    """One invocation of the ``run`` command and its metrics document"""

    created = models.DateTimeField(auto_now_add=True)
    strategy = models.CharField(max_length=32, choices=Strategy.choices)
    circuit_path = models.CharField(max_length=1024, blank=True)
    state_path = models.CharField(max_length=1024, blank=True)
    n_qubits = models.PositiveIntegerField()
    block_amps = models.PositiveBigIntegerField()
    cache_bytes = models.PositiveBigIntegerField(null=True, blank=True)
    workers = models.PositiveIntegerField(default=1)

    gates_applied = models.PositiveBigIntegerField(default=0)
    traversals = models.PositiveBigIntegerField(default=0)
    blocks_read = models.PositiveBigIntegerField(default=0)
    blocks_written = models.PositiveBigIntegerField(default=0)
    bytes_read = models.PositiveBigIntegerField(default=0)
    bytes_written = models.PositiveBigIntegerField(default=0)
    cache_hits = models.PositiveBigIntegerField(default=0)
    cache_misses = models.PositiveBigIntegerField(default=0)
    peak_cache_bytes = models.PositiveBigIntegerField(default=0)
    wall_ms = models.FloatField(default=0)

    norm = models.FloatField(null=True, blank=True)
    succeeded = models.BooleanField(default=False)
    error = models.TextField(blank=True)

    class Meta:
        ordering = ["-created", "-id"]

    def __str__(self):
        status = "ok" if self.succeeded else "failed"
        return f"{self.strategy} n={self.n_qubits} workers={self.workers} ({status})"

    @property
    def blocks_read_per_gate(self):
        if not self.gates_applied:
            return 0

        return self.blocks_read / self.gates_applied

    @classmethod
    def record(cls, metrics, **fields):
        """Save a run row from a metrics object plus run configuration"""

        counters = {
            name: getattr(metrics, name)
            for name in (
                "gates_applied",
                "traversals",
                "blocks_read",
                "blocks_written",
                "bytes_read",
                "bytes_written",
                "cache_hits",
                "cache_misses",
                "peak_cache_bytes",
                "wall_ms",
            )
        }
        fields.setdefault("strategy", metrics.strategy)
        fields.setdefault("n_qubits", metrics.n_qubits)
        fields.setdefault("workers", metrics.workers)

        return cls.objects.create(**counters, **fields)
