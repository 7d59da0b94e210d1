"""
Django admin customization.
"""

from django.contrib import admin
from django.utils.translation import gettext_lazy as _

from core import models


class SimulationRunAdmin(admin.ModelAdmin):
    """Define the admin pages for simulation runs"""

    ordering = ["-created"]
    list_display = ["id", "strategy", "n_qubits", "workers", "wall_ms", "succeeded"]
    list_filter = ["strategy", "succeeded", "n_qubits"]

    fieldsets = (
        (
            None,
            {
                "fields": (
                    "strategy",
                    "circuit_path",
                    "state_path",
                    "n_qubits",
                    "block_amps",
                    "cache_bytes",
                    "workers",
                )
            },
        ),
        (
            _("Counters"),
            {
                "fields": (
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
            },
        ),
        (
            _("Outcome"),
            {
                "fields": ("norm", "succeeded", "error", "created"),
            },
        ),
    )

    readonly_fields = ["created"]


admin.site.register(models.SimulationRun, SimulationRunAdmin)
