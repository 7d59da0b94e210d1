"""
Serializers for metrics documents
"""

from pathlib import Path

from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

METRICS_DOCUMENT_FIELDS = [
    "n_qubits",
    "strategy",
    "workers",
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
]


class MetricsSerializer(serializers.Serializer):
    """Serializer for the metrics document written by every run"""

    n_qubits = serializers.IntegerField(min_value=0)
    strategy = serializers.CharField(allow_blank=True)
    workers = serializers.IntegerField(min_value=1)
    gates_applied = serializers.IntegerField(min_value=0)
    traversals = serializers.IntegerField(min_value=0)
    blocks_read = serializers.IntegerField(min_value=0)
    blocks_written = serializers.IntegerField(min_value=0)
    bytes_read = serializers.IntegerField(min_value=0)
    bytes_written = serializers.IntegerField(min_value=0)
    cache_hits = serializers.IntegerField(min_value=0)
    cache_misses = serializers.IntegerField(min_value=0)
    peak_cache_bytes = serializers.IntegerField(min_value=0)
    wall_ms = serializers.FloatField(min_value=0)


def emit(metrics):
    """Return the metrics document as an ordered dict"""

    return MetricsSerializer(metrics).data


def write_metrics(path, metrics):
    """Render the metrics document as JSON at ``path``"""

    content = JSONRenderer().render(emit(metrics), renderer_context={"indent": 2})
    Path(path).write_bytes(content + b"\n")

    return path
