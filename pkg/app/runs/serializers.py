"""
Serializers for run record APIs
"""

from rest_framework import serializers

from core.models import SimulationRun
from simulator.serializers import METRICS_DOCUMENT_FIELDS


class SimulationRunSerializer(serializers.ModelSerializer):
    """Serializer for run records in list views"""

    class Meta:
        model = SimulationRun
        fields = ["id", "created", "succeeded", *METRICS_DOCUMENT_FIELDS]
        read_only_fields = fields


class SimulationRunDetailSerializer(SimulationRunSerializer):
    """Serializer for a single run record"""

    blocks_read_per_gate = serializers.FloatField(read_only=True)

    class Meta(SimulationRunSerializer.Meta):
        fields = [
            *SimulationRunSerializer.Meta.fields,
            "circuit_path",
            "state_path",
            "block_amps",
            "cache_bytes",
            "blocks_read_per_gate",
            "norm",
            "error",
        ]
        read_only_fields = fields
