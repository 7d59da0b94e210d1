"""
Views for run record APIs
"""

from drf_spectacular.types import OpenApiTypes
from drf_spectacular.utils import (
    OpenApiParameter,
    extend_schema,
    extend_schema_view,
)
from rest_framework import viewsets
from rest_framework.authentication import TokenAuthentication
from rest_framework.exceptions import ValidationError
from rest_framework.permissions import IsAuthenticated

from core.models import SimulationRun
from runs import serializers


@extend_schema_view(
    list=extend_schema(
        parameters=[
            OpenApiParameter(
                "strategy",
                OpenApiTypes.STR,
                description="Comma separated list of strategies to filter",
            ),
            OpenApiParameter(
                "n_qubits",
                OpenApiTypes.STR,
                description="Comma separated list of qubit counts to filter",
            ),
        ]
    )
)
class SimulationRunViewSet(viewsets.ReadOnlyModelViewSet):
    """Browse recorded simulation runs"""

    serializer_class = serializers.SimulationRunDetailSerializer
    queryset = SimulationRun.objects.all()
    authentication_classes = [TokenAuthentication]
    permission_classes = [IsAuthenticated]

    def _params_to_ints(self, qs):
        """Convert a list of strings to integers"""

        try:
            return [int(str_id) for str_id in qs.split(",")]
        except ValueError:
            raise ValidationError({"n_qubits": "Expected comma separated integers"}) from None

    def get_queryset(self):
        """Filter runs by strategy and qubit count"""

        strategy = self.request.query_params.get("strategy")
        n_qubits = self.request.query_params.get("n_qubits")
        queryset = self.queryset

        if strategy:
            queryset = queryset.filter(strategy__in=strategy.split(","))
        if n_qubits:
            queryset = queryset.filter(n_qubits__in=self._params_to_ints(n_qubits))

        return queryset.order_by("-id")

    def get_serializer_class(self):
        """Return the serializer class for request"""

        if self.action == "list":
            return serializers.SimulationRunSerializer

        return self.serializer_class
