"""
URL mapping for runs app
"""

from django.urls import include, path
from rest_framework.routers import DefaultRouter

from runs import views

router = DefaultRouter()
router.register("runs", views.SimulationRunViewSet)

app_name = "runs"

urlpatterns = [
    path("", include(router.urls)),
]
