"""
URL configuration for the fleet telemetry project.
"""
from django.urls import path, include

urlpatterns = [
    path('', include('fleet.urls')),
]
