"""
WSGI config for the fleet telemetry project.

It exposes the WSGI callable as a module-level variable named ``application``.
The fleet read API is served from here in production:

    gunicorn fleet_project.wsgi:application --bind 0.0.0.0:8000
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'fleet_project.settings')

application = get_wsgi_application()
