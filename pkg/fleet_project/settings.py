"""
Django settings for the fleet telemetry project.

Covers the OBD II side (ELM327 emulator, telemetry agent) and the fleet
server (ingest line protocol, sample storage, read API).
"""

import os
from pathlib import Path

# Load environment variables from .env file
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # dotenv not installed, use system env vars

# DATABASE_URL parsing (database-backed sample store)
try:
    import dj_database_url
    HAS_DJ_DATABASE_URL = True
except ImportError:
    HAS_DJ_DATABASE_URL = False

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.environ.get('SECRET_KEY', 'django-insecure-dev-key-change-in-production-obd2fleet')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.environ.get('DEBUG', 'True') == 'True'

ALLOWED_HOSTS = os.environ.get('ALLOWED_HOSTS', '*').split(',')

# Application definition
INSTALLED_APPS = [
    'django.contrib.contenttypes',
]

# Local apps
INSTALLED_APPS += [
    'obd.apps.ObdConfig',
    'telemetry.apps.TelemetryConfig',
    'fleet.apps.FleetConfig',
]

MIDDLEWARE = [
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
]

ROOT_URLCONF = 'fleet_project.urls'

TEMPLATES = []

WSGI_APPLICATION = 'fleet_project.wsgi.application'

# Database Configuration
# Priority: DATABASE_URL > SQLite

DATABASE_URL = os.environ.get('DATABASE_URL')

if DATABASE_URL and HAS_DJ_DATABASE_URL:
    DATABASES = {
        'default': dj_database_url.config(
            default=DATABASE_URL,
            conn_max_age=600,
            conn_health_checks=True,
        )
    }
else:
    DATABASES = {
        'default': {
            'ENGINE': 'django.db.backends.sqlite3',
            'NAME': BASE_DIR / 'db.sqlite3',
        }
    }

# Internationalization
LANGUAGE_CODE = 'en-us'

# Sample timestamps are UTC epoch milliseconds throughout
TIME_ZONE = 'UTC'

USE_I18N = False

USE_TZ = True

# Default primary key field type
DEFAULT_AUTO_FIELD = 'django.db.models.BigAutoField'

# Logging configuration
LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'simple': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'simple',
        },
    },
    'root': {
        'handlers': ['console'],
        'level': 'INFO',
    },
    'loggers': {
        'django': {
            'handlers': ['console'],
            'level': os.getenv('DJANGO_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'obd': {
            'handlers': ['console'],
            'level': os.getenv('OBD_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'telemetry': {
            'handlers': ['console'],
            'level': os.getenv('TELEMETRY_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
        'fleet': {
            'handlers': ['console'],
            'level': os.getenv('FLEET_LOG_LEVEL', 'INFO'),
            'propagate': False,
        },
    },
}

# ELM327 link (pyserial URL: device path, pty, or socket://host:port)
OBD_ADDRESS = os.environ.get('OBD_ADDRESS', 'socket://127.0.0.1:35000')
OBD_BAUDRATE = int(os.environ.get('OBD_BAUDRATE', '38400'))

# ELM327 emulator
EMULATOR_LISTEN = os.environ.get('EMULATOR_LISTEN', '127.0.0.1:35000')
EMULATOR_PROTOCOL = os.environ.get('EMULATOR_PROTOCOL', 'can11')
SCENARIOS_PATH = BASE_DIR / 'scenarios'

# Telemetry agent
AGENT_POLL_PERIOD = float(os.environ.get('AGENT_POLL_PERIOD', '1.0'))  # seconds
AGENT_BUFFER_CAPACITY = int(os.environ.get('AGENT_BUFFER_CAPACITY', '3600'))  # samples
AGENT_HANDSHAKE_TIMEOUT = float(os.environ.get('AGENT_HANDSHAKE_TIMEOUT', '2.0'))
AGENT_ACK_TIMEOUT = float(os.environ.get('AGENT_ACK_TIMEOUT', '2.0'))
AGENT_FUEL = os.environ.get('AGENT_FUEL', 'petrol')

# Fleet server
FLEET_INGEST_LISTEN = os.environ.get('FLEET_INGEST_LISTEN', '127.0.0.1:5055')
FLEET_HTTP_LISTEN = os.environ.get('FLEET_HTTP_LISTEN', '127.0.0.1:8000')
FLEET_STORE_BACKEND = os.environ.get('FLEET_STORE_BACKEND', 'file')  # 'file' or 'database'
FLEET_DATA_DIR = Path(os.environ.get('FLEET_DATA_DIR', BASE_DIR / 'var' / 'fleet'))
