"""
Django settings for hetnet_project.
This module contains the core configuration for the toolkit, including the
database used for run records, logging, and the HETNET block that holds
every numerical tunable of the analyses and simulations.
"""

from pathlib import Path
import os

BASE_DIR = Path(__file__).resolve().parent.parent


# Helper function to read from secrets_keys.txt safely
def get_secret(key_name, default=None):
    try:
        with open(os.path.join(BASE_DIR, "secrets_keys.txt"), "r") as f:
            for line in f:
                if "=" in line:
                    name, value = line.split("=", 1)
                    if name.strip() == key_name:
                        return value.strip()
    except FileNotFoundError:
        return default
    return default


# Keep the secret key used in production secret.
fallback_key = "django-insecure-placeholder-key-for-local-dev-only"
SECRET_KEY = get_secret("DJANGO_SECRET_KEY", fallback_key)

DEBUG = True
ALLOWED_HOSTS = []

INSTALLED_APPS = [
    "django.contrib.admin",
    "django.contrib.auth",
    "django.contrib.contenttypes",
    "django.contrib.sessions",
    "django.contrib.messages",
    "django.contrib.staticfiles",
    "rest_framework",
    "networks.apps.NetworksConfig",
]

MIDDLEWARE = [
    "django.middleware.security.SecurityMiddleware",
    "django.contrib.sessions.middleware.SessionMiddleware",
    "django.middleware.common.CommonMiddleware",
    "django.middleware.csrf.CsrfViewMiddleware",
    "django.contrib.auth.middleware.AuthenticationMiddleware",
    "django.contrib.messages.middleware.MessageMiddleware",
    "django.middleware.clickjacking.XFrameOptionsMiddleware",
]

ROOT_URLCONF = "hetnet_project.urls"

TEMPLATES = [
    {
        "BACKEND": "django.template.backends.django.DjangoTemplates",
        "DIRS": [],
        "APP_DIRS": True,
        "OPTIONS": {
            "context_processors": [
                "django.template.context_processors.debug",
                "django.template.context_processors.request",
                "django.contrib.auth.context_processors.auth",
                "django.contrib.messages.context_processors.messages",
            ],
        },
    },
]

WSGI_APPLICATION = "hetnet_project.wsgi.application"

# DATABASE CONFIGURATION
# Only run records live here, so a local sqlite file is enough
DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": BASE_DIR / "db.sqlite3",
    }
}

LANGUAGE_CODE = "en-us"
TIME_ZONE = "UTC"
USE_I18N = True
USE_TZ = True
STATIC_URL = "static/"
DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

# LOGGING
LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "loggers": {
        "networks": {
            "handlers": ["console"],
            "level": os.environ.get("HETNET_LOG_LEVEL", "INFO"),
            "propagate": False,
        },
    },
}

# HETEROCLINIC NETWORK TOOLKIT
# Rationals are written as "p/q" strings so they stay exact
HETNET = {
    "MARGINS": {"e": "1", "c": "1", "t": "1/2"},
    "JACOBIAN_STEP": 1e-6,
    "JACOBIAN_TOLERANCE": 1e-9,
    "CUSP_EPSILON": 1e-2,
    "CUSP_REFINEMENT": 10,
    "GRID_POINTS": 64,
    "GRID_DECADES": 10,
    "GRID_CHUNK": 4096,
    "SECTION_OFFSET": 0.1,
    "VISIT_RADIUS": 0.1,
    "INTEGRATOR": {
        "method": "DOP853",
        "rtol": 1e-10,
        "atol": 1e-10,
        "max_step": 2.0,
        "t_max": 2000.0,
        "max_events": 64,
        "blowup_norm": 2.0,
    },
    "ENSEMBLE_WORKERS": 1,
    "TRAJECTORY_SAMPLES": 200,
    "WITNESS_FACTOR": "1/2",
    "WITNESS_BASE": "1/10",
    "BOUNDARY_TOLERANCE": 1e-12,
    "MAX_TURN_SEARCH": 10000,
    "OUTPUT_DIR": "reports",
}
