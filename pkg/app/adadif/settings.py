"""
Django settings for the adaptive diffusion toolkit.

The project has no web surface: it is driven through ``manage.py``
subcommands (see the ``cli`` app). Library defaults for every classifier,
solver and experiment live in the ``ADADIF`` block below.

For the full list of Django settings and their values, see
https://docs.djangoproject.com/en/4.2/ref/settings/
"""
import os
from pathlib import Path

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

SECRET_KEY = os.environ.get(
    "DJANGO_SECRET_KEY", "django-insecure-adadif-local-experiments-only"
)

DEBUG = os.environ.get("DJANGO_DEBUG", "0") == "1"

ALLOWED_HOSTS = []


# Application definition

INSTALLED_APPS = [
    "rest_framework",
    "core.apps.CoreConfig",
    "diffusion.apps.DiffusionConfig",
    "robust.apps.RobustConfig",
    "theory.apps.TheoryConfig",
    "harness.apps.HarnessConfig",
    "cli.apps.CliConfig",
]

REST_FRAMEWORK = {
    "DEFAULT_RENDERER_CLASSES": [
        "rest_framework.renderers.JSONRenderer",
    ],
    "COERCE_DECIMAL_TO_STRING": False,
    "DEFAULT_AUTHENTICATION_CLASSES": [],
    "DEFAULT_PERMISSION_CLASSES": [],
    "UNAUTHENTICATED_USER": None,
}


# Database
# Only experiment records are stored (``manage.py run --store``).

DATABASES = {
    "default": {
        "ENGINE": "django.db.backends.sqlite3",
        "NAME": os.environ.get("ADADIF_DB_PATH", BASE_DIR / "db.sqlite3"),
    }
}


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = True

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"


# Logging

LOG_LEVEL = os.environ.get("ADADIF_LOG_LEVEL", "INFO").upper()

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "verbose": {
            "format": "%(asctime)s %(levelname)s %(name)s %(message)s",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "verbose",
        },
    },
    "loggers": {
        app: {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False}
        for app in ("core", "diffusion", "robust", "theory", "harness", "cli")
    },
}


# Adaptive diffusion defaults

ADADIF = {
    "SCHEMA_VERSION": 1,
    "SEED": 0,
    "JOBS": 1,
    "DATA_DIR": os.environ.get("ADADIF_DATA_DIR", ""),
    "MULTICLASS": {"K": 15, "LAMBDA": 15.0, "TRIALS": 20},
    "MULTILABEL": {"K": 10, "LAMBDA": 5.0, "TRIALS": 10},
    "FIXED": {"K": 50, "PPR_ALPHA": 0.98, "HK_T": 10.0, "LP_ITERS": 50},
    "ROBUST": {
        "K": 50,
        "LAMBDA_THETA": 67.5e-5,
        "LAMBDA_O": 14.6e-3,
        "EPS": 1e-4,
        "MAX_SWEEPS": 100,
    },
    "DICTIONARY": {
        "HK_TIMES": [5.0, 8.0, 12.0, 15.0, 20.0],
        "POLY_POWERS": [2.0, 4.0, 6.0, 8.0, 10.0],
    },
    "SOLVER": {"TOL": 1e-9, "MAX_ITER": 10000},
    "SPECTRAL": {"TOL": 1e-8, "MAX_ITER": 100000},
}
