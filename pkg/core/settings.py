"""
Django settings for core project.

Only the management command and the test runner are used; there are no
models, views or database.
"""

from pathlib import Path
import environs

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

env = environs.Env()
env.read_env()

SECRET_KEY = env.str("SECRET_KEY", default="tsf-local-only")

DEBUG = env.bool("DEBUG", default=False)

ALLOWED_HOSTS = env.list("ALLOWED_HOSTS", default=[])


# Application definition

INSTALLED_APPS = [
    # Local apps
    "apps.tsfapp",
]

DATABASES = {}

TEST_RUNNER = "tsf.utils.misc.test_runner.TsfTestRunner"


# Internationalization

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"
