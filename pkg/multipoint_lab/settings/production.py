"""
Production settings for the multipoint_lab project.

Long batch runs: DEBUG off and a rotating log file next to the console.
"""

from .base import *
from decouple import config

# ============================================================================
# DEBUG SETTINGS
# ============================================================================

DEBUG = config('DEBUG', default=False, cast=bool)

ALLOWED_HOSTS = config('ALLOWED_HOSTS', default='127.0.0.1,localhost', cast=Csv())


# ============================================================================
# LOGGING (Production)
# ============================================================================

LOGS_DIR = BASE_DIR / 'logs'
LOGS_DIR.mkdir(exist_ok=True)

LOGGING['handlers']['file'] = {
    'class': 'logging.handlers.RotatingFileHandler',
    'filename': LOGS_DIR / 'multipoint.log',
    'maxBytes': 1024 * 1024 * 10,  # 10 MB
    'backupCount': 5,
    'formatter': 'verbose',
}
LOGGING['root']['handlers'] = ['console', 'file']
for _logger in LOGGING['loggers'].values():
    _logger['handlers'] = ['console', 'file']
