"""
WSGI config for the multipoint_lab project (serves the admin).

It exposes the WSGI callable as a module-level variable named ``application``.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'multipoint_lab.settings.production')

application = get_wsgi_application()
