"""
WSGI config for hetnet_project.

It exposes the WSGI callable as a module-level variable named ``application``
so the admin site for recorded runs can be served.
"""

import os

from django.core.wsgi import get_wsgi_application

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "hetnet_project.settings")

application = get_wsgi_application()
