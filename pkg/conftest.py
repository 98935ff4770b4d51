"""Configures Django for pytest the same way tests/manage.py does."""
import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'tests.settings')
os.environ.setdefault('RCPDYN_THREADS', '1')
django.setup()
