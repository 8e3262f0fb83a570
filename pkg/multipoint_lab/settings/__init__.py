"""
Django settings package for the multipoint_lab project.

- base.py: settings shared by every environment, including the experiment knobs
- development.py: DEBUG on, verbose logging of the numerical modules
- production.py: DEBUG off, rotating log file under logs/

manage.py uses development.py; set DJANGO_SETTINGS_MODULE=multipoint_lab.settings.production
for long batch runs.
"""
