from django.apps import AppConfig


class FbmConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'fbm'
    verbose_name = 'Fractional Brownian motion'
