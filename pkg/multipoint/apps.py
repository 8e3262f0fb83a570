from django.apps import AppConfig


class MultipointAppConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'multipoint'
    verbose_name = 'Multiple points'
