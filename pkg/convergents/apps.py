from django.apps import AppConfig


class ConvergentsConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'convergents'
