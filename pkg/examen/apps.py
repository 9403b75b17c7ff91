from django.apps import AppConfig


class ExamenConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'examen'
