from django.apps import AppConfig


class TsfappConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'apps.tsfapp'
