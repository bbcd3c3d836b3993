from django.apps import AppConfig


class ObdConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'obd'
    verbose_name = 'OBD II Codec and ELM327 Emulator'
