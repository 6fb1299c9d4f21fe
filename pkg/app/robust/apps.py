from django.apps import AppConfig


class RobustConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "robust"
    verbose_name = "Robust diffusions"
