"""
Application configuration for the Networks app.
Registers the signal handlers once the app registry is ready.
"""

from django.apps import AppConfig


class NetworksConfig(AppConfig):
    """
    Configuration class for the Networks application.
    Sets the default primary key type and triggers signal registration.
    """

    default_auto_field = "django.db.models.BigAutoField"
    name = "networks"
    verbose_name = "Heteroclinic networks"

    def ready(self):
        import networks.signals  # noqa This connects the signal logic
