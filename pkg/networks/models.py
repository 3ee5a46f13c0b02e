"""
Models for the Networks Application.
Runs of the management commands can be recorded with their resolved
configuration and report, so results can be looked up in the admin.
"""

from django.db import models


class AnalysisRun(models.Model):
    """
    One recorded command run.
    The digest identifies runs with the same resolved configuration.
    """

    class Command(models.TextChoices):
        VALIDATE = "validate", "Validate"
        BUILD = "build", "Build"
        ANALYZE = "analyze", "Analyze"
        SIMULATE = "simulate", "Simulate"
        SHADOW = "shadow", "Shadow"

    command = models.CharField(max_length=10, choices=Command.choices)
    kind = models.CharField(max_length=32, blank=True)
    spec_text = models.TextField(blank=True)
    config = models.JSONField(default=dict)
    config_digest = models.CharField(max_length=64, editable=False)
    report = models.TextField(blank=True)
    exit_status = models.PositiveSmallIntegerField(default=0)
    created_at = models.DateTimeField(auto_now_add=True)

    class Meta:
        ordering = ["-created_at"]

    def __str__(self):
        """Return a short label with the command and its kind."""
        label = f"{self.command} {self.kind}".strip()
        return f"{label} ({self.config_digest[:8]})"
