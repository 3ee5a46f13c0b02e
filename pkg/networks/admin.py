"""
Admin configuration for the Networks Application.
Recorded runs are read-only records; the admin lists and filters them.
"""

from django.contrib import admin

from .models import AnalysisRun


@admin.register(AnalysisRun)
class AnalysisRunAdmin(admin.ModelAdmin):
    """
    Admin interface for recorded command runs.
    Allows filtering by command and analysis kind.
    """

    list_display = ("command", "kind", "exit_status", "config_digest",
                    "created_at")
    list_filter = ("command", "kind", "exit_status", "created_at")
    search_fields = ("spec_text", "config_digest")
    readonly_fields = ("config_digest", "created_at")
