# Generated by Django 6.0.1 on 2026-10-19 09:00

from django.db import migrations, models


class Migration(migrations.Migration):

    initial = True

    dependencies = []

    operations = [
        migrations.CreateModel(
            name="AnalysisRun",
            fields=[
                (
                    "id",
                    models.BigAutoField(
                        auto_created=True,
                        primary_key=True,
                        serialize=False,
                        verbose_name="ID",
                    ),
                ),
                (
                    "command",
                    models.CharField(
                        choices=[
                            ("validate", "Validate"),
                            ("build", "Build"),
                            ("analyze", "Analyze"),
                            ("simulate", "Simulate"),
                            ("shadow", "Shadow"),
                        ],
                        max_length=10,
                    ),
                ),
                ("kind", models.CharField(blank=True, max_length=32)),
                ("spec_text", models.TextField(blank=True)),
                ("config", models.JSONField(default=dict)),
                (
                    "config_digest",
                    models.CharField(editable=False, max_length=64),
                ),
                ("report", models.TextField(blank=True)),
                (
                    "exit_status",
                    models.PositiveSmallIntegerField(default=0),
                ),
                ("created_at", models.DateTimeField(auto_now_add=True)),
            ],
            options={
                "ordering": ["-created_at"],
            },
        ),
    ]
