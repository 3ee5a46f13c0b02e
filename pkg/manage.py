"""
Command-line entry point for the heteroclinic network toolkit.
Besides the usual Django tasks it runs the validate, build, analyze,
simulate and shadow subcommands of the networks app.
"""
import os
import sys


def main():
    """Run administrative and analysis tasks."""
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "hetnet_project.settings")
    try:
        from django.core.management import execute_from_command_line
    except ImportError as exc:
        raise ImportError(
            "Couldn't import Django. Are you sure it's installed and "
            "available on your PYTHONPATH environment variable? Did you "
            "forget to activate a virtual environment?"
        ) from exc
    execute_from_command_line(sys.argv)


if __name__ == "__main__":
    main()
