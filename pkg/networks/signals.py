"""
Signals for the Networks Application.
Fills derived fields of recorded runs before they are stored.
"""

import hashlib
import json

from django.db.models.signals import pre_save
from django.dispatch import receiver

from .models import AnalysisRun


def config_digest(config):
    """SHA-256 of the configuration in canonical JSON form."""
    canonical = json.dumps(config, sort_keys=True, default=str)
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@receiver(pre_save, sender=AnalysisRun)
def fill_config_digest(sender, instance, **kwargs):
    """Keep the digest in step with the stored configuration."""
    instance.config_digest = config_digest(instance.config)
