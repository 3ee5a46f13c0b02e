"""
Settings access for the Networks Application.
Reads the HETNET block from the Django settings and merges it with the
defaults, so every module sees a complete configuration.
"""

from fractions import Fraction

from django.conf import settings
from django.core.exceptions import ImproperlyConfigured

DEFAULTS = {
    "MARGINS": {"e": "1", "c": "1", "t": "1/2"},
    "JACOBIAN_STEP": 1e-6,
    "JACOBIAN_TOLERANCE": 1e-9,
    "CUSP_EPSILON": 1e-2,
    "CUSP_REFINEMENT": 10,
    "GRID_POINTS": 64,
    "GRID_DECADES": 10,
    "GRID_CHUNK": 4096,
    "SECTION_OFFSET": 0.1,
    "VISIT_RADIUS": 0.1,
    "INTEGRATOR": {
        "method": "DOP853",
        "rtol": 1e-10,
        "atol": 1e-10,
        "max_step": 2.0,
        "t_max": 2000.0,
        "max_events": 64,
        "blowup_norm": 2.0,
    },
    "ENSEMBLE_WORKERS": 1,
    "TRAJECTORY_SAMPLES": 200,
    "WITNESS_FACTOR": "1/2",
    "WITNESS_BASE": "1/10",
    "BOUNDARY_TOLERANCE": 1e-12,
    "MAX_TURN_SEARCH": 10000,
    "OUTPUT_DIR": "reports",
}

# Keys whose value is an exact rational given as a "p/q" string
RATIONAL_KEYS = ("WITNESS_FACTOR", "WITNESS_BASE")


class HetnetSettings:
    """
    Attribute access to the merged HETNET configuration.
    Values are read from django.conf.settings on every access so that
    override_settings in tests takes effect.
    """

    def _merged(self):
        user = getattr(settings, "HETNET", {})
        unknown = set(user) - set(DEFAULTS)
        if unknown:
            raise ImproperlyConfigured(
                f"Unknown HETNET settings: {', '.join(sorted(unknown))}"
            )
        merged = dict(DEFAULTS)
        for key, value in user.items():
            if isinstance(DEFAULTS[key], dict):
                merged[key] = {**DEFAULTS[key], **value}
            else:
                merged[key] = value
        return merged

    def __getattr__(self, name):
        merged = self._merged()
        if name not in merged:
            raise AttributeError(name)
        value = merged[name]
        if name in RATIONAL_KEYS:
            return Fraction(value)
        if name == "MARGINS":
            return {key: Fraction(v) for key, v in value.items()}
        return value

    def as_dict(self):
        """Return the resolved configuration, used to echo it in reports."""
        return self._merged()


hetnet_settings = HetnetSettings()
