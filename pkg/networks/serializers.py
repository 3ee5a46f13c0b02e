"""
Serializers for the Networks Application specification files.
Each section of a spec file is validated by one serializer; values arrive
as the raw strings of the file and leave as exact rationals, integers and
tuples.
"""

import math
import re
from fractions import Fraction

from rest_framework import serializers

from .presets import PRESETS
from .simulation import METHODS

RATIONAL_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")
OVERRIDE_PATTERN = re.compile(r"^a_(\d+)_(\d+)$")
EDGE_PATTERN = re.compile(r"^\s*(\d+)\s*-\s*(\d+)\s*$")

ANALYSIS_KINDS = ("common-connection", "house", "bowtie", "shadow", "chain")
PSI_CHOICES = ("identity", "general")

# Keys each analysis kind needs once preset defaults are merged in
REQUIRED_KEYS = {
    "common-connection": ("first", "second", "alpha", "a", "beta", "b"),
    "house": (),
    "bowtie": (),
    "shadow": ("walk",),
    "chain": ("chain", "alpha", "a", "beta", "b"),
}


def parse_rational(value):
    """Parse 'p', '-p' or 'p/q'; decimals and zero denominators fail."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    match = RATIONAL_PATTERN.match(str(value))
    if not match:
        raise serializers.ValidationError(
            f"{value!r} is not an exact rational; write it as 'p/q'."
        )
    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise serializers.ValidationError(f"{value!r} has a zero denominator.")
    return Fraction(int(numerator), int(denominator or 1))


class RationalField(serializers.Field):
    """Exact rational written as 'p/q'."""

    default_error_messages = {"positive": "Must be positive."}

    def __init__(self, positive=False, **kwargs):
        self.positive = positive
        super().__init__(**kwargs)

    def to_internal_value(self, data):
        value = parse_rational(data)
        if self.positive and value <= 0:
            self.fail("positive")
        return value

    def to_representation(self, value):
        return str(Fraction(value))


class NodeListField(serializers.Field):
    """Comma separated node labels, e.g. '4, 1, 2, 3'."""

    def to_internal_value(self, data):
        if isinstance(data, (list, tuple)):
            items = list(data)
        else:
            items = [item for item in str(data).split(",") if item.strip()]
        try:
            nodes = tuple(int(str(item).strip()) for item in items)
        except ValueError:
            raise serializers.ValidationError(
                f"{data!r} is not a list of node labels."
            ) from None
        if not nodes or min(nodes) < 1:
            raise serializers.ValidationError("Node labels start at 1.")
        return nodes

    def to_representation(self, value):
        return ", ".join(str(node) for node in value)


class EdgeListField(serializers.Field):
    """Comma separated connections, e.g. '1-2, 2-3, 3-1'."""

    def to_internal_value(self, data):
        if isinstance(data, (list, tuple, frozenset, set)):
            return tuple(sorted((int(i), int(j)) for i, j in data))
        edges = []
        for item in str(data).split(","):
            if not item.strip():
                continue
            match = EDGE_PATTERN.match(item)
            if not match:
                raise serializers.ValidationError(
                    f"{item.strip()!r} is not an edge like '1-2'."
                )
            edges.append((int(match.group(1)), int(match.group(2))))
        return tuple(sorted(set(edges)))

    def to_representation(self, value):
        return ", ".join(f"{i}-{j}" for i, j in sorted(value))


class MatrixField(serializers.Field):
    """2 x 2 rational matrix, rows separated by ';', e.g. '1, 2; 3, 1'."""

    def to_internal_value(self, data):
        if isinstance(data, (list, tuple)):
            rows = [list(row) for row in data]
        else:
            rows = [row.split(",") for row in str(data).split(";")]
        if len(rows) != 2 or any(len(row) != 2 for row in rows):
            raise serializers.ValidationError("kappa must be a 2 x 2 matrix.")
        return tuple(tuple(parse_rational(v) for v in row) for row in rows)

    def to_representation(self, value):
        return "; ".join(
            ", ".join(str(Fraction(v)) for v in row) for row in value
        )


class StrictSerializer(serializers.Serializer):
    """
    Serializer that rejects keys it does not declare.
    Unknown keys are reported together with the field errors.
    """

    def to_internal_value(self, data):
        errors = {
            key: ["Unknown key."] for key in data if key not in self.fields
        }
        try:
            value = super().to_internal_value(data)
        except serializers.ValidationError as exc:
            errors.update(exc.detail)
            raise serializers.ValidationError(errors) from None
        if errors:
            raise serializers.ValidationError(errors)
        return value


class NetworkSectionSerializer(StrictSerializer):
    """
    The [network] section: a preset, or a node count with an edge list,
    plus optional margins for synthesized entries.
    """

    preset = serializers.ChoiceField(choices=sorted(PRESETS), required=False)
    nodes = serializers.IntegerField(min_value=1, required=False)
    edges = EdgeListField(required=False)
    e = RationalField(positive=True, required=False)
    c = RationalField(positive=True, required=False)
    t = RationalField(positive=True, required=False)

    def validate(self, attrs):
        if "preset" in attrs:
            clash = [key for key in ("nodes", "edges") if key in attrs]
            if clash:
                raise serializers.ValidationError(
                    {key: ["Not allowed together with a preset."]
                     for key in clash}
                )
            return attrs
        missing = [key for key in ("nodes", "edges") if key not in attrs]
        if missing:
            raise serializers.ValidationError(
                {key: ["Required without a preset."] for key in missing}
            )
        n = attrs["nodes"]
        outside = [f"{i}-{j}" for i, j in attrs["edges"]
                   if not (1 <= i <= n and 1 <= j <= n)]
        if outside:
            raise serializers.ValidationError(
                {"edges": [f"Edges {', '.join(outside)} leave 1..{n}."]}
            )
        return attrs


class OverridesSerializer(serializers.Serializer):
    """
    The [overrides] section: keys 'a_i_j' with rational values.
    Returns a dict keyed by (i, j).
    """

    def to_internal_value(self, data):
        errors = {}
        overrides = {}
        for key, raw in data.items():
            match = OVERRIDE_PATTERN.match(key)
            if not match:
                errors[key] = ["Override keys look like a_i_j."]
                continue
            i, j = int(match.group(1)), int(match.group(2))
            if i == j or min(i, j) < 1:
                errors[key] = ["Only off-diagonal entries can be set."]
                continue
            try:
                overrides[(i, j)] = parse_rational(raw)
            except serializers.ValidationError as exc:
                errors[key] = exc.detail
        if errors:
            raise serializers.ValidationError(errors)
        return overrides

    def to_representation(self, instance):
        return {
            f"a_{i}_{j}": str(value) for (i, j), value in sorted(
                instance.items()
            )
        }


class AnalysisSectionSerializer(StrictSerializer):
    """
    The [analysis] section. Which keys are required depends on the kind
    and on the defaults of the preset, so that check happens when the
    spec is resolved.
    """

    kind = serializers.ChoiceField(choices=ANALYSIS_KINDS, required=False)
    first = serializers.IntegerField(min_value=1, required=False)
    second = serializers.IntegerField(min_value=1, required=False)
    alpha = serializers.IntegerField(min_value=1, required=False)
    a = serializers.IntegerField(min_value=1, required=False)
    beta = serializers.IntegerField(min_value=1, required=False)
    b = serializers.IntegerField(min_value=1, required=False)
    psi = serializers.ChoiceField(choices=PSI_CHOICES, required=False)
    kappa = MatrixField(required=False)
    chain = NodeListField(required=False)
    walk = NodeListField(required=False)
    turns = serializers.IntegerField(min_value=1, required=False)
    points = serializers.IntegerField(min_value=1, required=False)
    epsilon = serializers.FloatField(required=False)
    decades = serializers.IntegerField(min_value=1, required=False)
    factor = RationalField(positive=True, required=False)
    base = RationalField(positive=True, required=False)

    def validate_epsilon(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("Must lie in (0, 1).")
        return value

    def validate(self, attrs):
        if attrs.get("psi") == "general" and "kappa" not in attrs:
            raise serializers.ValidationError(
                {"kappa": ["A general global map needs kappa."]}
            )
        if "kappa" in attrs and attrs.get("psi") != "general":
            raise serializers.ValidationError(
                {"kappa": ["kappa needs psi = general."]}
            )
        return attrs


class SimulationSectionSerializer(StrictSerializer):
    """The [simulation] section: ensemble size and integrator tunables."""

    count = serializers.IntegerField(min_value=0, required=False)
    seed = serializers.IntegerField(min_value=0, required=False)
    epsilon = serializers.FloatField(required=False)
    prefix = serializers.IntegerField(min_value=1, required=False)
    h = serializers.FloatField(required=False)
    t_max = serializers.FloatField(required=False)
    method = serializers.ChoiceField(choices=METHODS, required=False)
    source = serializers.IntegerField(min_value=1, required=False)
    node = serializers.IntegerField(min_value=1, required=False)
    workers = serializers.IntegerField(min_value=1, required=False)
    samples = serializers.IntegerField(min_value=0, required=False)

    def validate_epsilon(self, value):
        if not 0 < value < math.sqrt(2) / 2:
            raise serializers.ValidationError(
                "Must be positive and below half the distance between"
                " equilibria."
            )
        return value

    def validate_h(self, value):
        if not 0 < value < 1:
            raise serializers.ValidationError("Must lie in (0, 1).")
        return value

    def validate_t_max(self, value):
        if value <= 0:
            raise serializers.ValidationError("Must be positive.")
        return value


SECTION_SERIALIZERS = {
    "network": NetworkSectionSerializer,
    "overrides": OverridesSerializer,
    "analysis": AnalysisSectionSerializer,
    "simulation": SimulationSectionSerializer,
}
