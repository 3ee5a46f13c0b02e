"""
Network specification files for the Networks Application.
A spec file is plain text with [section] headers, 'key = value' lines and
'#' comments. Parsing validates every section with the serializers and
reports each problem with the line it came from.
"""

import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from pathlib import Path

from .conf import hetnet_settings
from .core import DirectedGraph, Margins, build_simplex_field
from .exceptions import NetworkError, SpecParseError
from .presets import get_preset
from .serializers import (
    REQUIRED_KEYS,
    SECTION_SERIALIZERS,
    EdgeListField,
    MatrixField,
    NodeListField,
)

logger = logging.getLogger(__name__)

SECTION_ORDER = ("network", "overrides", "analysis", "simulation")


@dataclass(frozen=True)
class NetworkSpec:
    """Validated content of a spec file, exactly as written."""

    network: dict
    overrides: dict = dataclass_field(default_factory=dict)
    analysis: dict = dataclass_field(default_factory=dict)
    simulation: dict = dataclass_field(default_factory=dict)

    @property
    def preset(self):
        return self.network.get("preset")

    def margins(self):
        values = dict(hetnet_settings.MARGINS)
        values.update(
            {key: self.network[key] for key in ("e", "c", "t")
             if key in self.network}
        )
        return Margins(**values)

    def graph(self):
        if self.preset:
            return get_preset(self.preset).graph()
        return DirectedGraph(self.network["nodes"], self.network["edges"])

    def overrides_for(self, n):
        outside = [key for key in self.overrides if max(key) > n]
        if outside:
            raise SpecParseError(
                [(None, f"[overrides] a_{i}_{j} is outside 1..{n}")
                 for i, j in sorted(outside)]
            )
        if self.preset:
            return {**get_preset(self.preset).overrides, **self.overrides}
        return dict(self.overrides)

    def build(self):
        """Graph and synthesized field; GraphNotRealizable on bad wiring."""
        graph = self.graph()
        field = build_simplex_field(
            graph, self.margins(), self.overrides_for(graph.n)
        )
        return graph, field

    def resolved_analysis(self, kind=None):
        """Analysis keys with preset defaults filled in."""
        values = {}
        if self.preset:
            values.update(get_preset(self.preset).analysis)
        values.update(self.analysis)
        if kind is not None:
            if values.get("kind") not in (None, kind):
                # A preset default of another kind does not apply
                values = dict(self.analysis)
            values["kind"] = kind
        kind = values.get("kind")
        if kind is None:
            raise SpecParseError([(None, "[analysis] kind is required")])
        missing = [key for key in REQUIRED_KEYS[kind] if key not in values]
        if missing:
            raise SpecParseError(
                [(None, f"[analysis] {key} is required for {kind}")
                 for key in missing]
            )
        return values

    def as_config(self):
        """Plain dict of every section, for report headers and records."""
        return {
            "network": _plain(self.network),
            "overrides": {
                f"a_{i}_{j}": str(value)
                for (i, j), value in sorted(self.overrides.items())
            },
            "analysis": _plain(self.analysis),
            "simulation": _plain(self.simulation),
        }


def _plain(section):
    return {key: _format(key, value) for key, value in section.items()}


# PARSING


def _read_sections(text):
    """Split text into {section: {key: (line, raw value)}}."""
    sections = {}
    headers = {}
    errors = []
    current = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip().lower()
            if current not in SECTION_SERIALIZERS:
                errors.append((number, f"unknown section [{current}]"))
                current = None
                continue
            if current in sections:
                errors.append((number, f"section [{current}] repeated"))
            sections.setdefault(current, {})
            headers[current] = number
            continue
        if "=" not in line:
            errors.append((number, f"expected 'key = value', got {line!r}"))
            continue
        if current is None:
            errors.append((number, "key outside of a known section"))
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if key in sections[current]:
            errors.append((number, f"[{current}] {key} given twice"))
            continue
        sections[current][key] = (number, value)
    return sections, headers, errors


def parse_spec(text):
    """Parse and validate spec text; SpecParseError lists every problem."""
    sections, headers, errors = _read_sections(text)
    if "network" not in sections and not errors:
        errors.append((None, "missing [network] section"))
    validated = {}
    for name, entries in sections.items():
        serializer = SECTION_SERIALIZERS[name](
            data={key: value for key, (_, value) in entries.items()}
        )
        if serializer.is_valid():
            validated[name] = dict(serializer.validated_data)
            continue
        for key, messages in serializer.errors.items():
            line = entries[key][0] if key in entries else headers.get(name)
            label = f"[{name}] {key}" if key in entries else f"[{name}]"
            for message in messages:
                errors.append((line, f"{label}: {message}"))
    if errors:
        raise SpecParseError(sorted(errors, key=lambda e: (e[0] or 0)))
    spec = NetworkSpec(
        network=validated["network"],
        overrides=validated.get("overrides", {}),
        analysis=validated.get("analysis", {}),
        simulation=validated.get("simulation", {}),
    )
    logger.debug("Parsed spec with sections %s", sorted(validated))
    return spec


def load_spec(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SpecParseError([(None, f"cannot read {path}: {exc}")]) from exc
    return parse_spec(text)


def preset_spec(name):
    """Spec equivalent to '[network] preset = name'."""
    try:
        get_preset(name)
    except NetworkError as exc:
        raise SpecParseError([(None, str(exc))]) from exc
    return NetworkSpec(network={"preset": name})


# DUMPING


FORMATTERS = {
    "edges": EdgeListField().to_representation,
    "kappa": MatrixField().to_representation,
    "chain": NodeListField().to_representation,
    "walk": NodeListField().to_representation,
}


def _format(key, value):
    if key in FORMATTERS:
        return FORMATTERS[key](value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_spec(spec):
    """Text that parse_spec reads back to an equal spec."""
    lines = []
    for name in SECTION_ORDER:
        if name == "overrides":
            section = {
                f"a_{i}_{j}": value
                for (i, j), value in sorted(spec.overrides.items())
            }
        else:
            section = getattr(spec, name)
        if not section and name != "network":
            continue
        if lines:
            lines.append("")
        lines.append(f"[{name}]")
        for key, value in section.items():
            lines.append(f"{key} = {_format(key, value)}")
    return "\n".join(lines) + "\n"
