"""
Map algebra for the Networks Application.
Local maps near equilibria, identity global maps along connections and
their compositions are monomial maps between cross-sections. A monomial
map is stored as an exact exponent matrix: in logarithmic coordinates it
is linear, so composition is matrix multiplication.

Coordinates on a cross-section are normalized so the fixed coordinate is
1 and every active coordinate lies in (0, 1); the section offset h only
matters to the numerics.
"""

import enum
import logging
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import numpy as np
import sympy as sp
from scipy.optimize import linprog

from .conf import hetnet_settings
from .core import equilibrium_data, to_fraction
from .exceptions import (
    NetworkError,
    NonPositiveExpanding,
    NonPositiveInput,
    PreconditionViolation,
    SectionMismatch,
    SignContradiction,
)

logger = logging.getLogger(__name__)


def _rational(value):
    return sp.Rational(str(to_fraction(value)))


def format_rational(value):
    """Render a rational as 'p' or 'p/q'."""
    value = to_fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


# CROSS-SECTIONS


class Orientation(enum.Enum):
    IN = "in"
    OUT = "out"


@dataclass(frozen=True)
class CrossSection:
    """
    The section H_i^{in,j} or H_i^{out,j} near the equilibrium xi_i.
    The coordinate x_j is fixed; the others are active, x_i being the
    radial one.
    """

    node: int
    orientation: Orientation
    neighbor: int
    n: int
    offset: float = dataclass_field(default=0.1, compare=False)

    def __post_init__(self):
        if self.node == self.neighbor:
            raise NetworkError("a section needs two distinct nodes")
        if self.offset <= 0:
            raise NetworkError("section offset must be positive")

    @property
    def fixed(self):
        return self.neighbor

    @property
    def active(self):
        return tuple(k for k in range(1, self.n + 1) if k != self.neighbor)

    @property
    def relevant(self):
        """Active coordinates without the radial one."""
        return tuple(k for k in self.active if k != self.node)

    def identified(self):
        """The section across the connection: H_i^{out,k} <-> H_k^{in,i}."""
        flipped = (
            Orientation.IN
            if self.orientation is Orientation.OUT
            else Orientation.OUT
        )
        return CrossSection(
            self.neighbor, flipped, self.node, self.n, self.offset
        )

    def __str__(self):
        return f"H_{self.node}^{{{self.orientation.value},{self.neighbor}}}"


def incoming_section(node, source, n, offset=0.1):
    return CrossSection(node, Orientation.IN, source, n, offset)


def outgoing_section(node, target, n, offset=0.1):
    return CrossSection(node, Orientation.OUT, target, n, offset)


# MONOMIAL MAPS


@dataclass(frozen=True)
class MonomialMap:
    """
    output_k = prod_l input_l ** E[k][l], rows indexed by codomain
    coordinates and columns by domain coordinates.
    """

    domain: CrossSection
    codomain: CrossSection
    exponents: sp.ImmutableMatrix
    domain_coords: tuple = None
    codomain_coords: tuple = None
    label: str = dataclass_field(default="", compare=False)

    def __post_init__(self):
        domain_coords = tuple(self.domain_coords or self.domain.active)
        codomain_coords = tuple(self.codomain_coords or self.codomain.active)
        exponents = sp.ImmutableMatrix(self.exponents)
        if exponents.shape != (len(codomain_coords), len(domain_coords)):
            raise SectionMismatch(
                f"exponent matrix {exponents.shape} does not match"
                f" {len(codomain_coords)} outputs and"
                f" {len(domain_coords)} inputs"
            )
        object.__setattr__(self, "domain_coords", domain_coords)
        object.__setattr__(self, "codomain_coords", codomain_coords)
        object.__setattr__(self, "exponents", exponents)

    # Exponent access

    def exponent(self, output, inp):
        """E[output][input] addressed by coordinate labels."""
        row = self.codomain_coords.index(output)
        col = self.domain_coords.index(inp)
        return to_fraction(self.exponents[row, col])

    def row(self, output):
        """Exponents of one output coordinate keyed by input label."""
        return {
            inp: self.exponent(output, inp) for inp in self.domain_coords
        }

    def as_array(self):
        return np.array(self.exponents.tolist(), dtype=float)

    @property
    def is_endomorphism(self):
        return (
            self.domain == self.codomain
            and self.domain_coords == self.codomain_coords
        )

    # Evaluation

    def apply_log(self, logs):
        """Apply the map to logarithms; accepts a vector or a d x N array."""
        return self.as_array() @ np.asarray(logs, dtype=float)

    def evaluate(self, point):
        """Evaluate at a strictly positive point. See evaluate()."""
        return evaluate(self, point)

    # Structure

    def then(self, other):
        """Composition other o self."""
        return compose([self, other])

    def inverse(self):
        """Inverse map; local and global maps are always invertible."""
        if self.exponents.rows != self.exponents.cols:
            raise SectionMismatch("only square exponent matrices invert")
        if self.exponents.det() == 0:
            raise NetworkError("exponent matrix is singular")
        return MonomialMap(
            domain=self.codomain,
            codomain=self.domain,
            exponents=self.exponents.inv(),
            domain_coords=self.codomain_coords,
            codomain_coords=self.domain_coords,
            label=f"({self.label})^-1" if self.label else "",
        )

    def closed(self):
        """
        Close a map whose codomain is identified with its domain across a
        connection, e.g. the return map H_2^{in,1} -> H_1^{out,2}.
        """
        if self.is_endomorphism:
            return self
        if self.codomain.identified() != self.domain:
            raise SectionMismatch(
                f"{self.codomain} is not identified with {self.domain}"
            )
        glue = _glue(
            self.codomain, self.codomain_coords,
            self.domain, self.domain_coords,
        )
        return MonomialMap(
            domain=self.domain,
            codomain=self.domain,
            exponents=glue.exponents * self.exponents,
            domain_coords=self.domain_coords,
            codomain_coords=self.domain_coords,
            label=self.label,
        )

    def project(self, coords=None, codomain_coords=None):
        """
        Restrict to the relevant coordinates (radial ones dropped).
        Raises SectionMismatch if a kept output depends on a dropped input.
        """
        keep_in = tuple(coords or [
            k for k in self.domain_coords if k != self.domain.node
        ])
        if codomain_coords is not None:
            keep_out = tuple(codomain_coords)
        elif coords is not None and self.is_endomorphism:
            keep_out = keep_in
        else:
            keep_out = tuple(
                k for k in self.codomain_coords if k != self.codomain.node
            )
        rows = [self.codomain_coords.index(k) for k in keep_out]
        cols = [self.domain_coords.index(k) for k in keep_in]
        dropped = [
            c for c in range(len(self.domain_coords)) if c not in cols
        ]
        for r in rows:
            for c in dropped:
                if self.exponents[r, c] != 0:
                    raise SectionMismatch(
                        f"output x{self.codomain_coords[r]} depends on"
                        f" dropped input x{self.domain_coords[c]}"
                    )
        return MonomialMap(
            domain=self.domain,
            codomain=self.codomain,
            exponents=self.exponents.extract(rows, cols),
            domain_coords=keep_in,
            codomain_coords=keep_out,
            label=self.label,
        )

    def describe(self):
        """Human readable monomial formula of every output."""
        lines = []
        for out in self.codomain_coords:
            factors = []
            for inp, value in self.row(out).items():
                if value == 0:
                    continue
                if value == 1:
                    factors.append(f"x{inp}")
                else:
                    factors.append(f"x{inp}^({format_rational(value)})")
            lines.append(f"x{out} = {' '.join(factors) or '1'}")
        return lines

    def to_text(self):
        """Lossless text form; see map_from_text()."""
        lines = [f"map {self.label}".rstrip()]
        for name, section in (("domain", self.domain),
                              ("codomain", self.codomain)):
            lines.append(
                f"{name} {section.node} {section.orientation.value}"
                f" {section.neighbor} {section.n}"
            )
        lines.append("columns " + " ".join(map(str, self.domain_coords)))
        for r, out in enumerate(self.codomain_coords):
            entries = " ".join(
                format_rational(self.exponents[r, c])
                for c in range(len(self.domain_coords))
            )
            lines.append(f"row {out}: {entries}")
        return "\n".join(lines) + "\n"


def map_from_text(text):
    """Parse the output of MonomialMap.to_text()."""
    label = ""
    sections = {}
    columns = None
    rows = []
    row_labels = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "map":
            label = rest.strip()
        elif head in ("domain", "codomain"):
            node, orientation, neighbor, n = rest.split()
            sections[head] = CrossSection(
                int(node), Orientation(orientation), int(neighbor), int(n)
            )
        elif head == "columns":
            columns = tuple(int(token) for token in rest.split())
        elif head == "row":
            out, _, entries = rest.partition(":")
            row_labels.append(int(out))
            rows.append([_rational(token) for token in entries.split()])
        else:
            raise NetworkError(f"unrecognized map line: {raw!r}")
    if "domain" not in sections or "codomain" not in sections:
        raise NetworkError("map text needs a domain and a codomain")
    return MonomialMap(
        domain=sections["domain"],
        codomain=sections["codomain"],
        exponents=sp.ImmutableMatrix(rows),
        domain_coords=columns,
        codomain_coords=tuple(row_labels),
        label=label,
    )


# CONSTRUCTION


def local_map(eq, source, target):
    """
    Linearized passage phi_{source, i, target} near xi_i, from
    H_i^{in,source} to H_i^{out,target}.

    With e the expanding eigenvalue toward the target, the incoming
    coordinate becomes x_target^(c/e) and every other coordinate m picks up
    the factor x_target^(-lambda_m/e).
    """
    i = eq.index
    n = len(eq.position)
    expanding = eq.eigenvalue(target)
    if expanding <= 0:
        raise NonPositiveExpanding(
            f"eigenvalue at xi_{i} toward {target} is {expanding}"
        )
    contracting = eq.eigenvalue(source)
    if contracting >= 0:
        raise SignContradiction(i, source, "Contracting", contracting)

    domain = incoming_section(i, source, n)
    codomain = outgoing_section(i, target, n)
    cols = domain.active
    matrix = sp.zeros(len(codomain.active), len(cols))
    for r, m in enumerate(codomain.active):
        factor = _rational(-eq.eigenvalue(m) / expanding)
        matrix[r, cols.index(target)] = factor
        if m != source:
            matrix[r, cols.index(m)] = 1
    return MonomialMap(
        domain=domain,
        codomain=codomain,
        exponents=sp.ImmutableMatrix(matrix),
        label=f"phi_{source}{i}{target}",
    )


def global_map(i, k, n):
    """
    Identity global map psi_ik: H_i^{out,k} -> H_k^{in,i}. The radial
    coordinate of xi_i becomes the radial coordinate of xi_k.
    """
    domain = outgoing_section(i, k, n)
    codomain = incoming_section(k, i, n)
    return _glue(domain, domain.active, codomain, codomain.active,
                 label=f"psi_{i}{k}")


def _glue(domain, domain_coords, codomain, codomain_coords, label=""):
    # Relabel coordinates across an identified pair of sections
    if domain.identified() == codomain:
        relabel = {codomain.node: domain.node}
    elif domain == codomain:
        relabel = {}
    else:
        raise SectionMismatch(f"{domain} is not identified with {codomain}")
    matrix = sp.zeros(len(codomain_coords), len(domain_coords))
    for r, out in enumerate(codomain_coords):
        source = relabel.get(out, out)
        if source not in domain_coords:
            raise SectionMismatch(
                f"coordinate x{out} of {codomain} has no source in {domain}"
            )
        matrix[r, domain_coords.index(source)] = 1
    return MonomialMap(
        domain=domain,
        codomain=codomain,
        exponents=sp.ImmutableMatrix(matrix),
        domain_coords=domain_coords,
        codomain_coords=codomain_coords,
        label=label,
    )


def compose(maps):
    """
    Compose maps given in the order they are applied. Adjacent maps must
    meet on the same section or on sections identified across a
    connection, in which case the identity global map is inserted.
    """
    maps = list(maps)
    if not maps:
        raise PreconditionViolation("nothing to compose")
    result = maps[0]
    for nxt in maps[1:]:
        if (result.codomain == nxt.domain
                and result.codomain_coords == nxt.domain_coords):
            exponents = nxt.exponents * result.exponents
        elif result.codomain in (nxt.domain, nxt.domain.identified()):
            glue = _glue(result.codomain, result.codomain_coords,
                         nxt.domain, nxt.domain_coords)
            exponents = nxt.exponents * glue.exponents * result.exponents
        else:
            raise SectionMismatch(
                f"cannot follow {result.codomain} with {nxt.domain}"
            )
        label = " o ".join(
            part for part in (nxt.label, result.label) if part
        )
        result = MonomialMap(
            domain=result.domain,
            codomain=nxt.codomain,
            exponents=exponents,
            domain_coords=result.domain_coords,
            codomain_coords=nxt.codomain_coords,
            label=label,
        )
    return result


def iterate(monomial, times):
    """n-fold iterate; the exponent matrix is the n-th matrix power."""
    if times < 1:
        raise PreconditionViolation("iterate needs a positive count")
    closed = monomial.closed()
    return MonomialMap(
        domain=closed.domain,
        codomain=closed.codomain,
        exponents=closed.exponents ** times,
        domain_coords=closed.domain_coords,
        codomain_coords=closed.codomain_coords,
        label=f"({closed.label})^{times}" if closed.label else "",
    )


def walk_maps(field, walk):
    """Local maps for every interior node of a node walk."""
    return [
        local_map(equilibrium_data(field, walk[t]), walk[t - 1], walk[t + 1])
        for t in range(1, len(walk) - 1)
    ]


# EVALUATION


def _is_exact(value):
    return isinstance(value, (int, Fraction, sp.Rational))


def evaluate(monomial, point):
    """
    Evaluate a monomial map at a strictly positive point.

    Exact rational inputs give exact rational outputs whenever the powers
    are rational; any other output is returned as a float computed with
    double precision through logarithms.
    """
    point = list(point)
    if len(point) != len(monomial.domain_coords):
        raise SectionMismatch(
            f"expected {len(monomial.domain_coords)} coordinates,"
            f" got {len(point)}"
        )
    if any(value <= 0 for value in point):
        raise NonPositiveInput(f"point {point} is not strictly positive")

    if all(_is_exact(value) for value in point):
        result = []
        for r in range(len(monomial.codomain_coords)):
            value = sp.Integer(1)
            for c, x in enumerate(point):
                e = monomial.exponents[r, c]
                if e != 0:
                    value *= _rational(x) ** e
            if value.is_Rational:
                result.append(to_fraction(value))
            else:
                result.append(float(value))
        return tuple(result)

    logs = np.log(np.array([float(x) for x in point]))
    return tuple(float(v) for v in np.exp(monomial.apply_log(logs)))


# DOMAIN CONSTRAINTS


class Side(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    BOUNDARY = "boundary"


@dataclass(frozen=True)
class MonomialInequality:
    """
    prod_l x_l ** exponents[l] < 1 over a section's coordinates, recording
    the passage that produced it.
    """

    coords: tuple
    exponents: tuple
    node: int = 0
    chosen: int = 0
    competitor: int = 0

    def lhs_rhs(self):
        lhs = {k: e for k, e in zip(self.coords, self.exponents) if e > 0}
        rhs = {k: -e for k, e in zip(self.coords, self.exponents) if e < 0}
        return lhs, rhs

    def side(self, point, tolerance=None):
        """Position of a positive point relative to the inequality."""
        tolerance = (
            hetnet_settings.BOUNDARY_TOLERANCE
            if tolerance is None else tolerance
        )
        if any(value <= 0 for value in point):
            raise NonPositiveInput(f"point {point} is not strictly positive")
        if all(_is_exact(value) for value in point):
            value = sp.Integer(1)
            for x, e in zip(point, self.exponents):
                if e != 0:
                    value *= _rational(x) ** _rational(e)
            if value.is_Rational:
                if value == 1:
                    return Side.BOUNDARY
                return Side.INSIDE if value < 1 else Side.OUTSIDE
            try:
                return Side.INSIDE if bool(value < 1) else Side.OUTSIDE
            except TypeError:
                pass
        logs = [math.log(float(x)) for x in point]
        return self.side_log(logs, tolerance)

    def side_log(self, logs, tolerance=None):
        tolerance = (
            hetnet_settings.BOUNDARY_TOLERANCE
            if tolerance is None else tolerance
        )
        total = sum(float(e) * y for e, y in zip(self.exponents, logs))
        scale = max(1.0, max(abs(y) for y in logs))
        if abs(total) <= tolerance * scale:
            return Side.BOUNDARY
        return Side.INSIDE if total < 0 else Side.OUTSIDE

    def __str__(self):
        lhs, rhs = self.lhs_rhs()

        def render(terms):
            if not terms:
                return "1"
            return " ".join(
                f"x{k}" if e == 1 else f"x{k}^({format_rational(e)})"
                for k, e in terms.items()
            )

        return f"{render(lhs)} < {render(rhs)}"


@dataclass(frozen=True)
class DomainConstraint:
    """All inequalities selecting a walk, on its initial section."""

    section: CrossSection
    coords: tuple
    inequalities: tuple = ()

    def side(self, point):
        """INSIDE iff every inequality holds strictly."""
        sides = [ineq.side(point) for ineq in self.inequalities]
        if Side.OUTSIDE in sides:
            return Side.OUTSIDE
        if Side.BOUNDARY in sides:
            return Side.BOUNDARY
        return Side.INSIDE

    def contains(self, point):
        return self.side(point) is Side.INSIDE

    def mask_log(self, logs):
        """Vectorized strict membership for a d x N array of logarithms."""
        logs = np.asarray(logs, dtype=float)
        if not self.inequalities:
            return np.ones(logs.shape[1], dtype=bool)
        rows = np.array(
            [[float(e) for e in ineq.exponents]
             for ineq in self.inequalities]
        )
        return np.all(rows @ logs < 0, axis=0)

    def project(self, coords=None):
        """Drop coordinates whose exponents all vanish (the radial one)."""
        keep = tuple(coords or [
            k for k in self.coords if k != self.section.node
        ])
        index = [self.coords.index(k) for k in keep]
        for ineq in self.inequalities:
            for pos, k in enumerate(self.coords):
                if k not in keep and ineq.exponents[pos] != 0:
                    raise SectionMismatch(
                        f"constraint depends on dropped x{k}"
                    )
        return DomainConstraint(
            section=self.section,
            coords=keep,
            inequalities=tuple(
                MonomialInequality(
                    coords=keep,
                    exponents=tuple(ineq.exponents[p] for p in index),
                    node=ineq.node,
                    chosen=ineq.chosen,
                    competitor=ineq.competitor,
                )
                for ineq in self.inequalities
            ),
        )

    def interior_point(self, margin=1.0):
        """
        Logarithms of a point strictly inside the region, or None.
        In logarithms the region is an open polyhedral cone, nonempty iff
        some y with y <= -margin and every row . y <= -margin exists. The
        radial coordinate is left at 0.
        """
        small = [k for k in self.coords if k != self.section.node]
        index = [self.coords.index(k) for k in small]
        a_ub = np.eye(len(small))
        if self.inequalities:
            rows = np.array([
                [float(ineq.exponents[p]) for p in index]
                for ineq in self.inequalities
            ])
            a_ub = np.vstack([rows, a_ub])
        outcome = linprog(
            c=np.zeros(len(small)),
            A_ub=a_ub,
            b_ub=-margin * np.ones(a_ub.shape[0]),
            bounds=[(None, None)] * len(small),
            method="highs",
        )
        if outcome.status != 0:
            return None
        logs = np.zeros(len(self.coords))
        logs[index] = outcome.x
        return logs

    def central_ray(self):
        """
        Logarithms of the interior ray whose largest magnitude is
        smallest while every coordinate and every row, scaled to unit
        l1 norm, stays at most -1. A max-norm step of size below lambda
        from lambda times the ray stays inside the cone. None when empty.
        """
        small = [k for k in self.coords if k != self.section.node]
        index = [self.coords.index(k) for k in small]
        d = len(small)
        rows = [np.eye(d)]
        for ineq in self.inequalities:
            row = np.array([float(ineq.exponents[p]) for p in index])
            norm = np.abs(row).sum()
            if norm == 0:
                return None
            rows.append((row / norm).reshape(1, -1))
        bounds = np.vstack(rows)
        # Variables (y, t): minimize t with -t <= y
        a_ub = np.vstack([
            np.hstack([bounds, np.zeros((bounds.shape[0], 1))]),
            np.hstack([-np.eye(d), -np.ones((d, 1))]),
        ])
        b_ub = np.concatenate([-np.ones(bounds.shape[0]), np.zeros(d)])
        outcome = linprog(
            c=np.concatenate([np.zeros(d), [1.0]]),
            A_ub=a_ub,
            b_ub=b_ub,
            bounds=[(None, None)] * (d + 1),
            method="highs",
        )
        if outcome.status != 0:
            return None
        logs = np.zeros(len(self.coords))
        logs[index] = outcome.x[:d]
        return logs

    def is_feasible(self):
        """Whether the region meets every neighbourhood of the origin."""
        return self.interior_point() is not None

    def __str__(self):
        if not self.inequalities:
            return f"{self.section}: (no constraint)"
        return f"{self.section}: " + ", ".join(
            str(ineq) for ineq in self.inequalities
        )


def domain_constraints(field, walk, graph=None):
    """
    Constraints on H_{w1}^{in,w0} selecting the node walk w0, w1, ..., wm.

    At every interior node the prescribed exit must beat every other
    direction with a positive eigenvalue; each such comparison is pulled
    back to the initial section through the maps already traversed.
    """
    walk = list(walk)
    if len(walk) < 2:
        raise PreconditionViolation("a walk needs at least two nodes")
    if graph is not None and not graph.is_walk(walk):
        raise PreconditionViolation(f"{walk} is not a walk in the network")
    n = field.n
    start = incoming_section(walk[1], walk[0], n)
    prefix = sp.eye(len(start.active))
    current = start
    inequalities = []
    for t in range(1, len(walk) - 1):
        i, source, target = walk[t], walk[t - 1], walk[t + 1]
        eq = equilibrium_data(field, i)
        expanding = eq.eigenvalue(target)
        if expanding <= 0:
            raise NonPositiveExpanding(
                f"eigenvalue at xi_{i} toward {target} is {expanding}"
            )
        coords = current.active
        for competitor in eq.unstable_directions():
            if competitor in (target, source):
                continue
            ratio = eq.eigenvalue(competitor) / expanding
            row = sp.zeros(1, len(coords))
            row[0, coords.index(competitor)] = 1
            row[0, coords.index(target)] = -_rational(ratio)
            pulled = row * prefix
            inequalities.append(
                MonomialInequality(
                    coords=start.active,
                    exponents=tuple(to_fraction(v) for v in pulled),
                    node=i,
                    chosen=target,
                    competitor=competitor,
                )
            )
        step = local_map(eq, source, target)
        prefix = step.exponents * prefix
        if t < len(walk) - 2:
            glue = global_map(i, target, n)
            prefix = glue.exponents * prefix
            current = glue.codomain
    return DomainConstraint(
        section=start, coords=start.active, inequalities=tuple(inequalities)
    )


# SYMBOLIC ITINERARIES


class SymbolicFlow:
    """
    Leading-order dynamics of a field near its network, driven by the
    local and identity global maps in logarithmic coordinates.

    shifts maps an edge (i, k) to an additive correction, aligned with
    the active coordinates of H_k^{in,i}, applied by itinerary after each
    global map. It carries the O(1) terms the identity gluing drops.
    """

    def __init__(self, field, graph=None, shifts=None):
        self.field = field
        self.graph = graph
        self.shifts = dict(shifts or {})
        self._equilibria = {}
        self._maps = {}

    def equilibrium(self, i):
        if i not in self._equilibria:
            self._equilibria[i] = equilibrium_data(self.field, i)
        return self._equilibria[i]

    def passage(self, source, i, target):
        """Local map followed by the global map out of xi_i, as floats."""
        key = (source, i, target)
        if key not in self._maps:
            step = compose([
                local_map(self.equilibrium(i), source, target),
                global_map(i, target, self.field.n),
            ])
            self._maps[key] = step.as_array()
        return self._maps[key]

    def exit_times(self, i, source, logs):
        """
        Linearized passage time toward each unstable direction, for a
        d x N array of logarithms on H_i^{in,source}.
        """
        coords = incoming_section(i, source, self.field.n).active
        eq = self.equilibrium(i)
        times = {}
        for k in eq.unstable_directions():
            if k == source:
                continue
            times[k] = -logs[coords.index(k)] / float(eq.eigenvalue(k))
        return times

    def exits(self, i, source, logs):
        """Chosen exit per column and whether it wins strictly."""
        logs = np.atleast_2d(np.asarray(logs, dtype=float).T).T
        times = self.exit_times(i, source, logs)
        if not times:
            return None, None
        keys = list(times)
        stack = np.vstack([times[k] for k in keys])
        order = np.argsort(stack, axis=0, kind="stable")
        winners = np.array(keys)[order[0]]
        if len(keys) == 1:
            strict = np.ones(stack.shape[1], dtype=bool)
        else:
            best = np.take_along_axis(stack, order[:1], axis=0)[0]
            runner = np.take_along_axis(stack, order[1:2], axis=0)[0]
            strict = runner - best > 0
        return winners, strict

    def follow(self, walk, logs):
        """
        Push a d x N array of logarithms on H_{w1}^{in,w0} along a walk,
        returning a mask of the columns that follow it exactly.
        """
        logs = np.array(logs, dtype=float)
        mask = np.ones(logs.shape[1], dtype=bool)
        for t in range(1, len(walk) - 1):
            i, source, target = walk[t], walk[t - 1], walk[t + 1]
            winners, strict = self.exits(i, source, logs)
            if winners is None:
                mask[:] = False
                break
            mask &= (winners == target) & strict
            if self.equilibrium(i).eigenvalue(target) <= 0:
                mask[:] = False
                break
            logs = self.passage(source, i, target) @ logs
        return mask

    def itinerary(self, source, node, logs, steps):
        """
        Node sequence of a single point entering xi_node from xi_source,
        stopping early when the exit has no network connection.
        """
        logs = np.asarray(logs, dtype=float).reshape(-1, 1)
        nodes = [source, node]
        for _ in range(steps):
            winners, strict = self.exits(node, source, logs)
            if winners is None:
                break
            target = int(winners[0])
            if not strict[0]:
                logger.warning(
                    "Tie between exits at xi_%d; itinerary stops", node
                )
                break
            if self.graph is not None and (node, target) not in \
                    self.graph.edges:
                break
            logs = self.passage(source, node, target) @ logs
            shift = self.shifts.get((node, target))
            if shift is not None:
                logs = logs + np.reshape(shift, (-1, 1))
            source, node = node, target
            nodes.append(node)
        return nodes


def path_realizable(field, walk, graph=None):
    """
    Exact decision whether trajectories in every neighbourhood of the
    network follow the walk, by cone feasibility of its domain.
    """
    constraint = domain_constraints(field, walk, graph)
    feasible = constraint.is_feasible()
    logger.debug("Walk %s realizable: %s (%s)", walk, feasible, constraint)
    return feasible
