"""
Switching analysis for the Networks Application.
Cusp geometry in coordinate planes, the common-connection path
classifier, the House-network switching witnesses and a brute-force
shadowing verifier that samples cross-sections on geometric grids.
"""

import enum
import logging
import math
from dataclasses import dataclass, field as dataclass_field, replace

import numpy as np
import sympy as sp

from .conf import hetnet_settings
from .core import equilibrium_data, to_fraction
from .exceptions import (
    Assumption1Violated,
    DegenerateCusp,
    EmptyRegion,
    NetworkError,
    PreconditionViolation,
    WiringMismatch,
)
from .maps import (
    MonomialInequality,
    Side,
    SymbolicFlow,
    compose,
    format_rational,
    global_map,
    incoming_section,
    local_map,
    domain_constraints,
    path_realizable,
)

logger = logging.getLogger(__name__)


# CUSPS


class CuspSide(enum.Enum):
    BELOW = "Below"
    ABOVE = "Above"

    def flipped(self):
        return CuspSide.ABOVE if self is CuspSide.BELOW else CuspSide.BELOW


class Thickness(enum.Enum):
    THIN = "Thin"
    THICK = "Thick"
    DEGENERATE = "Degenerate"


@dataclass(frozen=True)
class CuspRegion:
    """
    One side of the curve v = h^q in the (h, v) coordinate plane, near
    the origin and in absolute values.
    """

    plane: tuple
    q: object
    side: CuspSide
    label: str = dataclass_field(default="", compare=False)

    def __post_init__(self):
        q = to_fraction(self.q)
        if q <= 0:
            raise DegenerateCusp(f"cusp exponent {q} is not positive")
        if len(self.plane) != 2 or self.plane[0] == self.plane[1]:
            raise NetworkError("a cusp lives in a plane of two coordinates")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "plane", tuple(self.plane))

    @property
    def horizontal(self):
        return self.plane[0]

    @property
    def vertical(self):
        return self.plane[1]

    @property
    def thickness(self):
        if self.q == 1:
            return Thickness.DEGENERATE
        hugs_horizontal = self.q > 1
        if (self.side is CuspSide.BELOW) == hugs_horizontal:
            return Thickness.THIN
        return Thickness.THICK

    @property
    def tangency_axis(self):
        """Axis the curve is tangent to at the origin."""
        if self.q == 1:
            return None
        return self.horizontal if self.q > 1 else self.vertical

    def complement(self):
        return CuspRegion(self.plane, self.q, self.side.flipped(), self.label)

    def thin(self):
        """The thin part of this cusp's curve."""
        self._require_nondegenerate()
        if self.thickness is Thickness.THIN:
            return self
        return self.complement()

    def thick(self):
        self._require_nondegenerate()
        if self.thickness is Thickness.THICK:
            return self
        return self.complement()

    def transposed(self):
        """Same region described with the axes exchanged."""
        return CuspRegion(
            (self.vertical, self.horizontal), 1 / self.q, self.side.flipped(),
            self.label,
        )

    def in_plane(self, plane):
        """Describe the region in a plane with the same or swapped axes."""
        plane = tuple(plane)
        if plane == self.plane:
            return self
        if plane == (self.vertical, self.horizontal):
            return self.transposed()
        raise NetworkError(f"cusp in {self.plane} is not in plane {plane}")

    def contains(self, h, v):
        """Vectorized membership test on absolute values."""
        h = np.abs(np.asarray(h, dtype=float))
        v = np.abs(np.asarray(v, dtype=float))
        curve = h ** float(self.q)
        if self.side is CuspSide.BELOW:
            return v < curve
        return v > curve

    def contains_log(self, log_h, log_v):
        """Membership for logarithms of absolute values."""
        log_h = np.asarray(log_h, dtype=float)
        log_v = np.asarray(log_v, dtype=float)
        gap = log_v - float(self.q) * log_h
        if self.side is CuspSide.BELOW:
            return gap < 0
        return gap > 0

    def _require_nondegenerate(self):
        if self.q == 1:
            raise DegenerateCusp(
                f"cusp {self} has exponent 1 and is neither thin nor thick"
            )

    def __str__(self):
        relation = "<" if self.side is CuspSide.BELOW else ">"
        name = f"{self.label}: " if self.label else ""
        return (
            f"{name}|x{self.vertical}| {relation}"
            f" |x{self.horizontal}|^({format_rational(self.q)})"
        )


def cusps_intersect(first, second):
    """
    Whether two cusp regions of the same plane meet in every
    neighbourhood of the origin.
    """
    second = second.in_plane(first.plane)
    if first.side is second.side:
        return True
    below, above = (
        (first, second) if first.side is CuspSide.BELOW else (second, first)
    )
    return above.q > below.q


def cusp_contained(inner, outer):
    """inner is a subset of outer near the origin."""
    outer = outer.in_plane(inner.plane)
    if inner.side is not outer.side:
        return False
    if inner.side is CuspSide.BELOW:
        return inner.q >= outer.q
    return inner.q <= outer.q


def cusp_grid(epsilon, points=None, decades=None):
    """Geometric grid of magnitudes in (0, epsilon]."""
    points = points or hetnet_settings.GRID_POINTS
    decades = decades or hetnet_settings.GRID_DECADES
    return np.geomspace(epsilon * 10.0 ** (-decades), epsilon, points)


@dataclass(frozen=True)
class CuspRelations:
    """Relations between two cusp curves and their thin and thick parts."""

    first: CuspRegion
    second: CuspRegion
    coincident_axes: bool
    first_thick_contains_second_thin: bool
    second_thick_contains_first_thin: bool
    thick_intersection: bool
    thin_intersection: bool
    regions_intersect: bool
    first_in_second: bool
    second_in_first: bool
    epsilon: float
    grid_agrees: bool

    def as_rows(self):
        return [
            ("coincident tangency axes", self.coincident_axes),
            ("thick(first) contains thin(second)",
             self.first_thick_contains_second_thin),
            ("thick(second) contains thin(first)",
             self.second_thick_contains_first_thin),
            ("thick and thick intersect", self.thick_intersection),
            ("thin and thin intersect", self.thin_intersection),
            ("regions intersect", self.regions_intersect),
            ("first contained in second", self.first_in_second),
            ("second contained in first", self.second_in_first),
            ("grid agrees", self.grid_agrees),
            ("epsilon", self.epsilon),
        ]


def _grid_relations(first, second, epsilon):
    values = cusp_grid(epsilon)
    h, v = np.meshgrid(values, values, indexing="ij")
    second = second.in_plane(first.plane)

    def both(one, other):
        return bool(np.any(one.contains(h, v) & other.contains(h, v)))

    def inside(one, other):
        return not np.any(one.contains(h, v) & ~other.contains(h, v))

    return (
        inside(second.thin(), first.thick()),
        inside(first.thin(), second.thick()),
        both(first.thick(), second.thick()),
        both(first.thin(), second.thin()),
        both(first, second),
        inside(first, second),
        inside(second, first),
    )


def cusp_relations(first, second, epsilon=None):
    """
    Thin/thick relations of two cusp curves in one plane, decided from the
    exponents and checked on a geometric grid in the epsilon box.

    When the grid disagrees at one epsilon it is shrunk by the refinement
    factor; the exponent verdicts stay authoritative.
    """
    epsilon = epsilon or hetnet_settings.CUSP_EPSILON
    first._require_nondegenerate()
    second._require_nondegenerate()
    other = second.in_plane(first.plane)
    exact = (
        cusp_contained(other.thin(), first.thick()),
        cusp_contained(first.thin(), other.thick()),
        cusps_intersect(first.thick(), other.thick()),
        cusps_intersect(first.thin(), other.thin()),
        cusps_intersect(first, other),
        cusp_contained(first, other),
        cusp_contained(other, first),
    )
    agrees = False
    current = epsilon
    for _ in range(3):
        if _grid_relations(first, other, current) == exact:
            agrees = True
            break
        logger.warning(
            "Cusp grid verdicts disagree at epsilon=%g; refining", current
        )
        current /= hetnet_settings.CUSP_REFINEMENT
    return CuspRelations(
        first=first,
        second=second,
        coincident_axes=first.tangency_axis == other.tangency_axis,
        first_thick_contains_second_thin=exact[0],
        second_thick_contains_first_thin=exact[1],
        thick_intersection=exact[2],
        thin_intersection=exact[3],
        regions_intersect=exact[4],
        first_in_second=exact[5],
        second_in_first=exact[6],
        epsilon=current,
        grid_agrees=agrees,
    )


def cusp_image(cusp, monomial):
    """
    Image of a cusp under a monomial map that sends its plane to a plane.
    The cusp inequality is linear in logarithms, so it pulls back through
    the inverse of the 2 x 2 exponent block.
    """
    h, v = cusp.plane
    block = []
    outputs = []
    for out in monomial.codomain_coords:
        row = monomial.row(out)
        if any(value != 0 for k, value in row.items() if k not in (h, v)):
            continue
        if row[h] != 0 or row[v] != 0:
            outputs.append(out)
            block.append([row[h], row[v]])
    if len(outputs) != 2:
        raise NetworkError(
            f"{monomial.label or 'map'} does not send the plane"
            f" x{h}x{v} to a coordinate plane"
        )
    matrix = sp.Matrix(
        [[sp.Rational(str(value)) for value in row] for row in block]
    )
    if matrix.det() == 0:
        raise DegenerateCusp("the plane collapses under the map")
    sign = 1 if cusp.side is CuspSide.BELOW else -1
    # Region: sign * (log v - q log h) < 0
    normal = sp.Matrix([[-sp.Rational(str(cusp.q)), 1]]) * sign
    pulled = normal * matrix.inv()
    if pulled[1] == 0 or pulled[0] == 0:
        raise DegenerateCusp("the image is not a cusp")
    q = -pulled[0] / pulled[1]
    if q <= 0:
        raise DegenerateCusp("the image is not a cusp at the origin")
    side = CuspSide.BELOW if pulled[1] > 0 else CuspSide.ABOVE
    return CuspRegion(
        tuple(outputs), to_fraction(q), side,
        label=f"{monomial.label}({cusp.label})" if cusp.label else "",
    )


# COMMON CONNECTION


class PsiKind(enum.Enum):
    IDENTITY = "Identity"
    GENERAL_LINEAR = "GeneralLinear"


class PathStatus(enum.Enum):
    REALIZED = "Realized"
    NOT_REALIZED = "NotRealized"
    DEGENERATE = "Degenerate"
    UNKNOWN = "Unknown"


PATHS = (("a", "b"), ("a", "beta"), ("alpha", "b"), ("alpha", "beta"))


def path_name(incoming, outgoing):
    return f"{incoming}12{outgoing}"


@dataclass(frozen=True)
class CommonConnectionConfig:
    """
    A connection [xi_1 -> xi_2] shared by two cycles: incoming nodes
    alpha and a at xi_1, outgoing nodes beta and b at xi_2, and the
    contracting and expanding magnitudes that govern the cusps.

    The global map on the incoming plane is either the identity or a
    generic 2 x 2 matrix kappa sending (x_alpha, x_a) to (x_beta, x_b).
    """

    first: int
    second: int
    alpha: int
    a: int
    beta: int
    b: int
    c_alpha: object
    c_a: object
    e_beta: object
    e_b: object
    psi: PsiKind = PsiKind.IDENTITY
    kappa: tuple = None

    def __post_init__(self):
        if self.alpha == self.a:
            raise NetworkError("the incoming nodes alpha and a must differ")
        if self.beta == self.b:
            raise NetworkError("the outgoing nodes beta and b must differ")
        for name in ("c_alpha", "c_a", "e_beta", "e_b"):
            value = to_fraction(getattr(self, name))
            if value <= 0:
                raise NetworkError(f"{name} must be positive, got {value}")
            object.__setattr__(self, name, value)
        if self.psi is PsiKind.GENERAL_LINEAR:
            if self.kappa is None:
                raise NetworkError("a general linear global map needs kappa")
            kappa = tuple(
                tuple(to_fraction(v) for v in row) for row in self.kappa
            )
            if len(kappa) != 2 or any(len(row) != 2 for row in kappa):
                raise NetworkError("kappa must be a 2 x 2 matrix")
            if 0 in (kappa[0][0], kappa[0][1], kappa[1][0], kappa[1][1]):
                raise NetworkError("kappa must have four nonzero entries")
            object.__setattr__(self, "kappa", kappa)

    @classmethod
    def from_field(cls, field, first, second, alpha, a, beta, b,
                   kappa=None):
        """Read the magnitudes off a synthesized field."""
        at_first = equilibrium_data(field, first)
        at_second = equilibrium_data(field, second)
        return cls(
            first=first,
            second=second,
            alpha=alpha,
            a=a,
            beta=beta,
            b=b,
            c_alpha=-at_first.eigenvalue(alpha),
            c_a=-at_first.eigenvalue(a),
            e_beta=at_second.eigenvalue(beta),
            e_b=at_second.eigenvalue(b),
            psi=PsiKind.GENERAL_LINEAR if kappa else PsiKind.IDENTITY,
            kappa=kappa,
        )

    @property
    def incoming_ratio(self):
        """q1 = c_1a / c_1alpha."""
        return self.c_a / self.c_alpha

    @property
    def outgoing_ratio(self):
        """q2 = e_2b / e_2beta."""
        return self.e_b / self.e_beta

    @property
    def source_plane(self):
        return (self.alpha, self.a)

    @property
    def target_plane(self):
        return (self.beta, self.b)

    def incoming_cusps(self):
        """C_alpha1 and C_a1 in the (x_alpha, x_a) plane."""
        q = self.incoming_ratio
        return {
            "alpha": CuspRegion(self.source_plane, q, CuspSide.BELOW,
                                "C_alpha1"),
            "a": CuspRegion(self.source_plane, q, CuspSide.ABOVE, "C_a1"),
        }

    def outgoing_regions(self):
        """E_2beta and E_2b in the (x_beta, x_b) plane."""
        q = self.outgoing_ratio
        return {
            "beta": CuspRegion(self.target_plane, q, CuspSide.BELOW,
                               "E_2beta"),
            "b": CuspRegion(self.target_plane, q, CuspSide.ABOVE, "E_2b"),
        }

    def kappa_matrix(self):
        """Matrix of the global map on the incoming plane."""
        if self.psi is PsiKind.GENERAL_LINEAR:
            return np.array(self.kappa, dtype=float)
        if (self.alpha, self.a) == (self.beta, self.b):
            return np.eye(2)
        return np.array([[0.0, 1.0], [1.0, 0.0]])


def assumption1_check(cfg):
    """
    Identity global maps satisfy the assumption iff the incoming and
    outgoing planes are the same coordinate plane. A general linear block
    acts between the two planes and satisfies it iff it is invertible.
    """
    if cfg.psi is PsiKind.GENERAL_LINEAR:
        (p, q), (r, s) = cfg.kappa
        return p * s - q * r != 0
    return {cfg.alpha, cfg.a} == {cfg.beta, cfg.b}


@dataclass(frozen=True)
class PathVerdict:
    """Status of the four paths through a common connection."""

    statuses: tuple
    reason: str = ""

    def status(self, incoming, outgoing):
        return dict(self.statuses)[path_name(incoming, outgoing)]

    def missing(self):
        return [
            name for name, status in self.statuses
            if status is PathStatus.NOT_REALIZED
        ]

    def as_rows(self):
        return [(name, status.value) for name, status in self.statuses]

    def __str__(self):
        return ", ".join(f"{name}={status.value}"
                         for name, status in self.statuses)


def _verdict(decide, reason):
    return PathVerdict(
        statuses=tuple(
            (path_name(incoming, outgoing), decide(incoming, outgoing))
            for incoming, outgoing in PATHS
        ),
        reason=reason,
    )


def _identity_verdict(cfg):
    cusps = cfg.incoming_cusps()
    regions = cfg.outgoing_regions()

    def decide(incoming, outgoing):
        source = cusps[incoming]
        target = regions[outgoing].in_plane(cfg.source_plane)
        if source.side is not target.side and source.q == target.q:
            return PathStatus.DEGENERATE
        if cusps_intersect(source, target):
            return PathStatus.REALIZED
        return PathStatus.NOT_REALIZED

    return _verdict(
        decide,
        f"identity global map, c_1a/c_1alpha ="
        f" {format_rational(cfg.incoming_ratio)}, e_2b/e_2beta ="
        f" {format_rational(cfg.outgoing_ratio)}",
    )


def _general_linear_verdict(cfg):
    c_a1 = cfg.incoming_cusps()["a"]
    e_2b = cfg.outgoing_regions()["b"]
    if Thickness.DEGENERATE in (c_a1.thickness, e_2b.thickness):
        logger.warning("Cusp with exponent 1 in a general linear analysis")
        return _verdict(
            lambda incoming, outgoing: PathStatus.DEGENERATE,
            "a cusp exponent equals 1",
        )
    missing = {
        (Thickness.THICK, Thickness.THICK): ("alpha", "beta"),
        (Thickness.THIN, Thickness.THIN): ("a", "b"),
        (Thickness.THIN, Thickness.THICK): ("a", "beta"),
        (Thickness.THICK, Thickness.THIN): ("alpha", "b"),
    }[(c_a1.thickness, e_2b.thickness)]
    return _verdict(
        lambda incoming, outgoing: (
            PathStatus.NOT_REALIZED
            if (incoming, outgoing) == missing else PathStatus.REALIZED
        ),
        f"general linear global map, C_a1 {c_a1.thickness.value},"
        f" E_2b {e_2b.thickness.value}",
    )


def classify_paths(cfg):
    """
    Decide which of the paths a12b, a12beta, alpha12b and alpha12beta
    nearby trajectories follow. Raises Assumption1Violated when the
    planes do not match.
    """
    if not assumption1_check(cfg):
        raise Assumption1Violated(
            f"plane x{cfg.alpha}x{cfg.a} is not carried into"
            f" plane x{cfg.beta}x{cfg.b}"
        )
    if cfg.psi is PsiKind.IDENTITY:
        verdict = _identity_verdict(cfg)
    else:
        verdict = _general_linear_verdict(cfg)
    if any(status is PathStatus.DEGENERATE for _, status in verdict.statuses):
        logger.warning("Degenerate common connection: %s", verdict)
    logger.info("Common connection [%d->%d]: %s",
                cfg.first, cfg.second, verdict)
    return verdict


def analyze_common_connection(cfg):
    """
    classify_paths where the assumption holds; otherwise identity global
    maps let every path through and general ones are left undecided.
    """
    if assumption1_check(cfg):
        return classify_paths(cfg)
    if cfg.psi is PsiKind.IDENTITY:
        return _verdict(
            lambda incoming, outgoing: PathStatus.REALIZED,
            "planes differ under an identity global map: switching along"
            " the connection",
        )
    return _verdict(
        lambda incoming, outgoing: PathStatus.UNKNOWN,
        "planes differ under a general global map",
    )


def _signed_grid(epsilon, points):
    values = cusp_grid(epsilon, points)
    signed = np.concatenate([-values[::-1], values])
    h, v = np.meshgrid(signed, signed, indexing="ij")
    return np.vstack([h.ravel(), v.ravel()])


def common_connection_evidence(cfg, epsilon=None, points=None):
    """
    Grid evidence for every path: a point of the incoming cusp whose image
    under the global map lies in the outgoing region, searched forward
    from the source plane and backward from the target plane over all
    four sign quadrants. Returns {path name: point or None}.
    """
    epsilon = epsilon or hetnet_settings.CUSP_EPSILON
    points = points or hetnet_settings.GRID_POINTS
    kappa = cfg.kappa_matrix()
    inverse = np.linalg.inv(kappa)
    grid = _signed_grid(epsilon, points)
    cusps = cfg.incoming_cusps()
    regions = cfg.outgoing_regions()
    evidence = {}
    for incoming, outgoing in PATHS:
        source, target = cusps[incoming], regions[outgoing]
        forward = grid[:, source.contains(grid[0], grid[1])]
        image = kappa @ forward
        hits = target.contains(image[0], image[1])
        if np.any(hits):
            evidence[path_name(incoming, outgoing)] = tuple(
                float(v) for v in forward[:, np.argmax(hits)]
            )
            continue
        backward = grid[:, target.contains(grid[0], grid[1])]
        preimage = inverse @ backward
        hits = source.contains(preimage[0], preimage[1])
        evidence[path_name(incoming, outgoing)] = (
            tuple(float(v) for v in preimage[:, np.argmax(hits)])
            if np.any(hits) else None
        )
    return evidence


# SHADOWING


@dataclass(frozen=True)
class GridSpec:
    """Geometric grid of `points` values per coordinate in (0, epsilon]."""

    points: int = 64
    epsilon: float = 1e-2
    decades: int = 10

    def __post_init__(self):
        if self.points < 1 or self.decades <= 0:
            raise PreconditionViolation("grid needs points and decades")
        if not 0 < self.epsilon < 1:
            raise PreconditionViolation("grid epsilon must lie in (0, 1)")

    @classmethod
    def from_settings(cls, **overrides):
        values = {
            "points": hetnet_settings.GRID_POINTS,
            "epsilon": hetnet_settings.CUSP_EPSILON,
            "decades": hetnet_settings.GRID_DECADES,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def values(self):
        return cusp_grid(self.epsilon, self.points, self.decades)

    def __str__(self):
        return (f"{self.points} points per axis, epsilon={self.epsilon:g},"
                f" {self.decades} decades")


@dataclass(frozen=True)
class ShadowingResult:
    """A witness point on the initial section, or EmptyOnGrid."""

    walk: tuple
    section: object
    coords: tuple
    witness: tuple
    grid: GridSpec
    checked: int

    @property
    def found(self):
        return self.witness is not None

    @property
    def status(self):
        return "Witness" if self.found else "EmptyOnGrid"

    def __str__(self):
        if self.found:
            point = ", ".join(
                f"x{k}={v:.6g}" for k, v in zip(self.coords, self.witness)
            )
            return f"{self.status} on {self.section}: {point}"
        return f"{self.status} ({self.checked} points, grid {self.grid})"


def shadowing_grid(field, walk, grid=None, graph=None):
    """
    Deepen a grid until it reaches the central ray of the walk's domain.

    With e = -log(epsilon), the point e * ray lies at least e away, in the
    max norm over logarithms, from every face of the cone, so a lattice
    whose spacing is below 2e and which spans e * (max|ray| - 1) below
    log(epsilon) has a point inside.
    """
    grid = grid or GridSpec.from_settings()
    try:
        ray = domain_constraints(field, walk, graph).central_ray()
    except NetworkError as exc:
        logger.debug("No domain for %s (%s); grid kept", list(walk), exc)
        return grid
    if ray is None:
        return grid
    depth = -math.log(grid.epsilon)
    span = depth * (float(np.max(np.abs(ray))) - 1.0)
    decades = max(grid.decades, math.ceil(span / math.log(10.0)) + 1)
    if decades * math.log(10.0) >= 2.0 * depth * (grid.points - 1):
        logger.warning(
            "Grid of %d points is too coarse for %s over %d decades",
            grid.points, list(walk), decades,
        )
    if decades != grid.decades:
        logger.info("Walk %s needs %d decades", list(walk), decades)
        grid = replace(grid, decades=decades)
    return grid


def verify_shadowing(field, walk, grid=None, graph=None, deepen=True):
    """
    Sample the initial section H_{w1}^{in,w0} and push every point along
    the walk with the linearized passages, keeping points whose exit at
    each node is the prescribed one. EmptyOnGrid is evidence only.
    Unless deepen is False the grid is first extended by shadowing_grid;
    the result records the grid actually searched.
    """
    walk = tuple(walk)
    if len(walk) < 2:
        raise PreconditionViolation("a walk needs at least two nodes")
    if graph is not None and not graph.is_walk(walk):
        raise PreconditionViolation(f"{list(walk)} is not a walk")
    grid = grid or GridSpec.from_settings()
    if deepen:
        grid = shadowing_grid(field, walk, grid, graph)
    flow = SymbolicFlow(field, graph)
    section = incoming_section(walk[1], walk[0], field.n)
    coords = section.active
    relevant = section.relevant
    axis = np.log(grid.values())
    shape = (grid.points,) * len(relevant)
    total = int(np.prod(shape))
    chunk = hetnet_settings.GRID_CHUNK
    rows = [coords.index(k) for k in relevant]
    for start in range(0, total, chunk):
        index = np.arange(start, min(start + chunk, total))
        logs = np.full((len(coords), len(index)), math.log(grid.epsilon))
        for row, positions in zip(rows, np.unravel_index(index, shape)):
            logs[row] = axis[positions]
        mask = flow.follow(walk, logs)
        if np.any(mask):
            first = int(np.argmax(mask))
            witness = tuple(float(np.exp(logs[row, first])) for row in rows)
            result = ShadowingResult(walk, section, relevant, witness, grid,
                                     start + first + 1)
            logger.info("Walk %s shadowed: %s", list(walk), result)
            return result
    result = ShadowingResult(walk, section, relevant, None, grid, total)
    logger.info("Walk %s: %s", list(walk), result)
    return result


def sequence_corollary_check(field, chain, alpha, a, beta, b, graph=None):
    """
    Common-connection verdict when the shared connection is replaced by a
    chain of connections xi_1 -> ... -> xi_2. A chain of one connection
    is classify_paths itself; longer chains are decided exactly from the
    composed exponents by cone feasibility.
    """
    chain = list(chain)
    if len(chain) < 2:
        raise PreconditionViolation("a chain needs at least two nodes")
    if graph is not None and not graph.is_walk(chain):
        raise PreconditionViolation(f"{chain} is not a walk")
    cfg = CommonConnectionConfig.from_field(
        field, chain[0], chain[-1], alpha, a, beta, b
    )
    if not assumption1_check(cfg):
        raise Assumption1Violated(
            f"plane x{alpha}x{a} is not carried into plane x{beta}x{b}"
        )
    if len(chain) == 2:
        return classify_paths(cfg)
    nodes = {"alpha": alpha, "a": a, "beta": beta, "b": b}

    def decide(incoming, outgoing):
        walk = [nodes[incoming], *chain, nodes[outgoing]]
        if path_realizable(field, walk, graph):
            return PathStatus.REALIZED
        return PathStatus.NOT_REALIZED

    verdict = _verdict(decide, f"chain {chain} by cone feasibility")
    logger.info("Chain %s: %s", chain, verdict)
    return verdict


# HOUSE NETWORK


HOUSE_EDGES = frozenset({(1, 2), (2, 3), (3, 1), (2, 4), (4, 5), (5, 1)})


@dataclass(frozen=True)
class HouseRegion:
    """Points of H_2^{in,1} that came from `source` and leave to `target`."""

    source: int
    target: int
    coords: tuple
    inequalities: tuple
    witness: tuple

    def describe(self):
        return ", ".join(str(ineq) for ineq in self.inequalities)


def _house_inequalities(source, target, q_source, q_target):
    # Coordinates (x3, x4, x5); q_source = c15/c13, q_target = e24/e23
    coords = (3, 4, 5)
    from_three = (-q_source, 0, 1)
    to_three = (-q_target, 1, 0)
    rows = [
        from_three if source == 3 else tuple(-v for v in from_three),
        to_three if target == 3 else tuple(-v for v in to_three),
    ]
    return tuple(
        MonomialInequality(coords=coords, exponents=tuple(row), node=node,
                           chosen=choice)
        for row, node, choice in zip(rows, (1, 2), (source, target))
    )


def _house_witness(source, target, q_source, q_target, factor, base):
    f, w = float(factor), float(base)
    qs, qt = float(q_source), float(q_target)
    if (source, target) == (3, 3):
        x3 = w
        return x3, f * x3 ** qt, f * x3 ** qs
    if (source, target) == (3, 4):
        x4 = w
        x3 = f * w ** (1 / qt)
        return x3, x4, f * x3 ** qs
    if (source, target) == (5, 3):
        x5 = w
        x3 = f * w ** (1 / qs)
        return x3, f * x3 ** qt, x5
    x3 = f * min(w ** (1 / qt), w ** (1 / qs))
    return x3, w, w


def house_regions(field, graph, factor=None, base=None):
    """
    The four regions of H_2^{in,1} realizing 3->3, 3->4, 5->3 and 5->4
    through the common connection [xi_1 -> xi_2], each with a witness
    checked backward through xi_1 and forward through xi_2.
    """
    if frozenset(graph.edges) != HOUSE_EDGES:
        raise WiringMismatch("house", HOUSE_EDGES, graph.edges)
    factor = factor if factor is not None else hetnet_settings.WITNESS_FACTOR
    base = base if base is not None else hetnet_settings.WITNESS_BASE
    n = field.n
    flow = SymbolicFlow(field, graph)
    at_one = equilibrium_data(field, 1)
    at_two = equilibrium_data(field, 2)
    c13, c15 = -at_one.eigenvalue(3), -at_one.eigenvalue(5)
    e23, e24 = at_two.eigenvalue(3), at_two.eigenvalue(4)
    q_source, q_target = c15 / c13, e24 / e23
    section = incoming_section(2, 1, n)

    regions = []
    for source in (3, 5):
        for target in (3, 4):
            inequalities = _house_inequalities(
                source, target, q_source, q_target
            )
            witness = _house_witness(
                source, target, q_source, q_target, factor, base
            )
            if not all(ineq.side(witness) is Side.INSIDE
                       for ineq in inequalities):
                raise EmptyRegion(
                    f"witness {witness} misses region {source}->{target}"
                )
            logs = np.zeros(len(section.active))
            for k, value in zip((3, 4, 5), witness):
                logs[section.active.index(k)] = math.log(value)

            # Backward through xi_1: the preimage must sit on the section
            # of the source with the other incoming coordinate small.
            back = compose([
                local_map(at_one, source, 2), global_map(1, 2, n)
            ]).inverse()
            preimage = back.apply_log(logs)
            other = 5 if source == 3 else 3
            if preimage[back.codomain_coords.index(other)] >= 0:
                raise EmptyRegion(
                    f"witness {witness} does not come from xi_{source}"
                )

            winners, strict = flow.exits(2, 1, logs)
            if int(winners[0]) != target or not strict[0]:
                raise EmptyRegion(
                    f"witness {witness} does not leave toward xi_{target}"
                )
            image = flow.passage(1, 2, target) @ logs
            landing = incoming_section(target, 2, n)
            if any(image[landing.active.index(k)] >= 0
                   for k in landing.relevant):
                raise EmptyRegion(
                    f"witness {witness} does not land on {landing}"
                )
            regions.append(
                HouseRegion(source, target, (3, 4, 5), inequalities, witness)
            )
    logger.info("House switching: four regions verified")
    return regions
