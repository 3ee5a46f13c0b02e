"""
Network core for the Networks Application.
This module validates directed graphs, synthesizes the simplex-method
vector field that realizes them, and computes the equilibria and the
eigenvalue bookkeeping of its linearization.

The field on R^n is

    dx_j/dt = x_j (1 - |x|^2 + sum_i a_ij x_i^2)

with zero diagonal, so every equilibrium sits at the unit point of its
axis, its radial eigenvalue is -2 and the eigenvalue at xi_i in direction
j is exactly a_ij.
"""

import enum
import logging
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import numpy as np
import sympy as sp

from .exceptions import GraphNotRealizable, SignContradiction, NetworkError

logger = logging.getLogger(__name__)

RADIAL_EIGENVALUE = Fraction(-2)


def to_fraction(value):
    """Convert ints, strings, sympy rationals and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sp.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a 'p/q' string")
    return Fraction(value)


# GRAPHS


@dataclass(frozen=True)
class DirectedGraph:
    """
    Abstract network blueprint: nodes 1..n and directed connections.
    Loops are representable so that validation can report them.
    """

    n: int
    edges: frozenset = dataclass_field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 1:
            raise NetworkError("a graph needs at least one node")
        edges = frozenset((int(i), int(j)) for i, j in self.edges)
        for i, j in edges:
            if not (1 <= i <= self.n and 1 <= j <= self.n):
                raise NetworkError(f"edge ({i},{j}) is outside 1..{self.n}")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_pairs(cls, n, pairs):
        """Build a graph from any iterable of (i, j) pairs."""
        return cls(n=n, edges=frozenset(tuple(pair) for pair in pairs))

    @property
    def realizable(self):
        """True iff the graph is one- and two-cycle free."""
        return validate_graph(self).realizable

    def successors(self, i):
        return sorted(j for (k, j) in self.edges if k == i)

    def predecessors(self, j):
        return sorted(i for (i, k) in self.edges if k == j)

    def sorted_edges(self):
        return sorted(self.edges)

    def is_walk(self, nodes):
        """Check that consecutive nodes are joined by edges."""
        return all(
            (a, b) in self.edges for a, b in zip(nodes, nodes[1:])
        )


class Realizability(enum.Enum):
    REALIZABLE = "Realizable"
    HAS_ONE_CYCLE = "HasOneCycle"
    HAS_TWO_CYCLE = "HasTwoCycle"


@dataclass(frozen=True)
class RealizabilityVerdict:
    """Outcome of validate_graph with the offending edges listed."""

    one_cycles: tuple = ()
    two_cycles: tuple = ()

    @property
    def realizable(self):
        return not self.one_cycles and not self.two_cycles

    @property
    def status(self):
        if self.one_cycles:
            return Realizability.HAS_ONE_CYCLE
        if self.two_cycles:
            return Realizability.HAS_TWO_CYCLE
        return Realizability.REALIZABLE

    def __str__(self):
        if self.realizable:
            return Realizability.REALIZABLE.value
        parts = []
        if self.one_cycles:
            parts.append(
                f"{Realizability.HAS_ONE_CYCLE.value}({list(self.one_cycles)})"
            )
        if self.two_cycles:
            parts.append(
                f"{Realizability.HAS_TWO_CYCLE.value}({list(self.two_cycles)})"
            )
        return ", ".join(parts)


def validate_graph(graph):
    """
    Check a graph for one-cycles (loops) and two-cycles.
    Returns a verdict listing every offending edge; never raises.
    """
    one_cycles = tuple(sorted((i, j) for i, j in graph.edges if i == j))
    two_cycles = tuple(
        sorted(
            (i, j)
            for i, j in graph.edges
            if i != j and (j, i) in graph.edges
        )
    )
    return RealizabilityVerdict(one_cycles=one_cycles, two_cycles=two_cycles)


# SIMPLEX FIELD


@dataclass(frozen=True)
class Margins:
    """Positive magnitudes used for expanding, contracting and transverse
    entries of a synthesized field."""

    e: Fraction = Fraction(1)
    c: Fraction = Fraction(1)
    t: Fraction = Fraction(1, 2)

    def __post_init__(self):
        for name in ("e", "c", "t"):
            value = to_fraction(getattr(self, name))
            if value <= 0:
                raise NetworkError(f"margin {name} must be positive")
            object.__setattr__(self, name, value)


@dataclass(frozen=True)
class SimplexField:
    """
    Coefficient matrix of the simplex-method ODE, exact rationals.
    Indices in the public methods are 1-based like node labels.
    """

    matrix: sp.ImmutableMatrix

    def __post_init__(self):
        matrix = sp.ImmutableMatrix(self.matrix).applyfunc(sp.Rational)
        if matrix.rows != matrix.cols or matrix.rows < 1:
            raise NetworkError("coefficient matrix must be square")
        if any(matrix[k, k] != 0 for k in range(matrix.rows)):
            raise NetworkError("coefficient matrix must have zero diagonal")
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_rows(cls, rows):
        """Build a field from nested lists of rationals or 'p/q' strings."""
        return cls(
            sp.ImmutableMatrix(
                [[sp.Rational(str(to_fraction(v))) for v in row]
                 for row in rows]
            )
        )

    @property
    def n(self):
        return self.matrix.rows

    def coefficient(self, i, j):
        """Return a_ij as a Fraction."""
        return to_fraction(self.matrix[i - 1, j - 1])

    def with_coefficient(self, i, j, value):
        """Return a copy with a_ij replaced."""
        if i == j:
            raise NetworkError("diagonal entries are fixed at zero")
        matrix = sp.Matrix(self.matrix)
        matrix[i - 1, j - 1] = sp.Rational(str(to_fraction(value)))
        return SimplexField(sp.ImmutableMatrix(matrix))

    def as_array(self):
        return np.array(self.matrix.tolist(), dtype=float)

    def equilibrium(self, j):
        point = np.zeros(self.n)
        point[j - 1] = 1.0
        return point

    def growth_rates(self, x, coefficients=None):
        """g_k = 1 - |x|^2 + sum_i a_ik x_i^2, so that f_k = x_k g_k."""
        a = self.as_array() if coefficients is None else coefficients
        squares = np.square(np.asarray(x, dtype=float))
        return 1.0 - squares.sum() + squares @ a

    def vector_field(self, x, coefficients=None):
        """Evaluate the field at x; coefficients may be a cached float
        array of the matrix."""
        x = np.asarray(x, dtype=float)
        return x * self.growth_rates(x, coefficients)

    def jacobian(self, x):
        """Analytic Jacobian: J_km = delta_km g_k + 2 x_k x_m (a_mk - 1)."""
        a = self.as_array()
        x = np.asarray(x, dtype=float)
        growth = self.growth_rates(x, a)
        return np.diag(growth) + 2.0 * np.outer(x, x) * (a.T - 1.0)

    def numerical_jacobian(self, x, step=1e-6):
        """Central-difference Jacobian, used as an independent check."""
        a = self.as_array()
        x = np.asarray(x, dtype=float)
        columns = []
        for m in range(self.n):
            shift = np.zeros(self.n)
            shift[m] = step
            forward = self.vector_field(x + shift, a)
            backward = self.vector_field(x - shift, a)
            columns.append((forward - backward) / (2.0 * step))
        return np.column_stack(columns)


def build_simplex_field(graph, margins=None, overrides=None):
    """
    Synthesize the simplex-method field realizing a graph.

    For each edge (i, j) the entry a_ij is +e (expanding at xi_i toward
    x_j) and a_ji is -c (contracting at xi_j toward x_i). Every other
    off-diagonal entry is -t. Overrides, keyed by (i, j), replace single
    entries afterwards.
    """
    verdict = validate_graph(graph)
    if not verdict.realizable:
        raise GraphNotRealizable(verdict)
    margins = margins or Margins()
    n = graph.n
    matrix = sp.zeros(n, n)
    for i in range(n):
        for j in range(n):
            if i != j:
                matrix[i, j] = -sp.Rational(str(margins.t))
    for i, j in graph.edges:
        matrix[i - 1, j - 1] = sp.Rational(str(margins.e))
        matrix[j - 1, i - 1] = -sp.Rational(str(margins.c))
    for (i, j), value in (overrides or {}).items():
        if i == j:
            raise NetworkError("diagonal entries are fixed at zero")
        matrix[i - 1, j - 1] = sp.Rational(str(to_fraction(value)))
    logger.debug("Synthesized %dx%d simplex field", n, n)
    return SimplexField(sp.ImmutableMatrix(matrix))


# EQUILIBRIA AND EIGENVALUES


@dataclass(frozen=True)
class EquilibriumData:
    """Position and analytic spectrum of the equilibrium xi_j."""

    index: int
    position: tuple
    radial: Fraction
    transverse_spectrum: tuple

    def eigenvalue(self, direction):
        """Eigenvalue in the given coordinate direction."""
        if direction == self.index:
            return self.radial
        for k, value in self.transverse_spectrum:
            if k == direction:
                return value
        raise NetworkError(f"no direction {direction} at xi_{self.index}")

    def eigenvalues(self):
        """All n eigenvalues ordered by coordinate direction."""
        n = len(self.position)
        return [self.eigenvalue(k) for k in range(1, n + 1)]

    def unstable_directions(self):
        """Directions with a positive eigenvalue, in coordinate order."""
        return [k for k, value in self.transverse_spectrum if value > 0]


def equilibrium_data(field, j):
    """Equilibrium xi_j of a simplex field and its analytic spectrum."""
    if not 1 <= j <= field.n:
        raise NetworkError(f"node {j} is outside 1..{field.n}")
    position = tuple(1 if k == j else 0 for k in range(1, field.n + 1))
    spectrum = tuple(
        (k, field.coefficient(j, k))
        for k in range(1, field.n + 1)
        if k != j
    )
    return EquilibriumData(
        index=j,
        position=position,
        radial=RADIAL_EIGENVALUE,
        transverse_spectrum=spectrum,
    )


def spectrum_deviation(field, j, step=1e-6):
    """
    Largest gap between the analytic eigenvalues at xi_j and those of a
    central-difference Jacobian.
    """
    data = equilibrium_data(field, j)
    analytic = np.sort(np.array([float(v) for v in data.eigenvalues()]))
    numeric = np.linalg.eigvals(
        field.numerical_jacobian(field.equilibrium(j), step)
    )
    numeric = np.sort(numeric.real)
    return float(np.max(np.abs(analytic - numeric)))


class RoleKind(enum.Enum):
    RADIAL = "Radial"
    CONTRACTING = "Contracting"
    EXPANDING = "Expanding"
    TRANSVERSE = "Transverse"


@dataclass(frozen=True)
class EigenvalueRole:
    kind: RoleKind
    toward: int
    value: Fraction

    def __str__(self):
        if self.kind is RoleKind.RADIAL:
            return f"{self.kind.value}({self.value})"
        return f"{self.kind.value}(toward {self.toward}: {self.value})"


def classify_roles(field, cycle, j, graph=None):
    """
    Assign radial, contracting, expanding and transverse roles to the
    eigenvalues at xi_j relative to a cycle through j.

    The cycle is an ordered node list; a repeated first node at the end is
    allowed. Raises SignContradiction when a role and its sign disagree.
    """
    nodes = list(cycle)
    if len(nodes) > 1 and nodes[0] == nodes[-1]:
        nodes = nodes[:-1]
    if j not in nodes:
        raise NetworkError(f"node {j} is not on the cycle {list(cycle)}")
    if graph is not None and not graph.is_walk(nodes + nodes[:1]):
        raise NetworkError(f"{list(cycle)} is not a closed walk")
    position = nodes.index(j)
    predecessor = nodes[position - 1]
    successor = nodes[(position + 1) % len(nodes)]

    data = equilibrium_data(field, j)
    roles = []
    for k in range(1, field.n + 1):
        value = data.eigenvalue(k)
        if k == j:
            role = EigenvalueRole(RoleKind.RADIAL, j, value)
            if value >= 0:
                raise SignContradiction(j, k, role.kind.value, value)
        elif k == predecessor:
            role = EigenvalueRole(RoleKind.CONTRACTING, k, value)
            if value >= 0:
                raise SignContradiction(j, k, role.kind.value, value)
        elif k == successor:
            role = EigenvalueRole(RoleKind.EXPANDING, k, value)
            if value <= 0:
                raise SignContradiction(j, k, role.kind.value, value)
        else:
            role = EigenvalueRole(RoleKind.TRANSVERSE, k, value)
        roles.append((k, role))
    return roles
