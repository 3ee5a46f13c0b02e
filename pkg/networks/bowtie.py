"""
Bowtie network analysis.

Two three-node cycles share the node xi_2: the R-cycle 1 -> 2 -> 3 -> 1
and the L-cycle 5 -> 2 -> 4 -> 5. Points on H_2^{in,1} use the relevant
coordinates (x3, x4, x5); points on H_2^{in,5} use (x1, x3, x4). Parameters
of the R-cycle carry the suffix _tilde.
"""

import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .conf import hetnet_settings
from .core import equilibrium_data, to_fraction
from .exceptions import (
    AssumptionViolation,
    EmptyRegion,
    NetworkError,
    NotInFirstTurnSet,
    ParameterSignError,
    PreconditionViolation,
    WiringMismatch,
)
from .maps import (
    MonomialInequality,
    Side,
    SymbolicFlow,
    compose,
    domain_constraints,
    global_map,
    local_map,
)
from .switching import CuspRegion, CuspSide, cusp_image

logger = logging.getLogger(__name__)

BOWTIE_EDGES = frozenset({(1, 2), (2, 3), (3, 1), (5, 2), (2, 4), (4, 5)})

EXPANDING = ("e12", "e23", "e24", "e31", "e45", "e52")
CONTRACTING = (
    "c13", "c14", "c15", "c21", "c25", "c32", "c34", "c35",
    "c41", "c42", "c43", "c51", "c53", "c54",
)


class Cycle(enum.Enum):
    R = "R"
    L = "L"


class TurnBound(enum.Enum):
    UNBOUNDED = "Unbounded"


class Transition(enum.Enum):
    RLR = "RLR"
    RLL_PLUS = "RLLplus"
    LRL = "LRL"
    LRR_PLUS = "LRRplus"
    DEGENERATE = "Degenerate"


# PARAMETERS


def bowtie_table(field, graph=None):
    """Eigenvalue magnitudes e_ij = a_ij and c_ij = -a_ij of a field."""
    if graph is not None and frozenset(graph.edges) != BOWTIE_EDGES:
        raise WiringMismatch("bowtie", BOWTIE_EDGES, graph.edges)
    table = {}
    for name in EXPANDING:
        table[name] = field.coefficient(int(name[1]), int(name[2]))
    for name in CONTRACTING:
        table[name] = -field.coefficient(int(name[1]), int(name[2]))
    return table


@dataclass(frozen=True)
class BowtieParameters:
    rho: object
    rho_tilde: object
    nu: object
    nu_tilde: object
    mu: object
    mu_tilde: object
    delta: object
    delta_tilde: object
    alpha: object
    beta: object
    alpha_tilde: object
    beta_tilde: object
    table: dict

    def magnitude(self, name):
        return self.table[name]

    def as_rows(self):
        """(name, exact value, decimal approximation) for reports."""
        names = (
            "rho", "rho_tilde", "nu", "nu_tilde", "mu", "mu_tilde",
            "delta", "delta_tilde", "alpha", "beta",
            "alpha_tilde", "beta_tilde",
        )
        return [
            (name, getattr(self, name), float(getattr(self, name)))
            for name in names
        ]


def compute_parameters(table):
    """
    All Bowtie parameters as exact rationals from an eigenvalue table
    keyed like 'e23' and 'c42'. Requires e23 > e24.
    """
    t = {}
    for name in EXPANDING + CONTRACTING:
        if name not in table:
            raise NetworkError(f"eigenvalue table lacks {name}")
        value = to_fraction(table[name])
        if value <= 0:
            raise ParameterSignError(f"{name} = {value} is not positive")
        t[name] = value
    if t["e23"] <= t["e24"]:
        raise AssumptionViolation(
            f"e23 = {t['e23']} must exceed e24 = {t['e24']}"
        )

    rho = t["c42"] * t["c54"] * t["c25"] / (t["e24"] * t["e45"] * t["e52"])
    rho_tilde = (
        t["c32"] * t["c13"] * t["c21"] / (t["e23"] * t["e31"] * t["e12"])
    )
    nu = (
        -t["e23"] / t["e24"]
        + t["c25"] * t["c43"] / (t["e24"] * t["e45"])
        + t["c53"] * t["c42"] * t["c25"] / (t["e45"] * t["e24"] * t["e52"])
    )
    nu_tilde = (
        -t["e24"] / t["e23"]
        + t["c21"] * t["c34"] / (t["e23"] * t["e31"])
        + t["c14"] * t["c32"] * t["c21"] / (t["e31"] * t["e23"] * t["e12"])
    )
    mu = (
        t["c21"] / t["e24"]
        + t["c25"] * t["c41"] / (t["e24"] * t["e45"])
        + t["c51"] * t["c42"] * t["c25"] / (t["e45"] * t["e24"] * t["e52"])
    )
    mu_tilde = (
        t["c25"] / t["e23"]
        + t["c21"] * t["c35"] / (t["e23"] * t["e31"])
        + t["c15"] * t["c32"] * t["c21"] / (t["e31"] * t["e23"] * t["e12"])
    )
    delta = (
        t["c43"] / t["e45"]
        + t["c53"] * t["c42"] / (t["e52"] * t["e45"])
        - t["e23"] * t["c54"] * t["c42"] / (t["e52"] * t["e45"] * t["e24"])
    )
    delta_tilde = (
        t["c34"] / t["e31"]
        + t["c14"] * t["c32"] / (t["e12"] * t["e31"])
        - t["e24"] * t["c13"] * t["c32"] / (t["e12"] * t["e31"] * t["e23"])
    )
    alpha = t["c41"] / t["e45"] + t["c42"] * t["c51"] / (t["e45"] * t["e52"])
    beta = t["c43"] / t["e45"] + t["c42"] * t["c53"] / (t["e45"] * t["e52"])
    alpha_tilde = (
        t["c35"] / t["e31"] + t["c32"] * t["c15"] / (t["e31"] * t["e12"])
    )
    beta_tilde = (
        t["c34"] / t["e31"] + t["c14"] * t["c32"] / (t["e31"] * t["e12"])
    )

    checks = (
        (t["e24"] / t["e23"] * (rho_tilde - 1) - nu_tilde,
         -t["c21"] / t["e23"] * delta_tilde),
        (t["e23"] / t["e24"] * (rho - 1) - nu,
         -t["c25"] / t["e24"] * delta),
        (beta, delta + t["e23"] / t["c25"] * rho),
        (beta_tilde, delta_tilde + t["e24"] / t["c21"] * rho_tilde),
    )
    for left, right in checks:
        if left != right:
            raise NetworkError(f"parameter identity fails: {left} != {right}")

    params = BowtieParameters(
        rho=rho, rho_tilde=rho_tilde, nu=nu, nu_tilde=nu_tilde,
        mu=mu, mu_tilde=mu_tilde, delta=delta, delta_tilde=delta_tilde,
        alpha=alpha, beta=beta, alpha_tilde=alpha_tilde,
        beta_tilde=beta_tilde, table=t,
    )
    logger.debug("Bowtie parameters: delta=%s delta_tilde=%s",
                 delta, delta_tilde)
    return params


# TURN SETS


def _cycle_constants(params, cycle):
    # (own ratio s_0, rho, nu, delta) of the cycle
    t = params.table
    if Cycle(cycle) is Cycle.R:
        return (t["e24"] / t["e23"], params.rho_tilde, params.nu_tilde,
                params.delta_tilde)
    return t["e23"] / t["e24"], params.rho, params.nu, params.delta


def turn_exponent(params, cycle, n):
    """
    s_n = s_0 rho^n - nu (1 + rho + ... + rho^(n-1)), where s_0 is
    e24/e23 on the R side and e23/e24 on the L side. A point of the
    entry section takes at least n + 1 turns iff it satisfies the first
    turn condition with every exponent s_0, ..., s_n.
    """
    if n < 0:
        raise PreconditionViolation("turn index must be non-negative")
    base, rho, nu, _ = _cycle_constants(params, cycle)
    total = sum(rho ** i for i in range(n))
    return base * rho ** n - nu * total


def turn_exponents(params, cycle, count):
    return [turn_exponent(params, cycle, n) for n in range(count)]


def turn_limit(params, cycle):
    """Limit of s_n when rho < 1 and the sequence increases, else None."""
    _, rho, nu, delta = _cycle_constants(params, cycle)
    if rho < 1 and delta < 0:
        return -nu / (1 - rho)
    return None


def turn_inequality(params, cycle, n):
    """The condition on the entry section that uses exponent s_n."""
    return threshold_inequality(cycle, turn_exponent(params, cycle, n))


def threshold_inequality(cycle, s):
    if Cycle(cycle) is Cycle.R:
        # x4 < x3^s over (x3, x4, x5)
        return MonomialInequality(coords=(3, 4, 5), exponents=(-s, 1, 0),
                                  node=2, chosen=3, competitor=4)
    # x3 < x4^s over (x1, x3, x4)
    return MonomialInequality(coords=(1, 3, 4), exponents=(0, 1, -s),
                              node=2, chosen=4, competitor=3)


def turn_side(point, params, cycle, n):
    """Side of the turn set E_n (n >= 1), boundaries reported as such."""
    if n < 1:
        raise PreconditionViolation("turn sets start at n = 1")
    sides = [turn_inequality(params, cycle, k).side(point) for k in range(n)]
    if Side.OUTSIDE in sides:
        return Side.OUTSIDE
    if Side.BOUNDARY in sides:
        return Side.BOUNDARY
    return Side.INSIDE


def membership(point, params, cycle, n):
    """Whether the point takes at least n turns around the cycle."""
    side = turn_side(point, params, cycle, n)
    if side is Side.BOUNDARY:
        logger.warning("Point %s lies on the boundary of E_%d", point, n)
    return side is Side.INSIDE


def max_turns(point, params, cycle):
    """
    Number of consecutive turns the point takes before leaving the
    cycle: the largest n with the point in E_n, or Unbounded when every
    E_n contains it.

    This counts completed turns, so it is one less than the first n with
    the point outside E_n. A point with x3 = x5 = 0.01 and
    x4 = x3 ** ((s_2 + s_3) / 2) lies in E_3 but not in E_4 and gets 3.
    """
    if any(value <= 0 for value in point):
        raise PreconditionViolation(f"point {point} is not positive")
    base_value = point[0] if Cycle(cycle) is Cycle.R else point[2]
    if not 0 < base_value < 1:
        raise PreconditionViolation("the cycle coordinate must lie in (0, 1)")
    if turn_inequality(params, cycle, 0).side(point) is not Side.INSIDE:
        raise NotInFirstTurnSet(f"{point} takes no turn around {cycle}")
    _, _, _, delta = _cycle_constants(params, cycle)
    if delta >= 0:
        return TurnBound.UNBOUNDED

    limit = turn_limit(params, cycle)
    if limit is not None:
        # s_n increases toward the limit without reaching it
        if threshold_inequality(cycle, limit).side(point) is not Side.OUTSIDE:
            return TurnBound.UNBOUNDED

    for n in range(1, hetnet_settings.MAX_TURN_SEARCH + 1):
        side = turn_inequality(params, cycle, n).side(point)
        if side is Side.BOUNDARY:
            logger.warning("Point %s on the boundary of E_%d", point, n + 1)
        if side is not Side.INSIDE:
            return n
    raise PreconditionViolation(
        f"no exit within {hetnet_settings.MAX_TURN_SEARCH} turns"
    )


# TRANSITIONS


def transition_inequality(params, cycle):
    """
    Condition under which a point leaving the cycle returns after a
    single visit to the other one.
    """
    t = params.table
    if Cycle(cycle) is Cycle.R:
        a = t["e23"] / t["e24"] * params.rho - params.nu
        b = t["e23"] / t["c25"] * params.rho - params.beta
        # x4^a x5^b < x3
        return MonomialInequality(coords=(3, 4, 5), exponents=(-1, a, b))
    a = t["e24"] / t["e23"] * params.rho_tilde - params.nu_tilde
    b = t["e24"] / t["c21"] * params.rho_tilde - params.beta_tilde
    # x3^a x1^b < x4
    return MonomialInequality(coords=(1, 3, 4), exponents=(b, a, -1))


def classify_transition(point, params, cycle=Cycle.R):
    """RLR or RLLplus for a point leaving the R-cycle (mirrored for L)."""
    cycle = Cycle(cycle)
    if turn_inequality(params, cycle, 0).side(point) is not Side.OUTSIDE:
        raise PreconditionViolation(
            f"{point} does not leave the {cycle.value}-cycle"
        )
    side = transition_inequality(params, cycle).side(point)
    if side is Side.BOUNDARY:
        logger.warning("Transition of %s is degenerate", point)
        return Transition.DEGENERATE
    if cycle is Cycle.R:
        return Transition.RLR if side is Side.INSIDE else Transition.RLL_PLUS
    return Transition.LRL if side is Side.INSIDE else Transition.LRR_PLUS


# MAPS


def bowtie_maps(field):
    """
    Return maps h_R, h_L and transitions g_RL, g_LR between the entry
    sections, restricted to the relevant coordinates.
    """
    n = field.n
    eq = {i: equilibrium_data(field, i) for i in range(1, n + 1)}

    def around(*steps):
        maps = [local_map(eq[i], source, target)
                for source, i, target in steps]
        last = steps[-1]
        maps.append(global_map(last[1], last[2], n))
        return compose(maps)

    h_r = around((1, 2, 3), (2, 3, 1), (3, 1, 2)).closed().project()
    h_l = around((5, 2, 4), (2, 4, 5), (4, 5, 2)).closed().project()
    g_rl = around((1, 2, 4), (2, 4, 5), (4, 5, 2)).project()
    g_lr = around((5, 2, 3), (2, 3, 1), (3, 1, 2)).project()
    return {"h_R": h_r, "h_L": h_l, "g_RL": g_rl, "g_LR": g_lr}


# WITNESSES


@dataclass(frozen=True)
class LogWitness:
    """A point given by the logarithms of its coordinates."""

    coords: tuple
    logs: tuple

    @property
    def point(self):
        """Coordinates as floats; very deep witnesses underflow to 0."""
        return tuple(math.exp(v) for v in self.logs)

    def __str__(self):
        return ", ".join(
            f"log x{k}={v:.6g}" for k, v in zip(self.coords, self.logs)
        )


def l_turn_exponents(params, n):
    """
    Exponents (A_n, B_n) with g_RL(x) in E_{n+1} iff
    x3 < x4^A_n x5^B_n.
    """
    t = params.table
    s = turn_exponent(params, Cycle.L, n)
    a = params.rho * s - params.nu
    b = t["e24"] / t["c25"] * params.rho * s - params.beta
    return a, b


def witness_for_L_turns(n, params, field=None, factor=None, base=None):
    """
    A point leaving the R-cycle whose image under g_RL takes at least
    n + 1 turns around the L-cycle: x4 = x5 = base and x3 a factor
    below the threshold x4^A_n x5^B_n. Requires delta, delta_tilde < 0.
    """
    if n < 1:
        raise PreconditionViolation("n must be positive")
    if params.delta >= 0 or params.delta_tilde >= 0:
        raise PreconditionViolation("witnesses need delta, delta_tilde < 0")
    factor = factor if factor is not None else hetnet_settings.WITNESS_FACTOR
    base = base if base is not None else hetnet_settings.WITNESS_BASE
    a, b = l_turn_exponents(params, n)
    if a <= 0 or b <= 0:
        raise NetworkError(f"threshold exponents {a}, {b} are not positive")
    log_base = math.log(base)
    logs = (math.log(factor) + float(a + b) * log_base, log_base, log_base)
    witness = LogWitness((3, 4, 5), logs)

    if turn_inequality(params, Cycle.R, 0).side_log(logs) is not Side.OUTSIDE:
        raise EmptyRegion(f"witness {witness} stays on the R-cycle")
    if field is not None:
        image = bowtie_maps(field)["g_RL"].apply_log(np.array(logs))
        for k in range(n + 1):
            side = turn_inequality(params, Cycle.L, k).side_log(image)
            if side is not Side.INSIDE:
                raise EmptyRegion(
                    f"image of {witness} fails turn {k + 1} of the L-cycle"
                )
    logger.info("Witness for %d L-turns: %s", n, witness)
    return witness


# SWITCHING ALONG A CYCLE


@dataclass(frozen=True)
class CycleSwitching:
    """Witnesses for every source/destination pair around one cycle."""

    cycle: Cycle
    source_cusp: CuspRegion
    image_cusp: CuspRegion
    witnesses: dict

    def as_rows(self):
        return [
            (self.cycle.value, source, target, str(witness))
            for (source, target), witness in sorted(self.witnesses.items())
        ]


CYCLE_NODES = {Cycle.R: (2, 3, 1), Cycle.L: (2, 4, 5)}


def _check_cusp_sides(source, constraint, logs, entry, carried, source_cusp,
                      image):
    """
    A witness entering from xi_1 exits xi_2 inside the source cusp and
    arrives back inside its image; one entering from xi_5 stays outside
    both.
    """
    values = dict(zip(constraint.coords, logs))
    exit_logs = entry.apply_log([values[k] for k in entry.domain_coords])
    placed = dict(zip(entry.codomain_coords, exit_logs))
    inside = bool(source_cusp.contains_log(
        placed[source_cusp.horizontal], placed[source_cusp.vertical]
    ))
    returned = dict(zip(
        carried.codomain_coords,
        carried.apply_log([placed[k] for k in carried.domain_coords]),
    ))
    inside_image = bool(image.contains_log(
        returned[image.horizontal], returned[image.vertical]
    ))
    expected = source == 1
    if inside != expected or inside_image != expected:
        raise EmptyRegion(
            f"witness from xi_{source} is on the wrong side of {source_cusp}"
            f" or of its image {image}"
        )


def switching_along_cycle_check(field, graph=None):
    """
    For each cycle, the split of H_2^{out,k} by the source (xi_1 or
    xi_5) is a cusp in the x1x5-plane; carried around the cycle it becomes
    a cusp of H_2^{in,j} that meets both destination regions. Each of the
    four walks gets a witness from its domain cone, checked by pushing it
    along the walk.
    """
    if graph is not None and frozenset(graph.edges) != BOWTIE_EDGES:
        raise WiringMismatch("bowtie", BOWTIE_EDGES, graph.edges)
    table = bowtie_table(field)
    n = field.n
    flow = SymbolicFlow(field, graph)
    results = {}
    for cycle, (hub, first, last) in CYCLE_NODES.items():
        eq = {i: equilibrium_data(field, i) for i in (first, last)}
        carried = compose([
            global_map(hub, first, n),
            local_map(eq[first], hub, last),
            local_map(eq[last], first, hub),
            global_map(last, hub, n),
        ])
        source_cusp = CuspRegion(
            (1, 5), table["c25"] / table["c21"], CuspSide.BELOW,
            label="from xi_1",
        )
        image = cusp_image(source_cusp, carried)
        entry = {
            source: local_map(equilibrium_data(field, hub), source, first)
            for source in (1, 5)
        }
        witnesses = {}
        for source in (1, 5):
            for target in (3, 4):
                walk = (source, hub, first, last, hub, target)
                constraint = domain_constraints(field, walk, graph)
                logs = constraint.interior_point()
                if logs is None or not flow.follow(
                        walk, logs.reshape(-1, 1))[0]:
                    raise EmptyRegion(
                        f"no witness for {source}->{target} around"
                        f" the {cycle.value}-cycle"
                    )
                _check_cusp_sides(
                    source, constraint, logs, entry[source], carried,
                    source_cusp, image,
                )
                witnesses[(source, target)] = LogWitness(
                    constraint.section.relevant,
                    tuple(
                        float(logs[constraint.coords.index(k)])
                        for k in constraint.section.relevant
                    ),
                )
        results[cycle] = CycleSwitching(cycle, source_cusp, image, witnesses)
    logger.info("Switching along both Bowtie cycles verified")
    return results


def visit_word(nodes):
    """
    L/R word of a node sequence: R for each use of [xi_3 -> xi_1], L for
    each use of [xi_4 -> xi_5].
    """
    word = []
    for i, j in zip(nodes, nodes[1:]):
        if (i, j) == (3, 1):
            word.append("R")
        elif (i, j) == (4, 5):
            word.append("L")
    return "".join(word)
