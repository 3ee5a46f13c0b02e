"""
Numerical integration of simplex fields and itinerary recording.
Trajectories are integrated in the logarithms of the nonzero coordinates,
where d log|x_k| / dt = g_k(x), so coordinates far below the tolerances
keep their relative accuracy and zero coordinates stay exactly zero.
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dataclass_field, replace
from itertools import groupby

import numpy as np
from scipy.integrate import solve_ivp

from .bowtie import visit_word
from .conf import hetnet_settings
from .exceptions import (
    Blowup,
    ItineraryError,
    NoEvents,
    PreconditionViolation,
    StepFailure,
)
from .maps import SymbolicFlow, incoming_section

logger = logging.getLogger(__name__)

METHODS = ("RK45", "DOP853")

# Relative slack when testing |x_m| <= epsilon at a crossing
BOX_SLACK = 1e-9


@dataclass(frozen=True)
class IntegratorConfig:
    method: str = "DOP853"
    rtol: float = 1e-10
    atol: float = 1e-10
    max_step: float = 2.0
    t_max: float = 2000.0
    max_events: int = 64
    blowup_norm: float = 2.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise PreconditionViolation(
                f"method must be one of {', '.join(METHODS)}"
            )
        if self.rtol <= 0 or self.atol <= 0:
            raise PreconditionViolation("tolerances must be positive")
        if self.max_step <= 0 or self.t_max <= 0 or self.max_events < 1:
            raise PreconditionViolation("step, time and event limits must"
                                        " be positive")

    @classmethod
    def from_settings(cls, **overrides):
        values = dict(hetnet_settings.INTEGRATOR)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


def _to_state(signs, logs):
    """
    Physical coordinates from the logarithms of the nonzero ones; signs
    holds -1, 0 or 1 per coordinate. Accepts a vector or a d x N array.
    """
    logs = np.asarray(logs, dtype=float)
    active = signs != 0
    x = np.zeros((signs.size,) + logs.shape[1:])
    scale = signs[active].reshape((-1,) + (1,) * (logs.ndim - 1))
    x[active] = scale * np.exp(logs)
    return x


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    x: np.ndarray
    solution: object = dataclass_field(repr=False, compare=False)
    signs: np.ndarray = dataclass_field(default=None, repr=False,
                                        compare=False)

    def samples(self, count):
        """Evenly spaced samples of the dense output, as (t, x) arrays."""
        times = np.linspace(self.t[0], self.t[-1], count)
        return times, _to_state(self.signs, self.solution.sol(times)).T

    def rows(self, count):
        """Samples as (t, x_1, ..., x_n) tuples for reports."""
        times, states = self.samples(count)
        return tuple(
            (float(t), *(float(v) for v in x))
            for t, x in zip(times, states)
        )

    @property
    def final(self):
        return self.x[-1]


def _rhs(field, signs):
    a = field.as_array()
    active = signs != 0

    def rhs(_, logs):
        return field.growth_rates(_to_state(signs, logs), a)[active]

    return rhs


def _blowup_event(cfg):
    def blowup(_, logs):
        return np.linalg.norm(np.exp(logs)) - cfg.blowup_norm

    blowup.terminal = True
    blowup.direction = 1
    return blowup


def _solve(field, x0, cfg, events):
    x0 = np.asarray(x0, dtype=float)
    if not np.all(np.isfinite(x0)):
        raise PreconditionViolation("initial condition is not finite")
    if not np.any(x0):
        raise PreconditionViolation("the origin is an equilibrium")
    if np.linalg.norm(x0) >= cfg.blowup_norm:
        raise Blowup(f"|x0| = {np.linalg.norm(x0):g} is beyond the bound")
    signs = np.sign(x0)
    solution = solve_ivp(
        _rhs(field, signs),
        (0.0, cfg.t_max),
        np.log(np.abs(x0[signs != 0])),
        method=cfg.method,
        rtol=cfg.rtol,
        atol=cfg.atol,
        max_step=cfg.max_step,
        dense_output=True,
        events=[_blowup_event(cfg), *events],
    )
    if solution.status == -1:
        raise StepFailure(solution.message)
    if solution.t_events[0].size:
        raise Blowup(
            f"|x| reached {cfg.blowup_norm} at t={solution.t_events[0][0]:g}"
        )
    return solution, signs


def integrate(field, x0, cfg=None):
    """Integrate the field from x0 up to t_max with dense output."""
    cfg = cfg or IntegratorConfig.from_settings()
    solution, signs = _solve(field, x0, cfg, [])
    logger.debug("Integrated %d steps to t=%g", solution.t.size,
                 solution.t[-1])
    return Trajectory(solution.t, _to_state(signs, solution.y).T, solution,
                      signs)


# ITINERARIES


@dataclass(frozen=True)
class Visit:
    node: int
    entry_time: float
    exit_time: float
    entry_point: tuple

    def as_row(self):
        return (self.node, self.entry_time, self.exit_time,
                *self.entry_point)


@dataclass(frozen=True)
class Itinerary:
    visits: tuple
    epsilon: float
    trajectory: Trajectory = dataclass_field(default=None, repr=False,
                                             compare=False)

    @property
    def nodes(self):
        return [visit.node for visit in self.visits]

    def word(self):
        """L/R word of the Bowtie visit conventions."""
        return visit_word(self.nodes)


def _crossing_events(positions, epsilon):
    """Down- and up-crossings of log|x_k| through log(epsilon)."""
    level = math.log(epsilon)
    events = []
    for position in positions:
        def down(_, logs, position=position):
            return logs[position] - level

        def up(_, logs, position=position):
            return logs[position] - level

        down.direction = -1
        up.direction = 1
        events.extend([down, up])
    return events


def _box_node(x, epsilon):
    """Node whose box |x_m| <= epsilon (m != node) holds x, or None."""
    magnitudes = np.abs(x)
    j = int(np.argmax(magnitudes))
    others = np.delete(magnitudes, j)
    if np.all(others <= epsilon * (1.0 + BOX_SLACK)):
        return j + 1
    return None


def record_itinerary(field, x0, epsilon=None, cfg=None, graph=None,
                     strict=False):
    """
    Integrate from x0 and record each visit to the box of an equilibrium,
    where every other coordinate is at most epsilon. A visit starts when a
    coordinate falls through epsilon and leaves the trajectory in a box;
    it ends when any other coordinate rises through epsilon.

    With a graph, the visits are cut at the first transition without a
    connection; strict raises ItineraryError there instead.
    """
    epsilon = epsilon or hetnet_settings.VISIT_RADIUS
    if not 0 < epsilon < math.sqrt(2) / 2:
        raise PreconditionViolation(
            "epsilon must be below half the distance between equilibria"
        )
    cfg = cfg or IntegratorConfig.from_settings()
    x0 = np.asarray(x0, dtype=float)
    coords = [k for k in range(1, field.n + 1) if x0[k - 1] != 0]
    solution, signs = _solve(
        field, x0, cfg, _crossing_events(range(len(coords)), epsilon)
    )

    crossings = []
    for position, k in enumerate(coords):
        for offset, kind in ((1, "down"), (2, "up")):
            index = 2 * position + offset
            crossings.extend(
                (t, k, kind, _to_state(signs, logs))
                for t, logs in zip(solution.t_events[index],
                                   solution.y_events[index])
            )
    crossings.sort(key=lambda item: item[0])

    visits = []
    current = None
    node = _box_node(x0, epsilon)
    if node is not None:
        current = [node, 0.0, None, tuple(x0)]
    for time, k, kind, x in crossings:
        if kind == "down":
            node = _box_node(x, epsilon)
            if node is None or node == k:
                continue
            if current is not None and current[0] != node:
                current[2] = time
                visits.append(current)
                current = None
            if current is None:
                current = [node, time, None, tuple(float(v) for v in x)]
        elif current is not None and k != current[0]:
            current[2] = time
            visits.append(current)
            current = None
        if len(visits) >= cfg.max_events:
            break
    if current is not None and len(visits) < cfg.max_events:
        visits.append(current)

    merged = []
    for node, entry_time, exit_time, point in visits:
        exit_time = exit_time if exit_time is not None else math.inf
        if merged and merged[-1].node == node:
            merged[-1] = replace(merged[-1], exit_time=exit_time)
            continue
        merged.append(Visit(node, entry_time, exit_time, point))
    if not merged:
        raise NoEvents("the trajectory never came near an equilibrium")
    if graph is not None:
        merged = _connected_prefix(merged, graph, strict)
    trajectory = Trajectory(solution.t, _to_state(signs, solution.y).T,
                            solution, signs)
    itinerary = Itinerary(tuple(merged), epsilon, trajectory)
    logger.debug("Itinerary %s", itinerary.nodes)
    return itinerary


def _connected_prefix(visits, graph, strict):
    for position, (before, after) in enumerate(zip(visits, visits[1:])):
        if (before.node, after.node) in graph.edges:
            continue
        message = (
            f"visit to xi_{after.node} at t={after.entry_time:g} after"
            f" xi_{before.node} does not follow a connection"
        )
        if strict:
            raise ItineraryError(message)
        logger.warning("%s; itinerary cut after %d visits", message,
                       position + 1)
        return visits[:position + 1]
    return visits


# PREDICTIONS


def connection_shifts(field, graph, h=None, cfg=None):
    """
    Log-coordinate corrections to the identity global maps, one per
    connection [j -> k]: the growth exp(int g_m dt) every transverse
    coordinate picks up while the flow in the x_j x_k plane carries
    x_k = h to x_j = h. Aligned with the active coordinates of
    H_k^{in,j}, with 0 for the radial one.
    """
    h = h or hetnet_settings.SECTION_OFFSET
    cfg = cfg or IntegratorConfig.from_settings()
    n = field.n
    a = field.as_array()
    shifts = {}
    for j, k in sorted(graph.edges):
        def rhs(_, state, j=j, k=k):
            x = np.zeros(n)
            x[j - 1], x[k - 1] = state[0], state[1]
            growth = field.growth_rates(x, a)
            return np.concatenate([
                [x[j - 1] * growth[j - 1], x[k - 1] * growth[k - 1]],
                growth,
            ])

        def arrival(_, state):
            return state[0] - h

        arrival.terminal = True
        arrival.direction = -1
        solution = solve_ivp(
            rhs,
            (0.0, cfg.t_max),
            np.concatenate([[math.sqrt(1.0 - h * h), h], np.zeros(n)]),
            method=cfg.method,
            rtol=cfg.rtol,
            atol=cfg.atol,
            max_step=cfg.max_step,
            events=[arrival],
        )
        if solution.status != 1:
            raise NoEvents(f"connection [{j} -> {k}] never reached"
                           f" H_{k}^in,{j}")
        growth = solution.y_events[0][0][2:]
        section = incoming_section(k, j, n, h)
        shifts[(j, k)] = np.array([
            0.0 if m == k else float(growth[m - 1]) for m in section.active
        ])
        logger.debug("Connection [%d -> %d] shift %s", j, k, shifts[(j, k)])
    return shifts


def section_point(n, node, source, values, h=None):
    """
    Physical point near xi_node on H_node^{in,source}: the fixed
    coordinate is h, a relevant coordinate with normalized value y is
    y * h and the radial coordinate puts the point on the unit sphere.
    """
    h = h or hetnet_settings.SECTION_OFFSET
    section = incoming_section(node, source, n, h)
    x = np.zeros(n)
    x[source - 1] = h
    for k in section.relevant:
        x[k - 1] = float(values.get(k, 0.0)) * h
    rest = float(np.sum(x * x))
    if rest >= 1:
        raise PreconditionViolation("section point is off the unit ball")
    x[node - 1] = math.sqrt(1.0 - rest)
    return x


def predict_nodes(field, x0, source, node, steps, graph=None, h=None,
                  shifts=None):
    """
    Node sequence the linearized maps predict for a section point;
    shifts from connection_shifts correct the global maps.
    """
    h = h or hetnet_settings.SECTION_OFFSET
    section = incoming_section(node, source, field.n, h)
    logs = np.zeros(len(section.active))
    for k in section.relevant:
        if x0[k - 1] <= 0:
            raise PreconditionViolation(
                "predictions need positive relevant coordinates"
            )
        logs[section.active.index(k)] = math.log(x0[k - 1] / h)
    flow = SymbolicFlow(field, graph, shifts)
    return flow.itinerary(source, node, logs, steps)


def predict_word(field, x0, source, node, steps, graph=None, h=None,
                 shifts=None):
    return visit_word(
        predict_nodes(field, x0, source, node, steps, graph, h, shifts)
    )


@dataclass(frozen=True)
class Agreement:
    predicted: str
    observed: str
    prefix: int
    turn_deltas: tuple

    def agrees(self, k):
        return self.prefix >= k


def _runs(word):
    return [(letter, len(list(group))) for letter, group in groupby(word)]


def compare(predicted, observed, k=None):
    """
    Longest agreeing prefix of two visit words, and per run of equal
    letters the observed minus predicted count while the runs match.
    """
    if isinstance(observed, Itinerary):
        observed = observed.word()
    if not predicted or not observed:
        raise PreconditionViolation("both words must be nonempty")
    if k is not None:
        predicted, observed = predicted[:k], observed[:k]
    prefix = 0
    for p, o in zip(predicted, observed):
        if p != o:
            break
        prefix += 1
    deltas = []
    for (p_letter, p_count), (o_letter, o_count) in zip(
            _runs(predicted), _runs(observed)):
        if p_letter != o_letter:
            break
        deltas.append(o_count - p_count)
    return Agreement(predicted, observed, prefix, tuple(deltas))


# ENSEMBLES


@dataclass(frozen=True)
class EnsembleMember:
    index: int
    values: tuple
    predicted: str
    observed: str
    prefix: int
    error: str = ""
    visits: tuple = dataclass_field(default=(), repr=False)
    samples: tuple = dataclass_field(default=(), repr=False)


@dataclass(frozen=True)
class EnsembleReport:
    members: tuple
    prefix: int
    seed: int

    @property
    def agreeing(self):
        return sum(1 for m in self.members if m.prefix >= self.prefix)

    @property
    def fraction(self):
        return self.agreeing / len(self.members) if self.members else 0.0


def _run_member(task):
    (index, values, field, graph, source, node, epsilon, prefix, h, cfg,
     shifts, samples) = task
    x0 = section_point(field.n, node, source, values, h)
    predicted = predict_word(field, x0, source, node, 4 * prefix + 4,
                             graph, h, shifts)[:prefix]
    try:
        itinerary = record_itinerary(field, x0, epsilon, cfg, graph)
    except (NoEvents, Blowup, StepFailure, ItineraryError) as error:
        return EnsembleMember(index, tuple(values.items()), predicted, "",
                              0, str(error))
    observed = itinerary.word()[:prefix]
    agreement = compare(predicted, observed) if predicted and observed \
        else None
    return EnsembleMember(
        index, tuple(values.items()), predicted, observed,
        agreement.prefix if agreement else 0,
        visits=itinerary.visits,
        samples=itinerary.trajectory.rows(samples) if samples else (),
    )


def run_ensemble(field, graph, count, seed, source=1, node=2, epsilon=None,
                 prefix=5, h=None, cfg=None, workers=None, decades=(-4, -1),
                 calibrate=True, samples=None):
    """
    Sample `count` points of H_node^{in,source} with log-uniform
    normalized coordinates and compare predicted and simulated words.

    Visits are recorded in boxes of radius epsilon, h by default. With
    calibrate the predictions use connection_shifts; every member keeps
    its visits and `samples` points of its trajectory.
    """
    if count < 1:
        raise PreconditionViolation("ensemble needs at least one member")
    cfg = cfg or IntegratorConfig.from_settings()
    workers = workers or hetnet_settings.ENSEMBLE_WORKERS
    h = h or hetnet_settings.SECTION_OFFSET
    epsilon = epsilon or h
    samples = hetnet_settings.TRAJECTORY_SAMPLES if samples is None \
        else samples
    shifts = connection_shifts(field, graph, h, cfg) if calibrate else None
    rng = np.random.default_rng(seed)
    section = incoming_section(node, source, field.n)
    draws = 10.0 ** rng.uniform(decades[0], decades[1],
                                size=(count, len(section.relevant)))
    tasks = [
        (index, dict(zip(section.relevant, map(float, row))), field, graph,
         source, node, epsilon, prefix, h, cfg, shifts, samples)
        for index, row in enumerate(draws)
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            members = list(pool.map(_run_member, tasks))
    else:
        members = [_run_member(task) for task in tasks]
    report = EnsembleReport(tuple(members), prefix, seed)
    logger.info("Ensemble of %d: %d agree on %d visits", count,
                report.agreeing, prefix)
    return report
