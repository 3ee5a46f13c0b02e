"""
Analysis runners for the Networks Application.
Each runner takes a built network and the resolved analysis keys, calls
the switching or Bowtie operations, and fills a Report with plot-ready
tables. Verdicts never change the exit status; only errors do.
"""

import logging

import numpy as np

from .bowtie import (
    Cycle,
    TurnBound,
    bowtie_table,
    classify_transition,
    compute_parameters,
    max_turns,
    switching_along_cycle_check,
    turn_exponent,
    turn_inequality,
    witness_for_L_turns,
)
from .exceptions import (
    DegenerateCusp,
    EmptyRegion,
    NetworkError,
    WiringMismatch,
)
from .maps import Side, domain_constraints, format_rational, path_realizable
from .switching import (
    CommonConnectionConfig,
    GridSpec,
    PsiKind,
    analyze_common_connection,
    assumption1_check,
    common_connection_evidence,
    cusp_relations,
    house_regions,
    sequence_corollary_check,
    verify_shadowing,
)

logger = logging.getLogger(__name__)

# Sample magnitudes for transition witnesses and turn tables
TRANSITION_GRID = np.geomspace(0.5, 1e-12, 25)
TURN_TABLE_BASES = (1e-1, 1e-2, 1e-3)


def _grid(values):
    return GridSpec.from_settings(
        points=values.get("points"),
        epsilon=values.get("epsilon"),
        decades=values.get("decades"),
    )


def _point_text(coords, point):
    return ", ".join(f"x{k}={v:.6g}" for k, v in zip(coords, point))


# COMMON CONNECTION


def common_connection_config(field, graph, values):
    """Config of the common-connection analysis, wiring checked."""
    first, second = values["first"], values["second"]
    alpha, a, beta, b = (values[k] for k in ("alpha", "a", "beta", "b"))
    expected = {
        (first, second), (alpha, first), (a, first),
        (second, beta), (second, b),
    }
    if not expected <= graph.edges:
        raise WiringMismatch("common-connection", expected, graph.edges)
    kappa = values.get("kappa") if values.get("psi") == "general" else None
    return CommonConnectionConfig.from_field(
        field, first, second, alpha, a, beta, b, kappa=kappa
    )


def run_common_connection(field, graph, values, report):
    cfg = common_connection_config(field, graph, values)
    verdict = analyze_common_connection(cfg)
    report.add_section("common_connection", [
        ("connection", f"{cfg.first}->{cfg.second}"),
        ("psi", cfg.psi.value),
        ("c_1a/c_1alpha", format_rational(cfg.incoming_ratio)),
        ("e_2b/e_2beta", format_rational(cfg.outgoing_ratio)),
        ("planes_match", assumption1_check(cfg)),
        ("missing", ", ".join(verdict.missing()) or "none"),
        ("reason", verdict.reason),
    ])

    grid = _grid(values)
    evidence = {}
    if assumption1_check(cfg):
        evidence = common_connection_evidence(cfg, grid.epsilon, grid.points)
    rows = []
    for name, status in verdict.as_rows():
        point = evidence.get(name)
        rows.append((
            name, status,
            "" if point is None else point[0],
            "" if point is None else point[1],
        ))
    report.add_table("paths", ["path", "status", "h", "v"], rows)

    if assumption1_check(cfg) and cfg.psi is PsiKind.IDENTITY:
        try:
            relations = cusp_relations(
                cfg.incoming_cusps()["a"], cfg.outgoing_regions()["b"],
                grid.epsilon,
            )
        except DegenerateCusp as exc:
            logger.warning("No cusp relations: %s", exc)
        else:
            report.add_table("cusps", ["relation", "value"],
                             relations.as_rows())
    return verdict


# HOUSE


def run_house(field, graph, values, report):
    regions = house_regions(field, graph, values.get("factor"),
                            values.get("base"))
    rows = [
        (region.source, region.target, region.describe(), *region.witness)
        for region in regions
    ]
    report.add_table(
        "regions", ["source", "target", "inequalities", "x3", "x4", "x5"],
        rows,
    )
    report.add_section("house", [
        (f"{region.source}->{region.target}", "Witness")
        for region in regions
    ])
    return regions


# BOWTIE


def turn_table_points(params, cycle, turns):
    """
    Entry-section points that take exactly k turns for k = 1..turns:
    the second coordinate sits between the thresholds of s_{k-1} and s_k.
    """
    exponents = [turn_exponent(params, cycle, k) for k in range(turns + 1)]
    points = []
    for base in TURN_TABLE_BASES:
        for k in range(1, turns + 1):
            low, high = exponents[k - 1], exponents[k]
            if high <= low:
                continue
            middle = float(low + high) / 2
            # (x3, x4, x5) on the R side, (x1, x3, x4) on the L side
            points.append((k, (base, base ** middle, base)))
    return points


def transition_witnesses(params, cycle):
    """First grid point of each transition class for a cycle."""
    found = {}
    for first in TRANSITION_GRID:
        for second in TRANSITION_GRID:
            for third in TRANSITION_GRID:
                point = (first, second, third)
                if turn_inequality(params, cycle, 0).side(point) \
                        is not Side.OUTSIDE:
                    continue
                kind = classify_transition(point, params, cycle)
                found.setdefault(kind, point)
        if len(found) >= 2:
            break
    return found


def run_bowtie(field, graph, values, report):
    params = compute_parameters(bowtie_table(field, graph))
    turns = values.get("turns", 3)
    report.add_table("parameters", ["name", "exact", "value"],
                     [(name, format_rational(exact), value)
                      for name, exact, value in params.as_rows()])

    count = max(10, turns + 1)
    report.add_table(
        "turn_exponents", ["n", "s_R", "s_L"],
        [(n, format_rational(turn_exponent(params, Cycle.R, n)),
          format_rational(turn_exponent(params, Cycle.L, n)))
         for n in range(count)],
    )

    rows = []
    for cycle in Cycle:
        for expected, point in turn_table_points(params, cycle, turns):
            try:
                result = max_turns(point, params, cycle)
            except NetworkError as exc:
                result = f"error: {exc}"
            if isinstance(result, TurnBound):
                result = result.value
            rows.append((cycle.value, *point, expected, result))
    report.add_table(
        "max_turns", ["cycle", "p1", "p2", "p3", "expected", "max_turns"],
        rows,
    )

    rows = []
    for cycle, coords in ((Cycle.R, (3, 4, 5)), (Cycle.L, (1, 3, 4))):
        for kind, point in transition_witnesses(params, cycle).items():
            rows.append((cycle.value, kind.value, _point_text(coords, point)))
    report.add_table("transitions", ["cycle", "transition", "witness"], rows)

    rows = []
    if params.delta < 0 and params.delta_tilde < 0:
        for n in range(1, turns + 1):
            witness = witness_for_L_turns(
                n, params, field, values.get("factor"), values.get("base")
            )
            rows.append((n, *witness.logs))
    else:
        logger.warning("delta or delta_tilde is not negative: no L-turn"
                       " witnesses")
    report.add_table("l_turn_witnesses",
                     ["n", "log_x3", "log_x4", "log_x5"], rows)

    rows = []
    try:
        switching = switching_along_cycle_check(field, graph)
    except EmptyRegion as exc:
        logger.warning("Switching along a cycle not verified: %s", exc)
    else:
        for result in switching.values():
            rows.extend(result.as_rows())
    report.add_table("cycle_switching",
                     ["cycle", "source", "target", "witness"], rows)

    report.add_section("bowtie", [
        ("delta", format_rational(params.delta)),
        ("delta_tilde", format_rational(params.delta_tilde)),
        ("rho", format_rational(params.rho)),
        ("rho_tilde", format_rational(params.rho_tilde)),
        ("turns", turns),
    ])
    return params


# SHADOWING AND CHAINS


def run_shadow(field, graph, values, report):
    walk = tuple(values["walk"])
    grid = _grid(values)
    result = verify_shadowing(field, walk, grid, graph)
    constraint = domain_constraints(field, walk, graph)
    exact = path_realizable(field, walk, graph)
    report.add_section("shadow", [
        ("walk", " -> ".join(str(node) for node in walk)),
        ("section", result.section),
        ("status", result.status),
        ("checked", result.checked),
        ("grid", grid),
        ("domain", constraint),
        ("cone_feasible", exact),
    ])
    report.add_table(
        "witness", ["coordinate", "value"],
        list(zip(result.coords, result.witness)) if result.found else [],
    )
    return result


def run_chain(field, graph, values, report):
    verdict = sequence_corollary_check(
        field, values["chain"], values["alpha"], values["a"],
        values["beta"], values["b"], graph,
    )
    report.add_section("chain", [
        ("chain", " -> ".join(str(node) for node in values["chain"])),
        ("missing", ", ".join(verdict.missing()) or "none"),
        ("reason", verdict.reason),
    ])
    report.add_table("paths", ["path", "status"], verdict.as_rows())
    return verdict


RUNNERS = {
    "common-connection": run_common_connection,
    "house": run_house,
    "bowtie": run_bowtie,
    "shadow": run_shadow,
    "chain": run_chain,
}
