"""Constructors for pursuit trajectories on special graph families.

The central tool is a geometric excursion cascade from a hub vertex: probe
durations grow by a factor lambda chosen so that, between visits, certified
evader-free radii on the non-probed arms grow by the same factor.  The star
clearing, the comb station clearing, and the per-vertex securing step used by
the generic traversal strategy all instantiate this cascade with different
stopping rules.  Every constructor returns a finite TimedPath; capture claims
are checked downstream by the verifier at chosen resolution.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .graph import GraphPoint, MetricGraph, double_tree_walk
from .trajectory import PathBuilder, TimedPath

LADDER_TOL = 1e-9
CLEAR_TOL = 1e-12


class StrategyError(ValueError):
    """Raised when a constructor's speed or shape preconditions fail."""


# ----------------------------------------------------------------------
# the cascade growth factor
# ----------------------------------------------------------------------

def lambda_root(k: int, s: float) -> float:
    """Positive root of x^(k-2) + ... + x = (s-1)/2, by bisection.

    This is the per-excursion growth factor of the k-arm cascade; it exceeds
    1 exactly when s > 2k-3.  Speeds at or below that threshold are rejected.
    """
    if k < 3:
        raise StrategyError(f"cascade needs at least 3 arms, got k={k}")
    if not s > 2 * k - 3:
        raise StrategyError(
            f"cascade growth needs speed above {2 * k - 3}, got {s}")
    target = (s - 1) / 2
    if k == 3:
        return target
    lo, hi = 1.0, target + 1.0

    def poly(x: float) -> float:
        return math.fsum(x ** i for i in range(1, k - 1)) - target

    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        if poly(mid) < 0:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    if abs(poly(root)) > 1e-12:
        raise StrategyError(f"growth factor did not converge for k={k}, s={s}")
    return root


# ----------------------------------------------------------------------
# cascade bookkeeping
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class ClearanceState:
    """Certified evader-free radii around the hub after one excursion.

    `radii[arm]` is a distance from the hub below which the evader provably
    cannot sit on that arm (provided it was never captured).  `cleared` holds
    arms whose radius reached the full arm extent.
    """

    index: int
    radii: dict
    cleared: frozenset


def _cascade_update(radii: dict, cleared: set, extents: dict, target: str,
                    duration: float, s: float) -> None:
    """One probe of `target` for `duration` time units at speed s.

    Non-probed arms decay by the probe duration (the evader closes in); the
    probed arm is pushed out to (s-1)/2 times the duration.  A radius
    reaching the arm extent marks the arm cleared.  Radii of arms already
    cleared are left alone: while every active radius covers the probe
    duration, the evader can never slip past the hub.
    """
    for arm, r in radii.items():
        if arm in cleared:
            continue
        if arm != target and r < duration - LADDER_TOL:
            raise StrategyError(
                f"cascade safety violated: arm {arm!r} radius {r} below "
                f"probe duration {duration}")
    boost = (s - 1) * duration / 2
    for arm in radii:
        if arm in cleared:
            continue
        r = radii[arm] - duration
        if arm == target:
            r = max(r, boost)
        radii[arm] = min(max(r, 0.0), extents[arm])
        if radii[arm] >= extents[arm] - CLEAR_TOL:
            cleared.add(arm)


def _ladder_init(arms, lam: float, d0: float) -> dict:
    """Assumed starting radii: 0 on the first target, then a geometric ladder.

    The assumption is harmless at verification time whenever the capture
    radius exceeds the largest ladder value: an evader violating it sits
    within that distance of the hub, where the cop is standing.
    """
    radii = {}
    acc = 0.0
    for i, arm in enumerate(arms):
        if i == 0:
            radii[arm] = 0.0
        else:
            acc = acc * lam + d0 if i > 1 else d0
            radii[arm] = acc
    return radii


def ladder_overhang(k: int, lam: float, d0: float) -> float:
    """Largest assumed initial radius of a (k-1)-arm cascade ladder."""
    return d0 * math.fsum(lam ** i for i in range(k - 2)) if k >= 3 else 0.0


def _arm_runs(g: MetricGraph, hub: str, edge_id: str, depth: float):
    """Out-and-back runs from the hub along one edge to the given depth."""
    e = g.edge(edge_id)
    if e.u == hub:
        out = (edge_id, 0.0, depth)
        back = (edge_id, depth, 0.0)
    else:
        out = (edge_id, e.length, e.length - depth)
        back = (edge_id, e.length - depth, e.length)
    return out, back


# ----------------------------------------------------------------------
# star clearing
# ----------------------------------------------------------------------

@dataclass(frozen=True)
class StarSchedule:
    """The excursion plan of a star clearing run.

    `excursions` lists (arm edge id, absolute start time, duration); probe
    durations grow by `lam` from `d0` while more than one arm stays
    uncleared.  `phase1_end` is when the initial out-and-back on the last arm
    finishes and the cascade clock starts.
    """

    k: int
    s: float
    lam: float
    d0: float
    m_start: int
    center: str
    arm_order: tuple[str, ...]     # cascade arms, rotation order
    final_arm: str                 # probed once in phase 1
    phase1_end: float
    excursions: tuple[tuple[str, float, float], ...]


def _detect_star(g: MetricGraph):
    hubs = [v for v in g.vertices if g.degree(v) >= 2]
    if len(hubs) != 1 or any(g.degree(v) != 1 for v in g.vertices
                             if v != hubs[0]):
        raise StrategyError("graph is not a star: need one hub, all other "
                            "vertices leaves")
    center = hubs[0]
    arms = [e.id for e in g.incident_edges(center)]
    if len(arms) < 3:
        raise StrategyError(f"star clearing needs at least 3 arms, "
                            f"got {len(arms)}")
    return center, arms


def build_star_schedule(g: MetricGraph, s: float,
                        truncation: float) -> StarSchedule:
    """Plan the full excursion cascade for a star at speed s.

    The first probe duration is the largest member of the geometric grid
    lam^(-m(k-1)+1) below the truncation scale; probes then grow by lam,
    rotating over all arms but the last, dropping arms as they clear, until
    one arm remains.
    """
    center, arms = _detect_star(g)
    k = len(arms)
    if truncation <= 0:
        raise StrategyError(f"truncation scale must be positive, "
                            f"got {truncation}")
    lam = lambda_root(k, s)
    log_lam = math.log(lam)
    m_start = max(1, math.floor((1 - math.log(truncation) / log_lam)
                                / (k - 1)) + 1)
    while lam ** (-m_start * (k - 1) + 1) >= truncation:
        m_start += 1
    d0 = lam ** (-m_start * (k - 1) + 1)

    final_arm = arms[-1]
    cascade_arms = arms[:-1]
    extents = {eid: g.edge(eid).length for eid in cascade_arms}
    phase1_end = 2 * g.edge(final_arm).length / s

    radii = _ladder_init(cascade_arms, lam, d0)
    cleared: set[str] = set()
    rotation = deque(cascade_arms)
    excursions = []
    max_extent = max(extents.values())
    budget = (k - 1) * (math.ceil(math.log(max(2 * max_extent / ((s - 1) * d0),
                                               1.0)) / log_lam) + k + 2)
    j = 0
    while len(rotation) > 1:
        if j > budget:
            raise StrategyError("cascade failed to terminate within its "
                                "excursion budget")
        target = rotation[0]
        rotation.rotate(-1)
        duration = d0 * lam ** j
        start = phase1_end + d0 * lam ** j / (lam - 1)
        excursions.append((target, start, duration))
        _cascade_update(radii, cleared, extents, target, duration, s)
        if target in cleared:
            rotation.remove(target)
        j += 1
    return StarSchedule(k, s, lam, d0, m_start, center, tuple(cascade_arms),
                        final_arm, phase1_end, tuple(excursions))


def simulate_clearance(sched: StarSchedule, g: MetricGraph):
    """Replay the free-radius arithmetic over a schedule's excursions.

    Returns one ClearanceState per excursion.  Used to predict termination
    and as an independent check of the schedule builder.
    """
    extents = {eid: g.edge(eid).length for eid in sched.arm_order}
    radii = _ladder_init(list(sched.arm_order), sched.lam, sched.d0)
    cleared: set[str] = set()
    trace = []
    for i, (target, _, duration) in enumerate(sched.excursions):
        _cascade_update(radii, cleared, extents, target, duration, sched.s)
        trace.append(ClearanceState(i, dict(radii), frozenset(cleared)))
    return trace


def star_strategy(g: MetricGraph, s: float,
                  truncation: float | None = None) -> TimedPath:
    """A capturing trajectory on a star with k arms at any speed s > 2k-3.

    Phase 1 walks the last arm out and back.  Phase 2 runs the excursion
    cascade over the other arms, idling at the hub whenever a probe is
    clamped at a leaf, until all arms but one are cleared.  Phase 3 walks to
    the remaining arm's leaf.
    """
    if truncation is None:
        truncation = g.min_edge_length / 100
    sched = build_star_schedule(g, s, truncation)
    center = sched.center
    pb = PathBuilder(g, center, s)
    out, back = _arm_runs(g, center, sched.final_arm,
                          g.edge(sched.final_arm).length)
    half = g.edge(sched.final_arm).length / s
    pb.move_runs([out], half)
    pb.move_runs([back], half)

    cleared: set[str] = set()
    remaining = set(sched.arm_order)
    extents = {eid: g.edge(eid).length for eid in sched.arm_order}
    radii = _ladder_init(list(sched.arm_order), sched.lam, sched.d0)
    for target, start, duration in sched.excursions:
        depth = min(s * duration / 2, extents[target])
        pb.wait_until(start)
        out, back = _arm_runs(g, center, target, depth)
        pb.move_runs([out], depth / s)
        pb.move_runs([back], depth / s)
        _cascade_update(radii, cleared, extents, target, duration, s)
        remaining -= cleared
    if remaining:
        last = sorted(remaining)[0]
        e = g.edge(last)
        leaf = e.v if g.is_leaf(e.v) else e.u
        pb.move_to(leaf, speed=s)
    return pb.build({"kind": "star", "lambda": sched.lam,
                     "truncation": truncation, "m_start": sched.m_start})


# ----------------------------------------------------------------------
# comb clearing
# ----------------------------------------------------------------------

def _detect_comb(g: MetricGraph):
    """Backbone vertices in path order plus their teeth; rejects non-combs."""
    backbone = [v for v in g.vertices if g.degree(v) >= 2]
    teeth = {}
    for v in backbone:
        leaf_edges = [e for e in g.incident_edges(v)
                      if g.is_leaf(e.other(v))]
        spine_edges = [e for e in g.incident_edges(v)
                       if not g.is_leaf(e.other(v))]
        if len(leaf_edges) != 1 or not 1 <= len(spine_edges) <= 2:
            raise StrategyError("graph is not a comb: each backbone vertex "
                                "needs exactly one tooth")
        teeth[v] = leaf_edges[0]
    if len(backbone) < 2:
        raise StrategyError("comb clearing needs at least 2 backbone vertices")
    ends = [v for v in backbone
            if sum(1 for e in g.incident_edges(v)
                   if not g.is_leaf(e.other(v))) == 1]
    if len(ends) != 2:
        raise StrategyError("graph is not a comb: backbone is not a path")
    order = [min(ends)]
    prev = None
    while True:
        v = order[-1]
        nxt = [e.other(v) for e in g.incident_edges(v)
               if not g.is_leaf(e.other(v)) and e.other(v) != prev]
        if not nxt:
            break
        prev = v
        order.append(nxt[0])
    if len(order) != len(backbone):
        raise StrategyError("graph is not a comb: backbone is not a path")
    return order, teeth


def comb_strategy(g: MetricGraph, s: float,
                  truncation: float | None = None) -> TimedPath:
    """A capturing trajectory on an equal-length comb at any speed s > 3.

    Opens by sweeping the first tooth and the first backbone edge.  At each
    interior backbone vertex the two unknown edges (tooth, next backbone
    edge) are cleared by a 2-arm cascade whose probe durations are capped at
    the clearing threshold; equal edge lengths make the cap compatible with
    the safety ladder.  Ends by sweeping the last tooth.
    """
    if not s > 3:
        raise StrategyError(f"comb clearing needs speed above 3, got {s}")
    order, teeth = _detect_comb(g)
    lengths = {e.id: e.length for e in g.edges}
    base = g.edges[0].length
    if any(abs(l - base) > 1e-9 * max(base, 1.0) for l in lengths.values()):
        raise StrategyError("comb clearing needs all edge lengths equal")
    if truncation is None:
        truncation = base / 100
    if truncation <= 0:
        raise StrategyError(f"truncation scale must be positive, "
                            f"got {truncation}")
    lam = lambda_root(3, s)
    cap = 2 * base / (s - 1)
    d0 = min(truncation, cap)

    first_tooth = teeth[order[0]]
    leaf0 = first_tooth.other(order[0])
    pb = PathBuilder(g, leaf0, s)
    pb.move_to(order[0], speed=s)
    pb.move_to(order[1], speed=s)

    for i in range(1, len(order)):
        v = order[i]
        tooth = teeth[v].id
        if i == len(order) - 1:
            pb.move_to(teeth[v].other(v), speed=s)
            break
        spine = next(e.id for e in g.incident_edges(v)
                     if not g.is_leaf(e.other(v)) and e.other(v) == order[i + 1])
        extents = {tooth: lengths[tooth], spine: lengths[spine]}
        radii = {tooth: 0.0, spine: d0}
        cleared: set[str] = set()
        station_start = pb.now
        elapsed = 0.0
        j = 0
        while tooth not in cleared:
            if j > 10000:
                raise StrategyError("station cascade failed to terminate")
            target = tooth if j % 2 == 0 else spine
            duration = min(d0 * lam ** j, cap)
            depth = min(s * duration / 2, extents[target])
            pb.wait_until(station_start + elapsed)
            out, back = _arm_runs(g, v, target, depth)
            pb.move_runs([out], depth / s)
            pb.move_runs([back], depth / s)
            _cascade_update(radii, cleared, extents, target, duration, s)
            cleared.discard(spine)   # evader may re-enter from the far end
            elapsed += duration
            j += 1
        pb.wait_until(station_start + elapsed)
        pb.move_to(order[i + 1], speed=s)
    return pb.build({"kind": "comb", "lambda": lam, "truncation": truncation})


# ----------------------------------------------------------------------
# cycles and sweeps
# ----------------------------------------------------------------------

def _cycle_runs(g: MetricGraph):
    if any(g.degree(v) != 2 for v in g.vertices):
        raise StrategyError("graph is not a cycle: every vertex must have "
                            "degree 2")
    start = min(g.vertices)
    runs = []
    v = start
    e = g.incident_edges(v)[0]
    while True:
        runs.append((e.id, 0.0, e.length) if e.u == v
                    else (e.id, e.length, 0.0))
        v = e.other(v)
        if v == start:
            break
        e = next(x for x in g.incident_edges(v) if x.id != e.id)
    return start, runs


def cycle_loop(g: MetricGraph, s: float, duration: float,
               metadata: dict | None = None) -> TimedPath:
    """Loop around a cycle in a fixed direction at speed s for the duration."""
    if s < 0 or duration <= 0:
        raise StrategyError("cycle loop needs nonnegative speed and positive "
                            "duration")
    start, lap = _cycle_runs(g)
    if s == 0:
        pb = PathBuilder(g, start, 0.0)
        pb.wait(duration)
        return pb.build(metadata)
    total = s * duration
    times = [0.0]
    points = [g.vertex_point(start)]
    routes = []
    walked = 0.0
    i = 0
    while walked < total - 1e-12:
        eid, x0, x1 = lap[i % len(lap)]
        ln = abs(x1 - x0)
        take = min(ln, total - walked)
        x1 = x0 + math.copysign(take, x1 - x0)
        walked += take
        times.append(duration * (walked / total))
        points.append(GraphPoint(eid, x1))
        routes.append(((eid, x0, x1),))
        i += 1
    times[-1] = duration
    return TimedPath(g, tuple(times), tuple(points), tuple(routes), s,
                     dict(metadata or {}))


def cycle_strategy(g: MetricGraph, s: float) -> TimedPath:
    """Full-speed single-direction loop of duration total/(s-1) on a cycle.

    At relative speed s-1 the uncovered arc shrinks to nothing within that
    time; speeds at or below 1 admit indefinite evasion and are rejected.
    """
    if not s > 1:
        raise StrategyError(
            f"cycle pursuit needs speed above 1, got {s}: the evader can "
            f"hold the antipode forever")
    duration = g.total_length / (s - 1)
    return cycle_loop(g, s, duration, {"kind": "cycle"})


def sweep_strategy(g: MetricGraph, s: float, rounds: int = 1,
                   start: str | None = None) -> TimedPath:
    """Walk an edge-covering double-tree route at speed s, `rounds` times.

    Consecutive rounds run the route in alternating directions so they
    concatenate without jumps.  This is the naive baseline: it captures only
    at speeds far above the cascade thresholds, and serves as honest
    low-speed evidence elsewhere.
    """
    if s <= 0:
        raise StrategyError(f"sweep needs positive speed, got {s}")
    if rounds < 1:
        raise StrategyError(f"sweep needs at least one round, got {rounds}")
    if start is None:
        start = min(g.vertices)
    runs = double_tree_walk(g, start)
    pb = PathBuilder(g, start, s)
    for r in range(rounds):
        ordered = runs if r % 2 == 0 else \
            tuple((eid, x1, x0) for eid, x0, x1 in reversed(runs))
        for run in ordered:
            pb.move_runs([run], abs(run[2] - run[1]) / s)
    return pb.build({"kind": "sweep", "rounds": rounds})


# ----------------------------------------------------------------------
# vertex securing and the generic strategy
# ----------------------------------------------------------------------

def _secure_schedule(g: MetricGraph, v: str, s: float, truncation: float):
    """Probe plan around one vertex: (arm, duration) list, radius, total time.

    All incident arms rotate with no pre-cleared arm, so the growth factor
    solves x^(k-1) + ... + x = (s-1)/2, requiring s > 2k-1; the stated
    precondition s > 2k+1 leaves working margin.  Probe depths stay at half
    the shortest incident edge so no neighboring vertex is reached; durations
    grow to the depth cap and hold for one full round.
    """
    k = g.degree(v)
    if not s > 2 * k + 1:
        raise StrategyError(
            f"securing a degree-{k} vertex needs speed above {2 * k + 1}, "
            f"got {s}")
    arms = [e.id for e in g.incident_edges(v)]
    cap = min(g.edge(a).length for a in arms) / 2
    d_cap = 2 * cap / s
    lam = lambda_root(k + 1, s) if k >= 2 else 2.0
    d0 = min(truncation, d_cap)
    extents = {a: cap for a in arms}
    radii = _ladder_init(arms, lam, d0) if k >= 2 else {arms[0]: 0.0}
    for a in radii:
        radii[a] = min(radii[a], cap)
    plan = []
    elapsed = 0.0
    capped = 0
    j = 0
    while capped < k:
        duration = min(d0 * lam ** j, d_cap)
        if duration >= d_cap - 1e-15:
            capped += 1
        target = arms[j % k]
        plan.append((target, duration))
        cleared: set[str] = set()
        _cascade_update(radii, cleared, extents, target, duration, s)
        elapsed += duration
        j += 1
        if j > 100000:
            raise StrategyError("vertex securing failed to terminate")
    eps_v = min(radii.values())
    return plan, eps_v, elapsed


def secure_vertex(g: MetricGraph, v: str, s: float,
                  truncation: float | None = None):
    """Out-and-back cascade over all arms of v, ending back at v.

    Returns (trajectory fragment starting and ending at v, guaranteed
    evader-free radius around v, elapsed time).
    """
    if truncation is None:
        truncation = g.min_edge_length / 100
    plan, eps_v, total = _secure_schedule(g, v, s, truncation)
    pb = PathBuilder(g, v, s)
    t = 0.0
    for target, duration in plan:
        depth = min(s * duration / 2, g.edge(target).length / 2)
        pb.wait_until(t)
        out, back = _arm_runs(g, v, target, depth)
        pb.move_runs([out], depth / s)
        pb.move_runs([back], depth / s)
        t += duration
    pb.wait_until(t)
    return pb.build({"kind": "secure", "vertex": v}), eps_v, total


def sufficient_speed(g: MetricGraph, truncation: float | None = None) -> float:
    """A speed at which the two-pass traversal strategy provably captures.

    Doubles the speed until the smallest secured radius strictly dominates
    the time the evader has to reach a vertex after its securing: two full
    covering walks plus all securing times, with a 10% margin.
    """
    if truncation is None:
        truncation = g.min_edge_length / 100
    lam_total = g.total_length
    s = max(2 * g.degree(v) + 1 for v in g.vertices) + 1.0
    for _ in range(200):
        metrics = [_secure_schedule(g, v, s, min(truncation, lam_total / s))
                   for v in g.vertices]
        eps_min = min(m[1] for m in metrics)
        t_total = 4 * lam_total / s + sum(m[2] for m in metrics)
        if eps_min > 1.1 * t_total:
            return s
        s *= 2
    raise StrategyError("no sufficient speed found")


def finiteness_strategy(g: MetricGraph, s: float,
                        truncation: float | None = None) -> TimedPath:
    """Capture on an arbitrary connected graph at any high enough speed.

    Pass 1 walks an edge-covering route, securing an evader-free radius
    around every vertex at its first visit; pass 2 repeats the covering walk,
    reaching every point before the evader can slip past a vertex.
    """
    if truncation is None:
        truncation = g.min_edge_length / 100
    s_needed = sufficient_speed(g, truncation)
    if s < s_needed:
        raise StrategyError(
            f"two-pass traversal needs speed at least {s_needed:g} on this "
            f"graph, got {s}")
    trunc = min(truncation, g.total_length / s)
    start = min(g.vertices)
    runs = double_tree_walk(g, start)
    pb = PathBuilder(g, start, s)

    def secure_into(v: str):
        plan, _, _ = _secure_schedule(g, v, s, trunc)
        t = pb.now
        for target, duration in plan:
            depth = min(s * duration / 2, g.edge(target).length / 2)
            pb.wait_until(t)
            out, back = _arm_runs(g, v, target, depth)
            pb.move_runs([out], depth / s)
            pb.move_runs([back], depth / s)
            t += duration
        pb.wait_until(t)

    visited = {start}
    secure_into(start)
    for eid, x0, x1 in runs:
        pb.move_runs([(eid, x0, x1)], abs(x1 - x0) / s)
        e = g.edge(eid)
        w = e.v if x1 > x0 else e.u
        if w not in visited:
            visited.add(w)
            secure_into(w)
    pb.move_to(start, speed=s)
    for eid, x0, x1 in runs:
        pb.move_runs([(eid, x0, x1)], abs(x1 - x0) / s)
    return pb.build({"kind": "finiteness", "truncation": trunc,
                     "sufficient_speed": s_needed})
