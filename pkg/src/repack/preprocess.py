"""Underconstrained-station peeling and the component-solving plan."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Literal, Mapping, Optional, Sequence

from .graph import GraphView, build_interference_graph
from .model import Assignment, Instance, StationId, check, restrict_stations

PeelRule = Literal["weighted", "degree"]


@dataclass(frozen=True)
class PeelWitness:
    station: StationId
    degree: int
    load: int
    domain_size: int


@dataclass(frozen=True)
class PeelResult:
    peeled: tuple[StationId, ...]
    kept: frozenset
    witnesses: tuple[PeelWitness, ...]
    rule: PeelRule = "weighted"

    def to_dict(self) -> dict:
        return {
            "rule": self.rule,
            "peeled": list(self.peeled),
            "kept": sorted(self.kept),
            "witnesses": [
                {"station": w.station, "degree": w.degree, "load": w.load, "domain_size": w.domain_size}
                for w in self.witnesses
            ],
        }


def blocking_weights(instance: Instance) -> dict[StationId, dict[StationId, int]]:
    """``w[s][t]``: most channels of ``s`` that one channel of ``t`` can rule out.

    Only constraints with both endpoints in domain count.  With co-channel
    constraints alone every weight is 1.
    """
    hits: dict[tuple[StationId, StationId, int], int] = {}
    for (s, c), (t, d) in instance.constraints:
        if c not in instance.domains[s] or d not in instance.domains[t]:
            continue
        hits[s, t, d] = hits.get((s, t, d), 0) + 1
        hits[t, s, c] = hits.get((t, s, c), 0) + 1
    w: dict[StationId, dict[StationId, int]] = {s: {} for s in instance.domains}
    for (s, t, _), k in hits.items():
        if k > w[s].get(t, 0):
            w[s][t] = k
    return w


def peel_underconstrained(instance: Instance, rule: PeelRule = "weighted", single_pass: bool = False) -> PeelResult:
    """Remove stations that can always be packed, whatever the others do.

    ``rule="degree"`` peels ``s`` when ``|C_s| > d_H(s)``.  That test only
    guarantees a free channel when every constraint is co-channel, so the
    default ``"weighted"`` rule instead compares ``|C_s|`` with the number
    of channels the neighbours can rule out in the worst case; for
    co-channel data the two coincide.  Removal repeats until no station
    qualifies, smallest id first; ``single_pass`` tests every station once
    against the unreduced graph.
    """
    if rule == "degree":
        H = build_interference_graph(instance)
        weights = {s: {t: 1 for t in H.neighbors(s)} for s in instance.stations}
    elif rule == "weighted":
        weights = blocking_weights(instance)
    else:
        raise ValueError(f"unknown peel rule {rule!r}")

    size = {s: len(c) for s, c in instance.domains.items()}
    load = {s: sum(w.values()) for s, w in weights.items()}
    degree = {s: len(w) for s, w in weights.items()}

    def qualifies(s):
        return size[s] > load[s]

    if single_pass:
        peeled = [s for s in instance.stations if qualifies(s)]
        witnesses = [PeelWitness(s, degree[s], load[s], size[s]) for s in peeled]
        return PeelResult(tuple(peeled), frozenset(instance.stations).difference(peeled), tuple(witnesses), rule)

    alive = set(instance.stations)
    heap = [s for s in instance.stations if qualifies(s)]
    heapq.heapify(heap)
    peeled, witnesses = [], []
    while heap:
        s = heapq.heappop(heap)
        if s not in alive:
            continue
        alive.discard(s)
        peeled.append(s)
        witnesses.append(PeelWitness(s, degree[s], load[s], size[s]))
        for t in weights[s]:
            if t not in alive:
                continue
            was = qualifies(t)
            load[t] -= weights[t][s]
            degree[t] -= 1
            if not was and qualifies(t):
                heapq.heappush(heap, t)
    return PeelResult(tuple(peeled), frozenset(alive), tuple(witnesses), rule)


class ExtensionError(RuntimeError):
    """Peeled stations could not be added to the assignment."""


def extend(f: Assignment, peel: PeelResult, instance: Instance) -> dict[StationId, int]:
    """Assign the peeled stations on top of ``f``, last peeled first.

    Each station takes its least channel that conflicts with no station
    assigned so far.  Should none exist (possible only for stations peeled
    by the degree rule on data with non-zero offsets), the stations still
    unassigned are solved exactly against the fixed part; if that fails too,
    :class:`ExtensionError` is raised.
    """
    out = dict(f)
    partners: dict = {}
    for a, b in instance.constraints:
        partners.setdefault(a, []).append(b)
        partners.setdefault(b, []).append(a)

    def blocked(s):
        return {c for c in instance.domains[s] for t, d in partners.get((s, c), ()) if out.get(t) == d}

    order = list(reversed(peel.peeled))
    for i, s in enumerate(order):
        free = sorted(instance.domains[s] - blocked(s))
        if free:
            out[s] = free[0]
            continue
        rest = _solve_residual(instance, out, order[i:])
        if rest is None:
            raise ExtensionError(f"no channel left for peeled station {s}")
        out.update(rest)
        break
    if check(instance, out):
        raise ExtensionError("extended assignment violates the instance")
    return out


def _solve_residual(instance: Instance, fixed: Mapping, stations: Sequence[StationId]):
    # channels of the residual stations that clash with a fixed station are removed
    from .solver import feasibility

    sub = restrict_stations(instance, set(stations) | set(fixed))
    doms = {}
    for s in stations:
        bad = set()
        for (a, c), (b, d) in sub.constraints:
            if a == s and fixed.get(b) == d:
                bad.add(c)
            elif b == s and fixed.get(a) == c:
                bad.add(d)
        doms[s] = sub.domains[s] - bad
    core = Instance(
        tuple(con for con in sub.constraints if con.a.station in doms and con.b.station in doms), doms
    )
    report = feasibility(core, peel=False)
    return report.witness if report.feasible else None


@dataclass(frozen=True)
class ComponentPlan:
    """Components of ``G_I'`` in solve order with per-station bookkeeping.

    ``counts[i][s]`` is how many of ``s``'s vertices sit in component ``i``;
    ``fully_local[i]`` holds the stations whose last unseen vertices are in
    component ``i``.
    """

    components: tuple[tuple[int, ...], ...]
    counts: tuple[Mapping[StationId, int], ...]
    totals: Mapping[StationId, int]
    fully_local: tuple[frozenset, ...]

    def __len__(self):
        return len(self.components)


def plan_components(view: GraphView, stations=None) -> ComponentPlan:
    from .graph import components

    comps = tuple(components(view))
    totals: dict[StationId, int] = {}
    for v in range(view.n):
        s = view.station_of(v)
        totals[s] = totals.get(s, 0) + 1
    if stations is not None:
        for s in stations:
            totals.setdefault(s, 0)
    remaining = dict(totals)
    counts, local = [], []
    for comp in comps:
        here: dict[StationId, int] = {}
        for v in comp:
            s = view.station_of(v)
            here[s] = here.get(s, 0) + 1
        done = set()
        for s, k in here.items():
            remaining[s] -= k
            if remaining[s] == 0:
                done.add(s)
        counts.append(here)
        local.append(frozenset(done))
    return ComponentPlan(comps, tuple(counts), totals, tuple(local))


@dataclass(frozen=True)
class Exhausted:
    station: StationId
    component: int


def early_infeasible(plan: ComponentPlan, chosen, after: int, since: int = 0) -> Optional[Exhausted]:
    """Report a station whose vertices are all seen by component ``after`` yet has no channel.

    ``chosen`` is any container of the stations assigned so far.  A caller
    checking after every component can pass ``since=after``.
    """
    for i in range(since, after + 1):
        for s in sorted(plan.fully_local[i]):
            if s not in chosen:
                return Exhausted(s, after)
    return None
