"""Feasibility and minimum-max-channel solving through the constraint graph.

The feasibility pipeline peels underconstrained stations, solves the
components of ``G_I'`` smallest first, and extends the result back over the
peeled stations.  Whenever the component-by-component choices paint
themselves into a corner, the connected component of ``G`` involved is
re-solved exactly, so the verdict never depends on the heuristic.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Iterable, Literal, Optional

from .graph import (
    ConstraintGraph,
    augment_within_components,
    build_constraint_graph,
    component_labels,
    interference_subgraph,
)
from .mis import MisResult, solve_mis
from .model import Instance, StationId, check, cost, restrict_channels, restrict_stations
from .preprocess import ExtensionError, PeelRule, early_infeasible, extend, peel_underconstrained, plan_components

REPORT_VERSION = 1


@dataclass(frozen=True)
class InfeasibilityReason:
    kind: Literal["empty-domain", "exhausted-station", "alpha-deficit"]
    station: Optional[StationId] = None
    alpha: Optional[int] = None
    needed: Optional[int] = None

    def to_dict(self) -> dict:
        out: dict = {"kind": self.kind}
        for key in ("station", "alpha", "needed"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        return out


@dataclass(frozen=True)
class SolveReport:
    verdict: Literal["feasible", "infeasible"]
    witness: Optional[dict] = None
    optimal_cost: Optional[int] = None
    stages: dict = field(default_factory=dict)
    infeasibility_reason: Optional[InfeasibilityReason] = None
    feasibility_calls: int = 0
    timings: dict = field(default_factory=dict, compare=False)

    @property
    def feasible(self) -> bool:
        return self.verdict == "feasible"

    @property
    def cost(self) -> Optional[int]:
        return max(self.witness.values()) if self.witness else None

    def to_dict(self, timings: bool = False) -> dict:
        out: dict = {"version": REPORT_VERSION, "verdict": self.verdict}
        if self.witness is not None:
            out["witness"] = {str(s): c for s, c in sorted(self.witness.items())}
            out["cost"] = self.cost
        if self.optimal_cost is not None:
            out["optimal_cost"] = self.optimal_cost
        if self.feasibility_calls:
            out["feasibility_calls"] = self.feasibility_calls
        if self.infeasibility_reason is not None:
            out["infeasibility_reason"] = self.infeasibility_reason.to_dict()
        out["stages"] = self.stages
        if timings:
            out["timings"] = self.timings
        return out


def combine(choices: Iterable[Iterable], stations: Optional[Iterable[StationId]] = None) -> dict[StationId, int]:
    """Merge per-component selections of ``(station, channel)`` pairs.

    A station picked in more than one component keeps its lowest channel.
    """
    keep = None if stations is None else set(stations)
    out: dict[StationId, int] = {}
    for chosen in choices:
        for s, c in chosen:
            if keep is not None and s not in keep:
                continue
            if s not in out or c < out[s]:
                out[s] = c
    return dict(sorted(out.items()))


@dataclass
class _Record:
    index: int
    size: int
    nodes: int
    seconds: float
    status: Literal["ok", "fallback", "failed"]
    early_hit: bool = False


@dataclass
class _GroupState:
    components: list[int]
    assigned: dict = field(default_factory=dict)
    records: list[_Record] = field(default_factory=list)
    failure: Optional[InfeasibilityReason] = None


def _run_group(G: ConstraintGraph, GIp, plan, state: _GroupState, require_local: bool):
    """Solve one connected component of ``G`` piece by piece; yields after each piece."""
    assigned = state.assigned
    for i in state.components:
        comp = plan.components[i]
        active = [v for v in comp if G.station_of(v) not in assigned]
        required = [s for s in plan.fully_local[i] if s not in assigned] if require_local else None
        started = time.perf_counter()
        if active:
            res = solve_mis(GIp, required=required, within=active)
        else:
            res = MisResult(frozenset(), 0, 0)
        trigger = None
        stuck = res is None
        if res is not None:
            for v in sorted(res.vertices):
                assigned[G.station_of(v)] = v
            hit = early_infeasible(plan, assigned, i, since=i)
            if hit is not None:
                trigger, stuck = hit.station, True
        if not stuck:
            rec = _Record(i, len(comp), res.node_count, time.perf_counter() - started, "ok")
            state.records.append(rec)
            yield rec
            continue

        # the piecewise choices failed: settle the whole component of G exactly
        verts = sorted(v for j in state.components for v in plan.components[j])
        stations = {G.station_of(v) for v in verts}
        exact = solve_mis(G, within=verts, limit=len(stations))
        nodes = (res.node_count if res else 0) + exact.node_count
        seconds = time.perf_counter() - started
        if exact.alpha == len(stations):
            assigned.clear()
            assigned.update({G.station_of(v): v for v in exact.vertices})
            rec = _Record(i, len(comp), nodes, seconds, "fallback", trigger is not None)
        else:
            kind = "exhausted-station" if trigger is not None else "alpha-deficit"
            state.failure = InfeasibilityReason(kind, trigger, exact.alpha, len(stations))
            rec = _Record(i, len(comp), nodes, seconds, "failed", trigger is not None)
        state.records.append(rec)
        yield rec
        return


def _solve_decomposed(G: ConstraintGraph, parallel: bool, require_local: bool):
    GIp = augment_within_components(G, interference_subgraph(G))
    plan = plan_components(GIp)
    labels = component_labels(G)
    states: dict[int, _GroupState] = {}
    owner = []
    for i, comp in enumerate(plan.components):
        lab = labels[comp[0]]
        states.setdefault(lab, _GroupState([])).components.append(i)
        owner.append(lab)

    records: list[_Record] = []
    failure = None
    if parallel and len(states) > 1:
        def drain(state):
            for _ in _run_group(G, GIp, plan, state, require_local):
                pass
            return state

        with ThreadPoolExecutor() as pool:
            list(pool.map(drain, states.values()))
        records = sorted((r for s in states.values() for r in s.records), key=lambda r: r.index)
        failed = [r for r in records if r.status == "failed"]
        if failed:
            cut = failed[0].index
            records = [r for r in records if r.index <= cut]
            failure = states[owner[cut]].failure
    else:
        runners = {lab: _run_group(G, GIp, plan, st, require_local) for lab, st in states.items()}
        finished = set()
        for i in range(len(plan)):
            lab = owner[i]
            if lab in finished:
                continue
            rec = next(runners[lab], None)
            if rec is None or rec.status != "ok":
                finished.add(lab)
            if rec is None:
                continue
            records.append(rec)
            if rec.status == "failed":
                failure = states[lab].failure
                break

    stage = {
        "count": len(plan),
        "solved": len(records),
        "largest": max((len(c) for c in plan.components), default=0),
        "search_nodes": sum(r.nodes for r in records),
        "fallbacks": sum(1 for r in records if r.status != "ok"),
        "early_infeasible_hits": sum(1 for r in records if r.early_hit),
    }
    timing = {"component_seconds_max": max((r.seconds for r in records), default=0.0),
              "component_seconds_total": sum(r.seconds for r in records)}
    if failure is not None:
        return None, failure, stage, timing
    chosen = [[G.vertices[v] for v in st.assigned.values()] for st in states.values()]
    return combine(chosen), None, stage, timing


def _solve_whole(G: ConstraintGraph):
    stations = len(G.station_index)
    started = time.perf_counter()
    res = solve_mis(G, limit=stations)
    stage = {"alpha": res.alpha, "stations": stations, "search_nodes": res.node_count}
    timing = {"mis_seconds": time.perf_counter() - started}
    if res.alpha < stations:
        return None, InfeasibilityReason("alpha-deficit", alpha=res.alpha, needed=stations), stage, timing
    return combine([[G.vertices[v] for v in res.vertices]]), None, stage, timing


def feasibility(
    instance: Instance,
    *,
    peel: bool = True,
    decompose: bool = True,
    parallel: bool = False,
    require_local: bool = True,
    peel_rule: PeelRule = "weighted",
) -> SolveReport:
    """Decide whether every station can be packed, returning a witness if so.

    ``peel`` and ``decompose`` switch off the two reductions; with both off
    the answer comes from one maximum independent set of the whole
    constraint graph.  ``parallel`` solves independent parts of the graph on
    worker threads and yields the same report.
    """
    started = time.perf_counter()
    empty = instance.empty_domain_stations
    if empty:
        return SolveReport("infeasible", infeasibility_reason=InfeasibilityReason("empty-domain", station=empty[0]))

    stages: dict = {}
    timings: dict = {}
    if peel:
        pr = peel_underconstrained(instance, rule=peel_rule)
        stages["peel"] = {"rule": peel_rule, "peeled": len(pr.peeled), "kept": len(pr.kept)}
        core = restrict_stations(instance, pr.kept)
    else:
        core = instance
    G = build_constraint_graph(core)
    stages["graph"] = {"vertices": G.n, "edges": G.edge_count}

    if decompose:
        f, failure, stage, timing = _solve_decomposed(G, parallel, require_local)
        stages["components"] = stage
    else:
        f, failure, stage, timing = _solve_whole(G)
        stages["whole"] = stage
    timings.update(timing)
    if failure is not None:
        timings["total_seconds"] = time.perf_counter() - started
        return SolveReport("infeasible", stages=stages, infeasibility_reason=failure, timings=timings)

    if peel:
        try:
            f = extend(f, pr, instance)
        except ExtensionError:
            retry = feasibility(instance, peel=False, decompose=decompose, parallel=parallel,
                                require_local=require_local)
            stages["peel"]["extension_failed"] = True
            return replace(retry, stages={**stages, "retry": retry.stages})
    problems = check(instance, f, require_complete=True)
    if problems:
        raise AssertionError(f"solver produced an invalid witness: {[str(p) for p in problems]}")
    timings["total_seconds"] = time.perf_counter() - started
    return SolveReport("feasible", witness=dict(sorted(f.items())), stages=stages, timings=timings)


def optimize(instance: Instance, **options) -> SolveReport:
    """Minimum-max-channel packing by binary search over the channel set.

    Each probe asks whether the instance restricted to channels up to the
    probe is feasible.  A feasible probe moves the upper end straight down
    to the witness's cost; the lower end starts at the largest per-station
    minimum channel, which no packing can beat.
    """
    first = feasibility(instance, **options)
    calls = 1
    if not first.feasible or not first.witness:
        return replace(first, feasibility_calls=calls)
    channels = instance.channels
    idx = {c: i for i, c in enumerate(channels)}
    best = first
    hi = idx[cost(first.witness)]
    lo = idx[max(min(chans) for chans in instance.domains.values())]
    probes = []
    while lo < hi:
        mid = (lo + hi) // 2
        report = feasibility(restrict_channels(instance, channels[mid]), **options)
        calls += 1
        probes.append({"clearing_target": channels[mid], "verdict": report.verdict})
        if report.feasible:
            best = report
            hi = idx[cost(report.witness)]
        else:
            lo = mid + 1
    if check(instance, best.witness, require_complete=True):
        raise AssertionError("optimal witness fails the full instance")
    stages = {**best.stages, "search": {"channels": len(channels), "probes": probes}}
    return replace(best, optimal_cost=channels[hi], feasibility_calls=calls, stages=stages)
