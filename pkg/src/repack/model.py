"""Instances, assignments and constraint semantics of the repacking problem.

Stations and channels are plain non-negative ``int`` values.  An
:class:`Instance` holds the normalized interference constraints and the
per-station channel domains; the station set and channel set are implied by
the domains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Literal, Mapping, NamedTuple, Optional, Sequence

StationId = int
ChannelId = int
Assignment = Mapping[StationId, ChannelId]


class StationChannel(NamedTuple):
    station: StationId
    channel: ChannelId


class Constraint(NamedTuple):
    """Unordered pair of station-channel pairs, stored with ``a < b``."""

    a: StationChannel
    b: StationChannel

    @classmethod
    def of(cls, p, q) -> "Constraint":
        p, q = StationChannel(*p), StationChannel(*q)
        return cls(p, q) if p <= q else cls(q, p)

    @property
    def stations(self) -> tuple[StationId, StationId]:
        return self.a.station, self.b.station

    @property
    def offset(self) -> int:
        return self.b.channel - self.a.channel


def _frozen_domains(domains: Mapping[StationId, Iterable[ChannelId]]) -> Mapping[StationId, frozenset]:
    return MappingProxyType({int(s): frozenset(int(c) for c in domains[s]) for s in sorted(domains)})


@dataclass(frozen=True)
class Instance:
    """Normalized problem data ``(I, D)``.

    The constructor validates the invariants but does not repair anything;
    use :func:`normalize` to build an instance from raw data.
    """

    constraints: tuple[Constraint, ...] = ()
    domains: Mapping[StationId, frozenset] = field(default_factory=dict)

    def __post_init__(self):
        domains = _frozen_domains(self.domains)
        constraints = tuple(Constraint(StationChannel(*a), StationChannel(*b)) for a, b in self.constraints)
        for s, chans in domains.items():
            if s < 0 or any(c < 0 for c in chans):
                raise ValueError(f"station {s}: ids must be non-negative")
        prev = None
        for con in constraints:
            if not con.a < con.b:
                raise ValueError(f"constraint {con} is not in canonical order")
            if con.a.station == con.b.station:
                raise ValueError(f"constraint {con} joins a station to itself")
            for s in con.stations:
                if s not in domains:
                    raise ValueError(f"constraint {con} names unknown station {s}")
            if prev is not None and not prev < con:
                raise ValueError("constraints must be sorted and free of duplicates")
            prev = con
        object.__setattr__(self, "domains", domains)
        object.__setattr__(self, "constraints", constraints)

    @property
    def stations(self) -> tuple[StationId, ...]:
        return tuple(self.domains)

    @property
    def channels(self) -> tuple[ChannelId, ...]:
        out: set[int] = set()
        for chans in self.domains.values():
            out.update(chans)
        return tuple(sorted(out))

    @property
    def empty_domain_stations(self) -> tuple[StationId, ...]:
        """Stations with no allowed channel; any such station makes the instance infeasible."""
        return tuple(s for s, chans in self.domains.items() if not chans)

    @property
    def trivially_infeasible(self) -> bool:
        return bool(self.empty_domain_stations)

    def __repr__(self):
        doms = {s: sorted(c) for s, c in self.domains.items()}
        return f"Instance(constraints={len(self.constraints)}, domains={doms})"


def normalize(raw_constraints: Iterable[Sequence], domains: Mapping[StationId, Iterable[ChannelId]]):
    """Clean raw interference data into an :class:`Instance`.

    Orientation is discarded, duplicates collapse, same-station constraints
    and constraints naming stations missing from ``domains`` are dropped.
    Constraints on channels outside a station's domain are kept; they are
    inert and never become graph edges.

    Returns ``(instance, warnings)``.
    """
    doms = _frozen_domains(domains)
    warnings: list[str] = []
    seen: set[Constraint] = set()
    for raw in raw_constraints:
        p, q = raw
        con = Constraint.of(p, q)
        if con.a.station == con.b.station:
            warnings.append(f"dropped same-station constraint {_fmt(con)}")
            continue
        missing = [s for s in con.stations if s not in doms]
        if missing:
            names = ", ".join(str(s) for s in missing)
            warnings.append(f"dropped constraint {_fmt(con)}: unknown station {names}")
            continue
        seen.add(con)
    return Instance(tuple(sorted(seen)), doms), warnings


def _fmt(con: Constraint) -> str:
    return f"{{({con.a.station},{con.a.channel}),({con.b.station},{con.b.channel})}}"


@dataclass(frozen=True)
class Violation:
    kind: Literal["domain", "interference", "incomplete"]
    station: Optional[StationId] = None
    constraint: Optional[Constraint] = None

    def __str__(self):
        if self.kind == "interference":
            return f"interference {_fmt(self.constraint)}"
        return f"{self.kind}({self.station})"


def check(instance: Instance, f: Assignment, require_complete: bool = False) -> list[Violation]:
    """List every constraint ``f`` violates; an empty list means feasible.

    Stations of ``f`` that the instance does not know are reported as
    domain violations.
    """
    out: list[Violation] = []
    for s in sorted(f):
        if f[s] not in instance.domains.get(s, ()):
            out.append(Violation("domain", station=s))
    for con in instance.constraints:
        (s1, c1), (s2, c2) = con
        if f.get(s1) == c1 and f.get(s2) == c2:
            out.append(Violation("interference", constraint=con))
    if require_complete:
        out.extend(Violation("incomplete", station=s) for s in instance.stations if s not in f)
    return out


def is_feasible(instance: Instance, f: Assignment) -> bool:
    return not check(instance, f, require_complete=True)


def cost(f: Assignment) -> ChannelId:
    """Largest channel used by ``f``."""
    if not f:
        raise ValueError("undefined cost: assignment is empty")
    return max(f.values())


def restrict_stations(instance: Instance, keep: Iterable[StationId]) -> Instance:
    """Subproblem that repacks only ``keep``; the other stations are cleared."""
    keep = set(keep)
    unknown = sorted(keep.difference(instance.domains))
    if unknown:
        raise ValueError(f"unknown stations: {unknown}")
    doms = {s: c for s, c in instance.domains.items() if s in keep}
    cons = tuple(c for c in instance.constraints if c.a.station in keep and c.b.station in keep)
    return Instance(cons, doms)


def restrict_channels(instance: Instance, clearing_target: ChannelId) -> Instance:
    """Subproblem allowing only channels ``<= clearing_target``.

    Constraints are kept verbatim.  Stations left with an empty domain show
    up in :attr:`Instance.empty_domain_stations`.
    """
    doms = {s: frozenset(c for c in chans if c <= clearing_target) for s, chans in instance.domains.items()}
    return Instance(instance.constraints, doms)


@dataclass(frozen=True)
class OffsetProfile:
    offsets: frozenset
    max_offset: int
    # True iff offsets == {-k, ..., k} for some k >= 0
    symmetric: bool
    missing: tuple[int, ...]

    @property
    def gapped(self) -> bool:
        return bool(self.missing)


def offsets_of(instance: Instance) -> OffsetProfile:
    offs: set[int] = set()
    for con in instance.constraints:
        offs.add(con.offset)
        offs.add(-con.offset)
    k = max(offs, default=0)
    window = set(range(-k, k + 1))
    missing = tuple(sorted(window - offs)) if offs else ()
    return OffsetProfile(frozenset(offs), k, bool(offs) and offs == window, missing)


def encode_k_coloring(n_vertices: int, edges: Iterable[tuple[int, int]], k: int) -> Instance:
    """Repacking instance that is feasible iff the graph is properly ``k``-colorable.

    Vertices ``0..n_vertices-1`` become stations with domain ``{1..k}`` and
    every edge forbids its endpoints from sharing any channel.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    seen: set[tuple[int, int]] = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at vertex {u}: graph must be simple")
        if not (0 <= u < n_vertices and 0 <= v < n_vertices):
            raise ValueError(f"edge {u}-{v} leaves the vertex range")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate edge {u}-{v}: graph must be simple")
        seen.add(key)
    colors = range(1, k + 1)
    raw = [((u, c), (v, c)) for u, v in seen for c in colors]
    instance, _ = normalize(raw, {v: colors for v in range(n_vertices)})
    return instance
