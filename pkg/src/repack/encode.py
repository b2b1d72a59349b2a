"""DIMACS CNF and LP-format exports of the constraint graph, plus model decoding.

Variable ``i`` (1-based) always stands for vertex ``i - 1`` of the graph, so
documents built from the same graph are byte-identical.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional

from .graph import ConstraintGraph
from .model import Instance, StationChannel, StationId, Violation, check


@dataclass(frozen=True)
class VariableMap:
    vertices: tuple[StationChannel, ...]

    def var(self, vertex: int) -> int:
        return vertex + 1

    def vertex(self, var: int) -> int:
        if not 1 <= var <= len(self.vertices):
            raise ValueError(f"variable {var} is out of range 1..{len(self.vertices)}")
        return var - 1

    def pair(self, var: int) -> StationChannel:
        return self.vertices[self.vertex(var)]

    @property
    def forward(self) -> dict[int, int]:
        return {v: v + 1 for v in range(len(self.vertices))}

    @property
    def reverse(self) -> dict[int, int]:
        return {v + 1: v for v in range(len(self.vertices))}


@dataclass(frozen=True)
class CnfDocument:
    text: str
    vmap: VariableMap
    num_vars: int
    num_clauses: int


@dataclass(frozen=True)
class LpDocument:
    text: str
    vmap: VariableMap
    num_rows: int


def _legend(G: ConstraintGraph, prefix: str) -> list[str]:
    return [f"{prefix} var {i + 1} = station {s} channel {c}" for i, (s, c) in enumerate(G.vertices)]


def to_cnf(G: ConstraintGraph, stations: Optional[Iterable[StationId]] = None) -> CnfDocument:
    """Clauses forbidding both ends of every edge, plus one 'some channel' clause per station.

    A station without vertices gets the empty clause, which makes the
    formula unsatisfiable.
    """
    stations = sorted(G.station_index if stations is None else set(stations))
    lines = ["c repacking feasibility: one variable per station-channel pair"]
    lines += _legend(G, "c")
    clauses = [f"-{u + 1} -{v + 1} 0" for u, v in G.edges()]
    for s in stations:
        verts = G.station_index.get(s, ())
        if not verts:
            lines.append(f"c station {s} has an empty domain")
            clauses.append("0")
        else:
            clauses.append(" ".join(str(v + 1) for v in verts) + " 0")
    lines.append(f"p cnf {G.n} {len(clauses)}")
    lines += clauses
    return CnfDocument("\n".join(lines) + "\n", VariableMap(G.vertices), G.n, len(clauses))


def _sum(vars_: Iterable[int]) -> str:
    terms = [f"x{v + 1}" for v in vars_]
    return " + ".join(terms) if terms else "0"


def _edge_rows(G: ConstraintGraph) -> list[str]:
    return [f" e_{u + 1}_{v + 1}: x{u + 1} + x{v + 1} <= 1" for u, v in G.edges()]


def _lp(header: str, sense: str, objective: str, rows: list[str], G: ConstraintGraph, bounds=()) -> LpDocument:
    lines = [f"\\ {header}"] + _legend(G, "\\")
    lines += [sense, f" obj: {objective}", "Subject To"]
    lines += rows
    lines.append("Bounds")
    lines += list(bounds)
    lines.append("Binaries")
    names = [f"x{v + 1}" for v in range(G.n)]
    for start in range(0, len(names), 10):
        lines.append(" " + " ".join(names[start:start + 10]))
    lines.append("End")
    return LpDocument("\n".join(lines) + "\n", VariableMap(G.vertices), len(rows))


def to_lp_mis(G: ConstraintGraph) -> LpDocument:
    """Zero-one program whose optimum is the independence number of ``G``."""
    return _lp("maximum independent set", "Maximize", _sum(range(G.n)), _edge_rows(G), G)


def to_lp_mis_cliques(G: ConstraintGraph, station_index: Optional[Mapping] = None) -> LpDocument:
    """As :func:`to_lp_mis` with an extra at-most-one row per multi-channel station."""
    station_index = G.station_index if station_index is None else station_index
    rows = _edge_rows(G)
    for s in sorted(station_index):
        verts = station_index[s]
        if len(verts) >= 2:
            rows.append(f" amo_s{s}: {_sum(verts)} <= 1")
    return _lp("maximum independent set with station cliques", "Maximize", _sum(range(G.n)), rows, G)


def to_lp_optimize(G: ConstraintGraph, stations: Optional[Iterable[StationId]] = None) -> LpDocument:
    """Minimize the highest channel used, subject to picking one vertex per station."""
    count = len(G.station_index if stations is None else set(stations))
    rows = _edge_rows(G)
    rows.append(f" cov: {_sum(range(G.n))} = {count}")
    for v, (s, c) in enumerate(G.vertices):
        rows.append(f" peak_s{s}_c{c}: {c} x{v + 1} - z <= 0")
    return _lp("minimum maximum channel", "Minimize", "z", rows, G, bounds=[" z >= 0"])


_NAME = re.compile(r"^[xt]?(\d+)$")


def parse_model(text: str) -> dict[int, bool]:
    """Read a solver model: DIMACS literals (``v 1 -2 3 0``) or ``name value`` lines.

    Names are ``x<id>``, ``t<id>`` or bare ids; ``z`` is ignored.  Lines
    starting with ``v`` always hold literals; any other two-token line is a
    ``name value`` pair.
    """
    model: dict[int, bool] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line[0] in "cs#\\":
            continue
        tokens = line.split()
        literal_line = tokens[0] == "v"
        if literal_line:
            tokens = tokens[1:]
        if len(tokens) == 2 and not literal_line:
            name, value = tokens
            if name == "z":
                continue
            m = _NAME.match(name)
            if not m:
                raise ValueError(f"line {lineno}: unknown variable name {name!r}")
            try:
                model[int(m.group(1))] = float(value) > 0.5
            except ValueError:
                raise ValueError(f"line {lineno}: bad value {value!r}") from None
            continue
        for tok in tokens:
            try:
                lit = int(tok)
            except ValueError:
                raise ValueError(f"line {lineno}: bad literal {tok!r}") from None
            if lit:
                model[abs(lit)] = lit > 0
    return model


def decode_model(model: Mapping[int, object], vmap: VariableMap, instance: Optional[Instance] = None):
    """Turn a solver model into an assignment.

    Returns ``(assignment, violations, warnings)``.  Two channels picked for
    one station keep the lower one.  Violations are only computed when
    ``instance`` is given.
    """
    chosen: dict[StationId, int] = {}
    warnings: list[str] = []
    for var in sorted(model):
        if not model[var]:
            vmap.vertex(var)
            continue
        s, c = vmap.pair(var)
        if s in chosen:
            warnings.append(f"station {s} selected on channels {chosen[s]} and {c}; kept {min(chosen[s], c)}")
            c = min(chosen[s], c)
        chosen[s] = c
    chosen = dict(sorted(chosen.items()))
    violations: list[Violation] = []
    if instance is not None:
        violations = check(instance, chosen, require_complete=True)
    return chosen, violations, warnings
