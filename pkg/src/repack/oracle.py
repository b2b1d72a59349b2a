"""Brute-force reference implementations for cross-checking at desk scale.

Nothing here is clever on purpose.  Each routine refuses inputs whose search
space exceeds its budget instead of running for hours.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from math import prod
from typing import Optional, Sequence

from .graph import GraphView
from .model import Instance

DEFAULT_BUDGET = 2**20


class BudgetExceeded(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_search_space: int = DEFAULT_BUDGET


@dataclass(frozen=True)
class Enumeration:
    feasible: list[dict]
    min_cost: Optional[int]

    @property
    def is_feasible(self) -> bool:
        return bool(self.feasible)


def _budget(budget) -> int:
    if isinstance(budget, OracleBudget):
        return budget.max_search_space
    return DEFAULT_BUDGET if budget is None else int(budget)


def _violates(instance: Instance, chosen: set) -> bool:
    return any(a in chosen and b in chosen for a, b in instance.constraints)


def enumerate_feasible(instance: Instance, budget=None) -> Enumeration:
    """Every complete feasible assignment, in lexicographic channel order."""
    stations = instance.stations
    space = prod(len(instance.domains[s]) + 1 for s in stations)
    if space > _budget(budget):
        raise BudgetExceeded(f"search space {space} exceeds budget {_budget(budget)}")
    choices = [sorted(instance.domains[s]) for s in stations]
    found = []
    for combo in itertools.product(*choices):
        chosen = set(zip(stations, combo))
        if not _violates(instance, chosen):
            found.append(dict(zip(stations, combo)))
    if not stations:
        # the empty assignment is the unique complete one
        return Enumeration([{}], None)
    return Enumeration(found, min((max(f.values()) for f in found), default=None))


def alpha_exhaustive(view: GraphView, budget=None) -> tuple[int, tuple[int, ...]]:
    """Independence number and the lexicographically first maximum independent set."""
    n = view.n
    if 2**n > _budget(budget):
        raise BudgetExceeded(f"2^{n} subsets exceed budget {_budget(budget)}")
    adj = [set(a) for a in view.adj]
    best: list[int] = []
    current: list[int] = []

    # depth-first over independent sets in lexicographic order
    def grow(start: int):
        nonlocal best
        if len(current) > len(best):
            best = list(current)
        for v in range(start, n):
            if all(u not in adj[v] for u in current):
                current.append(v)
                grow(v + 1)
                current.pop()

    grow(0)
    return len(best), tuple(best)


def proper_coloring_exists(n_vertices: int, edges: Sequence[tuple[int, int]], k: int) -> bool:
    for colors in itertools.product(range(k), repeat=n_vertices):
        if all(colors[u] != colors[v] for u, v in edges):
            return True
    return n_vertices == 0


# ---- solver-format checks ------------------------------------------------


def parse_dimacs(text: str) -> tuple[int, list[list[int]]]:
    nvars, clauses, current = 0, [], []
    declared = None
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            _, fmt, v, c = line.split()
            if fmt != "cnf":
                raise ValueError(f"not a cnf header: {line}")
            nvars, declared = int(v), int(c)
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if current:
        raise ValueError("last clause is not terminated by 0")
    if declared is not None and declared != len(clauses):
        raise ValueError(f"header declares {declared} clauses, found {len(clauses)}")
    return nvars, clauses


def dpll(clauses: list[list[int]], nvars: int) -> Optional[dict[int, bool]]:
    """Plain DPLL with unit propagation; returns a model or ``None``."""

    def solve(clauses, model):
        while True:
            if any(len(c) == 0 for c in clauses):
                return None
            unit = next((c[0] for c in clauses if len(c) == 1), None)
            if unit is None:
                break
            clauses = _assign(clauses, unit)
            model = {**model, abs(unit): unit > 0}
        if not clauses:
            return model
        lit = clauses[0][0]
        for choice in (lit, -lit):
            found = solve(_assign(clauses, choice), {**model, abs(choice): choice > 0})
            if found is not None:
                return found
        return None

    model = solve([list(c) for c in clauses], {})
    if model is None:
        return None
    return {v: model.get(v, False) for v in range(1, nvars + 1)}


def _assign(clauses, lit):
    out = []
    for c in clauses:
        if lit in c:
            continue
        out.append([x for x in c if x != -lit])
    return out


_TERM = re.compile(r"([+-])\s*(\d*)\s*([A-Za-z_][A-Za-z0-9_]*)")


def _parse_linear(expr: str) -> dict[str, int]:
    expr = expr.strip()
    if expr and expr[0] not in "+-":
        expr = "+ " + expr
    coeffs: dict[str, int] = {}
    pos = 0
    for m in _TERM.finditer(expr):
        if expr[pos:m.start()].strip():
            raise ValueError(f"cannot parse {expr!r}")
        sign = -1 if m.group(1) == "-" else 1
        coeffs[m.group(3)] = coeffs.get(m.group(3), 0) + sign * int(m.group(2) or 1)
        pos = m.end()
    rest = expr[pos:].strip()
    if rest not in ("", "+ 0", "+0"):
        raise ValueError(f"cannot parse {expr!r}")
    return coeffs


def lp_optimum_exhaustive(text: str, budget=None) -> Optional[int]:
    """Optimal objective of a small LP-format zero-one program, by enumeration.

    Handles binaries plus at most one continuous variable that appears only
    as the objective and in ``a.x - z <= 0`` rows with a ``z >= 0`` bound.
    Returns ``None`` when no binary vector is feasible.
    """
    section = None
    sense = None
    objective: dict[str, int] = {}
    rows: list[tuple[dict[str, int], str, int]] = []
    binaries: list[str] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        low = line.lower()
        if low in ("maximize", "minimize"):
            sense, section = low, "obj"
            continue
        if low == "subject to":
            section = "rows"
            continue
        if low in ("bounds", "binaries", "binary", "generals"):
            section = low
            continue
        if low == "end":
            break
        if section == "obj":
            _, expr = line.split(":", 1)
            objective = _parse_linear(expr)
        elif section == "rows":
            _, body = line.split(":", 1)
            m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", body)
            rows.append((_parse_linear(m.group(1)), m.group(2), int(m.group(3))))
        elif section in ("binaries", "binary"):
            binaries.extend(line.split())
    continuous = sorted({v for r in rows for v in r[0]} | set(objective) - set(binaries))
    continuous = [v for v in continuous if v not in binaries]
    if len(continuous) > 1:
        raise ValueError(f"more than one continuous variable: {continuous}")
    if 2 ** len(binaries) > _budget(budget):
        raise BudgetExceeded(f"2^{len(binaries)} vectors exceed budget")
    z = continuous[0] if continuous else None
    best = None
    for bits in itertools.product((0, 1), repeat=len(binaries)):
        x = dict(zip(binaries, bits))
        zval = 0
        ok = True
        for coeffs, op, rhs in rows:
            lhs = sum(k * x[v] for v, k in coeffs.items() if v != z)
            zc = coeffs.get(z, 0) if z else 0
            if zc:
                # a.x + zc*z <= rhs with zc < 0 forces z >= (a.x - rhs) / -zc
                if op != "<=" or zc > 0:
                    raise ValueError("unsupported row shape for the continuous variable")
                zval = max(zval, -(-(lhs - rhs) // -zc))
                continue
            if (op == "<=" and lhs > rhs) or (op == ">=" and lhs < rhs) or (op == "=" and lhs != rhs):
                ok = False
                break
        if not ok:
            continue
        val = sum(k * (zval if v == z else x[v]) for v, k in objective.items())
        if best is None or (val > best if sense == "maximize" else val < best):
            best = val
    return best
