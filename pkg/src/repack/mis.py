"""Exact maximum independent set by branch and bound over bitsets.

Vertex subsets are Python ints used as bitmasks over a local renumbering of
the vertices being solved.  The upper bound is a clique cover: the station
cliques give one for free, and a greedy clique partition sometimes beats it.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Iterable, Optional

from .graph import GraphView


@dataclass(frozen=True)
class MisResult:
    vertices: frozenset
    alpha: int
    node_count: int


def _bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _greedy_cover(cand: int, nbr: list[int], limit: int) -> int:
    # partition cand into cliques; stop counting once past limit
    commons: list[int] = []
    for v in _bits(cand):
        bit = 1 << v
        for i, common in enumerate(commons):
            if common & bit:
                commons[i] = common & nbr[v]
                break
        else:
            commons.append(nbr[v])
            if len(commons) > limit:
                return len(commons)
    return len(commons)


def solve_mis(
    view: GraphView,
    required: Optional[Iterable] = None,
    within: Optional[Iterable[int]] = None,
    limit: Optional[int] = None,
) -> Optional[MisResult]:
    """Maximum independent set of ``view`` (restricted to ``within`` if given).

    With ``required``, the answer is the largest independent set that holds
    at least one vertex of every listed station, or ``None`` if there is no
    such set.  ``limit`` is a known upper bound on the answer; the search
    stops as soon as it is reached.  Returned vertex ids are those of
    ``view``.  Ties resolve the same way on every run.
    """
    verts = sorted(set(within)) if within is not None else list(range(view.n))
    local = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    nbr = [0] * n
    for i, v in enumerate(verts):
        m = 0
        for w in view.adj[v]:
            j = local.get(w)
            if j is not None:
                m |= 1 << j
        nbr[i] = m

    station_masks: dict = {}
    for i, v in enumerate(verts):
        s = view.station_of(v)
        station_masks[s] = station_masks.get(s, 0) | (1 << i)
    groups: list[int] = []
    for mask in station_masks.values():
        if all(mask & ~(1 << v) & ~nbr[v] == 0 for v in _bits(mask)):
            groups.append(mask)
        else:
            groups.extend(1 << v for v in _bits(mask))
    req_masks: list[int] = []
    for s in sorted(set(required or ())):
        mask = station_masks.get(s, 0)
        if not mask:
            return None
        req_masks.append(mask)
    req_union = 0
    for mask in req_masks:
        req_union |= mask

    best_set = 0
    best_size = -1
    nodes = 0
    stop = limit if limit is not None else len(groups)

    def bound(cand: int, have: int) -> int:
        room = sum(1 for g in groups if g & cand)
        if have + room <= best_size:
            return room
        return min(room, _greedy_cover(cand, nbr, best_size - have))

    def search(cand: int, chosen: int, size: int) -> bool:
        nonlocal best_set, best_size, nodes
        nodes += 1
        # isolated candidates can always be taken, and so can a pendant
        # vertex whose neighbour no required station needs
        changed = True
        while changed:
            changed = False
            for v in _bits(cand):
                bit = 1 << v
                if not cand & bit:
                    continue
                near = nbr[v] & cand
                if near & (near - 1) == 0 and not near & req_union:
                    cand &= ~(bit | near)
                    chosen |= bit
                    size += 1
                    changed = True
        forced = -1
        for mask in req_masks:
            if mask & chosen:
                continue
            options = mask & cand
            if not options:
                return False
            if options & (options - 1) == 0 and forced < 0:
                forced = options.bit_length() - 1
        if not cand:
            if size > best_size:
                best_size, best_set = size, chosen
            return best_size >= stop
        if size + bound(cand, size) <= best_size:
            return False
        if forced >= 0:
            return search(cand & ~nbr[forced] & ~(1 << forced), chosen | (1 << forced), size + 1)
        pivot, pdeg = -1, -1
        for v in _bits(cand):
            d = (nbr[v] & cand).bit_count()
            if d > pdeg:
                pivot, pdeg = v, d
        bit = 1 << pivot
        if search(cand & ~nbr[pivot] & ~bit, chosen | bit, size + 1):
            return True
        return search(cand & ~bit, chosen, size)

    old_limit = sys.getrecursionlimit()
    if old_limit < 4 * n + 200:
        sys.setrecursionlimit(4 * n + 200)
    try:
        search((1 << n) - 1, 0, 0)
    finally:
        sys.setrecursionlimit(old_limit)
    if best_size < 0:
        return None
    chosen = frozenset(verts[i] for i in _bits(best_set))
    return MisResult(chosen, len(chosen), nodes)
