"""Acceptance criteria, one test each; every test logs a PASS/FAIL line.

Run just this module with ``pytest tests/test_acceptance.py -s``.  The
large-dataset check only runs when REPACK_FCC_DIR points at the data.
"""

import itertools
import math
import os
import random
import time
from pathlib import Path

import pytest

from repack.encode import to_cnf, to_lp_mis, to_lp_mis_cliques, to_lp_optimize
from repack.graph import (
    augment_within_components,
    build_constraint_graph,
    interference_subgraph,
    stats,
)
from repack.ingest import generate, load_instance
from repack.mis import solve_mis
from repack.model import check, encode_k_coloring, restrict_channels, restrict_stations
from repack.oracle import alpha_exhaustive, dpll, enumerate_feasible, lp_optimum_exhaustive, parse_dimacs, proper_coloring_exists
from repack.preprocess import peel_underconstrained
from repack.solver import feasibility, optimize

from conftest import random_config, random_graph, record_criterion

# every feasible report produced below, as (label, instance, witness)
WITNESSES: list = []


def _keep(label, instance, report):
    if report.feasible:
        WITNESSES.append((label, instance, report.witness))
    return report


@pytest.fixture(scope="module")
def corpus():
    return [generate(random_config(seed)) for seed in range(500)]


def test_oracle_equivalence_feasibility(corpus):
    started = time.perf_counter()
    mismatches = []
    for seed, inst in enumerate(corpus):
        report = _keep(f"feasibility seed {seed}", inst, feasibility(inst))
        if report.feasible != enumerate_feasible(inst).is_feasible:
            mismatches.append(seed)
    elapsed = time.perf_counter() - started
    ok = not mismatches and elapsed < 60
    record_criterion("oracle equivalence (feasibility)", ok,
                     f"{len(corpus) - len(mismatches)}/{len(corpus)} agree, {elapsed:.1f}s")
    assert not mismatches, mismatches
    assert elapsed < 60


def test_oracle_equivalence_optimization(corpus):
    cost_bad, call_bad, feasible = [], [], 0
    for seed, inst in enumerate(corpus):
        report = _keep(f"optimize seed {seed}", inst, optimize(inst))
        ref = enumerate_feasible(inst)
        if report.feasible != ref.is_feasible:
            cost_bad.append(seed)
        elif report.feasible:
            feasible += 1
            if report.optimal_cost != ref.min_cost:
                cost_bad.append(seed)
        bound = math.ceil(math.log2(max(len(inst.channels), 1))) + 1
        if report.feasibility_calls > bound:
            call_bad.append(seed)
    ok = not cost_bad and not call_bad
    record_criterion("oracle equivalence (optimization)", ok,
                     f"{feasible} feasible, cost mismatches {len(cost_bad)}, call-bound breaches {len(call_bad)}")
    assert not cost_bad, cost_bad
    assert not call_bad, call_bad


def test_mis_exactness():
    bad = []
    sizes = []
    for seed in range(200):
        view = random_graph(10_000 + seed, max_vertices=18)
        sizes.append(view.n)
        if solve_mis(view).alpha != alpha_exhaustive(view)[0]:
            bad.append(seed)
    record_criterion("MIS exactness", not bad, f"{200 - len(bad)}/200 agree, up to {max(sizes)} vertices")
    assert not bad, bad


def test_restriction_is_induced_subgraph():
    rng = random.Random(7)
    bad = []
    for seed in range(100):
        inst = generate(random_config(20_000 + seed, max_stations=8, max_channels=6, offsets=(-2, -1, 0, 1, 2)))
        target = rng.randint(0, 7)
        keep = {s for s in inst.stations if rng.random() < 0.6}
        G = build_constraint_graph(inst)
        sub = build_constraint_graph(restrict_channels(restrict_stations(inst, keep), target))
        picked = [i for i, (s, c) in enumerate(G.vertices) if s in keep and c <= target]
        induced = G.induced(picked)
        if sub != induced or sub.labeled_edges() != induced.labeled_edges():
            bad.append(seed)
    record_criterion("restricted instance graph equals induced subgraph", not bad, f"{100 - len(bad)}/100 identical")
    assert not bad, bad


def test_k_coloring_reduction():
    pairs = list(itertools.combinations(range(4), 2))
    bad = []
    checked = 0
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        for k in (1, 2, 3):
            checked += 1
            inst = encode_k_coloring(4, edges, k)
            report = _keep(f"coloring {edges} k={k}", inst, feasibility(inst))
            if report.feasible != proper_coloring_exists(4, edges, k):
                bad.append((edges, k))
    k4_3 = feasibility(encode_k_coloring(4, pairs, 3)).feasible
    k4 = encode_k_coloring(4, pairs, 4)
    k4_4 = _keep("K4 k=4", k4, feasibility(k4)).feasible
    ok = not bad and not k4_3 and k4_4
    record_criterion("k-coloring reduction", ok,
                     f"{checked - len(bad)}/{checked} graphs agree; K4 k=3 infeasible={not k4_3}, k=4 feasible={k4_4}")
    assert not bad, bad
    assert not k4_3 and k4_4


def test_encoder_soundness():
    cnf_bad, clique_bad, lp_bad = [], [], []
    feasible = 0
    for seed in range(200):
        inst = generate(random_config(30_000 + seed, max_stations=4, max_channels=3))
        G = build_constraint_graph(inst)
        report = _keep(f"encoder seed {seed}", inst, optimize(inst))
        nvars, clauses = parse_dimacs(to_cnf(G, inst.stations).text)
        if (dpll(clauses, nvars) is not None) != report.feasible:
            cnf_bad.append(seed)
        if lp_optimum_exhaustive(to_lp_mis(G).text) != lp_optimum_exhaustive(to_lp_mis_cliques(G).text):
            clique_bad.append(seed)
        z = lp_optimum_exhaustive(to_lp_optimize(G, inst.stations).text)
        if report.feasible:
            feasible += 1
            if z != report.optimal_cost:
                lp_bad.append(seed)
        elif z is not None:
            lp_bad.append(seed)
    ok = not (cnf_bad or clique_bad or lp_bad)
    record_criterion("encoder soundness", ok,
                     f"cnf {200 - len(cnf_bad)}/200, clique rows {200 - len(clique_bad)}/200, "
                     f"min-max program {200 - len(lp_bad)}/200 ({feasible} feasible)")
    assert not cnf_bad, cnf_bad
    assert not clique_bad, clique_bad
    assert not lp_bad, lp_bad


def test_witness_validity():
    # runs last in this module and covers every feasible report made above
    failures = []
    for label, inst, witness in WITNESSES:
        try:
            if check(inst, witness, require_complete=True):
                failures.append(label)
        except Exception as exc:  # noqa: BLE001 - any exception is a failure here
            failures.append(f"{label}: {exc!r}")
    ok = bool(WITNESSES) and not failures
    record_criterion("witness validity", ok, f"{len(WITNESSES) - len(failures)}/{len(WITNESSES)} witnesses valid")
    assert WITNESSES, "run the whole module so there are witnesses to check"
    assert not failures, failures[:10]


# Figures for the November 2015 auction data set
FCC_EXPECTED = {
    "stations": 2990,
    "graph vertices": 101_868,
    "graph edges": 4_713_968,
    "graph min degree": 4,
    "graph max degree": 229,
    "graph components": 171,
    "graph largest components": (89_401, 1_934, 1_258),
    "interference-only nontrivial components": 1205,
    "interference-only isolated vertices": 1424,
    "interference-only largest components": (51_665, 15_357, 6_200),
    "underconstrained stations": 1424,
    "post-peel vertices": 54_406,
    "post-peel edges": 2_388_160,
    "augmented interference edges": 3_673_734,
}


def _fcc_files():
    root = os.environ.get("REPACK_FCC_DIR")
    if not root:
        return None
    root = Path(root)
    domain = root / os.environ.get("REPACK_FCC_DOMAIN", "Domain.csv")
    inter = root / os.environ.get("REPACK_FCC_INTERFERENCE", "Interference_Paired.csv")
    if not (domain.exists() and inter.exists()):
        return None
    return domain, inter


def test_fcc_statistics():
    files = _fcc_files()
    if files is None:
        record_criterion("large-dataset statistics", "SKIP", "data not found; set REPACK_FCC_DIR to the data directory")
        pytest.skip("auction data not available (set REPACK_FCC_DIR)")
    domain, inter = files
    dialect = os.environ.get("REPACK_FCC_DIALECT", "auto")
    inst, _ = load_instance(domain.read_text(), inter.read_text(), dialect=dialect)
    G = build_constraint_graph(inst)
    GI = interference_subgraph(G)
    g, gi = stats(G), stats(GI)
    peel = peel_underconstrained(inst, rule="degree", single_pass=True)
    core = build_constraint_graph(restrict_stations(inst, peel.kept))
    got = {
        "stations": len(inst.stations),
        "graph vertices": g.vertex_count,
        "graph edges": g.edge_count,
        "graph min degree": g.min_degree,
        "graph max degree": g.max_degree,
        "graph components": g.component_count,
        "graph largest components": g.largest_component_sizes,
        "interference-only nontrivial components": gi.nontrivial_component_count,
        "interference-only isolated vertices": gi.isolated_vertex_count,
        "interference-only largest components": gi.largest_component_sizes,
        "underconstrained stations": len(peel.peeled),
        "post-peel vertices": core.n,
        "post-peel edges": core.edge_count,
        "augmented interference edges": augment_within_components(G, GI).edge_count,
    }
    diffs = {k: (got[k], v) for k, v in FCC_EXPECTED.items() if got[k] != v}
    detail = "all figures match" if not diffs else "; ".join(f"{k}: got {a}, expected {b}" for k, (a, b) in diffs.items())
    record_criterion("large-dataset statistics", not diffs, detail)
    assert not diffs, diffs
