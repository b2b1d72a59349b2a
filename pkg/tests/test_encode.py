from pathlib import Path

import pytest
from hypothesis import given, settings

from repack.encode import VariableMap, decode_model, parse_model, to_cnf, to_lp_mis, to_lp_mis_cliques, to_lp_optimize
from repack.graph import build_constraint_graph
from repack.mis import solve_mis
from repack.model import restrict_channels
from repack.oracle import dpll, enumerate_feasible, lp_optimum_exhaustive, parse_dimacs

from conftest import instances, make, tiny_corpus

GOLDEN = Path(__file__).parent / "golden"


def _graph(inst):
    return build_constraint_graph(inst)


def test_cnf_ex1(ex1):
    doc = to_cnf(_graph(ex1))
    assert (doc.num_vars, doc.num_clauses) == (3, 4)
    nvars, clauses = parse_dimacs(doc.text)
    assert sorted(map(sorted, clauses)) == [[-3, -1], [-2, -1], [1, 2], [3]]
    model = dpll(clauses, nvars)
    assert model == {1: False, 2: True, 3: True}


def test_cnf_ex2(ex2):
    nvars, clauses = parse_dimacs(to_cnf(_graph(ex2)).text)
    assert nvars == 2 and sorted(map(sorted, clauses)) == [[-2, -1], [1], [2]]
    assert dpll(clauses, nvars) is None


def test_cnf_single_station():
    doc = to_cnf(_graph(make([], {1: {1}})))
    assert "p cnf 1 1\n1 0\n" in doc.text


def test_cnf_empty_domain_is_unsat(ex1):
    inst = restrict_channels(ex1, 0)
    doc = to_cnf(_graph(inst), inst.stations)
    nvars, clauses = parse_dimacs(doc.text)
    assert nvars == 0 and [] in clauses and dpll(clauses, nvars) is None


def test_lp_mis_examples(ex1):
    doc = to_lp_mis(_graph(ex1))
    assert doc.num_rows == 2 and lp_optimum_exhaustive(doc.text) == 2
    # edgeless graph: every vertex fits
    assert lp_optimum_exhaustive(to_lp_mis(_graph(make([], {1: {1}, 2: {1}, 3: {2}}))).text) == 3
    edge = make([((1, 1), (2, 1))], {1: {1}, 2: {1}})
    assert lp_optimum_exhaustive(to_lp_mis(_graph(edge)).text) == 1


def test_lp_cliques_ex1(ex1):
    doc = to_lp_mis_cliques(_graph(ex1))
    assert " amo_s1: x1 + x2 <= 1" in doc.text and "amo_s2" not in doc.text
    assert lp_optimum_exhaustive(doc.text) == 2


def test_lp_optimize_examples(ex1, ex2):
    assert lp_optimum_exhaustive(to_lp_optimize(_graph(ex1)).text) == 2
    assert lp_optimum_exhaustive(to_lp_optimize(_graph(ex2)).text) is None
    assert lp_optimum_exhaustive(to_lp_optimize(_graph(make([], {1: {3, 7}}))).text) == 3


@pytest.mark.parametrize("name,build", [
    ("ex1.cnf", lambda G: to_cnf(G)),
    ("ex1_mis.lp", to_lp_mis),
    ("ex1_cliques.lp", to_lp_mis_cliques),
    ("ex1_optimize.lp", lambda G: to_lp_optimize(G)),
])
def test_golden_text(ex1, name, build):
    assert build(_graph(ex1)).text == (GOLDEN / name).read_text()


def test_clique_rows_keep_the_optimum():
    for inst in tiny_corpus(50, base_seed=60000):
        G = _graph(inst)
        if G.n > 16:
            continue
        alpha = solve_mis(G).alpha
        assert lp_optimum_exhaustive(to_lp_mis(G).text) == alpha
        assert lp_optimum_exhaustive(to_lp_mis_cliques(G).text) == alpha


@settings(max_examples=100)
@given(instances(max_stations=4, max_channels=3, allow_empty_domains=True))
def test_cnf_agrees_with_oracle(inst):
    doc = to_cnf(_graph(inst), inst.stations)
    nvars, clauses = parse_dimacs(doc.text)
    model = dpll(clauses, nvars)
    assert (model is not None) == enumerate_feasible(inst).is_feasible
    if model is not None:
        f, violations, _ = decode_model(model, doc.vmap, inst)
        # a satisfying model may pick two channels of one station; the lower one still works
        assert violations == []


def test_decode_examples(ex1):
    vmap = VariableMap(_graph(ex1).vertices)
    assert decode_model({2: 1, 3: 1, 1: 0}, vmap, ex1) == ({1: 2, 2: 1}, [], [])
    f, violations, _ = decode_model({1: 0, 2: 0, 3: 0}, vmap, ex1)
    assert f == {} and [v.kind for v in violations] == ["incomplete", "incomplete"]
    f, _, warnings = decode_model({1: 1, 2: 1}, vmap)
    assert f == {1: 1} and len(warnings) == 1
    with pytest.raises(ValueError):
        decode_model({4: 1}, vmap)


def test_parse_model_formats():
    assert parse_model("s SATISFIABLE\nv 1 -2 3 0\n") == {1: True, 2: False, 3: True}
    assert parse_model("x1 0\nx2 1\nz 2\n3 1\n") == {1: False, 2: True, 3: True}
    assert parse_model("v 1 0\n") == {1: True}
    with pytest.raises(ValueError):
        parse_model("y7 1\n")


def test_variable_map():
    vmap = VariableMap(((1, 1), (1, 2)))
    assert vmap.pair(2) == (1, 2) and vmap.forward == {0: 1, 1: 2} and vmap.reverse == {1: 0, 2: 1}
    with pytest.raises(ValueError):
        vmap.vertex(0)


def test_exports_are_deterministic():
    for inst in tiny_corpus(20, base_seed=70000):
        for build in (to_cnf, to_lp_mis, to_lp_mis_cliques, to_lp_optimize):
            assert build(_graph(inst)).text == build(_graph(inst)).text


def test_mis_program_optimum_on_random_graphs():
    from conftest import random_graph

    for seed in range(60):
        view = random_graph(seed, max_vertices=15)
        assert lp_optimum_exhaustive(to_lp_mis(view).text) == solve_mis(view).alpha
