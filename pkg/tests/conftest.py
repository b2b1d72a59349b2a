import random

import pytest
from hypothesis import strategies as st

from repack.ingest import GeneratorConfig, generate
from repack.model import normalize

ACCEPTANCE_LINES: list[str] = []


def record_criterion(name: str, passed, detail: str = "") -> None:
    """Log one acceptance line; ``passed`` is True, False or the string "SKIP"."""
    status = passed if isinstance(passed, str) else ("PASS" if passed else "FAIL")
    line = f"[{status}] {name}" + (f" -- {detail}" if detail else "")
    ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def make(raw, domains):
    instance, _ = normalize(raw, domains)
    return instance


@pytest.fixture
def ex1():
    return make([((1, 1), (2, 1))], {1: {1, 2}, 2: {1}})


@pytest.fixture
def ex2():
    return make([((1, 1), (2, 1))], {1: {1}, 2: {1}})


def random_config(seed: int, max_stations=6, max_channels=4, offsets=(0, -1, 1)) -> GeneratorConfig:
    rng = random.Random(seed)
    k = rng.randint(1, len(offsets))
    return GeneratorConfig(
        station_count=rng.randint(1, max_stations),
        channel_count=rng.randint(1, max_channels),
        domain_density=rng.uniform(0.3, 1.0),
        interference_density=rng.uniform(0.0, 0.6),
        offsets=frozenset(rng.sample(list(offsets), k)),
        seed=seed,
    )


def tiny_corpus(n: int, base_seed: int = 0, **kw):
    return [generate(random_config(base_seed + i, **kw)) for i in range(n)]


@st.composite
def instances(draw, max_stations=5, max_channels=4, offsets=(-1, 0, 1), allow_empty_domains=False):
    n = draw(st.integers(0, max_stations))
    m = draw(st.integers(1, max_channels))
    chans = list(range(1, m + 1))
    domains = {}
    for s in range(1, n + 1):
        lo = 0 if allow_empty_domains else 1
        domains[s] = set(draw(st.lists(st.sampled_from(chans), min_size=lo, max_size=m, unique=True)))
    raw = []
    if n >= 2:
        pair = st.tuples(st.integers(1, n), st.integers(1, n), st.sampled_from(chans), st.sampled_from(offsets))
        for s, t, c, k in draw(st.lists(pair, max_size=12)):
            if s != t:
                raw.append(((s, c), (t, c + k)))
    return make(raw, domains)


def random_graph(seed: int, max_vertices: int = 18):
    """Random simple graph; vertex labels are (group, index) pairs with random groups."""
    from repack.graph import GraphView

    rng = random.Random(seed)
    n = rng.randint(0, max_vertices)
    p = rng.uniform(0.05, 0.9)
    groups = rng.randint(1, max(n, 1))
    adj = [set() for _ in range(n)]
    for u in range(n):
        for v in range(u + 1, n):
            if rng.random() < p:
                adj[u].add(v)
                adj[v].add(u)
    labels = tuple((rng.randrange(groups), i) for i in range(n))
    return GraphView(labels, tuple(tuple(sorted(a)) for a in adj))
