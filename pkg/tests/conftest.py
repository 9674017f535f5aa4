"""Shared fixtures: the worked base solved from its periodic expansion of 1,
and both pipeline runs on it (session scoped, they back many tests)."""

from __future__ import annotations

import numpy as np
import pytest

from univoque.beta import BetaBase, beta_from_periodic_expansion, beta_ifs
from univoque.common import code_to_word
from univoque.pipeline import run_beta_pipeline, run_ifs_pipeline


@pytest.fixture(scope="session")
def beta_star() -> float:
    return beta_from_periodic_expansion((1, 1, 1), (0, 0, 0, 0, 1))


@pytest.fixture(scope="session")
def bstar_base(beta_star) -> BetaBase:
    return BetaBase(beta_star)


@pytest.fixture(scope="session")
def bstar_lex(bstar_base):
    return run_beta_pipeline(base=bstar_base)


@pytest.fixture(scope="session")
def bstar_geo(bstar_base):
    return run_ifs_pipeline(beta_ifs(bstar_base))


@pytest.fixture(scope="session")
def b32_lex():
    return run_beta_pipeline(base=BetaBase(3.2))


def make_walker(graph, seed):
    """Uniform random walk emitting symbol sequences from a pruned graph."""
    rng = np.random.default_rng(seed)
    succ = [[] for _ in range(graph.n)]
    for s, d in zip(graph.edge_src, graph.edge_dst):
        succ[int(s)].append(int(d))

    def walk(length: int) -> tuple[int, ...]:
        v = int(rng.integers(graph.n))
        word = list(code_to_word(int(graph.vertex_codes[v]), graph.m, graph.word_length))
        while len(word) < length:
            v = succ[v][int(rng.integers(len(succ[v])))]
            word.append(int(graph.vertex_codes[v]) % graph.m)
        return tuple(word[:length])

    return walk
