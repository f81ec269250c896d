import logging

import pytest

from polaris.errors import PreconditionError
from polaris.polar import build_polar_space
from polaris.search import (
    Pattern,
    open_problem_search,
    random_singular,
    resolve_method,
    search_embeddings,
)
from polaris.util import make_rng


W3 = build_polar_space("symplectic", 3, 2)
W4 = build_polar_space("symplectic", 4, 2)


def test_patterns():
    assert Pattern("hypercube", 3).m == 2
    assert Pattern("hypercube", 3).name == "H_3"
    assert Pattern("pj", 4, 1).name == "PJ(4,1)"
    assert Pattern("pj", 4, 1).graph().number_of_nodes() == 24
    with pytest.raises(ValueError, match="Unknown pattern kind"):
        Pattern("cube", 3)
    with pytest.raises(ValueError):
        Pattern("pj", 3, 3)

def test_method_resolution():
    assert resolve_method(W3, "auto") == "bitmask"
    assert resolve_method(W4, "auto") == "local"
    assert resolve_method(W4, "bitmask") == "bitmask"
    with pytest.raises(ValueError, match="Unknown search method"):
        resolve_method(W3, "fast")

def test_random_singular_subspaces():
    rng = make_rng(5)
    for k in range(4):
        sub = random_singular(W4, k, rng)
        assert sub.proj_dim == k
    with pytest.raises(PreconditionError):
        random_singular(W4, 4, rng)

def test_octahedra_among_lines_lie_in_a_big_star_or_a_rank_three_interval():
    report = search_embeddings(W4, Pattern("pj", 3, 0), 1, trials=500, seed=3, method="local")
    assert report.findings
    for finding in report.findings:
        assert finding.info["case"] in ("big-star", "rank-three")
        assert len(finding.members) == 6

def test_pj_4_1_does_not_embed_in_the_lines_of_rank_three():
    report = search_embeddings(W3, Pattern("pj", 4, 1), 1, trials=10_000, seed=0, node_cap=16)
    assert report.attempted == 10_000
    assert not report.truncated
    assert report.findings == []

def test_locally_independent_cubes_are_apartments():
    report = search_embeddings(W3, Pattern("hypercube", 3), 2, trials=200, seed=9)
    assert report.findings
    for finding in report.findings:
        if finding.info["locally_independent"]:
            assert finding.info["accepted"]
            assert finding.info["N_dim"] == -1

def test_findings_are_distinct_and_in_trial_order():
    report = search_embeddings(W3, Pattern("pj", 3, 1), 1, trials=100, seed=4)
    trials = [f.trial for f in report.findings]
    assert trials == sorted(trials)
    assert len({frozenset(f.members) for f in report.findings}) == len(report.findings)

def test_results_do_not_depend_on_the_worker_count(monkeypatch):
    def run():
        report = search_embeddings(W3, Pattern("pj", 3, 1), 1, trials=60, seed=12)
        return [(f.trial, f.members) for f in report.findings]

    monkeypatch.setenv("POLARIS_THREADS", "1")
    single = run()
    monkeypatch.setenv("POLARIS_THREADS", "4")
    assert run() == single

def test_budget_truncates_the_trials():
    report = search_embeddings(W3, Pattern("pj", 2, 0), 1, trials=50, seed=1, budget=10)
    assert report.attempted == 10
    assert report.truncated
    assert report.trials == 50

def test_level_must_exist():
    with pytest.raises(PreconditionError):
        search_embeddings(W3, Pattern("pj", 2, 0), 3, trials=1)

def test_open_problem_harness():
    report = open_problem_search("symplectic", 2, 4, 1, trials=20, seed=2)
    assert report.k == 0
    assert report.pattern.name == "PJ(4,1)"
    assert report.attempted == 20
    for finding in report.findings:
        assert "cliques_independent" in finding.info

def test_open_problem_harness_checks_its_range(caplog):
    with pytest.raises(PreconditionError):
        open_problem_search("symplectic", 2, 3, 0, trials=0)
    with caplog.at_level(logging.WARNING, logger="polaris.search"):
        open_problem_search("symplectic", 2, 3, 1, trials=0)
    assert "2m+2" in caplog.text
