import math

import numpy as np
import pytest

import pdbo


def test_dominance_and_front():
    assert pdbo.dominates([0.0, 1.0], [1.0, 1.0])
    assert not pdbo.dominates([1.0, 1.0], [1.0, 1.0])
    pts = np.array([[0.0, 1.0], [1.0, 0.0], [1.0, 1.0], [0.5, 0.5]])
    assert pdbo.nondominated_front(pts) == [0, 1, 3]


def test_metrics():
    pts = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert pdbo.hypervolume(pts, [2.0, 2.0]) == pytest.approx(3.0)
    assert pdbo.hvc(pts, [2.0, 2.0]) == pytest.approx([1.0, 1.0])
    assert pdbo.dpf(pts) == pytest.approx(math.sqrt(2.0))
    assert pdbo.igd(pts, pts) == 0.0


def test_dpp_select_picks_distinct_items():
    rng = np.random.default_rng(0)
    a = rng.normal(size=(6, 6))
    pick = pdbo.dpp_select(a @ a.T, 3)
    assert len(set(pick)) == 3


def test_problems():
    p = pdbo.make_problem("zdt1")
    assert (p.d, p.k) == (25, 2)
    assert list(p.evaluate(np.zeros(25))) == [0.0, 1.0]
    assert len(pdbo.problem_registry()) == 7
    with pytest.raises(KeyError):
        pdbo.make_problem("nonexistent")
    with pytest.raises(ValueError):
        p.evaluate(np.full(25, 2.0))


def small_config():
    c = pdbo.RunConfig()
    c.problem = "zdt2"
    c.dim = 3
    c.batch_size = 2
    c.iterations = 3
    c.population_size = 12
    c.generations = 5
    c.ts_features = 50
    c.gp_starts = 2
    c.seed = 11
    return c


def test_run_and_round_trip(tmp_path):
    c = small_config()
    t = pdbo.run(c)
    assert len(t.records) == 3
    assert t.total_evaluations() == 5 + 3 * 2
    for r in t.records:
        assert sum(r.probabilities) == pytest.approx(1.0, abs=1e-12)
        assert r.selected_af in t.arm_names
    path = tmp_path / "trace.csv"
    pdbo.write_trace(t, path)
    back = pdbo.read_trace(path)
    assert [r.hypervolume for r in back.records] == [r.hypervolume for r in t.records]
    assert back.pareto_front == t.pareto_front


def test_baselines_and_errors(tmp_path):
    c = small_config()
    c.baseline = "random"
    t = pdbo.run(c)
    assert t.arm_names == []
    assert all(r.selected_af == "random" for r in t.records)
    c.population_size = 1
    with pytest.raises(ValueError):
        pdbo.run(c)
    with pytest.raises(OSError):
        pdbo.write_trace(t, tmp_path / "missing" / "x.csv")
