import hashlib

import numpy as np
import pytest

from bhrank import generators
from bhrank.errors import SpecUnreachable, WeightOutOfBounds
from bhrank.generators import (
    ErdosRenyiSpec,
    ScaleFreeSpec,
    generate_er,
    generate_scale_free,
    scale_weights,
)
from bhrank.graph import WeightBounds, build_graph
from bhrank.io import write_edge_list


def _digest(g, tmp_path, name):
    path = tmp_path / name
    write_edge_list(g, path)
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _three_sigma(g, n, p):
    mean = n * (n - 1) * p
    sigma = np.sqrt(n * (n - 1) * p * (1 - p))
    return abs(g.n_arcs - mean) <= 3 * sigma


# -- Erdos-Renyi -------------------------------------------------------------

def test_er_arc_count_single_seed():
    spec = ErdosRenyiSpec(1000, mean_outdegree=10, seed=42)
    assert _three_sigma(generate_er(spec), 1000, spec.p)


def test_er_arc_count_over_twenty_seeds():
    counts = [generate_er(ErdosRenyiSpec(1000, seed=s)).n_arcs for s in range(20)]
    p = 10 / 999
    sigma = np.sqrt(1000 * 999 * p * (1 - p))
    assert all(abs(c - 10_000) <= 3 * sigma for c in counts)
    # the mean of 20 draws should sit much closer still
    assert abs(np.mean(counts) - 10_000) <= 3 * sigma / np.sqrt(20)


def test_er_zero_probability():
    g = generate_er(ErdosRenyiSpec(2, mean_outdegree=0))
    assert g.n == 2 and g.n_arcs == 0


def test_er_no_self_loops_and_weights_in_range():
    g = generate_er(ErdosRenyiSpec(300, mean_outdegree=20, weight_low=3, weight_high=9, seed=1))
    assert np.all(g.src != g.dst)
    assert np.all((g.weight >= 3) & (g.weight <= 9))
    assert np.all(g.weight == np.round(g.weight))
    assert set(np.unique(g.weight)) == set(range(3, 10))


def test_er_determinism(tmp_path):
    spec = ErdosRenyiSpec(500, seed=9)
    assert _digest(generate_er(spec), tmp_path, "a") == _digest(generate_er(spec), tmp_path, "b")
    other = _digest(generate_er(ErdosRenyiSpec(500, seed=10)), tmp_path, "c")
    assert other != _digest(generate_er(spec), tmp_path, "d")


def test_er_geometric_path(monkeypatch):
    monkeypatch.setattr(generators, "BERNOULLI_MAX_N", 100)
    n, k = 3000, 8.0
    g = generate_er(ErdosRenyiSpec(n, mean_outdegree=k, seed=4))
    assert _three_sigma(g, n, k / (n - 1))
    assert np.all(g.src != g.dst)
    # pairs spread over every source row
    assert np.count_nonzero(g.outdegree) > 0.99 * n


def test_er_geometric_matches_bernoulli_in_distribution(monkeypatch):
    n, k = 200, 5.0
    bern = [generate_er(ErdosRenyiSpec(n, k, seed=s)).outdegree for s in range(20)]
    monkeypatch.setattr(generators, "BERNOULLI_MAX_N", 10)
    geo = [generate_er(ErdosRenyiSpec(n, k, seed=s)).outdegree for s in range(20)]
    for degs in (bern, geo):
        d = np.concatenate(degs)
        assert abs(d.mean() - k) < 0.1
        assert abs(d.var() - k * (1 - k / (n - 1))) < 0.5


@pytest.mark.parametrize("kw", [dict(n=0), dict(n=10, mean_outdegree=10), dict(n=5, weight_low=3, weight_high=3)])
def test_er_spec_validation(kw):
    with pytest.raises(ValueError):
        ErdosRenyiSpec(**kw)


# -- scale-free --------------------------------------------------------------

def test_scale_free_heavy_tail():
    g = generate_scale_free(ScaleFreeSpec(1000, seed=7))
    indeg = np.bincount(g.dst, minlength=g.n)
    assert g.n == 1000
    # most nodes never receive an arc, so the median is taken over positive in-degrees
    assert indeg.max() > 20 * np.median(indeg[indeg > 0])


def test_er_is_not_heavy_tailed():
    g = generate_er(ErdosRenyiSpec(1000, seed=7))
    indeg = np.bincount(g.dst, minlength=g.n)
    assert indeg.max() < 3 * np.median(indeg[indeg > 0])


def test_pure_alpha_gives_tree():
    g = generate_scale_free(ScaleFreeSpec(5, alpha=1, beta=0, gamma=0, seed=3))
    assert g.n == 5 and g.n_arcs == 4
    # every node except the root 1 has exactly one out-arc
    assert np.bincount(g.src, minlength=5).tolist() == [1, 0, 1, 1, 1]


def test_pure_gamma_gives_out_tree():
    g = generate_scale_free(ScaleFreeSpec(6, alpha=0, beta=0, gamma=1, seed=3))
    assert g.n_arcs == 5
    assert np.bincount(g.dst, minlength=6).tolist() == [0, 1, 1, 1, 1, 1]


def test_scale_free_determinism(tmp_path):
    spec = ScaleFreeSpec(1000, seed=7)
    assert _digest(generate_scale_free(spec), tmp_path, "a") == _digest(generate_scale_free(spec), tmp_path, "b")


def test_unreachable_spec():
    with pytest.raises(SpecUnreachable):
        generate_scale_free(ScaleFreeSpec(10, alpha=0, beta=1, gamma=0))


@pytest.mark.parametrize("kw", [
    dict(alpha=0.5, beta=0.5, gamma=0.5),
    dict(alpha=-0.1, beta=1.0, gamma=0.1),
    dict(delta_in=-1),
    dict(n=1),
    dict(initial="triangle"),
])
def test_scale_free_spec_validation(kw):
    base = dict(n=10)
    base.update(kw)
    with pytest.raises(ValueError):
        ScaleFreeSpec(**base)


@pytest.mark.parametrize("initial, seed_arcs", [("arc", 1), ("cycle", 2)])
@pytest.mark.parametrize("seed", range(3))
def test_process_counts_every_step(initial, seed_arcs, seed):
    rec = []
    g = generate_scale_free(ScaleFreeSpec(400, seed=seed, initial=initial), record=rec)
    accepted = new_nodes = 0
    for kind, ok, n_nodes, n_arcs in rec:
        accepted += ok
        new_nodes += kind in ("alpha", "gamma")
        if kind != "beta":
            assert ok
        assert n_arcs == seed_arcs + accepted
        assert n_nodes == 2 + new_nodes
    assert g.n == 400 and g.n_arcs == seed_arcs + accepted
    assert np.all(g.src != g.dst)
    assert len(set(zip(g.src.tolist(), g.dst.tolist()))) == g.n_arcs


def test_collisions_exhaust_and_skip():
    # two nodes, beta-heavy: the only free pair 1->0 fills quickly, then steps get skipped
    rec = []
    generate_scale_free(ScaleFreeSpec(3, alpha=0.01, beta=0.98, gamma=0.01, seed=0), record=rec)
    assert any(kind == "beta" and not ok for kind, ok, *_ in rec)


def test_scale_free_weights_in_range():
    g = generate_scale_free(ScaleFreeSpec(500, weight_low=2, weight_high=6, seed=1))
    assert np.all((g.weight >= 2) & (g.weight <= 6))
    assert g.bounds == WeightBounds.uniform(2, 6)


# -- scaling -----------------------------------------------------------------

def test_scale_to_full_range():
    g = generate_er(ErdosRenyiSpec(300, seed=2))
    assert g.weight.max() == 49
    h = scale_weights(g, 99 / 49, WeightBounds.uniform(0, 99))
    assert h.weight.max() == 99
    assert np.array_equal(h.src, g.src) and np.array_equal(h.dst, g.dst)
    assert np.allclose(h.weight, g.weight * 99 / 49, rtol=1e-15)


def test_scale_identity():
    g = generate_er(ErdosRenyiSpec(100, seed=2))
    h = scale_weights(g, 1.0)
    assert np.array_equal(h.weight, g.weight) and np.array_equal(h.src, g.src)
    assert h.bounds == g.bounds


def test_scale_out_of_bounds():
    g = build_graph(2, [(0, 1, 49.0)], WeightBounds.uniform(0, 49))
    with pytest.raises(WeightOutOfBounds):
        scale_weights(g, 3, WeightBounds.uniform(0, 99))


def test_scale_rejects_bad_factor():
    g = build_graph(2, [(0, 1, 1.0)])
    for f in (0, -1, float("inf")):
        with pytest.raises(ValueError):
            scale_weights(g, f)
