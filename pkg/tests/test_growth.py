import math

import pytest

import nbperc as nb
from nbperc.growth import growth_for_graph, walk_norms, walk_norms_from_vertex
from nbperc.hashimoto import hashimoto, smallest_strong_ell
from nbperc.spectral import spectral_radius


def test_cycle_lambdas_all_one():
    h = hashimoto(nb.cycle(6))
    est = walk_norms(h, 0, m_max=50, p_norm=1)
    assert est.lambda_sequence == [1.0] * 50
    assert est.liminf_estimate == est.limsup_estimate == 1.0
    assert not est.extinct


def test_tree_seed_goes_extinct():
    g = nb.tree(3, 4)
    h = hashimoto(g)
    # first arc in (tail, head) order is root -> first child
    assert h.arc_set.arcs[0][0] == 0
    est = walk_norms(h, 0, m_max=50)
    assert est.extinct
    assert est.extinction_step == 4  # depth remaining below the seed arc
    assert est.liminf_estimate == est.limsup_estimate == 0.0


def test_upward_tree_seed_survives_longer():
    g = nb.tree(3, 4)
    h = hashimoto(g)
    # a leaf's outgoing arc points up and can reach depth 4 on other branches
    leaf = g.n - 1
    arc_up = h.arc_set.out_arcs[leaf][0]
    est = walk_norms(h, arc_up, m_max=50)
    assert est.extinct
    assert est.extinction_step == 2 * 4


def test_petersen_lambda_converges_to_rho():
    h = hashimoto(nb.petersen())
    rho = spectral_radius(h).rho
    est = walk_norms(h, 0, m_max=200, p_norm=1)
    assert abs(est.lambda_sequence[-1] - rho) / rho <= 0.02


def test_finite_graph_growth_identity():
    for g in (nb.petersen(), nb.complete(4), nb.grid_ball(4)):
        rho = spectral_radius(hashimoto(g)).rho
        for p_norm in (1, 2):
            gr = growth_for_graph(g, p_norm=p_norm, m_max=200)
            assert abs(gr.sup_liminf - rho) / rho <= 0.02
            assert abs(gr.sup_limsup - rho) / rho <= 0.02
            assert gr.sup_liminf <= gr.sup_limsup


def test_tree_growth_zero_for_all_seeds():
    gr = growth_for_graph(nb.tree(3, 3), p_norm=1, m_max=60)
    assert gr.sup_liminf == 0.0
    assert gr.sup_limsup == 0.0
    assert all(e.extinct for e in gr.estimates)


def test_norm_ordering_between_p1_and_p2():
    for g in (nb.petersen(), nb.complete(4), nb.grid_ball(4)):
        g1 = growth_for_graph(g, p_norm=1, m_max=200)
        g2 = growth_for_graph(g, p_norm=2, m_max=200)
        assert math.sqrt(g1.sup_liminf) <= g2.sup_liminf + 1e-9
        assert g2.sup_liminf <= g1.sup_liminf + 1e-6
        assert g2.sup_limsup <= g1.sup_limsup + 1e-6


def test_window_default_and_override():
    h = hashimoto(nb.petersen())
    est = walk_norms(h, 0, m_max=100)
    assert est.window == 25
    est2 = walk_norms(h, 0, m_max=100, window=10)
    assert est2.window == 10
    tail = est2.lambda_sequence[-10:]
    assert est2.liminf_estimate == min(tail)
    assert est2.limsup_estimate == max(tail)


def test_vertex_seeded_variant():
    h = hashimoto(nb.petersen())
    est = walk_norms_from_vertex(h, 0, m_max=100)
    assert abs(est.lambda_sequence[-1] - 2.0) <= 0.05
    assert not est.extinct


def test_seed_sampling_deterministic():
    g = nb.grid_ball(3)
    a = growth_for_graph(g, m_max=30, seed_sample=5, sample_seed=1)
    b = growth_for_graph(g, m_max=30, seed_sample=5, sample_seed=1)
    assert a.seeds_used == b.seeds_used
    assert len(a.seeds_used) == 5
    assert [e.liminf_estimate for e in a.estimates] == [e.liminf_estimate for e in b.estimates]


def test_perron_reverse_pair_ratio(corpus):
    # when every arc reaches its reverse within ell steps, the Perron
    # entries of mutually reverse arcs satisfy x_rev >= x / rho^ell
    for name in ("K4", "petersen", "diamond", "K23"):
        g = corpus[name]
        h = hashimoto(g)
        ell = smallest_strong_ell(g, 20, h=h)
        assert ell is not None, name
        res = spectral_radius(h, tol=1e-12)
        x = res.perron_vector
        factor = res.rho**ell
        for a in range(h.dimension):
            rev = h.arc_set.reverse[a]
            assert x[rev] * factor >= x[a] - 1e-12, name


def test_walk_norms_validation():
    h = hashimoto(nb.complete(3))
    with pytest.raises(ValueError):
        walk_norms(h, 99, 10)
    with pytest.raises(ValueError):
        walk_norms(h, 0, 0)
    with pytest.raises(ValueError):
        walk_norms(h, 0, 10, p_norm=3)
