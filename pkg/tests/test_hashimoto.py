import io

import pytest

import nbperc as nb
from nbperc.hashimoto import build_arcs, hashimoto, smallest_strong_ell, strong_ell_connected
from nbperc.rng import rand_u64


def brute_force_rows(g):
    """Independent construction: test every arc pair against the rule."""
    arcs = build_arcs(g)
    rows = []
    for a, (_ta, ha) in enumerate(arcs.arcs):
        row = []
        for b, (tb, _hb) in enumerate(arcs.arcs):
            if ha == tb and b != arcs.reverse[a]:
                row.append(b)
        rows.append(tuple(row))
    return tuple(rows)


def test_arc_counts(corpus):
    assert build_arcs(corpus["P3"]).n_arcs == 4
    assert build_arcs(nb.cycle(5)).n_arcs == 10
    assert build_arcs(corpus["K4"]).n_arcs == 12


def test_reverse_is_involution(corpus):
    for g in corpus.values():
        arcs = build_arcs(g)
        for a in range(arcs.n_arcs):
            r = arcs.reverse[a]
            assert arcs.reverse[r] == a
            assert arcs.arcs[r] == (arcs.arcs[a][1], arcs.arcs[a][0])


def test_arc_ordering_sorted_by_tail_head(corpus):
    for g in corpus.values():
        arcs = build_arcs(g).arcs
        assert list(arcs) == sorted(arcs)


def _random_small_graph(seed):
    edges = set()
    for k in range(6):
        u = rand_u64(seed, 2 * k) % 5
        v = rand_u64(seed, 2 * k + 1) % 5
        if u != v:
            edges.add((min(u, v), max(u, v)))
    return nb.build_graph(sorted(edges), vertex_count=5)


def test_hashimoto_matches_brute_force(corpus):
    small = [corpus[k] for k in ("P3", "P4", "K3", "star3", "C5", "K4", "diamond")]
    small += [_random_small_graph(s) for s in range(6)]
    for g in small:
        assert hashimoto(g).rows == brute_force_rows(g)


def test_path3_has_two_entries():
    h = hashimoto(nb.generate("path", n=3))
    assert h.nnz == 2


def test_star_has_six_entries(corpus):
    assert hashimoto(corpus["star3"]).nnz == 6


def test_cycle_is_two_disjoint_directed_cycles():
    for n in (5, 8):
        h = hashimoto(nb.cycle(n))
        assert all(len(row) == 1 for row in h.rows)
        # successor permutation splits into orbits of length n
        seen = set()
        orbits = []
        for start in range(h.dimension):
            if start in seen:
                continue
            orbit = [start]
            seen.add(start)
            cur = h.rows[start][0]
            while cur != start:
                orbit.append(cur)
                seen.add(cur)
                cur = h.rows[cur][0]
            orbits.append(len(orbit))
        assert orbits == [n, n]


def test_row_degree_matches_head_degree(corpus):
    for g in corpus.values():
        h = hashimoto(g)
        for a, row in enumerate(h.rows):
            head = h.arc_set.arcs[a][1]
            assert len(row) == g.degree(head) - 1


def test_strong_ell_connectivity_cycle_never_holds():
    for n in (5, 8):
        g = nb.cycle(n)
        rep = strong_ell_connected(g, 2 * n)
        assert not rep.holds
        assert all(w is None for w in rep.witness.values())


def test_strong_ell_connectivity_k4():
    g = nb.complete(4)
    assert smallest_strong_ell(g, 10) == 3
    assert strong_ell_connected(g, 3).holds
    assert not strong_ell_connected(g, 2).holds


def test_strong_ell_connectivity_petersen():
    g = nb.petersen()
    assert smallest_strong_ell(g, 10) == 5
    rep = strong_ell_connected(g, 5)
    assert rep.holds
    assert rep.max_witness == 5
    assert not strong_ell_connected(g, 4).holds


def test_strong_ell_fails_with_leaves(corpus):
    rep = strong_ell_connected(corpus["tree33"], 50)
    assert not rep.holds


def test_coo_export(corpus):
    h = hashimoto(corpus["P3"])
    buf = io.StringIO()
    h.write_coo(buf)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "4 2"
    assert len(lines) == 3
    for line in lines[1:]:
        r, c, one = line.split()
        assert one == "1"
        assert int(c) in h.rows[int(r)]


def test_csr_roundtrip(corpus):
    h = hashimoto(corpus["petersen"])
    m = h.to_csr()
    assert m.shape == (30, 30)
    assert m.nnz == h.nnz == 60
    mt = h.to_csr_transpose()
    assert (m.T != mt).nnz == 0
