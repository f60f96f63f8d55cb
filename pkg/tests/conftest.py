import pytest

import nbperc as nb


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernels once so per-test timings stay honest."""
    g = nb.complete(3)
    nb.estimate_tau(g, 0.5, 0, 1, trials=8, master_seed=0)
    nb.estimate_chi(g, 0.5, 0, trials=8, master_seed=0)
    nb.exact_tau(g, 0.5, 0, 1)
    nb.exact_chi(g, 0.5, 0)
    nb.exact_reach(g, 0.5, 0, [1])
    from nbperc.percolation import pair_connectivity_counts

    pair_connectivity_counts(g, 0.5, [(0, 1)], trials=8, master_seed=0)
    from nbperc.localrules import SubgraphSequence, tree_rule

    seq = SubgraphSequence.from_rule(tree_rule(3), 1)
    nb.estimate_theta_proxy(seq, 1, 0.5, trials=8, master_seed=0)


@pytest.fixture(scope="session")
def corpus():
    """Small named graphs shared across tests."""
    return {
        "K3": nb.complete(3),
        "K4": nb.complete(4),
        "P3": nb.generate("path", n=3),
        "P4": nb.generate("path", n=4),
        "C5": nb.cycle(5),
        "C8": nb.cycle(8),
        "star3": nb.generate("star", k=3),
        "petersen": nb.petersen(),
        "tree33": nb.tree(3, 3),
        "grid2": nb.grid_ball(2),
        "two_edges": nb.build_graph([(0, 1), (2, 3)]),
        "tadpole": nb.build_graph([(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)]),
        "diamond": nb.build_graph([(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
        "K23": nb.build_graph([(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]),
    }
