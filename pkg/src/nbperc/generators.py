"""Deterministic graph generators for the test and experiment corpus."""

from __future__ import annotations

from .graphs import Graph, GraphError, build_graph
from .localrules import grid2d_rule
from .rng import shuffled, substream


def tree(d: int, t: int) -> Graph:
    """Depth-t truncation of the infinite d-regular tree.

    The root (id 0) has d children; every other internal vertex has d - 1
    children.  tree(3, 1) is the star on 4 vertices.
    """
    if d < 2:
        raise ValueError("tree needs d >= 2")
    if t < 0:
        raise ValueError("tree needs t >= 0")
    edges = []
    frontier = [0]
    next_id = 1
    for depth in range(t):
        new_frontier = []
        for v in frontier:
            n_children = d if v == 0 else d - 1
            for _ in range(n_children):
                edges.append((v, next_id))
                new_frontier.append(next_id)
                next_id += 1
        frontier = new_frontier
    return build_graph(edges, vertex_count=next_id, family="tree", params={"d": d, "t": t})


def cycle(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    edges = [(i, (i + 1) % n) for i in range(n)]
    return build_graph(edges, family="cycle", params={"n": n})


def complete(n: int) -> Graph:
    if n < 2:
        raise ValueError("complete needs n >= 2")
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
    return build_graph(edges, family="complete", params={"n": n})


def path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    edges = [(i, i + 1) for i in range(n - 1)]
    return build_graph(edges, vertex_count=n, family="path", params={"n": n})


def star(k: int) -> Graph:
    """Star with k leaves (k + 1 vertices)."""
    if k < 1:
        raise ValueError("star needs k >= 1")
    return build_graph([(0, i) for i in range(1, k + 1)], family="star", params={"k": k})


def petersen() -> Graph:
    """The Petersen graph: 3-regular, 10 vertices, girth 5."""
    edges = []
    for i in range(5):
        edges.append((i, (i + 1) % 5))          # outer pentagon
        edges.append((5 + i, 5 + (i + 2) % 5))  # inner pentagram
        edges.append((i, 5 + i))                # spokes
    return build_graph(edges, family="petersen", params={})


def grid_ball(radius: int) -> Graph:
    """Induced subgraph of the square lattice on the L1 ball of given radius."""
    if radius < 0:
        raise ValueError("grid_ball needs radius >= 0")
    g, _keys = grid2d_rule().ball(radius)
    return Graph(g.n, g.adj, labels=g.labels, family="grid_ball", params={"radius": radius})


def random_regular(n: int, d: int, seed: int) -> Graph:
    """Random d-regular graph on n vertices via the pairing model.

    Stubs are shuffled and paired; attempts producing a self-loop or a
    repeated edge are rejected wholesale and retried with the next
    sub-seed, so the result is a uniform simple pairing, deterministic
    for fixed (n, d, seed).
    """
    if n < 3 or d < 2:
        raise ValueError("random_regular needs n >= 3 and d >= 2")
    if d >= n:
        raise GraphError(f"no simple {d}-regular graph on {n} vertices")
    if (n * d) % 2 != 0:
        raise GraphError(f"n*d must be even, got n={n}, d={d}")
    stubs_template = [v for v in range(n) for _ in range(d)]
    for attempt in range(100000):
        stubs = shuffled(stubs_template, substream(seed, attempt))
        edges = set()
        ok = True
        for i in range(0, len(stubs), 2):
            u, v = stubs[i], stubs[i + 1]
            if u == v:
                ok = False
                break
            key = (u, v) if u < v else (v, u)
            if key in edges:
                ok = False
                break
            edges.add(key)
        if ok:
            return build_graph(
                sorted(edges),
                vertex_count=n,
                family="random_regular",
                params={"n": n, "d": d},
                seed=seed,
            )
    raise GraphError(f"pairing model failed to produce a simple {d}-regular graph on {n} vertices")


FAMILIES = {
    "tree": (tree, ("d", "t")),
    "cycle": (cycle, ("n",)),
    "complete": (complete, ("n",)),
    "path": (path, ("n",)),
    "star": (star, ("k",)),
    "petersen": (petersen, ()),
    "grid_ball": (grid_ball, ("radius",)),
    "random_regular": (random_regular, ("n", "d", "seed")),
}


def generate(family: str, **params) -> Graph:
    """Dispatch a generator by family name with keyword parameters."""
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; known: {sorted(FAMILIES)}")
    fn, names = FAMILIES[family]
    missing = [k for k in names if k not in params]
    if missing:
        raise ValueError(f"family {family!r} needs parameters {missing}")
    extra = [k for k in params if k not in names]
    if extra:
        raise ValueError(f"family {family!r} got unexpected parameters {extra}")
    return fn(**{k: params[k] for k in names})
