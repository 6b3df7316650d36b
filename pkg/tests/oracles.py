"""Brute-force reference implementations used only by the tests."""
import itertools
import math

from lastmile.network import Edge, Node, RoadNetwork


def random_strong_graph(rng, n, extra=None, integer=True):
    """Random strongly connected digraph on ``n`` nodes, depot 0.

    A random Hamiltonian cycle guarantees strong connectivity; extra random
    edges are added on top.
    """
    order = [int(x) for x in rng.permutation(n)]
    pairs = {(order[i], order[(i + 1) % n]) for i in range(n)} if n > 1 else set()
    extra = rng.integers(0, n * (n - 1) // 2 + 1) if extra is None else extra
    for _ in range(int(extra)):
        u, v = (int(x) for x in rng.choice(n, size=2, replace=False))
        pairs.add((u, v))
    nodes = [Node(i, (float(rng.uniform(0, 10)), float(rng.uniform(0, 10))), i == 0) for i in range(n)]
    edges = []
    for u, v in sorted(pairs):
        if integer:
            edges.append(Edge(u, v, float(rng.integers(1, 6)), 1.0))
        else:
            edges.append(Edge(u, v, float(rng.uniform(0.1, 5.0)), float(rng.uniform(0.2, 2.0))))
    return RoadNetwork(nodes, edges)


def enumerate_shortest(net, source, target):
    """(min cost, lexicographically smallest min-cost node sequence) by
    enumerating every simple path."""
    if source == target:
        return 0.0, (source,)
    best = None
    stack = [(source, (source,))]
    while stack:
        u, seq = stack.pop()
        for (a, b), e in net.edges.items():
            if a != u or b in seq:
                continue
            nseq = seq + (b,)
            if b == target:
                c = math.fsum(net.edges[(p, q)].cost for p, q in zip(nseq[:-1], nseq[1:]))
                if best is None or (c, nseq) < best:
                    best = (c, nseq)
            else:
                stack.append((b, nseq))
    return best


def naive_complete_linkage(points, labels):
    """O(M^3) complete linkage recomputing every inter-cluster distance.

    Returns merges as (sorted members of first, sorted members of second,
    distance), pair ordered by member tuples.
    """
    clusters = [(lab,) for lab in labels]
    pos = dict(zip(labels, points))
    merges = []
    while len(clusters) > 1:
        best = None
        for a, b in itertools.combinations(clusters, 2):
            d = max(math.dist(pos[x], pos[y]) for x in a for y in b)
            key = (d, min(a, b), max(a, b))
            if best is None or key < best:
                best = key
        d, a, b = best
        clusters.remove(a)
        clusters.remove(b)
        clusters.append(tuple(sorted(a + b)))
        merges.append((a, b, d))
    return merges


def dominance_flags(points):
    flags = []
    for i, (c, s) in enumerate(points):
        dominated = any(
            c2 <= c and s2 <= s and (c2 < c or s2 < s)
            for j, (c2, s2) in enumerate(points) if j != i
        )
        flags.append(not dominated)
    return flags


def tree_merges_as_sets(tree):
    """Convert a ClusterTree into the oracle's (members, members, distance) form."""
    m = tree.n_leaves
    members = {i: (tree.labels[i],) for i in range(m)}
    out = []
    for r, mg in enumerate(tree.merges):
        a, b = members.pop(mg.left), members.pop(mg.right)
        a, b = min(a, b), max(a, b)
        out.append((a, b, mg.distance))
        members[m + r] = tuple(sorted(a + b))
    return out
