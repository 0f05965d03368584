"""Brute-force reference implementations used as test oracles.

Each one is written from the definition, as directly as possible, and shares
no code with the package.
"""

from __future__ import annotations

from itertools import combinations

INF = float("inf")


def adjacency_matrix(nodes, edges):
    idx = {n: i for i, n in enumerate(nodes)}
    n = len(nodes)
    A = [[0.0] * n for _ in range(n)]
    for e in edges:
        u, v = e[0], e[1]
        w = e[2] if len(e) > 2 else 1.0
        A[idx[u]][idx[v]] = w
        A[idx[v]][idx[u]] = w
    return A


def clustering_bf(nodes, edges):
    """Local clustering by enumerating every neighbor pair."""
    A = adjacency_matrix(nodes, edges)
    out = {}
    for i, node in enumerate(nodes):
        nbrs = [j for j in range(len(nodes)) if A[i][j]]
        if len(nbrs) < 2:
            out[node] = 0.0
            continue
        closed = sum(1 for a, b in combinations(nbrs, 2) if A[a][b])
        out[node] = closed / (len(nbrs) * (len(nbrs) - 1) / 2)
    return out


def distances_bf(nodes, edges):
    """All-pairs hop distances by Floyd-Warshall."""
    A = adjacency_matrix(nodes, edges)
    n = len(nodes)
    D = [[0 if i == j else (1 if A[i][j] else INF) for j in range(n)] for i in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if D[i][k] + D[k][j] < D[i][j]:
                    D[i][j] = D[i][k] + D[k][j]
    return D


def average_path_length_bf(nodes, edges):
    D = distances_bf(nodes, edges)
    finite = [D[i][j] for i in range(len(nodes)) for j in range(len(nodes)) if i != j and D[i][j] < INF]
    return sum(finite) / len(finite) if finite else None


def modularity_bf(nodes, edges, assignment):
    """Newman's double sum (1/2m) sum_ij [A_ij - k_i k_j / 2m] delta(c_i, c_j)."""
    A = adjacency_matrix(nodes, edges)
    k = [sum(row) for row in A]
    two_m = sum(k)
    total = 0.0
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if assignment[a] == assignment[b]:
                total += A[i][j] - k[i] * k[j] / two_m
    return total / two_m


def set_partitions(items):
    """Every partition of ``items`` as a list of block ids (restricted growth strings)."""
    n = len(items)
    if n == 0:
        yield []
        return

    def rec(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for b in range(top + 2):
            prefix.append(b)
            yield from rec(prefix, max(top, b))
            prefix.pop()

    yield from rec([0], 0)


def best_modularity_bf(nodes, edges):
    best = -INF
    for blocks in set_partitions(nodes):
        q = modularity_bf(nodes, edges, dict(zip(nodes, blocks)))
        best = max(best, q)
    return best


def closure_bf(seeds, parent_of):
    """Least fixed point of S = seeds + {m : parent_of[m] in S}, by iteration."""
    S = set(seeds)
    while True:
        grown = S | {m for m, r in parent_of.items() if r is not None and r in S}
        if grown == S:
            return S
        S = grown


def participation_bf(counts):
    """Reference PI from a (region, count) list."""
    ranked = sorted(counts, key=lambda rc: (-rc[1], rc[0]))
    un10 = ranked[9][1]
    return {r: (c - un10) / un10 for r, c in counts}


def substring_count_bf(text, entries):
    """Leftmost-longest non-overlapping matches, by explicit search over every position."""
    i = count = 0
    while i < len(text):
        hits = [e for e in entries if text[i:i + len(e)] == e]
        if hits:
            count += 1
            i += max(len(e) for e in hits)
        else:
            i += 1
    return count
