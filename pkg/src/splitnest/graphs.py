"""Small undirected-graph helpers: connectivity and biconnected components.

Graphs are given as an adjacency sequence indexed by vertex 0..nv-1.  The
biconnected decomposition is the iterative Hopcroft-Tarjan edge-stack
algorithm (no recursion, so deep path graphs are fine).
"""

from __future__ import annotations

from typing import Sequence


def connected_components(nv: int, adj: Sequence[Sequence[int]]) -> list[list[int]]:
    seen = [False] * nv
    out = []
    for root in range(nv):
        if seen[root]:
            continue
        seen[root] = True
        comp = [root]
        stack = [root]
        while stack:
            v = stack.pop()
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    stack.append(w)
        out.append(comp)
    return out


def is_connected(nv: int, adj: Sequence[Sequence[int]]) -> bool:
    return nv <= 1 or len(connected_components(nv, adj)) == 1


def biconnected_components(nv: int, adj: Sequence[Sequence[int]]) -> list[list[tuple[int, int]]]:
    """Blocks as edge lists; a bridge appears as a single-edge block."""
    disc = [-1] * nv
    low = [0] * nv
    parent = [-1] * nv
    blocks: list[list[tuple[int, int]]] = []
    estack: list[tuple[int, int]] = []
    timer = 0
    for root in range(nv):
        if disc[root] != -1:
            continue
        disc[root] = low[root] = timer
        timer += 1
        iters = {root: iter(adj[root])}
        dfs = [root]
        while dfs:
            v = dfs[-1]
            descended = False
            for w in iters[v]:
                if w == parent[v]:
                    continue
                if disc[w] == -1:
                    parent[w] = v
                    disc[w] = low[w] = timer
                    timer += 1
                    estack.append((v, w))
                    iters[w] = iter(adj[w])
                    dfs.append(w)
                    descended = True
                    break
                if disc[w] < disc[v]:
                    estack.append((v, w))
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            if descended:
                continue
            dfs.pop()
            if dfs:
                u = dfs[-1]
                if low[v] < low[u]:
                    low[u] = low[v]
                if low[v] >= disc[u]:
                    comp = []
                    while estack:
                        e = estack.pop()
                        comp.append(e)
                        if e == (u, v):
                            break
                    blocks.append(comp)
    return blocks


def norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)
