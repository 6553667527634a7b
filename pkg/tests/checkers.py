"""Direct combinatorial deciders for the catalogue problems.

These share no code with the logic layer.  Where a problem's formula has a
particular reading on degenerate inputs (empty sets count as connected,
spanning structures need at least two vertices, the empty cycle is allowed)
the checker follows that reading.
"""
from __future__ import annotations

import itertools
from collections import deque


def _adj(n, edges):
    adj = {v: set() for v in range(n)}
    for u, v in edges:
        adj[u].add(v)
        adj[v].add(u)
    return adj


def _connected(vertices, adj):
    vertices = set(vertices)
    if not vertices:
        return True
    start = next(iter(vertices))
    seen = {start}
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in adj[v] & vertices:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen == vertices


def _subsets(n, max_size=None):
    top = n if max_size is None else min(n, max_size)
    for size in range(top + 1):
        yield from (set(c) for c in itertools.combinations(range(n), size))


def _acyclic(vertices, edges):
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for u, v in edges:
        if u in parent and v in parent:
            a, b = find(u), find(v)
            if a == b:
                return False
            parent[a] = b
    return True


def _bipartite(vertices, adj):
    color = {}
    for s in vertices:
        if s in color:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v] & vertices:
                if w not in color:
                    color[w] = 1 - color[v]
                    queue.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def _distances(n, adj, src):
    dist = {src: 0}
    queue = deque([src])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def vertex_cover(n, edges, k):
    return any(all(u in S or v in S for u, v in edges) for S in _subsets(n, k))


def dominating_set(n, edges, k, r):
    adj = _adj(n, edges)
    dist = [_distances(n, adj, v) for v in range(n)]
    return any(all(any(dist[s].get(v, r + 1) <= r for s in S) for v in range(n)) for S in _subsets(n, k))


def steiner_tree(n, edges, k, T):
    adj = _adj(n, edges)
    T = set(T)
    return any(T <= S and _connected(S, adj) for S in _subsets(n, k + len(T)))


def feedback_vertex_set(n, edges, k, connected=False):
    adj = _adj(n, edges)
    for S in _subsets(n, k):
        rest = set(range(n)) - S
        if _acyclic(rest, edges) and (not connected or _connected(S, adj)):
            return True
    return False


def connected_vertex_cover(n, edges, k):
    adj = _adj(n, edges)
    return any(all(u in S or v in S for u, v in edges) and _connected(S, adj) for S in _subsets(n, k))


def connected_dominating_set(n, edges, k):
    adj = _adj(n, edges)
    return any(all(v in S or adj[v] & S for v in range(n)) and _connected(S, adj) for S in _subsets(n, k))


def connected_odd_cycle_transversal(n, edges, k):
    adj = _adj(n, edges)
    return any(_connected(S, adj) and _bipartite(set(range(n)) - S, adj) for S in _subsets(n, k))


def _simple_cycles_through(start, allowed, adj):
    """Vertex sets (as tuples in order) of simple cycles of length >= 3 through ``start``."""
    out = []

    def extend(path, seen):
        v = path[-1]
        for w in adj[v] & allowed:
            if w == start and len(path) >= 3:
                out.append(tuple(path))
            elif w not in seen and w > start:
                seen.add(w)
                path.append(w)
                extend(path, seen)
                path.pop()
                seen.discard(w)

    extend([start], {start})
    return out


def min_cycle_cover_undirected(n, edges, k):
    adj = _adj(n, edges)
    best = [None]

    def go(left, used):
        if best[0] is not None and used >= best[0]:
            return
        if not left:
            best[0] = used
            return
        s = min(left)
        for cyc in _simple_cycles_through(s, left, adj):
            go(left - set(cyc), used + 1)

    go(set(range(n)), 0)
    return best[0] is not None and best[0] <= k


def min_cycle_cover_directed(n, arcs, k):
    arcset = set(arcs)
    best = None
    for perm in itertools.permutations(range(n)):
        if any(perm[v] == v or (v, perm[v]) not in arcset for v in range(n)):
            continue
        seen, cycles = set(), 0
        for v in range(n):
            if v not in seen:
                cycles += 1
                while v not in seen:
                    seen.add(v)
                    v = perm[v]
        best = cycles if best is None else min(best, cycles)
    return best is not None and best <= k


def _longest_simple_path(n, succ):
    best = 0

    def dfs(v, seen, length):
        nonlocal best
        best = max(best, length)
        for w in succ[v]:
            if w not in seen:
                seen.add(w)
                dfs(w, seen, length + 1)
                seen.discard(w)

    for s in range(n):
        dfs(s, {s}, 0)
    return best


def longest_path_undirected(n, edges, k):
    if not edges:
        return False
    return _longest_simple_path(n, _adj(n, edges)) >= k


def longest_path_directed(n, arcs, k):
    if not arcs:
        return False
    succ = {v: set() for v in range(n)}
    for u, v in arcs:
        succ[u].add(v)
    return _longest_simple_path(n, succ) >= k


def longest_cycle_undirected(n, edges, k):
    if k <= 0:
        return True
    adj = _adj(n, edges)
    longest = max((len(c) for s in range(n) for c in _simple_cycles_through(s, set(range(n)), adj)), default=0)
    return longest >= k


def longest_cycle_directed(n, arcs, k):
    if k <= 0:
        return True
    succ = {v: set() for v in range(n)}
    for u, v in arcs:
        succ[u].add(v)
    longest = 0

    def dfs(start, v, seen, length):
        nonlocal longest
        for w in succ[v]:
            if w == start:
                longest = max(longest, length + 1)
            elif w > start and w not in seen:
                seen.add(w)
                dfs(start, w, seen, length + 1)
                seen.discard(w)

    for s in range(n):
        dfs(s, s, {s}, 0)
    return longest >= k


def _spanning_trees(n, edges):
    if n < 2:
        return
    adj_all = _adj(n, edges)
    for combo in itertools.combinations(range(len(edges)), n - 1):
        chosen = [edges[i] for i in combo]
        if _acyclic(range(n), chosen) and _connected(range(n), _adj(n, chosen)):
            yield chosen, adj_all


def exact_k_leaf_spanning_tree(n, edges, k):
    for tree, _ in _spanning_trees(n, edges):
        deg = [0] * n
        for u, v in tree:
            deg[u] += 1
            deg[v] += 1
        if sum(1 for d in deg if d == 1) == k:
            return True
    return False


def exact_k_leaf_outbranching(n, arcs, k, root):
    if n < 2:
        return False
    for combo in itertools.combinations(arcs, n - 1):
        indeg = [0] * n
        succ = {v: [] for v in range(n)}
        for u, v in combo:
            indeg[v] += 1
            succ[u].append(v)
        if indeg[root] != 0 or any(indeg[v] != 1 for v in range(n) if v != root):
            continue
        seen = {root}
        stack = [root]
        while stack:
            for w in succ[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) == n and sum(1 for v in range(n) if not succ[v]) == k:
            return True
    return False


def max_full_degree_spanning_tree(n, edges, k):
    for tree, adj in _spanning_trees(n, edges):
        deg = [0] * n
        for u, v in tree:
            deg[u] += 1
            deg[v] += 1
        if sum(1 for v in range(n) if deg[v] == len(adj[v])) >= k:
            return True
    return False


def graph_metric_tsp(n, edges, k):
    if n == 0:
        return k >= 0
    if n == 1:
        return False
    adj = _adj(n, edges)
    dist = [_distances(n, adj, v) for v in range(n)]
    if len(dist[0]) < n:
        return False
    full = (1 << n) - 1
    inf = float("inf")
    best = {(1, 0): 0}
    for mask in range(1, full + 1):
        if not mask & 1:
            continue
        for last in range(n):
            cur = best.get((mask, last))
            if cur is None:
                continue
            for nxt in range(n):
                if mask >> nxt & 1:
                    continue
                key = (mask | 1 << nxt, nxt)
                val = cur + dist[last][nxt]
                if val < best.get(key, inf):
                    best[key] = val
    tour = min(best[(full, v)] + dist[v][0] for v in range(1, n))
    return tour <= k


def check(name, n, edges, k, fixed=None, r=None):
    fixed = fixed or {}
    table = {
        "vertex-cover": lambda: vertex_cover(n, edges, k),
        "r-dominating-set": lambda: dominating_set(n, edges, k, r),
        "steiner-tree": lambda: steiner_tree(n, edges, k, fixed["T"]),
        "feedback-vertex-set": lambda: feedback_vertex_set(n, edges, k),
        "connected-vertex-cover": lambda: connected_vertex_cover(n, edges, k),
        "connected-dominating-set": lambda: connected_dominating_set(n, edges, k),
        "connected-feedback-vertex-set": lambda: feedback_vertex_set(n, edges, k, connected=True),
        "connected-odd-cycle-transversal": lambda: connected_odd_cycle_transversal(n, edges, k),
        "min-cycle-cover-undirected": lambda: min_cycle_cover_undirected(n, edges, k),
        "min-cycle-cover-directed": lambda: min_cycle_cover_directed(n, edges, k),
        "longest-path-undirected": lambda: longest_path_undirected(n, edges, k),
        "longest-path-directed": lambda: longest_path_directed(n, edges, k),
        "longest-cycle-undirected": lambda: longest_cycle_undirected(n, edges, k),
        "longest-cycle-directed": lambda: longest_cycle_directed(n, edges, k),
        "exact-k-leaf-spanning-tree": lambda: exact_k_leaf_spanning_tree(n, edges, k),
        "exact-k-leaf-outbranching": lambda: exact_k_leaf_outbranching(n, edges, k, next(iter(fixed["R"]))),
        "max-full-degree-spanning-tree": lambda: max_full_degree_spanning_tree(n, edges, k),
        "graph-metric-tsp": lambda: graph_metric_tsp(n, edges, k),
    }
    return table[name]()
