"""Graph algorithms over a network and a switch configuration."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .netmodel import Network


class UnionFind:
    """Disjoint sets with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, a: int) -> int:
        parent = self.parent
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(self, a: int, b: int) -> bool:
        """Merge the sets of ``a`` and ``b``; False if they were already joined."""
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        return True

    def connected(self, a: int, b: int) -> bool:
        return self.find(a) == self.find(b)


@dataclass(frozen=True)
class Configuration:
    """Switch states, one boolean per branch in network order (True = closed)."""

    closed: tuple[bool, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "closed", tuple(bool(c) for c in self.closed))

    def __len__(self) -> int:
        return len(self.closed)

    @classmethod
    def initial(cls, net: Network) -> Configuration:
        return cls(tuple(br.initially_closed for br in net.branches))

    @classmethod
    def all_closed(cls, net: Network) -> Configuration:
        return cls((True,) * net.n_branches)

    @classmethod
    def from_closed(cls, net: Network, closed: Iterable[int]) -> Configuration:
        s = set(closed)
        return cls(tuple(k in s for k in range(net.n_branches)))

    @classmethod
    def from_open(cls, net: Network, opened: Iterable[int]) -> Configuration:
        s = set(opened)
        return cls(tuple(k not in s for k in range(net.n_branches)))

    @property
    def closed_indices(self) -> list[int]:
        return [k for k, c in enumerate(self.closed) if c]

    @property
    def open_indices(self) -> list[int]:
        return [k for k, c in enumerate(self.closed) if not c]

    @property
    def n_closed(self) -> int:
        return sum(self.closed)

    def as_bits(self) -> str:
        return "".join("1" if c else "0" for c in self.closed)


def _check_length(net: Network, cfg: Configuration) -> None:
    if len(cfg) != net.n_branches:
        raise ValueError(f"configuration has {len(cfg)} entries, network has {net.n_branches} branches")


def connected_components(net: Network, cfg: Configuration) -> list[int]:
    """Label each bus position with a component number (0, 1, ... in bus order)."""
    _check_length(net, cfg)
    uf = UnionFind(net.n_buses)
    for (a, b), c in zip(net.branch_ends(), cfg.closed):
        if c:
            uf.union(a, b)
    labels: dict[int, int] = {}
    out = []
    for k in range(net.n_buses):
        out.append(labels.setdefault(uf.find(k), len(labels)))
    return out


@dataclass(frozen=True)
class RadialityClauses:
    edge_count_ok: bool
    component_count_ok: bool
    one_substation_each: bool
    acyclic: bool

    @property
    def radial(self) -> bool:
        return self.edge_count_ok and self.component_count_ok and self.one_substation_each


def radiality_clauses(net: Network, cfg: Configuration) -> RadialityClauses:
    _check_length(net, cfg)
    n_sub = net.n_substations
    uf = UnionFind(net.n_buses)
    acyclic = True
    for (a, b), c in zip(net.branch_ends(), cfg.closed):
        if c and not uf.union(a, b):
            acyclic = False
    roots = [uf.find(k) for k in range(net.n_buses)]
    subs_per_root: dict[int, int] = {}
    for r in set(roots):
        subs_per_root[r] = 0
    for k in net.substation_positions:
        subs_per_root[roots[k]] += 1
    return RadialityClauses(
        edge_count_ok=cfg.n_closed == net.n_buses - n_sub,
        component_count_ok=len(subs_per_root) == n_sub,
        one_substation_each=all(v == 1 for v in subs_per_root.values()),
        acyclic=acyclic,
    )


def is_radial(net: Network, cfg: Configuration) -> bool:
    """True iff closed branches form a spanning forest with one substation per tree."""
    return radiality_clauses(net, cfg).radial


def bfs_forest(net: Network, closed: Sequence[bool]) -> tuple[list[int], list[int], list[int]]:
    """Breadth-first forest rooted at the substations.

    Returns ``(parent, parent_branch, order)`` over bus positions; roots and
    unreached buses have parent -1. ``order`` lists reached buses root-first.
    Assumes the closed subgraph is acyclic.
    """
    n = net.n_buses
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for k, ((a, b), c) in enumerate(zip(net.branch_ends(), closed)):
        if c:
            adj[a].append((b, k))
            adj[b].append((a, k))
    parent = [-1] * n
    pbranch = [-1] * n
    seen = [False] * n
    order = []
    queue = deque()
    for s in net.substation_positions:
        seen[s] = True
        queue.append(s)
    while queue:
        u = queue.popleft()
        order.append(u)
        for v, k in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                pbranch[v] = k
                queue.append(v)
    return parent, pbranch, order


def fundamental_loops(net: Network) -> list[list[int]]:
    """One cycle per non-tree branch of a BFS forest of the all-closed graph.

    Substations are treated as a single root, so a branch joining two
    substation trees induces a loop through both substations.
    """
    parent, pbranch, order = bfs_forest(net, [True] * net.n_branches)
    if len(order) != net.n_buses:
        raise ValueError("all-closed graph leaves buses without a substation path")
    depth = [0] * net.n_buses
    for u in order:
        if parent[u] >= 0:
            depth[u] = depth[parent[u]] + 1
    tree = {k for k in pbranch if k >= 0}
    loops = []
    for k, (a, b) in enumerate(net.branch_ends()):
        if k in tree:
            continue
        left, right = [], []
        while depth[a] > depth[b]:
            left.append(pbranch[a])
            a = parent[a]
        while depth[b] > depth[a]:
            right.append(pbranch[b])
            b = parent[b]
        while a != b and not (parent[a] < 0 and parent[b] < 0):
            left.append(pbranch[a])
            right.append(pbranch[b])
            a, b = parent[a], parent[b]
        loops.append(left + [k] + right[::-1])
    return loops


def bareiss_determinant(matrix: list[list[int]]) -> int:
    """Exact determinant of an integer matrix by fraction-free elimination."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        row_k = m[k]
        for i in range(k + 1, n):
            row_i = m[i]
            a = row_i[k]
            if a == 0:
                for j in range(k + 1, n):
                    row_i[j] = row_i[j] * pivot // prev
            else:
                for j in range(k + 1, n):
                    row_i[j] = (row_i[j] * pivot - a * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def contracted_multigraph(
    net: Network,
    forced_closed: Iterable[int] = (),
    excluded: Iterable[int] = (),
) -> tuple[int, list[tuple[int, int, int]]] | None:
    """Contract substations into node 0 and forced branches into their endpoints.

    Returns ``(n_nodes, edges)`` with edges ``(u, v, branch)`` among the
    remaining free branches (self-loops dropped), or ``None`` when the
    forced branches contain a cycle or join two substations.
    """
    n = net.n_buses
    uf = UnionFind(n + 1)
    root = n
    for s in net.substation_positions:
        uf.union(root, s)
    ends = net.branch_ends()
    forced = set(forced_closed)
    skip = forced | set(excluded)
    for k in sorted(forced):
        a, b = ends[k]
        if not uf.union(a, b):
            return None
    relabel = {uf.find(root): 0}
    for v in range(n):
        relabel.setdefault(uf.find(v), len(relabel))
    edges = []
    for k, (a, b) in enumerate(ends):
        if k in skip:
            continue
        u, v = relabel[uf.find(a)], relabel[uf.find(b)]
        if u != v:
            edges.append((u, v, k))
    return len(relabel), edges


def count_spanning_trees(
    net: Network,
    forced_closed: Iterable[int] = (),
    excluded: Iterable[int] = (),
) -> int:
    """Number of radial configurations that contain every forced branch.

    Substations are contracted into one root, so a spanning tree of the
    contracted graph is a spanning forest with one tree per substation.
    Branches in ``excluded`` are treated as permanently open. Counts come
    from the reduced Laplacian determinant in exact integer arithmetic.
    """
    contracted = contracted_multigraph(net, forced_closed, excluded)
    if contracted is None:
        return 0
    n, edges = contracted
    # pendant nodes (other than the root) have exactly one way in
    adj: list[dict[int, int]] = [dict() for _ in range(n)]
    for u, v, _ in edges:
        adj[u][v] = adj[u].get(v, 0) + 1
        adj[v][u] = adj[v].get(u, 0) + 1
    alive = [True] * n
    stack = [v for v in range(1, n) if len(adj[v]) == 1 and sum(adj[v].values()) == 1]
    while stack:
        v = stack.pop()
        if not alive[v] or len(adj[v]) != 1 or sum(adj[v].values()) != 1:
            continue
        (u,) = adj[v]
        alive[v] = False
        del adj[u][v]
        adj[v].clear()
        if u != 0 and len(adj[u]) == 1 and sum(adj[u].values()) == 1:
            stack.append(u)
    nodes = [v for v in range(1, n) if alive[v]]
    if any(not adj[v] for v in nodes):
        return 0
    pos = {v: i for i, v in enumerate(nodes)}
    lap = [[0] * len(nodes) for _ in nodes]
    for v in nodes:
        i = pos[v]
        for u, mult in adj[v].items():
            lap[i][i] += mult
            if u != 0:
                lap[i][pos[u]] -= mult
    return bareiss_determinant(lap)
