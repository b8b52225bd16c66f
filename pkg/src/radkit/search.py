"""Native minimisation of losses over radial configurations.

Two strategies share one batched power-flow evaluator:

* exact enumeration of every spanning forest by deletion-contraction, for
  systems whose tree count fits a budget;
* steepest-descent branch exchange, optionally restarted from random
  spanning forests.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from .netmodel import Network, require_valid, to_per_unit
from .powerflow import DEFAULT_MAX_ITER, DEFAULT_TOL, evaluate_losses, evaluate_trees
from .topology import Configuration, UnionFind, bfs_forest, contracted_multigraph, count_spanning_trees, is_radial

log = logging.getLogger(__name__)

DEFAULT_MAX_TREES = 10**7
DEFAULT_MAX_MOVES = 10_000
IMPROVEMENT_EPS_KW = 1e-9
TIE_EPS_KW = 1e-9


class SearchError(RuntimeError):
    pass


class BudgetExceeded(SearchError):
    def __init__(self, count: int, budget: int):
        super().__init__(f"{count} radial configurations exceed the enumeration budget of {budget}")
        self.count = count
        self.budget = budget


@dataclass
class SearchReport:
    best_cfg: Configuration
    best_losses_kw: float
    configurations_evaluated: int
    trees_enumerated: int | None
    wall_time: float
    mode: str  # "exact" | "local_search"
    trace: list[dict] = field(default_factory=list)

    def to_dict(self, net: Network) -> dict:
        return {
            "system": net.name,
            "mode": self.mode,
            "best_losses_kw": self.best_losses_kw,
            "open_branches": [
                {"number": k + 1, "from": net.branches[k].from_bus, "to": net.branches[k].to_bus}
                for k in self.best_cfg.open_indices
            ],
            "closed": self.best_cfg.as_bits(),
            "configurations_evaluated": self.configurations_evaluated,
            "trees_enumerated": self.trees_enumerated,
            "wall_time_s": self.wall_time,
            "trace": self.trace,
        }


def fixed_branches(net: Network) -> tuple[list[int], list[int]]:
    """Non-switchable branches: ``(always closed, always open)``."""
    forced, excluded = [], []
    for k, br in enumerate(net.branches):
        if not br.switchable:
            (forced if br.initially_closed else excluded).append(k)
    return forced, excluded


# --------------------------------------------------------------------------
# exact enumeration


def _bridges(n: int, edges: list[tuple[int, int, int]]) -> set[int]:
    """Positions in ``edges`` of every bridge of a multigraph (iterative Tarjan)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for e, (u, v, _) in enumerate(edges):
        adj[u].append((v, e))
        adj[v].append((u, e))
    disc = [-1] * n
    low = [0] * n
    out: set[int] = set()
    clock = 0
    for s in range(n):
        if disc[s] >= 0:
            continue
        disc[s] = low[s] = clock
        clock += 1
        stack = [(s, -1, iter(adj[s]))]
        while stack:
            u, via, it = stack[-1]
            advanced = False
            for v, e in it:
                if e == via:
                    continue
                if disc[v] < 0:
                    disc[v] = low[v] = clock
                    clock += 1
                    stack.append((v, e, iter(adj[v])))
                    advanced = True
                    break
                low[u] = min(low[u], disc[v])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[u])
                if low[u] > disc[parent]:
                    out.add(via)
    return out


def _contract(n: int, edges: list[tuple[int, int, int]], merge: list[int]) -> tuple[int, list[tuple[int, int, int]]]:
    uf = UnionFind(n)
    for e in merge:
        u, v, _ = edges[e]
        uf.union(u, v)
    relabel: dict[int, int] = {}
    for v in range(n):
        relabel.setdefault(uf.find(v), len(relabel))
    skip = set(merge)
    out = []
    for e, (u, v, k) in enumerate(edges):
        if e in skip:
            continue
        a, b = relabel[uf.find(u)], relabel[uf.find(v)]
        if a != b:
            out.append((a, b, k))
    return len(relabel), out


def _connected(n: int, edges: list[tuple[int, int, int]]) -> bool:
    uf = UnionFind(n)
    parts = n
    for u, v, _ in edges:
        if uf.union(u, v):
            parts -= 1
    return parts == 1


def _deletion_contraction(n: int, edges: list[tuple[int, int, int]], chosen: list[int]) -> Iterator[list[int]]:
    # invariant: the multigraph is connected
    bridges = _bridges(n, edges)
    if bridges:
        chosen = chosen + [edges[e][2] for e in sorted(bridges)]
        n, edges = _contract(n, edges, sorted(bridges))
    if n == 1:
        yield chosen
        return
    # every remaining edge lies on a cycle, so both branches are non-empty
    first = edges[0]
    yield from _deletion_contraction(*_contract(n, edges, [0]), chosen + [first[2]])
    yield from _deletion_contraction(n, edges[1:], chosen)


def iter_radial_configurations(net: Network) -> Iterator[Configuration]:
    """Every radial configuration containing the always-closed branches, once each."""
    forced, excluded = fixed_branches(net)
    contracted = contracted_multigraph(net, forced, excluded)
    if contracted is None:
        return
    n, edges = contracted
    if not _connected(n, edges):
        return
    for chosen in _deletion_contraction(n, edges, []):
        yield Configuration.from_closed(net, forced + chosen)


def _tree_rows(net: Network, cfgs: list[Configuration]) -> tuple[np.ndarray, np.ndarray]:
    parents = np.empty((len(cfgs), net.n_buses), dtype=np.int64)
    pbranches = np.empty_like(parents)
    for row, cfg in enumerate(cfgs):
        parent, pbranch, _ = bfs_forest(net, cfg.closed)
        parents[row] = parent
        pbranches[row] = pbranch
    return parents, pbranches


def _better(loss: float, closed: tuple[bool, ...], best_loss: float, best_closed: tuple[bool, ...] | None) -> bool:
    if best_closed is None or loss < best_loss - TIE_EPS_KW:
        return True
    return abs(loss - best_loss) <= TIE_EPS_KW and closed < best_closed


def enumerate_radial(
    net: Network,
    max_trees: int = DEFAULT_MAX_TREES,
    hard_limits: bool = False,
    batch_size: int = 4096,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SearchReport:
    """Evaluate every radial configuration and return the least-loss one.

    Ties within 1e-9 kW go to the lexicographically smallest closed vector.

    Raises:
        BudgetExceeded: more than ``max_trees`` configurations exist.
        SearchError: no configuration is feasible (only with ``hard_limits``).
    """
    start = time.perf_counter()
    require_valid(net)
    pu = to_per_unit(net)
    forced, excluded = fixed_branches(pu)
    count = count_spanning_trees(pu, forced, excluded)
    if count > max_trees:
        raise BudgetExceeded(count, max_trees)
    best_loss, best_closed = math.inf, None
    enumerated = 0
    batch: list[Configuration] = []

    def flush() -> None:
        nonlocal best_loss, best_closed
        parents, pbranches = _tree_rows(pu, batch)
        losses = evaluate_trees(pu, parents, pbranches, tol, max_iter, hard_limits)
        for cfg, loss in zip(batch, losses):
            if math.isfinite(loss) and _better(loss, cfg.closed, best_loss, best_closed):
                best_loss, best_closed = float(loss), cfg.closed
        batch.clear()

    for cfg in iter_radial_configurations(pu):
        enumerated += 1
        batch.append(cfg)
        if len(batch) >= batch_size:
            flush()
    if batch:
        flush()
    if best_closed is None:
        raise SearchError("no feasible radial configuration")
    best = Configuration(best_closed)
    losses = evaluate_losses(pu, best, hard_limits=hard_limits, tol=tol, max_iter=max_iter)
    return SearchReport(
        best_cfg=best,
        best_losses_kw=losses,
        configurations_evaluated=enumerated,
        trees_enumerated=enumerated,
        wall_time=time.perf_counter() - start,
        mode="exact",
    )


# --------------------------------------------------------------------------
# branch exchange


@dataclass(frozen=True)
class Move:
    close: int
    open: int


def _path_up(parent: list[int], u: int) -> list[int]:
    nodes = [u]
    while parent[u] >= 0:
        u = parent[u]
        nodes.append(u)
    return nodes


def _candidate_moves(net: Network, closed: tuple[bool, ...], parent: list[int], pbranch: list[int]):
    """Yield ``(move, side_nodes)`` for every radiality-preserving exchange.

    ``side_nodes`` runs from the endpoint of the closed branch up to the
    child end of the opened branch; re-hanging those nodes gives the new tree.
    Moves come in dataset order of the closed branch, then of the opened one.
    """
    ends = net.branch_ends()
    for b, is_closed in enumerate(closed):
        if is_closed or not net.branches[b].switchable:
            continue
        a, c = ends[b]
        up_a, up_c = _path_up(parent, a), _path_up(parent, c)
        if up_a[-1] == up_c[-1]:
            common = set(up_a) & set(up_c)
            up_a = up_a[: next(i for i, u in enumerate(up_a) if u in common)]
            up_c = up_c[: next(i for i, u in enumerate(up_c) if u in common)]
        else:
            up_a, up_c = up_a[:-1], up_c[:-1]
        options = []
        for side, other, nodes in ((a, c, up_a), (c, a, up_c)):
            for depth, node in enumerate(nodes):
                e = pbranch[node]
                if net.branches[e].switchable:
                    options.append((e, side, other, nodes[: depth + 1]))
        for e, side, other, nodes in sorted(options, key=lambda o: o[0]):
            yield Move(b, e), side, other, nodes


def exchange_moves(net: Network, cfg: Configuration) -> list[tuple[Move, Configuration]]:
    """All branch-exchange neighbours of a radial configuration."""
    pu = to_per_unit(net)
    parent, pbranch, _ = bfs_forest(pu, cfg.closed)
    out = []
    for move, *_ in _candidate_moves(pu, cfg.closed, parent, pbranch):
        closed = list(cfg.closed)
        closed[move.close] = True
        closed[move.open] = False
        out.append((move, Configuration(tuple(closed))))
    return out


def _neighbourhood(net: Network, cfg: Configuration):
    parent, pbranch, _ = bfs_forest(net, cfg.closed)
    base_p = np.asarray(parent, dtype=np.int64)
    base_b = np.asarray(pbranch, dtype=np.int64)
    moves, rows_p, rows_b = [], [], []
    for move, side, other, nodes in _candidate_moves(net, cfg.closed, parent, pbranch):
        p, pb = base_p.copy(), base_b.copy()
        p[side] = other
        pb[side] = move.close
        for prev, node in zip(nodes, nodes[1:]):
            p[node] = prev
            pb[node] = base_b[prev]
        moves.append(move)
        rows_p.append(p)
        rows_b.append(pb)
    if not moves:
        return moves, np.empty((0, net.n_buses), np.int64), np.empty((0, net.n_buses), np.int64)
    return moves, np.stack(rows_p), np.stack(rows_b)


def _apply(cfg: Configuration, move: Move) -> Configuration:
    closed = list(cfg.closed)
    closed[move.close] = True
    closed[move.open] = False
    return Configuration(tuple(closed))


def _descend(pu: Network, start: Configuration, max_moves: int, hard_limits: bool, tol: float, max_iter: int):
    current = start
    current_loss = evaluate_losses(pu, current, hard_limits=hard_limits, tol=tol, max_iter=max_iter)
    evaluated = 1
    trace = [{"move": 0, "losses_kw": current_loss}]
    for step in range(1, max_moves + 1):
        moves, parents, pbranches = _neighbourhood(pu, current)
        if not moves:
            break
        losses = evaluate_trees(pu, parents, pbranches, tol, max_iter, hard_limits)
        evaluated += len(moves)
        k = int(np.argmin(losses))
        if not losses[k] < current_loss - IMPROVEMENT_EPS_KW:
            break
        current = _apply(current, moves[k])
        assert is_radial(pu, current)
        current_loss = float(losses[k])
        trace.append({"move": step, "losses_kw": current_loss, "close": moves[k].close, "open": moves[k].open})
    return current, evaluated, trace


def local_search_branch_exchange(
    net: Network,
    start: Configuration | None = None,
    max_moves: int = DEFAULT_MAX_MOVES,
    hard_limits: bool = False,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SearchReport:
    """Steepest-descent branch exchange from ``start`` (initial switch states by default).

    Each round evaluates every exchange (close an open switchable branch,
    open a switchable branch on the loop it creates) and applies the best
    one if it lowers losses by more than 1e-9 kW.
    """
    t0 = time.perf_counter()
    require_valid(net)
    pu = to_per_unit(net)
    start = start or Configuration.initial(pu)
    if not is_radial(pu, start):
        raise SearchError("start configuration is not radial")
    best, evaluated, trace = _descend(pu, start, max_moves, hard_limits, tol, max_iter)
    return SearchReport(
        best_cfg=best,
        best_losses_kw=evaluate_losses(pu, best, hard_limits=hard_limits, tol=tol, max_iter=max_iter),
        configurations_evaluated=evaluated,
        trees_enumerated=None,
        wall_time=time.perf_counter() - t0,
        mode="local_search",
        trace=trace,
    )


def random_spanning_forest(net: Network, rng: np.random.Generator) -> Configuration:
    """Minimum spanning forest under i.i.d. uniform branch weights.

    Substations start merged so each resulting tree holds exactly one;
    always-closed branches are taken first and always-open ones skipped.
    """
    forced, excluded = fixed_branches(net)
    weights = rng.random(net.n_branches)
    uf = UnionFind(net.n_buses)
    subs = net.substation_positions
    for s in subs[1:]:
        uf.union(subs[0], s)
    ends = net.branch_ends()
    closed = set()
    for k in forced:
        if not uf.union(*ends[k]):
            raise SearchError("always-closed branches form a loop")
        closed.add(k)
    skip = set(forced) | set(excluded)
    for k in np.argsort(weights, kind="stable"):
        k = int(k)
        if k not in skip and uf.union(*ends[k]):
            closed.add(k)
    return Configuration.from_closed(net, closed)


def multistart(
    net: Network,
    n_starts: int = 20,
    seed: int = 0,
    max_moves: int = DEFAULT_MAX_MOVES,
    hard_limits: bool = False,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SearchReport:
    """Branch exchange from ``n_starts`` random spanning forests; best local optimum wins."""
    if n_starts < 1:
        raise ValueError("n_starts must be at least 1")
    t0 = time.perf_counter()
    require_valid(net)
    pu = to_per_unit(net)
    rng = np.random.default_rng(seed)
    best_loss, best_closed = math.inf, None
    evaluated = 0
    trace = []
    for i in range(n_starts):
        start = random_spanning_forest(pu, rng)
        local, n_eval, steps = _descend(pu, start, max_moves, hard_limits, tol, max_iter)
        evaluated += n_eval
        loss = steps[-1]["losses_kw"]
        trace.append({"start": i, "losses_kw": loss, "moves": len(steps) - 1})
        log.debug("start %d: %.6f kW after %d moves", i, loss, len(steps) - 1)
        if math.isfinite(loss) and _better(loss, local.closed, best_loss, best_closed):
            best_loss, best_closed = loss, local.closed
    if best_closed is None:
        raise SearchError("no start reached a feasible configuration")
    best = Configuration(best_closed)
    return SearchReport(
        best_cfg=best,
        best_losses_kw=evaluate_losses(pu, best, hard_limits=hard_limits, tol=tol, max_iter=max_iter),
        configurations_evaluated=evaluated,
        trees_enumerated=None,
        wall_time=time.perf_counter() - t0,
        mode="local_search",
        trace=trace,
    )
