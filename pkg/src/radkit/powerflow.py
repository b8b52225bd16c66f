"""DistFlow backward/forward sweep for radial configurations.

Quantities are squared magnitudes on the per-unit base: ``v_sqr`` per bus,
``i_sqr`` per branch. Branch flows ``p_flow``/``q_flow`` are measured at the
``to_bus`` end of each branch in dataset orientation, so a branch carrying
power from ``to_bus`` towards ``from_bus`` reports negative values. This is
the convention of the optimisation model, and the result can be plugged into
it as-is.

The sweep is vectorised over a batch of trees. Each tree is described by
its parent arrays; nodes are grouped by depth so the backward pass (subtree
sums) and the forward pass (path sums) take one array operation per level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .netmodel import Network, to_per_unit
from .topology import Configuration, bfs_forest, is_radial

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 100
COLLAPSE_V_SQR = 1e-4


class PowerFlowError(RuntimeError):
    pass


class NonRadialError(PowerFlowError):
    pass


class DivergenceError(PowerFlowError):
    pass


class VoltageCollapseError(PowerFlowError):
    pass


@dataclass(frozen=True)
class Violation:
    element: str
    kind: str  # "undervoltage" | "overvoltage" | "overcurrent"
    magnitude: float


@dataclass
class PowerFlowResult:
    v_sqr: np.ndarray
    p_flow: np.ndarray
    q_flow: np.ndarray
    i_sqr: np.ndarray
    p_injection: np.ndarray
    q_injection: np.ndarray
    losses_kw: float
    converged: bool
    iterations: int
    residuals: list[float] = field(default_factory=list)
    violations: list[Violation] = field(default_factory=list)

    def to_dict(self, net: Network, cfg: Configuration) -> dict:
        closed = cfg.closed
        buses = [
            {
                "id": b.id,
                "v_pu": math.sqrt(self.v_sqr[k]),
                "v_sqr": float(self.v_sqr[k]),
                "p_injection_pu": float(self.p_injection[k]),
                "q_injection_pu": float(self.q_injection[k]),
            }
            for k, b in enumerate(net.buses)
        ]
        branches = [
            {
                "number": k + 1,
                "closed": bool(closed[k]),
                "from": br.from_bus,
                "to": br.to_bus,
                "p_pu": float(self.p_flow[k]),
                "q_pu": float(self.q_flow[k]),
                "i_sqr": float(self.i_sqr[k]),
            }
            for k, br in enumerate(net.branches)
        ]
        return {
            "buses": buses,
            "branches": branches,
            "losses_kw": self.losses_kw,
            "converged": self.converged,
            "iterations": self.iterations,
            "violations": [{"element": v.element, "kind": v.kind, "magnitude": v.magnitude} for v in self.violations],
        }


@dataclass
class _Batch:
    """Flattened ``(B*n)`` node arrays for a batch of trees.

    ``levels`` holds, per depth (shallowest first), the flat indices of the
    nodes at that depth and of their parents.
    """

    size: int
    n: int
    levels: list[tuple[np.ndarray, np.ndarray]]
    r: np.ndarray
    x: np.ndarray
    z_sqr: np.ndarray
    is_root: np.ndarray


def _line_params(net: Network) -> tuple[np.ndarray, np.ndarray]:
    # trailing zero slot serves roots (parent branch -1)
    r = np.array([br.r for br in net.branches] + [0.0])
    x = np.array([br.x for br in net.branches] + [0.0])
    return r, x


def _make_batch(net: Network, parents: np.ndarray, pbranches: np.ndarray) -> _Batch:
    B, n = parents.shape
    offset = (np.arange(B) * n)[:, None]
    flat_parent = np.where(parents >= 0, parents + offset, -1).ravel()
    depth = np.zeros(B * n, dtype=np.int64)
    has_parent = flat_parent >= 0
    for _ in range(n):
        new = np.where(has_parent, depth[flat_parent] + 1, 0)
        if np.array_equal(new, depth):
            break
        depth = new
    order = np.argsort(depth, kind="stable")
    counts = np.bincount(depth, minlength=1)
    levels = []
    start = counts[0]
    for d in range(1, len(counts)):
        sel = order[start : start + counts[d]]
        levels.append((sel, flat_parent[sel]))
        start += counts[d]
    r_line, x_line = _line_params(net)
    r = r_line[pbranches].ravel()
    x = x_line[pbranches].ravel()
    return _Batch(B, n, levels, r, x, r * r + x * x, ~has_parent)


def _upstream_flows(batch: _Batch, p: np.ndarray, q: np.ndarray, l: np.ndarray):
    """Receiving-end flows: subtree demand plus downstream losses."""
    sp = p + batch.r * l
    sq = q + batch.x * l
    for sel, par in reversed(batch.levels):
        np.add.at(sp, par, sp[sel])
        np.add.at(sq, par, sq[sel])
    return sp - batch.r * l, sq - batch.x * l


def _sweep(
    batch: _Batch,
    p: np.ndarray,
    q: np.ndarray,
    tol: float,
    max_iter: int,
):
    """Run the fixed-point iteration for every tree in the batch.

    ``p`` and ``q`` are flat per-node demands. Returns ``(v, P, Q, l,
    iterations, status, residuals)`` reshaped to ``(B, n)`` where ``status``
    is 0 converged, 1 not converged, 2 voltage collapse.
    """
    B, n = batch.size, batch.n
    r, x, z2, root = batch.r, batch.x, batch.z_sqr, batch.is_root
    v = np.ones(B * n)
    l = np.zeros(B * n)
    iterations = np.zeros(B, dtype=int)
    status = np.ones(B, dtype=int)
    active = np.ones(B, dtype=bool)
    residuals: list[np.ndarray] = []
    for it in range(1, max_iter + 1):
        P, Q = _upstream_flows(batch, p, q, l)
        w = 2.0 * (r * P + x * Q) + z2 * l
        v_new = np.ones(B * n)
        for sel, par in batch.levels:
            v_new[sel] = v_new[par] - w[sel]
        low = ~(v_new >= COLLAPSE_V_SQR)  # also catches nan
        collapsed = low.reshape(B, n).any(axis=1) & active
        if collapsed.any():
            status[collapsed] = 2
            active &= ~collapsed
        # collapsed trees are frozen at a harmless state so they cannot overflow
        frozen = np.repeat(status == 2, n)
        v_new = np.where(low | frozen, 1.0, v_new)
        l = np.where(root | frozen, 0.0, (P * P + Q * Q) / v_new)
        delta = np.abs(v_new - v).reshape(B, n).max(axis=1)
        residuals.append(delta)
        v = v_new
        done = active & (delta <= tol)
        iterations[done] = it
        status[done] = 0
        active &= ~done
        if not active.any():
            break
    iterations[status == 1] = max_iter
    # final backward pass so flows balance the reported currents
    P, Q = _upstream_flows(batch, p, q, l)
    shape = (B, n)
    return v.reshape(shape), P.reshape(shape), Q.reshape(shape), l.reshape(shape), iterations, status, residuals


def _demands(net: Network) -> tuple[np.ndarray, np.ndarray]:
    return (
        np.array([b.p_demand for b in net.buses]),
        np.array([b.q_demand for b in net.buses]),
    )


def _limit_arrays(net: Network):
    vmin2 = np.array([b.v_min**2 for b in net.buses])
    vmax2 = np.array([b.v_max**2 for b in net.buses])
    imax2 = np.array([br.i_max**2 for br in net.branches])
    return vmin2, vmax2, imax2


def tree_arrays(net: Network, cfg: Configuration) -> tuple[list[int], list[int]]:
    parent, pbranch, _ = bfs_forest(net, cfg.closed)
    return parent, pbranch


def evaluate_trees(
    net: Network,
    parents: np.ndarray,
    pbranches: np.ndarray,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
    hard_limits: bool = False,
    chunk: int = 1024,
) -> np.ndarray:
    """Losses in kW for many radial trees.

    Row ``b`` of ``parents``/``pbranches`` gives each bus's parent position
    and the branch leading to it (-1 at roots). Failed sweeps give ``inf``;
    with ``hard_limits`` so do limit violations. ``net`` must be per-unit.
    """
    parents = np.asarray(parents, dtype=np.int64).reshape(-1, net.n_buses)
    pbranches = np.asarray(pbranches, dtype=np.int64).reshape(-1, net.n_buses)
    total = len(parents)
    p, q = _demands(net)
    vmin2, vmax2, imax2 = _limit_arrays(net)
    imax2_ext = np.append(imax2, np.inf)
    scale = net.base_mva * 1000.0
    n = net.n_buses
    step = max(1, chunk)
    out = np.empty(total)
    for start in range(0, total, step):
        par = parents[start : start + step]
        pbr = pbranches[start : start + step]
        batch = _make_batch(net, par, pbr)
        B = len(par)
        v, _, _, l, _, status, _ = _sweep(batch, np.tile(p, B), np.tile(q, B), tol, max_iter)
        losses = (batch.r.reshape(B, n) * l).sum(axis=1) * scale
        bad = status != 0
        if hard_limits:
            eps = 1e-9
            bad |= ((v < vmin2 - eps) | (v > vmax2 + eps)).any(axis=1)
            bad |= (l > imax2_ext[pbr] + eps).any(axis=1)
        losses[bad] = np.inf
        out[start : start + B] = losses
    return out


def solve_distflow(
    net: Network,
    cfg: Configuration,
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> PowerFlowResult:
    """Solve the branch-flow equations of a radial configuration.

    Flat start (``v_sqr = 1``, ``i_sqr = 0``); iterates backward/forward
    sweeps until the largest squared-voltage update is at most ``tol``.

    Raises:
        NonRadialError: ``cfg`` is not a spanning forest of ``net``.
        DivergenceError: no convergence within ``max_iter`` sweeps.
        VoltageCollapseError: a squared voltage fell below 1e-4 pu.
    """
    net = to_per_unit(net)
    if not is_radial(net, cfg):
        raise NonRadialError("configuration is not radial")
    parent, pbranch = tree_arrays(net, cfg)
    batch = _make_batch(net, np.array([parent]), np.array([pbranch]))
    p, q = _demands(net)
    v, P, Q, l, iters, status, residuals = _sweep(batch, p, q, tol, max_iter)
    if status[0] == 2:
        raise VoltageCollapseError("squared voltage fell below 1e-4 pu")
    if status[0] == 1:
        raise DivergenceError(f"no convergence within {max_iter} iterations")
    v, P, Q, l = v[0], P[0], Q[0], l[0]

    m = net.n_branches
    p_flow = np.zeros(m)
    q_flow = np.zeros(m)
    i_sqr = np.zeros(m)
    ends = net.branch_ends()
    for child, k in enumerate(pbranch):
        if k < 0:
            continue
        br = net.branches[k]
        i_sqr[k] = l[child]
        if ends[k][1] == child:
            p_flow[k], q_flow[k] = P[child], Q[child]
        else:
            # tree flows to_bus -> from_bus: value at to_bus is minus the sending-end flow
            p_flow[k] = -(P[child] + br.r * l[child])
            q_flow[k] = -(Q[child] + br.x * l[child])
    p_inj = np.zeros(net.n_buses)
    q_inj = np.zeros(net.n_buses)
    pd, qd = _demands(net)
    for s in net.substation_positions:
        p_inj[s] = pd[s]
        q_inj[s] = qd[s]
    for child, k in enumerate(pbranch):
        if k >= 0 and parent[child] in net.substation_positions:
            br = net.branches[k]
            p_inj[parent[child]] += P[child] + br.r * l[child]
            q_inj[parent[child]] += Q[child] + br.x * l[child]
    losses_kw = float(np.dot([br.r for br in net.branches], i_sqr)) * net.base_mva * 1000.0
    result = PowerFlowResult(
        v_sqr=v,
        p_flow=p_flow,
        q_flow=q_flow,
        i_sqr=i_sqr,
        p_injection=p_inj,
        q_injection=q_inj,
        losses_kw=losses_kw,
        converged=True,
        iterations=int(iters[0]),
        residuals=[float(r[0]) for r in residuals],
    )
    result.violations = check_limits(net, result)
    return result


def check_limits(net: Network, result: PowerFlowResult, eps: float = 1e-9) -> list[Violation]:
    """List buses outside their voltage band and branches above ampacity (per-unit)."""
    net = to_per_unit(net)
    out = []
    for k, b in enumerate(net.buses):
        vs = result.v_sqr[k]
        if vs < b.v_min**2 - eps:
            out.append(Violation(f"bus {b.id}", "undervoltage", b.v_min - math.sqrt(max(vs, 0.0))))
        elif vs > b.v_max**2 + eps:
            out.append(Violation(f"bus {b.id}", "overvoltage", math.sqrt(vs) - b.v_max))
    for k, br in enumerate(net.branches):
        if result.i_sqr[k] > br.i_max**2 + eps:
            out.append(
                Violation(f"branch {k} ({br.from_bus}-{br.to_bus})", "overcurrent", math.sqrt(result.i_sqr[k]) - br.i_max)
            )
    return out


def evaluate_losses(net: Network, cfg: Configuration, hard_limits: bool = False, **kwargs) -> float:
    """Losses in kW, or ``math.inf`` for non-radial, diverging or (in hard mode) violating configurations."""
    try:
        result = solve_distflow(net, cfg, **kwargs)
    except PowerFlowError:
        return math.inf
    if hard_limits and result.violations:
        return math.inf
    return result.losses_kw
