"""Solver-agnostic mixed-integer second-order-cone model of the reconfiguration problem.

The core model is the branch-flow (DistFlow) description with one switch
binary per branch. Radiality is imposed by one of eight constraint families,
each assembled from a small set of row generators so hybrid families are
exactly the union of their parts.

Naming scheme (bus ids, dataset order)::

    P[i,j] Q[i,j] Isqr[i,j] dV[i,j] y[i,j]     per branch (i = from, j = to)
    Vsqr[i]                                    per bus
    PS[i] QS[i]                                per substation
    yD[i->j]                                   directed switch state
    f[i,j]                                     single-commodity flow
    fk[k][i->j]                                flow of commodity k (a demand bus)

``P[i,j]`` and ``Q[i,j]`` are measured at bus ``j``; losses ``R*Isqr`` are
charged to the sending side of the bus balance rows.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .netmodel import Network, classify_buses, require_valid
from .topology import Configuration, bfs_forest, connected_components

CONTINUOUS = "continuous"
BINARY = "binary"
MAX_FEASIBILITY_EDGES = 16


class FormulationKind(enum.Enum):
    BASE = "base"
    PC = "pc"
    ST = "st"
    SCF = "scf"
    SCF_ST = "scf+st"
    MCF = "mcf"
    MCF_ST = "mcf+st"
    MCF_SCF = "mcf+scf"

    @classmethod
    def parse(cls, text: str) -> FormulationKind:
        key = text.strip().lower()
        for kind in cls:
            if kind.value == key:
                return kind
        choices = "|".join(k.value for k in cls)
        raise ValueError(f"unknown formulation {text!r}; expected one of {choices}")

    @property
    def uses_directed(self) -> bool:
        return self is not FormulationKind.BASE and self is not FormulationKind.SCF

    @property
    def has_cardinality(self) -> bool:
        return self in _WITH_CARDINALITY

    @property
    def has_spanning_tree(self) -> bool:
        return self in (FormulationKind.ST, FormulationKind.SCF_ST, FormulationKind.MCF_ST)

    @property
    def has_flow(self) -> bool:
        return self not in (FormulationKind.BASE, FormulationKind.PC, FormulationKind.ST)


_WITH_CARDINALITY = frozenset(
    {FormulationKind.BASE, FormulationKind.PC, FormulationKind.SCF, FormulationKind.MCF, FormulationKind.MCF_SCF}
)


@dataclass(frozen=True, slots=True)
class Variable:
    name: str
    kind: str
    lb: float
    ub: float


@dataclass(frozen=True, slots=True)
class LinearConstraint:
    """``sum(coefs[k] * x[vars[k]]) sense rhs`` with sense one of ``<=``, ``=``, ``>=``."""

    name: str
    vars: tuple[int, ...]
    coefs: tuple[float, ...]
    sense: str
    rhs: float
    tag: str


@dataclass(frozen=True, slots=True)
class ConeConstraint:
    """Rotated cone ``x[u] * x[v] >= x[p]**2 + x[q]**2``."""

    name: str
    u: int
    v: int
    p: int
    q: int


@dataclass
class ModelIR:
    variables: list[Variable] = field(default_factory=list)
    linear: list[LinearConstraint] = field(default_factory=list)
    cones: list[ConeConstraint] = field(default_factory=list)
    objective: list[tuple[int, float]] = field(default_factory=list)
    objective_constant: float = 0.0
    network_fingerprint: str = ""
    radiality: FormulationKind | None = None
    _index: dict[str, int] = field(default_factory=dict, repr=False)

    def add_var(self, name: str, kind: str, lb: float, ub: float) -> int:
        if name in self._index:
            raise ValueError(f"duplicate variable {name}")
        if lb > ub:
            raise ValueError(f"variable {name}: lower bound {lb} exceeds upper bound {ub}")
        self._index[name] = len(self.variables)
        self.variables.append(Variable(name, kind, float(lb), float(ub)))
        return self._index[name]

    def var(self, name: str) -> int:
        return self._index[name]

    def has_var(self, name: str) -> bool:
        return name in self._index

    def add_row(
        self, name: str, terms: Iterable[tuple[int, float]], sense: str, rhs: float, tag: str, merge: bool = True
    ) -> None:
        """Append a row; ``merge=False`` skips combining repeated variables."""
        if sense not in ("<=", "=", ">="):
            raise ValueError(f"bad sense {sense!r}")
        if not merge:
            vs, cs = zip(*terms) if terms else ((), ())
            self.linear.append(LinearConstraint(name, tuple(vs), tuple(float(c) for c in cs), sense, float(rhs), tag))
            return
        merged: dict[int, float] = {}
        for idx, c in terms:
            merged[idx] = merged.get(idx, 0.0) + float(c)
        items = [(i, c) for i, c in merged.items() if c != 0.0]
        self.linear.append(
            LinearConstraint(name, tuple(i for i, _ in items), tuple(c for _, c in items), sense, float(rhs), tag)
        )

    def add_cone(self, name: str, u: int, v: int, p: int, q: int) -> None:
        self.cones.append(ConeConstraint(name, u, v, p, q))

    def copy(self) -> ModelIR:
        return ModelIR(
            list(self.variables),
            list(self.linear),
            list(self.cones),
            list(self.objective),
            self.objective_constant,
            self.network_fingerprint,
            self.radiality,
            dict(self._index),
        )


@dataclass(frozen=True)
class ModelStats:
    n_binary: int = 0
    n_continuous: int = 0
    n_linear_constraints: int = 0
    n_cone_constraints: int = 0
    nonzeros: int = 0


def model_stats(model: ModelIR) -> ModelStats:
    """Counts of a model; ``nonzeros`` counts linear-row coefficients only."""
    n_bin = sum(1 for v in model.variables if v.kind == BINARY)
    return ModelStats(
        n_binary=n_bin,
        n_continuous=len(model.variables) - n_bin,
        n_linear_constraints=len(model.linear),
        n_cone_constraints=len(model.cones),
        nonzeros=sum(len(r.vars) for r in model.linear),
    )


# --------------------------------------------------------------------------
# core model


def _bname(net: Network, k: int) -> str:
    br = net.branches[k]
    return f"{br.from_bus},{br.to_bus}"


def voltage_big_m(net: Network) -> float:
    """Largest squared-voltage gap any branch can span."""
    ends = net.branch_ends()
    bv = 0.0
    for a, b in ends:
        ba, bb = net.buses[a], net.buses[b]
        bv = max(bv, max(ba.v_max, bb.v_max) ** 2 - min(ba.v_min, bb.v_min) ** 2)
    return bv


def flow_big_m(net: Network) -> float:
    """Bound on any branch flow: twice the total absolute demand."""
    return 2.0 * sum(abs(b.p_demand) + abs(b.q_demand) for b in net.buses)


def commodity_big_m(net: Network) -> int:
    return net.n_buses - net.n_substations


def build_core_model(net: Network) -> ModelIR:
    """Branch-flow equations, limits, switch gating and the loss objective."""
    if not net.per_unit:
        raise ValueError("build_core_model expects a per-unit network")
    require_valid(net)
    m = ModelIR(network_fingerprint=net.fingerprint())
    bv = voltage_big_m(net)
    mflow = flow_big_m(net)
    ends = net.branch_ends()
    names = [_bname(net, k) for k in range(net.n_branches)]

    iv = []
    for b in net.buses:
        if b.is_substation:
            iv.append(m.add_var(f"Vsqr[{b.id}]", CONTINUOUS, 1.0, 1.0))
        else:
            iv.append(m.add_var(f"Vsqr[{b.id}]", CONTINUOUS, b.v_min**2, b.v_max**2))
    ips, iqs = {}, {}
    for k in net.substation_positions:
        bid = net.buses[k].id
        ips[k] = m.add_var(f"PS[{bid}]", CONTINUOUS, -math.inf, math.inf)
        iqs[k] = m.add_var(f"QS[{bid}]", CONTINUOUS, -math.inf, math.inf)
    ip, iq, il, idv, iy = [], [], [], [], []
    for k, br in enumerate(net.branches):
        nm = names[k]
        ip.append(m.add_var(f"P[{nm}]", CONTINUOUS, -mflow, mflow))
        iq.append(m.add_var(f"Q[{nm}]", CONTINUOUS, -mflow, mflow))
        il.append(m.add_var(f"Isqr[{nm}]", CONTINUOUS, 0.0, br.i_max**2))
        idv.append(m.add_var(f"dV[{nm}]", CONTINUOUS, -bv, bv))
    for k in range(net.n_branches):
        iy.append(m.add_var(f"y[{names[k]}]", BINARY, 0.0, 1.0))

    m.objective = [(il[k], br.r) for k, br in enumerate(net.branches)]

    incoming: list[list[int]] = [[] for _ in net.buses]
    outgoing: list[list[int]] = [[] for _ in net.buses]
    for k, (a, b) in enumerate(ends):
        outgoing[a].append(k)
        incoming[b].append(k)
    for label, flow, imp, inj, demand in (
        ("kcl_p", ip, "r", ips, "p_demand"),
        ("kcl_q", iq, "x", iqs, "q_demand"),
    ):
        for i, bus in enumerate(net.buses):
            terms = [(flow[k], 1.0) for k in incoming[i]]
            for k in outgoing[i]:
                terms.append((flow[k], -1.0))
                terms.append((il[k], -getattr(net.branches[k], imp)))
            if i in inj:
                terms.append((inj[i], 1.0))
            m.add_row(f"{label}[{bus.id}]", terms, "=", getattr(bus, demand), "core:balance")
    for k, (a, b) in enumerate(ends):
        br = net.branches[k]
        m.add_row(
            f"vdrop[{names[k]}]",
            [(iv[a], 1.0), (ip[k], -2.0 * br.r), (iq[k], -2.0 * br.x), (il[k], -br.z_sqr), (idv[k], -1.0), (iv[b], -1.0)],
            "=",
            0.0,
            "core:voltage_drop",
        )
    for k in range(net.n_branches):
        m.add_row(f"vslack_hi[{names[k]}]", [(idv[k], 1.0), (iy[k], bv)], "<=", bv, "core:voltage_slack")
        m.add_row(f"vslack_lo[{names[k]}]", [(idv[k], -1.0), (iy[k], bv)], "<=", bv, "core:voltage_slack")
    for k, br in enumerate(net.branches):
        m.add_row(f"ampacity[{names[k]}]", [(il[k], 1.0), (iy[k], -br.i_max**2)], "<=", 0.0, "core:ampacity")
    for k, (_, b) in enumerate(ends):
        m.add_cone(f"cone[{names[k]}]", iv[b], il[k], ip[k], iq[k])
    return m


# --------------------------------------------------------------------------
# radiality families


@dataclass(frozen=True)
class Arc:
    """One direction of a branch: ``tail -> head`` as bus positions."""

    branch: int
    tail: int
    head: int
    name: str


def directed_arc_map(net: Network, kind: FormulationKind) -> list[Arc]:
    """Directed arcs carrying their own binary under ``kind``; empty if none.

    Arcs come in pairs (forward, reverse) per branch in dataset order.
    """
    if not kind.uses_directed:
        return []
    arcs = []
    for k, (a, b) in enumerate(net.branch_ends()):
        ia, ib = net.buses[a].id, net.buses[b].id
        arcs.append(Arc(k, a, b, f"{ia}->{ib}"))
        arcs.append(Arc(k, b, a, f"{ib}->{ia}"))
    return arcs


class _Builder:
    def __init__(self, model: ModelIR, net: Network):
        self.m = model
        self.net = net
        self.names = [_bname(net, k) for k in range(net.n_branches)]
        self.y = [model.var(f"y[{nm}]") for nm in self.names]
        self.classes = classify_buses(net)
        self.arcs: list[Arc] = []
        self.yd: list[int] = []

    def cardinality(self) -> None:
        limit = self.net.n_buses - self.net.n_substations
        self.m.add_row("radial_card", [(i, 1.0) for i in self.y], "<=", limit, "radiality:cardinality")

    def directed(self, kind: FormulationKind) -> None:
        self.arcs = directed_arc_map(self.net, kind)
        self.yd = [self.m.add_var(f"yD[{a.name}]", BINARY, 0.0, 1.0) for a in self.arcs]
        for k, nm in enumerate(self.names):
            self.m.add_row(
                f"link[{nm}]",
                [(self.yd[2 * k], 1.0), (self.yd[2 * k + 1], 1.0), (self.y[k], -1.0)],
                "=",
                0.0,
                "radiality:link",
            )

    def parent_child(self) -> None:
        for k, nm in enumerate(self.names):
            self.m.add_row(
                f"pc[{nm}]", [(self.yd[2 * k], 1.0), (self.yd[2 * k + 1], 1.0)], "<=", 1.0, "radiality:parent_child"
            )

    def spanning_tree(self) -> None:
        into: list[list[int]] = [[] for _ in self.net.buses]
        for idx, arc in zip(self.yd, self.arcs):
            into[arc.head].append(idx)
        demand = set(self.classes.demand)
        for i, bus in enumerate(self.net.buses):
            terms = [(idx, 1.0) for idx in into[i]]
            if bus.is_substation:
                sense, rhs = "=", 0.0
            elif i in demand:
                sense, rhs = "=", 1.0
            else:
                sense, rhs = "<=", 1.0
            self.m.add_row(f"st_in[{bus.id}]", terms, sense, rhs, "radiality:spanning_tree")

    def single_commodity(self, directed: bool) -> None:
        net, m = self.net, self.m
        big = commodity_big_m(net)
        inflow: list[list[tuple[int, float]]] = [[] for _ in net.buses]
        if directed:
            for idx_y, arc in zip(self.yd, self.arcs):
                a, b = net.buses[arc.tail].id, net.buses[arc.head].id
                fv = m.add_var(f"f[{a},{b}]", CONTINUOUS, 0.0, big)
                inflow[arc.head].append((fv, 1.0))
                inflow[arc.tail].append((fv, -1.0))
                m.add_row(f"scf_cap[{arc.name}]", [(fv, 1.0), (idx_y, -big)], "<=", 0.0, "radiality:scf_capacity")
        else:
            for k, (a, b) in enumerate(net.branch_ends()):
                fv = m.add_var(f"f[{self.names[k]}]", CONTINUOUS, -big, big)
                inflow[b].append((fv, 1.0))
                inflow[a].append((fv, -1.0))
                m.add_row(f"scf_cap_hi[{self.names[k]}]", [(fv, 1.0), (self.y[k], -big)], "<=", 0.0, "radiality:scf_capacity")
                m.add_row(f"scf_cap_lo[{self.names[k]}]", [(fv, -1.0), (self.y[k], -big)], "<=", 0.0, "radiality:scf_capacity")
        demand = set(self.classes.demand)
        for i in sorted(demand | set(self.classes.zero_demand)):
            rhs = 1.0 if i in demand else 0.0
            m.add_row(f"scf_bal[{net.buses[i].id}]", inflow[i], "=", rhs, "radiality:scf_balance")

    def multi_commodity(self) -> None:
        net, m = self.net, self.m
        subs = set(self.classes.substations)
        for k in self.classes.demand:
            kid = net.buses[k].id
            inflow: list[list[tuple[int, float]]] = [[] for _ in net.buses]
            for idx_y, arc in zip(self.yd, self.arcs):
                fv = m.add_var(f"fk[{kid}][{arc.name}]", CONTINUOUS, 0.0, 1.0)
                inflow[arc.head].append((fv, 1.0))
                inflow[arc.tail].append((fv, -1.0))
                m.add_row(
                    f"mcf_cap[{kid}][{arc.name}]", ((fv, 1.0), (idx_y, -1.0)), "<=", 0.0, "radiality:mcf_capacity", False
                )
            source = [t for s in sorted(subs) for t in inflow[s]]
            m.add_row(f"mcf_src[{kid}]", source, "=", -1.0, "radiality:mcf_source")
            m.add_row(f"mcf_sink[{kid}]", inflow[k], "=", 1.0, "radiality:mcf_sink", False)
            for i, bus in enumerate(net.buses):
                if i in subs or i == k:
                    continue
                m.add_row(f"mcf_pass[{kid}][{bus.id}]", inflow[i], "=", 0.0, "radiality:mcf_transit", False)


def add_radiality(model: ModelIR, kind: FormulationKind, net: Network) -> ModelIR:
    """Return a copy of ``model`` with the radiality rows of ``kind`` appended."""
    if model.network_fingerprint != net.fingerprint():
        raise ValueError("model was built for a different network")
    if model.radiality is not None:
        raise ValueError(f"model already carries {model.radiality.value} radiality constraints")
    out = model.copy()
    out.radiality = kind
    bld = _Builder(out, net)
    K = FormulationKind
    if kind.has_cardinality:
        bld.cardinality()
    if kind.uses_directed:
        bld.directed(kind)
    if kind is K.PC:
        bld.parent_child()
    if kind.has_spanning_tree:
        bld.spanning_tree()
    if kind in (K.MCF, K.MCF_ST, K.MCF_SCF):
        bld.multi_commodity()
    if kind in (K.SCF, K.MCF_SCF):
        bld.single_commodity(directed=False)
    elif kind is K.SCF_ST:
        bld.single_commodity(directed=True)
    return out


def build_model(net: Network, kind: FormulationKind) -> ModelIR:
    return add_radiality(build_core_model(net), kind, net)


# --------------------------------------------------------------------------
# combinatorial feasibility of the radiality subsystem


def _bipartite_cover(left: list[list[int]], must: Iterable[int], n_right: int, capacity: list[int]) -> bool:
    """True if every left vertex in ``must`` can be matched simultaneously.

    ``left[u]`` lists right vertices adjacent to u; right vertex r accepts at
    most ``capacity[r]`` (0 or 1) partners.
    """
    owner = [-1] * n_right

    def augment(u: int, seen: list[bool]) -> bool:
        for r in left[u]:
            if capacity[r] == 0 or seen[r]:
                continue
            seen[r] = True
            if owner[r] < 0 or augment(owner[r], seen):
                owner[r] = u
                return True
        return False

    return all(augment(u, [False] * n_right) for u in must)


def _orientable(net: Network, closed: list[int], ends: list[tuple[int, int]], demand: list[int]) -> bool:
    """Can every closed branch pick a head so that substations get none,
    other buses at most one, and every demand bus exactly one?

    A matching saturating all branches and one saturating all demand buses
    together imply one saturating both, so two independent checks suffice.
    """
    n = net.n_buses
    capacity = [0 if b.is_substation else 1 for b in net.buses]
    edge_side = [list(ends[k]) for k in closed]
    if not _bipartite_cover(edge_side, range(len(closed)), n, capacity):
        return False
    bus_side: list[list[int]] = [[] for _ in range(n)]
    for e, k in enumerate(closed):
        a, b = ends[k]
        bus_side[a].append(e)
        bus_side[b].append(e)
    return _bipartite_cover(bus_side, demand, len(closed), [1] * len(closed))


def _supplied(net: Network, cfg: Configuration, demand: list[int]) -> bool:
    labels = connected_components(net, cfg)
    fed = {labels[s] for s in net.substation_positions}
    return all(labels[i] in fed for i in demand)


def binary_feasible_set(net: Network, kind: FormulationKind, supply_check: bool = True) -> set[Configuration]:
    """Switch vectors for which the radiality rows of ``kind`` admit auxiliaries.

    With ``supply_check`` every demand bus must also lie in a component
    holding a substation, which is what the bus balance rows enforce in the
    full model. Without it only the radiality rows themselves are considered.
    Decided combinatorially over all ``2**n_branches`` vectors.
    """
    m = net.n_branches
    if m > MAX_FEASIBILITY_EDGES:
        raise ValueError(f"exhaustive scan limited to {MAX_FEASIBILITY_EDGES} branches, network has {m}")
    ends = net.branch_ends()
    demand = list(classify_buses(net).demand)
    limit = net.n_buses - net.n_substations
    need_reach = supply_check or kind.has_flow
    out = set()
    for mask in range(1 << m):
        closed = [k for k in range(m) if mask >> k & 1]
        if kind.has_cardinality and len(closed) > limit:
            continue
        cfg = Configuration(tuple(bool(mask >> k & 1) for k in range(m)))
        if kind.has_spanning_tree and not _orientable(net, closed, ends, demand):
            continue
        if need_reach and not _supplied(net, cfg, demand):
            continue
        out.add(cfg)
    return out


# --------------------------------------------------------------------------
# model points from a power-flow solution


def radial_point(model: ModelIR, net: Network, cfg: Configuration, pf) -> np.ndarray:
    """Assemble a full variable vector from a radial power-flow result.

    ``pf`` is a :class:`~radkit.powerflow.PowerFlowResult` for ``cfg`` on the
    per-unit ``net``. Auxiliary radiality variables are set from the tree
    rooted at the substations.
    """
    x = np.zeros(len(model.variables))
    names = [_bname(net, k) for k in range(net.n_branches)]
    ends = net.branch_ends()
    for i, bus in enumerate(net.buses):
        x[model.var(f"Vsqr[{bus.id}]")] = pf.v_sqr[i]
    for s in net.substation_positions:
        bid = net.buses[s].id
        x[model.var(f"PS[{bid}]")] = pf.p_injection[s]
        x[model.var(f"QS[{bid}]")] = pf.q_injection[s]
    for k, nm in enumerate(names):
        closed = cfg.closed[k]
        x[model.var(f"P[{nm}]")] = pf.p_flow[k]
        x[model.var(f"Q[{nm}]")] = pf.q_flow[k]
        x[model.var(f"Isqr[{nm}]")] = pf.i_sqr[k]
        x[model.var(f"y[{nm}]")] = 1.0 if closed else 0.0
        a, b = ends[k]
        x[model.var(f"dV[{nm}]")] = 0.0 if closed else pf.v_sqr[a] - pf.v_sqr[b]

    kind = model.radiality
    if kind is None:
        return x
    parent, pbranch, order = bfs_forest(net, cfg.closed)
    classes = classify_buses(net)
    demand = set(classes.demand)

    def arc_name(tail: int, head: int) -> str:
        return f"{net.buses[tail].id}->{net.buses[head].id}"

    if kind.uses_directed:
        for child, k in enumerate(pbranch):
            if k >= 0:
                x[model.var(f"yD[{arc_name(parent[child], child)}]")] = 1.0
    below = [1 if i in demand else 0 for i in range(net.n_buses)]
    for u in reversed(order):
        if parent[u] >= 0:
            below[parent[u]] += below[u]
    if kind in (FormulationKind.SCF, FormulationKind.MCF_SCF):
        for child, k in enumerate(pbranch):
            if k >= 0:
                sign = 1.0 if ends[k][1] == child else -1.0
                x[model.var(f"f[{names[k]}]")] = sign * below[child]
    elif kind is FormulationKind.SCF_ST:
        for child, k in enumerate(pbranch):
            if k >= 0:
                a, b = net.buses[parent[child]].id, net.buses[child].id
                x[model.var(f"f[{a},{b}]")] = below[child]
    if kind in (FormulationKind.MCF, FormulationKind.MCF_ST, FormulationKind.MCF_SCF):
        for k in classes.demand:
            kid = net.buses[k].id
            u = k
            while parent[u] >= 0:
                x[model.var(f"fk[{kid}][{arc_name(parent[u], u)}]")] = 1.0
                u = parent[u]
    return x


@dataclass(frozen=True)
class PointViolation:
    name: str
    amount: float


def check_point(model: ModelIR, x: np.ndarray, tol: float = 1e-6) -> list[PointViolation]:
    """Every bound, linear row and cone violated by more than ``tol``."""
    out = []
    for i, v in enumerate(model.variables):
        if x[i] < v.lb - tol:
            out.append(PointViolation(f"lb:{v.name}", v.lb - x[i]))
        elif x[i] > v.ub + tol:
            out.append(PointViolation(f"ub:{v.name}", x[i] - v.ub))
        if v.kind == BINARY and min(abs(x[i]), abs(x[i] - 1.0)) > tol:
            out.append(PointViolation(f"int:{v.name}", min(abs(x[i]), abs(x[i] - 1.0))))
    for row in model.linear:
        lhs = math.fsum(c * x[i] for i, c in zip(row.vars, row.coefs))
        gap = lhs - row.rhs
        bad = {"<=": gap, ">=": -gap, "=": abs(gap)}[row.sense]
        if bad > tol:
            out.append(PointViolation(row.name, bad))
    for cone in model.cones:
        gap = x[cone.p] ** 2 + x[cone.q] ** 2 - x[cone.u] * x[cone.v]
        if gap > tol:
            out.append(PointViolation(cone.name, gap))
    return out


def cone_slack(model: ModelIR, x: np.ndarray) -> np.ndarray:
    """``u*v - p**2 - q**2`` for every cone row."""
    return np.array([x[c.u] * x[c.v] - x[c.p] ** 2 - x[c.q] ** 2 for c in model.cones])


__all__ = [
    "BINARY",
    "CONTINUOUS",
    "Arc",
    "ConeConstraint",
    "FormulationKind",
    "LinearConstraint",
    "ModelIR",
    "ModelStats",
    "PointViolation",
    "Variable",
    "add_radiality",
    "binary_feasible_set",
    "build_core_model",
    "build_model",
    "check_point",
    "cone_slack",
    "directed_arc_map",
    "model_stats",
    "radial_point",
]
