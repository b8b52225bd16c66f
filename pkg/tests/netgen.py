"""Small network builders and hypothesis strategies shared by the tests."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from radkit.netmodel import Branch, Bus, Network, to_per_unit


def make_net(
    n: int,
    edges: list[tuple[int, int]],
    subs: tuple[int, ...] = (1,),
    demand: dict[int, tuple[float, float]] | None = None,
    default_demand: tuple[float, float] = (100.0, 50.0),
    r: float = 0.5,
    x: float = 0.4,
    closed: list[bool] | None = None,
    base_kv: float = 10.0,
    base_mva: float = 10.0,
    name: str = "toy",
) -> Network:
    """Buses 1..n; substations carry no load, other buses ``default_demand`` unless overridden."""
    demand = demand or {}
    buses = []
    for i in range(1, n + 1):
        if i in subs:
            buses.append(Bus(i, 0.0, 0.0, 1.0, 1.0, True))
        else:
            p, q = demand.get(i, default_demand)
            buses.append(Bus(i, p, q))
    closed = closed or [True] * len(edges)
    branches = [Branch(a, b, r, x, 1000.0, True, c) for (a, b), c in zip(edges, closed)]
    return Network(tuple(buses), tuple(branches), base_kv, base_mva, name=name)


def complete_graph(n: int) -> Network:
    return make_net(n, list(itertools.combinations(range(1, n + 1), 2)))


def loop4() -> Network:
    """One substation on a 4-bus ring: one loop of four branches."""
    return make_net(4, [(1, 2), (2, 3), (3, 4), (4, 1)])


def zero_demand_triangle() -> Network:
    """Substation 1 feeds demand bus 2; a pendant branch 2-3 leads to a
    triangle 3-4-5 whose buses carry no demand."""
    return make_net(
        5,
        [(1, 2), (2, 3), (3, 4), (4, 5), (5, 3)],
        demand={3: (0.0, 0.0), 4: (0.0, 0.0), 5: (0.0, 0.0)},
    )


def two_bus(r_pu: float = 0.05, x_pu: float = 0.0, p_pu: float = 0.2, q_pu: float = 0.0) -> Network:
    """Per-unit 2-bus feeder on a 1 kV / 1 MVA base (Z_base = 1 ohm, S_base = 1000 kW)."""
    net = make_net(2, [(1, 2)], demand={2: (p_pu * 1000.0, q_pu * 1000.0)}, r=r_pu, x=x_pu, base_kv=1.0, base_mva=1.0)
    return to_per_unit(net)


def random_connected(rng: random.Random, max_buses: int = 8, max_edges: int = 14, n_subs: int | None = None,
                     zero_demand: bool = False) -> Network:
    """Random simple connected graph: a random spanning tree plus extra chords."""
    n = rng.randint(2, max_buses)
    nodes = list(range(1, n + 1))
    rng.shuffle(nodes)
    edges = []
    for i in range(1, n):
        edges.append((nodes[rng.randrange(i)], nodes[i]))
    present = {frozenset(e) for e in edges}
    chords = [e for e in itertools.combinations(range(1, n + 1), 2) if frozenset(e) not in present]
    rng.shuffle(chords)
    limit = min(max_edges, n * (n - 1) // 2)
    edges += chords[: rng.randint(0, limit - len(edges))]
    if n_subs is None:
        n_subs = 1 if n < 4 else rng.choice((1, 1, 2))
    subs = tuple(sorted(rng.sample(range(1, n + 1), n_subs)))
    demand = {}
    if zero_demand:
        for i in range(1, n + 1):
            if i not in subs and rng.random() < 0.4:
                demand[i] = (0.0, 0.0)
    return make_net(n, edges, subs, demand)


@st.composite
def connected_nets(draw, max_buses: int = 7, max_edges: int = 12, zero_demand: bool = False):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_connected(random.Random(seed), max_buses, max_edges, zero_demand=zero_demand)
