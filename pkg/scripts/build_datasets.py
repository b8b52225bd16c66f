"""Regenerate the bundled ``.net`` files from their raw sources.

Usage::

    python3 scripts/build_datasets.py --matpower DIR --tpc84 FILE --out src/radkit/data

``DIR`` holds ``case33bw.m``, ``case16ci.m`` and ``case136ma.m`` as shipped
with MATPOWER (r, x in ohm and loads in kW inside the ``mpc`` blocks, before
the file's own unit conversion). ``FILE`` is the 84-bus table with lines
``L bus p_kw q_kvar`` and ``B from to r_ohm x_ohm`` where bus 0 is the
substation and branches 84..96 are the normally open ties.
"""

from __future__ import annotations

import argparse
import math
import re
from pathlib import Path

import numpy as np

from radkit.netmodel import DEFAULT_IMAX_PU, Branch, Bus, Network, serialize_network


def _matpower_block(text: str, name: str) -> list[list[float]]:
    m = re.search(r"mpc\.%s = \[(.*?)\];" % name, text, re.S)
    rows = []
    for line in m.group(1).split("\n"):
        line = line.split("%")[0].strip().rstrip(";")
        if line:
            rows.append([float(v) for v in line.split()])
    return rows


def _imax(base_kv: float, base_mva: float) -> float:
    return DEFAULT_IMAX_PU * 1000.0 * base_mva / (math.sqrt(3.0) * base_kv)


def _bus(bid: int, p: float, q: float, sub: bool) -> Bus:
    if sub:
        return Bus(bid, p, q, 1.0, 1.0, True)
    return Bus(bid, p, q, is_substation=False)


def from_matpower(path: Path, name: str, base_kv: float, base_mva: float) -> Network:
    text = path.read_text()
    bus = _matpower_block(text, "bus")
    branch = _matpower_block(text, "branch")
    imax = _imax(base_kv, base_mva)
    buses = [_bus(int(b[0]), b[2], b[3], int(b[1]) == 3) for b in bus]
    branches = [Branch(int(r[0]), int(r[1]), r[2], r[3], imax, True, r[10] != 0) for r in branch]
    return Network(tuple(buses), tuple(branches), base_kv, base_mva, name=name)


def civanlar_14(path: Path) -> Network:
    """Three-feeder Civanlar system with its source buses merged into bus 14.

    Load buses 4..16 become 1..13. The tabulated impedances are per-unit on
    23 kV / 100 MVA and are converted to ohm here.
    """
    base_kv, base_mva = 23.0, 100.0
    z_base = base_kv**2 / base_mva
    text = path.read_text()
    bus = _matpower_block(text, "bus")
    branch = _matpower_block(text, "branch")

    def renumber(b: float) -> int:
        return 14 if b <= 3 else int(b) - 3

    buses = [_bus(renumber(b[0]), b[2], b[3], False) for b in bus if b[0] > 3]
    buses.append(_bus(14, 0.0, 0.0, True))
    imax = _imax(base_kv, base_mva)
    branches = [
        Branch(renumber(r[0]), renumber(r[1]), r[2] * z_base, r[3] * z_base, imax, True, r[10] != 0) for r in branch
    ]
    return Network(tuple(buses), tuple(branches), base_kv, base_mva, name="14bus")


def tpc_84(path: Path) -> Network:
    base_kv, base_mva = 11.4, 10.0
    loads: dict[int, tuple[float, float]] = {}
    rows = []
    for line in path.read_text().splitlines():
        cells = line.split()
        if not cells or cells[0].startswith("#"):
            continue
        if cells[0] == "L":
            loads[int(cells[1])] = (float(cells[2]), float(cells[3]))
        elif cells[0] == "B":
            rows.append((int(cells[1]), int(cells[2]), float(cells[3]), float(cells[4])))

    def renumber(b: int) -> int:
        return 84 if b == 0 else b

    buses = [_bus(b, p, q, False) for b, (p, q) in sorted(loads.items())]
    buses.append(_bus(84, 0.0, 0.0, True))
    imax = _imax(base_kv, base_mva)
    branches = [
        Branch(renumber(a), renumber(b), r, x, imax, True, k < 83) for k, (a, b, r, x) in enumerate(rows)
    ]
    return Network(tuple(buses), tuple(branches), base_kv, base_mva, name="84bus")


def synthetic_417(seed: int = 417) -> Network:
    """Deterministic 417-bus, 473-branch stand-in with a single substation.

    A random tree grown feeder by feeder (each new bus attaches near the end
    of its feeder) plus 57 tie branches between buses of different feeders
    or distant buses of the same feeder. About 15% of load buses carry no
    demand.
    """
    rng = np.random.default_rng(seed)
    n_bus, n_branch, base_kv, base_mva = 417, 473, 10.0, 10.0
    n_feeders = 8
    imax = _imax(base_kv, base_mva)
    feeder_of = {1: -1}
    members: list[list[int]] = [[] for _ in range(n_feeders)]
    edges = []
    for bid in range(2, n_bus + 1):
        f = (bid - 2) % n_feeders
        lane = members[f]
        if not lane:
            parent = 1
        else:
            parent = lane[max(0, len(lane) - 1 - int(rng.integers(0, 4)))]
        lane.append(bid)
        feeder_of[bid] = f
        edges.append((parent, bid, True))
    keys = {tuple(sorted((a, b))) for a, b, _ in edges}
    while len(edges) < n_branch:
        a, b = (int(v) for v in rng.integers(2, n_bus + 1, size=2))
        key = tuple(sorted((a, b)))
        if a == b or key in keys:
            continue
        same = feeder_of[a] == feeder_of[b]
        if same and abs(members[feeder_of[a]].index(a) - members[feeder_of[b]].index(b)) < 10:
            continue
        keys.add(key)
        edges.append((a, b, False))
    buses = [_bus(1, 0.0, 0.0, True)]
    for bid in range(2, n_bus + 1):
        if rng.random() < 0.15:
            buses.append(_bus(bid, 0.0, 0.0, False))
        else:
            p = round(float(rng.uniform(10.0, 60.0)), 1)
            q = round(p * float(rng.uniform(0.3, 0.7)), 1)
            buses.append(_bus(bid, p, q, False))
    branches = []
    for a, b, closed in edges:
        r = round(float(rng.uniform(0.02, 0.25)), 4)
        x = round(r * float(rng.uniform(0.8, 1.6)), 4)
        branches.append(Branch(a, b, r, x, imax, True, closed))
    return Network(tuple(buses), tuple(branches), base_kv, base_mva, name="417bus_synthetic")


def main(argv: list[str] | None = None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--matpower", type=Path, required=True)
    ap.add_argument("--tpc84", type=Path, required=True)
    ap.add_argument("--out", type=Path, required=True)
    args = ap.parse_args(argv)
    nets = {
        "14bus": civanlar_14(args.matpower / "case16ci.m"),
        "33bus": from_matpower(args.matpower / "case33bw.m", "33bus", 12.66, 10.0),
        "84bus": tpc_84(args.tpc84),
        "136bus": from_matpower(args.matpower / "case136ma.m", "136bus", 13.8, 100.0),
        "417bus_synthetic": synthetic_417(),
    }
    args.out.mkdir(parents=True, exist_ok=True)
    for name, net in nets.items():
        (args.out / f"{name}.net").write_text(serialize_network(net), encoding="utf-8", newline="\n")
        print(f"{name}: {net.n_buses} buses, {net.n_branches} branches")


if __name__ == "__main__":
    main()
