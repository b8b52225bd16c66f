"""Electrical network data model, canonical file format and per-unit conversion.

A :class:`Network` is immutable. Physical networks carry kW/kvar demands,
ohmic impedances and ampacities in A; :func:`to_per_unit` returns a copy on
the system base with ``per_unit=True``.

Canonical format (UTF-8, LF)::

    # comment
    [system]
    name = 33bus
    base_kv = 12.66
    base_mva = 10
    [buses]
    id,p_kw,q_kvar,vmin_pu,vmax_pu,is_substation
    1,0,0,,,1
    2,100,60,,,0
    [branches]
    from,to,r_ohm,x_ohm,imax_a,switchable,closed
    1,2,0.0922,0.047,,1,1

Empty ``vmin_pu``/``vmax_pu``/``imax_a`` cells take the defaults below.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

DEFAULT_VMIN = 0.93
DEFAULT_VMAX = 1.05
SUBSTATION_V = 1.0
DEFAULT_IMAX_PU = 10.0

BUS_COLUMNS = ("id", "p_kw", "q_kvar", "vmin_pu", "vmax_pu", "is_substation")
BRANCH_COLUMNS = ("from", "to", "r_ohm", "x_ohm", "imax_a", "switchable", "closed")

_TRUE = {"1", "true", "yes", "y", "t"}
_FALSE = {"0", "false", "no", "n", "f"}


class NetworkFormatError(ValueError):
    """Raised when a network document cannot be parsed.

    ``line`` and ``column`` are 1-based; ``column`` counts CSV fields for
    table rows and characters for key/value lines. Either may be ``None``
    for whole-document problems.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class NetworkValidationError(ValueError):
    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = diagnostics
        lines = "; ".join(str(d) for d in diagnostics)
        super().__init__(f"network failed validation: {lines}")


@dataclass(frozen=True)
class Bus:
    id: int
    p_demand: float
    q_demand: float
    v_min: float = DEFAULT_VMIN
    v_max: float = DEFAULT_VMAX
    is_substation: bool = False

    @property
    def has_demand(self) -> bool:
        return self.p_demand != 0.0 or self.q_demand != 0.0


@dataclass(frozen=True)
class Branch:
    from_bus: int
    to_bus: int
    r: float
    x: float
    i_max: float
    switchable: bool = True
    initially_closed: bool = True

    @property
    def z_sqr(self) -> float:
        return self.r * self.r + self.x * self.x

    @property
    def key(self) -> tuple[int, int]:
        """Unordered endpoint pair, used for duplicate detection."""
        a, b = self.from_bus, self.to_bus
        return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class Network:
    """Buses and branches on a common base.

    Attributes:
        buses: Buses in dataset order; positions index every per-bus array.
        branches: Branches in dataset order; positions index configurations.
        base_kv: Line-to-line voltage base in kV.
        base_mva: Three-phase apparent power base in MVA.
        per_unit: True once :func:`to_per_unit` has been applied.
        name: Free-form system label, used in report rows and file names.
    """

    buses: tuple[Bus, ...]
    branches: tuple[Branch, ...]
    base_kv: float
    base_mva: float
    per_unit: bool = False
    name: str = "network"
    _index: dict[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "buses", tuple(self.buses))
        object.__setattr__(self, "branches", tuple(self.branches))
        object.__setattr__(self, "_index", {b.id: k for k, b in enumerate(self.buses)})

    @property
    def n_buses(self) -> int:
        return len(self.buses)

    @property
    def n_branches(self) -> int:
        return len(self.branches)

    @property
    def z_base(self) -> float:
        """Impedance base in ohm."""
        return self.base_kv**2 / self.base_mva

    @property
    def i_base(self) -> float:
        """Current base in A."""
        return 1000.0 * self.base_mva / (math.sqrt(3.0) * self.base_kv)

    def bus_pos(self, bus_id: int) -> int:
        return self._index[bus_id]

    def has_bus(self, bus_id: int) -> bool:
        return bus_id in self._index

    def branch_ends(self) -> list[tuple[int, int]]:
        """Branch endpoints as bus positions."""
        return [(self._index[br.from_bus], self._index[br.to_bus]) for br in self.branches]

    @property
    def substation_positions(self) -> list[int]:
        return [k for k, b in enumerate(self.buses) if b.is_substation]

    @property
    def n_substations(self) -> int:
        return sum(1 for b in self.buses if b.is_substation)

    def fingerprint(self) -> str:
        """Stable digest of the electrical content (ids, parameters, bases)."""
        h = hashlib.sha256()
        h.update(repr((self.base_kv, self.base_mva, self.per_unit)).encode())
        for b in self.buses:
            h.update(repr((b.id, b.p_demand, b.q_demand, b.v_min, b.v_max, b.is_substation)).encode())
        for br in self.branches:
            h.update(
                repr((br.from_bus, br.to_bus, br.r, br.x, br.i_max, br.switchable, br.initially_closed)).encode()
            )
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.severity}: {self.location}: {self.message}"


@dataclass(frozen=True)
class BusClasses:
    substations: tuple[int, ...]
    demand: tuple[int, ...]
    zero_demand: tuple[int, ...]


# --------------------------------------------------------------------------
# parsing
# --------------------------------------------------------------------------


def _parse_float(cell: str, line: int, col: int, what: str) -> float:
    try:
        value = float(cell)
    except ValueError:
        raise NetworkFormatError(f"{what}: expected a number, got {cell!r}", line, col) from None
    if not math.isfinite(value):
        raise NetworkFormatError(f"{what}: non-finite value {cell!r}", line, col)
    return value


def _parse_int(cell: str, line: int, col: int, what: str) -> int:
    try:
        return int(cell)
    except ValueError:
        raise NetworkFormatError(f"{what}: expected an integer id, got {cell!r}", line, col) from None


def _parse_bool(cell: str, line: int, col: int, what: str) -> bool:
    v = cell.strip().lower()
    if v in _TRUE:
        return True
    if v in _FALSE:
        return False
    raise NetworkFormatError(f"{what}: expected a boolean, got {cell!r}", line, col)


def parse_network(text: str, name: str | None = None) -> Network:
    """Parse a canonical network document into a physical-unit :class:`Network`."""
    section: str | None = None
    system: dict[str, tuple[str, int]] = {}
    header_seen = {"buses": False, "branches": False}
    bus_rows: list[tuple[int, list[str]]] = []
    branch_rows: list[tuple[int, list[str]]] = []

    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise NetworkFormatError("unterminated section header", lineno, len(raw.rstrip()) + 1)
            section = line[1:-1].strip().lower()
            if section not in ("system", "buses", "branches"):
                raise NetworkFormatError(f"unknown section [{section}]", lineno, 2)
            continue
        if section is None:
            raise NetworkFormatError("content before the first section header", lineno, 1)
        if section == "system":
            if "=" not in line:
                raise NetworkFormatError("expected 'key = value'", lineno, 1)
            key, value = (s.strip() for s in line.split("=", 1))
            system[key.lower()] = (value, lineno)
            continue
        cells = [c.strip() for c in line.split(",")]
        expected = BUS_COLUMNS if section == "buses" else BRANCH_COLUMNS
        if not header_seen[section]:
            if tuple(c.lower() for c in cells) != expected:
                raise NetworkFormatError(f"[{section}] header must be {','.join(expected)}", lineno, 1)
            header_seen[section] = True
            continue
        if len(cells) != len(expected):
            raise NetworkFormatError(
                f"expected {len(expected)} fields, found {len(cells)}", lineno, min(len(cells), len(expected)) + 1
            )
        (bus_rows if section == "buses" else branch_rows).append((lineno, cells))

    for key in ("base_kv", "base_mva"):
        if key not in system:
            raise NetworkFormatError(f"missing {key} in [system]")
    base_kv = _parse_float(system["base_kv"][0], system["base_kv"][1], 1, "base_kv")
    base_mva = _parse_float(system["base_mva"][0], system["base_mva"][1], 1, "base_mva")
    if base_kv <= 0 or base_mva <= 0:
        raise NetworkFormatError("base values must be positive", system["base_kv"][1])
    default_imax_pu = DEFAULT_IMAX_PU
    if "default_imax_pu" in system:
        default_imax_pu = _parse_float(*system["default_imax_pu"], 1, "default_imax_pu")
    if name is None:
        name = system.get("name", ("network", 0))[0]

    buses: list[Bus] = []
    seen: dict[int, int] = {}
    for lineno, c in bus_rows:
        bid = _parse_int(c[0], lineno, 1, "id")
        if bid in seen:
            raise NetworkFormatError(f"duplicate bus id {bid} (first defined on line {seen[bid]})", lineno, 1)
        seen[bid] = lineno
        is_sub = _parse_bool(c[5], lineno, 6, "is_substation")
        vdef_lo, vdef_hi = (SUBSTATION_V, SUBSTATION_V) if is_sub else (DEFAULT_VMIN, DEFAULT_VMAX)
        buses.append(
            Bus(
                id=bid,
                p_demand=_parse_float(c[1], lineno, 2, "p_kw"),
                q_demand=_parse_float(c[2], lineno, 3, "q_kvar"),
                v_min=_parse_float(c[3], lineno, 4, "vmin_pu") if c[3] else vdef_lo,
                v_max=_parse_float(c[4], lineno, 5, "vmax_pu") if c[4] else vdef_hi,
                is_substation=is_sub,
            )
        )
    if not any(b.is_substation for b in buses):
        raise NetworkFormatError("network has zero substations")

    i_base = 1000.0 * base_mva / (math.sqrt(3.0) * base_kv)
    branches: list[Branch] = []
    for lineno, c in branch_rows:
        a = _parse_int(c[0], lineno, 1, "from")
        b = _parse_int(c[1], lineno, 2, "to")
        for col, bid in ((1, a), (2, b)):
            if bid not in seen:
                raise NetworkFormatError(f"branch references unknown bus {bid}", lineno, col)
        branches.append(
            Branch(
                from_bus=a,
                to_bus=b,
                r=_parse_float(c[2], lineno, 3, "r_ohm"),
                x=_parse_float(c[3], lineno, 4, "x_ohm"),
                i_max=_parse_float(c[4], lineno, 5, "imax_a") if c[4] else default_imax_pu * i_base,
                switchable=_parse_bool(c[5], lineno, 6, "switchable"),
                initially_closed=_parse_bool(c[6], lineno, 7, "closed"),
            )
        )
    n_sub = sum(1 for b in buses if b.is_substation)
    if len(branches) < len(buses) - n_sub:
        raise NetworkFormatError(
            f"no spanning forest possible: {len(branches)} branches < {len(buses)} buses - {n_sub} substations"
        )
    return Network(tuple(buses), tuple(branches), base_kv, base_mva, per_unit=False, name=name)


def load_network(path: str | Path) -> Network:
    path = Path(path)
    return parse_network(path.read_text(encoding="utf-8"), name=None)


def _fmt(v: float) -> str:
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def serialize_network(net: Network) -> str:
    """Render a physical-unit network in the canonical format.

    Every value is written explicitly (no defaulted cells), with ``repr``
    precision, so ``parse(serialize(parse(t)))`` equals ``parse(t)``.
    """
    if net.per_unit:
        raise ValueError("serialize_network expects a physical-unit network")
    out = [
        "[system]",
        f"name = {net.name}",
        f"base_kv = {_fmt(net.base_kv)}",
        f"base_mva = {_fmt(net.base_mva)}",
        "[buses]",
        ",".join(BUS_COLUMNS),
    ]
    for b in net.buses:
        out.append(
            f"{b.id},{_fmt(b.p_demand)},{_fmt(b.q_demand)},{_fmt(b.v_min)},{_fmt(b.v_max)},{int(b.is_substation)}"
        )
    out += ["[branches]", ",".join(BRANCH_COLUMNS)]
    for br in net.branches:
        out.append(
            f"{br.from_bus},{br.to_bus},{_fmt(br.r)},{_fmt(br.x)},{_fmt(br.i_max)},"
            f"{int(br.switchable)},{int(br.initially_closed)}"
        )
    return "\n".join(out) + "\n"


def import_branch_list(
    text: str,
    base_kv: float,
    base_mva: float,
    substation: int = 1,
    name: str = "network",
) -> Network:
    """Import a Baran-Wu style branch list.

    Rows are ``from to r_ohm x_ohm p_kw_at_to q_kvar_at_to [closed]``,
    separated by whitespace or commas; ``#`` starts a comment. The load in
    each row belongs to the ``to`` bus. A missing ``closed`` column means
    closed; tie lines are given with ``closed = 0`` and zero load.
    """
    loads: dict[int, tuple[float, float]] = {}
    order: list[int] = [substation]
    rows = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        cells = line.replace(",", " ").split()
        if len(cells) not in (6, 7):
            raise NetworkFormatError(f"expected 6 or 7 fields, found {len(cells)}", lineno, 1)
        a = _parse_int(cells[0], lineno, 1, "from")
        b = _parse_int(cells[1], lineno, 2, "to")
        r = _parse_float(cells[2], lineno, 3, "r_ohm")
        x = _parse_float(cells[3], lineno, 4, "x_ohm")
        p = _parse_float(cells[4], lineno, 5, "p_kw_at_to")
        q = _parse_float(cells[5], lineno, 6, "q_kvar_at_to")
        closed = _parse_bool(cells[6], lineno, 7, "closed") if len(cells) == 7 else True
        for bid in (a, b):
            if bid not in order:
                order.append(bid)
        if p or q:
            if b in loads and loads[b] != (p, q):
                raise NetworkFormatError(f"conflicting loads for bus {b}", lineno, 5)
            loads[b] = (p, q)
        rows.append((a, b, r, x, closed))
    if not rows:
        raise NetworkFormatError("no spanning forest possible: empty branch list")
    i_base = 1000.0 * base_mva / (math.sqrt(3.0) * base_kv)
    buses = []
    for bid in order:
        p, q = loads.get(bid, (0.0, 0.0))
        is_sub = bid == substation
        v = (SUBSTATION_V, SUBSTATION_V) if is_sub else (DEFAULT_VMIN, DEFAULT_VMAX)
        buses.append(Bus(bid, p, q, v[0], v[1], is_sub))
    branches = [Branch(a, b, r, x, DEFAULT_IMAX_PU * i_base, True, closed) for a, b, r, x, closed in rows]
    return Network(tuple(buses), tuple(branches), base_kv, base_mva, name=name)


# --------------------------------------------------------------------------
# per-unit conversion, validation, classification
# --------------------------------------------------------------------------


def to_per_unit(net: Network) -> Network:
    if net.per_unit:
        return net
    if net.base_kv <= 0 or net.base_mva <= 0:
        raise ValueError("per-unit conversion needs positive base_kv and base_mva")
    z_base = net.z_base
    s_base_kw = net.base_mva * 1000.0
    i_base = net.i_base
    buses = tuple(replace(b, p_demand=b.p_demand / s_base_kw, q_demand=b.q_demand / s_base_kw) for b in net.buses)
    branches = tuple(replace(br, r=br.r / z_base, x=br.x / z_base, i_max=br.i_max / i_base) for br in net.branches)
    return replace(net, buses=buses, branches=branches, per_unit=True)


def _components(n: int, edges: list[tuple[int, int]]) -> list[int]:
    parent = list(range(n))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in edges:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return [find(k) for k in range(n)]


def validate(net: Network) -> list[Diagnostic]:
    """Check every structural invariant; an empty list means valid.

    Negative demand at a load bus is reported as a warning (capacitive
    loads appear in published data sets); everything else is an error.
    """
    diags: list[Diagnostic] = []
    ids: set[int] = set()
    for b in net.buses:
        loc = f"bus {b.id}"
        if b.id in ids:
            diags.append(Diagnostic("error", loc, "duplicate bus id"))
        ids.add(b.id)
        if not b.v_min > 0:
            diags.append(Diagnostic("error", loc, f"v_min must be positive (got {b.v_min})"))
        if b.v_min > b.v_max:
            diags.append(Diagnostic("error", loc, f"v_min {b.v_min} exceeds v_max {b.v_max}"))
        if not b.is_substation and (b.p_demand < 0 or b.q_demand < 0):
            diags.append(Diagnostic("warning", loc, "negative demand at a load bus"))
    if not any(b.is_substation for b in net.buses):
        diags.append(Diagnostic("error", "network", "no substation"))

    pairs: dict[tuple[int, int], int] = {}
    for k, br in enumerate(net.branches):
        loc = f"branch {k} ({br.from_bus}-{br.to_bus})"
        for end in (br.from_bus, br.to_bus):
            if end not in ids:
                diags.append(Diagnostic("error", loc, f"unknown bus {end}"))
        if br.from_bus == br.to_bus:
            diags.append(Diagnostic("error", loc, "self-loop"))
        if br.r < 0 or br.x < 0:
            diags.append(Diagnostic("error", loc, "negative impedance"))
        if br.r == 0 and br.x == 0:
            diags.append(Diagnostic("error", loc, "zero impedance (r = x = 0)"))
        if not br.i_max > 0:
            diags.append(Diagnostic("error", loc, "ampacity must be positive"))
        if br.key in pairs:
            diags.append(Diagnostic("error", loc, f"duplicate of branch {pairs[br.key]}"))
        pairs.setdefault(br.key, k)

    n_sub = net.n_substations
    if net.n_branches < net.n_buses - n_sub:
        diags.append(Diagnostic("error", "network", "no spanning forest possible: too few branches"))
    if any(d.severity == "error" and "unknown bus" in d.message for d in diags):
        return diags
    labels = _components(net.n_buses, net.branch_ends())
    fed = {labels[k] for k in net.substation_positions}
    unfed = sorted({labels[k] for k in range(net.n_buses)} - fed)
    if unfed:
        n_comp = len(set(labels))
        diags.append(
            Diagnostic(
                "error",
                "network",
                f"all-closed graph has {n_comp} components; {len(unfed)} without a substation",
            )
        )
    return diags


def errors(diags: list[Diagnostic]) -> list[Diagnostic]:
    return [d for d in diags if d.severity == "error"]


def require_valid(net: Network) -> None:
    bad = errors(validate(net))
    if bad:
        raise NetworkValidationError(bad)


def classify_buses(net: Network) -> BusClasses:
    """Split bus positions into substations, demand buses and zero-demand buses."""
    subs, dem, zero = [], [], []
    for k, b in enumerate(net.buses):
        if b.is_substation:
            subs.append(k)
        elif b.has_demand:
            dem.append(k)
        else:
            zero.append(k)
    return BusClasses(tuple(subs), tuple(dem), tuple(zero))
