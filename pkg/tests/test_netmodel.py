from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from netgen import loop4, make_net
from radkit.harness import load_system
from radkit.netmodel import (
    Branch,
    Bus,
    Network,
    NetworkFormatError,
    NetworkValidationError,
    classify_buses,
    errors,
    import_branch_list,
    parse_network,
    require_valid,
    serialize_network,
    to_per_unit,
    validate,
)

TOY = """\
# toy feeder
[system]
name = toy
base_kv = 10
base_mva = 1
[buses]
id,p_kw,q_kvar,vmin_pu,vmax_pu,is_substation
1,0,0,,,1
2,100,60,,,0
3,0,5,0.95,1.05,0
[branches]
from,to,r_ohm,x_ohm,imax_a,switchable,closed
1,2,0.5,0.4,,1,1
2,3,0.3,0.2,200,0,1
"""


def test_parse_defaults_and_units():
    net = parse_network(TOY)
    assert net.name == "toy"
    assert (net.n_buses, net.n_branches) == (3, 2)
    assert net.buses[0].is_substation and net.buses[0].v_min == 1.0 and net.buses[0].v_max == 1.0
    assert net.buses[1].v_min == 0.93 and net.buses[1].v_max == 1.05
    assert net.branches[0].i_max == pytest.approx(10.0 * net.i_base)
    assert net.branches[1].i_max == 200.0 and not net.branches[1].switchable
    assert validate(net) == []


def test_33bus_dimensions():
    net = load_system("33bus")
    assert (net.n_buses, net.n_branches) == (33, 37)
    assert (net.base_kv, net.base_mva) == (12.66, 10.0)
    assert net.substation_positions == [0] and net.buses[0].id == 1
    assert validate(net) == []


def test_zero_branches_rejected():
    text = TOY.split("[branches]")[0] + "[branches]\nfrom,to,r_ohm,x_ohm,imax_a,switchable,closed\n"
    with pytest.raises(NetworkFormatError, match="no spanning forest possible"):
        parse_network(text)


def test_loop_fixture():
    net = loop4()
    assert (net.n_buses, net.n_branches) == (4, 4)
    assert validate(net) == []


@pytest.mark.parametrize(
    "mutate, fragment",
    [
        (lambda t: t.replace("2,100,60,,,0", "2,100,60,x,,0"), "line 9, column 4"),
        (lambda t: t.replace("1,2,0.5,0.4,,1,1", "1,9,0.5,0.4,,1,1"), "unknown bus 9"),
        (lambda t: t.replace("[buses]", "[busses]"), "unknown section"),
        (lambda t: t.replace("1,0,0,,,1", "1,0,0,,,0"), "zero substations"),
        (lambda t: t.replace("base_mva = 1", ""), "missing base_mva"),
        (lambda t: t.replace("3,0,5,0.95,1.05,0", "2,0,5,0.95,1.05,0"), "duplicate bus id 2"),
        (lambda t: t.replace("1,2,0.5,0.4,,1,1", "1,2,0.5,0.4,1,1"), "expected 7 fields"),
    ],
)
def test_format_errors_carry_location(mutate, fragment):
    with pytest.raises(NetworkFormatError, match=fragment):
        parse_network(mutate(TOY))


def test_per_unit_33bus_impedance_base():
    net = load_system("33bus")
    assert net.z_base == pytest.approx(12.66**2 / 10, rel=1e-12)
    assert net.z_base == pytest.approx(16.02756, rel=1e-6)
    pu = to_per_unit(make_net(2, [(1, 2)], r=0.16028, x=0.0, base_kv=12.66, base_mva=10))
    assert pu.branches[0].r == pytest.approx(0.01, rel=1e-4)


def test_per_unit_zero_and_14bus_base():
    pu = to_per_unit(make_net(2, [(1, 2)], r=0.0, x=1.0))
    assert pu.branches[0].r == 0.0
    assert load_system("14bus").z_base == pytest.approx(5.29, rel=1e-12)


def test_per_unit_is_idempotent_and_scales_demand():
    net = load_system("33bus")
    pu = to_per_unit(net)
    assert to_per_unit(pu) is pu
    assert pu.buses[1].p_demand == pytest.approx(net.buses[1].p_demand / 10000.0)


def test_validate_vmin_above_vmax():
    net = make_net(3, [(1, 2), (2, 3)])
    buses = list(net.buses)
    buses[1] = Bus(2, 100.0, 50.0, 1.1, 1.0)
    diags = errors(validate(Network(tuple(buses), net.branches, 10, 10)))
    assert len(diags) == 1 and "exceeds v_max" in diags[0].message


def test_validate_unfed_component():
    net = make_net(4, [(1, 2), (3, 4)])
    diags = errors(validate(net))
    assert any("2 components" in d.message for d in diags)
    with pytest.raises(NetworkValidationError):
        require_valid(net)


@pytest.mark.parametrize(
    "branch, fragment",
    [
        (Branch(2, 3, 0.0, 0.0, 100.0), "zero impedance"),
        (Branch(2, 2, 0.1, 0.1, 100.0), "self-loop"),
        (Branch(3, 2, 0.1, 0.1, 100.0), "duplicate"),
        (Branch(2, 3, -0.1, 0.1, 100.0), "negative impedance"),
        (Branch(2, 3, 0.1, 0.1, 0.0), "ampacity"),
    ],
)
def test_validate_branch_errors(branch, fragment):
    base = make_net(3, [(1, 2), (2, 3)])
    net = Network(base.buses, base.branches + (branch,), 10, 10)
    assert any(fragment in d.message for d in errors(validate(net)))


def test_negative_demand_is_warning_only():
    net = make_net(2, [(1, 2)], demand={2: (100.0, -50.0)})
    diags = validate(net)
    assert diags and errors(diags) == []


def test_classify_33bus():
    c = classify_buses(load_system("33bus"))
    assert (len(c.substations), len(c.demand), len(c.zero_demand)) == (1, 32, 0)


def test_classify_or_semantics_and_substation():
    net = make_net(3, [(1, 2), (2, 3)], demand={2: (0.0, 5.0), 3: (0.0, 0.0)})
    c = classify_buses(net)
    assert c.substations == (0,) and c.demand == (1,) and c.zero_demand == (2,)


def test_import_branch_list():
    text = "1 2 0.5 0.4 100 60\n2 3 0.3 0.2 90 40\n1 3 0.4 0.4 0 0 0\n"
    net = import_branch_list(text, 12.66, 10.0)
    assert [b.id for b in net.buses] == [1, 2, 3]
    assert net.buses[2].p_demand == 90 and net.buses[0].is_substation
    assert [br.initially_closed for br in net.branches] == [True, True, False]
    with pytest.raises(NetworkFormatError):
        import_branch_list("1 2 0.5\n", 12.66, 10.0)


@pytest.mark.parametrize("name", ["14bus", "33bus", "84bus", "136bus", "417bus_synthetic"])
def test_bundled_systems_roundtrip(name):
    net = load_system(name)
    assert errors(validate(net)) == []
    assert parse_network(serialize_network(net)) == net


def test_serialize_rejects_per_unit():
    with pytest.raises(ValueError):
        serialize_network(to_per_unit(loop4()))


def test_fingerprint_tracks_content():
    a = loop4()
    b = make_net(4, [(1, 2), (2, 3), (3, 4), (4, 1)], r=0.51)
    assert a.fingerprint() == loop4().fingerprint()
    assert a.fingerprint() != b.fingerprint()


finite = st.floats(min_value=1e-4, max_value=1e4, allow_nan=False, allow_infinity=False)


@st.composite
def physical_networks(draw):
    n = draw(st.integers(2, 6))
    buses = [Bus(1, 0.0, 0.0, 1.0, 1.0, True)]
    for i in range(2, n + 1):
        lo = draw(st.floats(0.8, 1.0))
        buses.append(Bus(i, draw(finite), draw(st.floats(-1e3, 1e3)), lo, draw(st.floats(lo, 1.2))))
    branches = [Branch(draw(st.integers(1, i - 1)), i, draw(finite), draw(finite), draw(finite),
                       draw(st.booleans()), draw(st.booleans())) for i in range(2, n + 1)]
    return Network(tuple(buses), tuple(branches), draw(finite), draw(finite), name="h")


@given(physical_networks())
@settings(max_examples=60, deadline=None)
def test_parse_serialize_fixed_point(net):
    once = parse_network(serialize_network(net))
    assert once == net
    assert parse_network(serialize_network(once)) == once


@given(physical_networks())
@settings(max_examples=60, deadline=None)
def test_per_unit_keeps_reactance_ratio(net):
    pu = to_per_unit(net)
    for a, b in zip(net.branches, pu.branches):
        # both quotients are rounded once each, so equality holds to a few ulp
        assert math.isclose(b.x / b.r, a.x / a.r, rel_tol=4 * 2.0**-52)


@given(physical_networks())
@settings(max_examples=60, deadline=None)
def test_classes_partition_buses(net):
    c = classify_buses(net)
    parts = c.substations + c.demand + c.zero_demand
    assert len(parts) == net.n_buses and sorted(parts) == list(range(net.n_buses))
