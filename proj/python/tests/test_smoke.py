import math
from fractions import Fraction

import pytest

import flowpotts as fp


def test_flow_polynomial_and_counts():
    tri = fp.builtin_graph("triangle")
    assert fp.flow_polynomial(tri) == [-1, 1]
    k4 = fp.builtin_graph("k4")
    for q in range(2, 6):
        assert fp.count_flows(k4, q) == fp.count_flows_enum(k4, q)
    assert fp.count_flows(k4, 4) == 6


def test_tutte_and_whitney_are_exact():
    k4 = fp.builtin_graph("k4")
    assert fp.tutte(k4, 1, 1) == 16
    assert fp.whitney(fp.builtin_graph("k2"), 1, 1) == 2
    assert isinstance(fp.whitney(k4, Fraction(1, 2), 3), Fraction)


def test_sigma_routes_on_k2():
    k2 = fp.builtin_graph("k2")
    for route in ("spin", "flow-exact", "even", "source"):
        r = fp.sigma(k2, 2, [0.5], 0, 1, route=route)
        assert abs(r["value"] - math.tanh(0.5)) <= max(r["error"], 1e-12)
    mc = fp.sigma(k2, 2, [0.5], 0, 1, route="flow-mc", samples=4000, seed=3)
    assert mc == fp.sigma(k2, 2, [0.5], 0, 1, route="flow-mc", samples=4000, seed=3, workers=2)
    assert abs(mc["value"] - math.tanh(0.5)) <= 5 * mc["error"]


def test_errors_map_to_python_exceptions():
    k2 = fp.builtin_graph("k2")
    with pytest.raises(ValueError):
        fp.sigma(k2, 3, [0.5], 0, 1, route="even")
    with pytest.raises(ValueError):
        fp.builtin_graph("nope:2")
    with pytest.raises(RuntimeError):
        fp.potts_sigma(fp.builtin_graph("ladder:6"), 5, [1.0], 0, 1)


def test_decay_and_verify():
    rows, monotone = fp.decay(fp.builtin_graph("path:5"), 2, 0.5)
    assert monotone
    for vertex, distance, sigma, _ in rows:
        assert abs(sigma - math.tanh(0.5) ** distance) < 1e-12
    report = fp.verify("switching")
    assert report and all(r["status"] == "pass" for r in report)


def test_switching_and_simon():
    assert fp.switching_check_fixed(fp.builtin_graph("triangle"), [1, 2, 1], 0, 1, []) == (
        fp.switching_check_fixed(fp.builtin_graph("triangle"), [1, 2, 1], 0, 1, [])
    )
    lhs, rhs, margin = fp.simon_check(fp.builtin_graph("path:3"), 0.5, 0, 2, [1])
    assert abs(margin) < 1e-12
    g = fp.Multigraph(3, [(0, 1), (1, 2), (2, 0)])
    assert g.edge_count == 3
    assert fp.verify_curiosity(g, 0.3)["status"] == "pass"
