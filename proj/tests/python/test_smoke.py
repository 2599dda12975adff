"""Smoke tests for the python bindings."""

import math

try:
    import qhdsim as m
except ImportError:  # direct extension module on the build-tree path
    import _qhdsim as m


def test_list_functions():
    entries = m.list_functions()
    assert len(entries) == 15
    names = {e["name"] for e in entries}
    assert {"ABS", "X2", "SCHWEFEL", "ACKLEY", "XINSHEYANG04"} <= names
    for e in entries:
        assert len(e["domain"]) == e["dim"]


def test_evaluate_and_subgradient():
    assert m.evaluate("X2", [0.5]) == 0.25
    assert m.evaluate("ABS", [-0.25]) == 0.25
    assert m.subgradient("ABS", [0.5]) == [1.0]
    assert m.subgradient("X2", [0.5]) == [1.0]


def test_evaluate_rejects_out_of_domain():
    try:
        m.evaluate("ABS", [2.0])
    except Exception:
        return
    raise AssertionError("expected a domain error")


def test_run_qhd_trace_shape():
    out = m.run_qhd("ABS", N=64, h=0.01, T=2.0, seed=1)
    steps = len(out["k"])
    assert steps == len(out["t"]) == len(out["expected_f"]) == len(out["gap"])
    assert steps > 100
    gaps = out["gap"]
    assert all(b <= a + 1e-15 for a, b in zip(gaps, gaps[1:]))
    assert math.isclose(sum(out["final_mass"]), 1.0, abs_tol=1e-9)
    assert out["resolution_floor"] >= 0.0


def test_run_qhd_is_deterministic():
    a = m.run_qhd("ABS", N=64, h=0.01, T=1.0)
    b = m.run_qhd("ABS", N=64, h=0.01, T=1.0)
    assert a["gap"] == b["gap"]
    assert a["final_mass"] == b["final_mass"]


def test_run_subgrad():
    out = m.run_subgrad("ABS", [1.0], budget=1000, best_iterate=True)
    assert out["subgradient_queries"] == 1000
    assert out["gap"] < 0.05


def test_run_lfmsgd():
    out = m.run_lfmsgd("X2", [0.5], budget=500, sigma=0.1, seed=3)
    assert out["subgradient_queries"] == 500
    again = m.run_lfmsgd("X2", [0.5], budget=500, sigma=0.1, seed=3)
    assert out["solution"] == again["solution"]


def test_best_of_k():
    # min of k draws from {0, 1} each w.p. 1/2 has expectation 2^-k.
    assert math.isclose(m.best_of_k([0.0, 1.0], [0.5, 0.5], 0.0, 2), 0.25)
    assert math.isclose(
        m.best_of_k([0.0, 1.0], [0.5, 0.5], 0.0, 10), 2.0 ** -10
    )
