import math

import pytest

import capstone

UNIT_DISC = {"type": "disc", "center": [0, 0], "radius": 1}


def test_version():
    assert capstone.__version__ == "capstone 0.1.0"


def test_capacity_of_disc_and_segment():
    assert capstone.capacity(UNIT_DISC, n=128) == pytest.approx(1.0, rel=0.02)
    seg = capstone.CompactSet.segment(-1, 1)
    assert capstone.capacity(seg, n=128) == pytest.approx(0.5, rel=0.05)


def test_point_set_is_polar():
    verdict = capstone.classify_polarity({"type": "point_set", "points": [[0, 0], [1, 1]]})
    assert verdict["classification"] == "polar"


def test_bad_set_raises_value_error():
    with pytest.raises(ValueError):
        capstone.capacity({"type": "disc", "center": [0, 0], "radius": 0})


def test_equilibrium_weights_sum_to_one():
    eq = capstone.equilibrium(UNIT_DISC, n=64)
    assert math.fsum(eq["weights"]) == pytest.approx(1.0, abs=1e-12)
    assert len(eq["support"]) == 64


def test_p1_dimensions():
    for k in range(-2, 4):
        assert capstone.dim_global_sections(k) == max(0, k + 1)
    assert capstone.bly_dimension(4 * math.pi * 3) == {"finite": 2}


def test_p2_table():
    assert capstone.omega_k_dimension(0) == 6
    assert capstone.omega_k_monomial_basis(-3) == [(1, 0)]
    assert repr(capstone.omega_k_spec(-4)) == "B u X5 u Y u Z10"
    v = capstone.monomial_norm_estimate(capstone.RegionSpec.z(2), 2, 1, 0)
    assert v["status"] == "divergent"
    assert capstone.region_contains(capstone.RegionSpec.x(2), 2, 0.1)


def test_wiegerinck_orders_increase():
    seq = capstone.wiegerinck_sequence(
        {"type": "disc", "center": [-1, 0], "radius": 0.5},
        {"type": "disc", "center": [1, 0], "radius": 0.5},
        count=3, k=-3, seed=1, n=128,
    )
    orders = [f["order"] for f in seq]
    assert orders == sorted(orders) and orders[0] == 2 and len(set(orders)) == 3


def test_run_job_dim_p2():
    report = capstone.run({"command": "dim-p2", "k": 1, "verdicts": False})
    assert report["results"]["dimension"] == 10
    assert report["config"]["p_max"] == 5
