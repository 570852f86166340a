import math

import numpy as np
import pytest

import gmtkit


def test_modulus_divergence():
    assert gmtkit.classify_divergence(gmtkit.Modulus.parse("power:1,0.5"))["classification"] == "divergent"
    assert gmtkit.classify_divergence(gmtkit.Modulus.parse("iterlog:2,2"))["classification"] == "convergent"
    m = gmtkit.Modulus.power(1.0, 0.5)
    assert m.psi(0.25) == pytest.approx(0.5)
    assert m.alpha(2.0**-10) / 2.0**-10 == pytest.approx(0.5, rel=1e-12)
    assert gmtkit.check_allowable(m)["all_pass"] is True


def test_errors_are_typed():
    with pytest.raises(gmtkit.SchemaError):
        gmtkit.Modulus.parse("nonsense")
    assert issubclass(gmtkit.SchemaError, gmtkit.Error)
    assert issubclass(gmtkit.Error, RuntimeError)


def test_whitney_cubes():
    cubes = gmtkit.whitney_cubes(8)
    assert cubes.shape[1] == 5
    side = cubes[:, 3] - cubes[:, 1]
    assert np.allclose(side, 2.0 ** -cubes[:, 0])
    summary = gmtkit.whitney_summary(8)
    assert isinstance(summary, dict)


def test_identity_energy_and_family():
    f = gmtkit.SampledMap.parse("identity", 2, 1.0 / 128)
    assert f.energy() == pytest.approx(2 * math.pi, rel=0.02)
    assert f([0.25, -0.5]) == pytest.approx([0.25, -0.5])
    r = gmtkit.family_mass(f, gmtkit.Modulus.parse("power:1,1"), 8)
    assert r["within_bound"] and r["mass"] > 0


def test_lattice_map_matches_function():
    h = 1.0 / 64
    xs = -1.0 + (np.arange(128) + 0.5) * h
    X, Y = np.meshgrid(xs, xs)
    values = np.stack([X, Y], axis=-1)
    f = gmtkit.SampledMap.from_lattice(values, h)
    assert f.energy() == pytest.approx(2 * math.pi, rel=0.05)


def test_cover_run_small():
    f = gmtkit.SampledMap.parse("identity", 2, 1.0 / 128)
    r = gmtkit.cover_run(f, gmtkit.Modulus.parse("power:1,1"), depth=10, directions=8)
    assert r["l1"] >= r["l0"]
    for lvl in r["levels"]:
        assert lvl["min_multiplicity"] >= 1.0


def test_counterexample():
    s = gmtkit.CantorTower.source(0.25, 8)
    t = gmtkit.CantorTower.target(1.0, 8)
    # corners of the square are fixed; h is the identity outside
    assert gmtkit.evaluate_h([0.0, 0.0], s, t) == pytest.approx([0.0, 0.0], abs=1e-12)
    assert gmtkit.evaluate_h([2.0, 0.5], s, t) == pytest.approx([2.0, 0.5])
    assert gmtkit.locate([0.5, 0.5], s)["k"] >= 0
    w = gmtkit.witness(t, 1.0, 8)
    assert w["inf_ratio"] > 0
    assert gmtkit.holder_ratio(s, t, 2000, 3)["sup_ratio"] > 0


def test_box_count_of_square():
    g = gmtkit.Gauge.power(2.0)
    pts = [[i / 64, j / 64] for i in range(64) for j in range(64)]
    assert gmtkit.box_count(pts, 1.0 / 8, g) == pytest.approx(64 * 2 * (1 / 8) ** 2)
