import math

import numpy as np
import pytest

import divcurl


def plane_wave(n, k):
    x = np.arange(n) * 2 * np.pi / n
    grids = np.meshgrid(*([x] * len(k)), indexing="ij")
    return np.exp(1j * sum(kj * g for kj, g in zip(k, grids)))


def test_gradient_of_plane_wave():
    n, k = 8, (2, -1)
    f = plane_wave(n, k)
    g = divcurl.gradient(f)
    assert g.shape == (2, n, n)
    for j in range(2):
        np.testing.assert_allclose(g[j], 1j * k[j] * f, atol=1e-12)


def test_leray_projection_is_divergence_free_and_idempotent():
    rng = np.random.default_rng(0)
    v = rng.normal(size=(3, 8, 8, 8)).astype(complex)
    p = divcurl.leray_project(v)
    assert divcurl.divergence_residual(p) < 1e-12
    np.testing.assert_allclose(divcurl.leray_project(p), p, atol=1e-12)


def test_riesz_of_gradient_field_is_curl_free():
    f = divcurl.make_u(2, 16, "random:1:4:5")
    assert divcurl.curl_residual(divcurl.riesz(f)) < 1e-12


def test_lorentz_norm_of_three_ones_is_sqrt_three():
    assert divcurl.lorentz_q1_norm([1.0, 1.0, 1.0], 2) == math.sqrt(3.0)


def test_weak_lp_functional():
    assert divcurl.weak_lp_functional([1.0, 0.9, 0.9], 2.0) == pytest.approx(math.sqrt(3) * 0.9)


def test_commutator_singular_values_are_sorted_and_vanish_for_constants():
    s = divcurl.commutator_singular_values(divcurl.make_u(2, 12, "mode:1:1,0"), 0, 3.0)
    assert all(a >= b for a, b in zip(s, s[1:]))
    assert s[0] > 0
    z = divcurl.commutator_singular_values(divcurl.make_u(2, 12, "const:2"), 0, 3.0)
    assert max(z) < 1e-12


IDENTITY = """
[run]
experiment = "identity_suite"
seed = 7
[grid]
d = 2
n = 16
band = 4.0
[identity]
trials = 3
"""


def test_run_config_is_deterministic():
    a = divcurl.run_config(IDENTITY)
    b = divcurl.run_config(IDENTITY, jobs=2)
    assert a == b
    assert a["passed"]
    assert a["metrics"]["max_identity_deviation"] < 1e-9


def test_run_to_directory(tmp_path):
    assert divcurl.run_to_directory(IDENTITY, tmp_path / "out") == 0
    for name in ("record.json", "series.csv", "summary.txt"):
        assert (tmp_path / "out" / name).exists()


def test_config_errors_list_every_violation():
    with pytest.raises(divcurl.ConfigError) as err:
        divcurl.parse_config('[run]\nexperiment = "identity_suite"\n[grid]\nd = 1\nn = 8\nbogus = 1\n')
    text = str(err.value)
    assert "grid.d" in text and "grid.bogus" in text
    assert isinstance(err.value, ValueError)
