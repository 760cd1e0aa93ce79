"""The numba kernels and their numpy fallbacks must agree to rounding."""

import math

import numpy as np
import pytest

from geodisc import _series_numpy
from geodisc.backend import active_backend

numba_impl = pytest.importorskip("geodisc._series_numba")

CASES = [(0.0, 0.0, 1.0), (1.0, 0.0, 2.0), (7.0, 3.0, 1320.0), (-0.5, -0.5, math.pi ** -1)]


def test_active_backend_reports_a_known_name():
    assert active_backend() in ("numba", "numpy")


@pytest.mark.parametrize("alpha,beta,kappa", CASES)
def test_radial_coefficients_agree(alpha, beta, kappa):
    for cos_r in (-0.7, 0.0, 0.55):
        a = numba_impl.radial_coefficients(alpha, beta, kappa, cos_r, 3000)
        b = _series_numpy.radial_coefficients(alpha, beta, kappa, cos_r, 3000)
        assert np.allclose(a, b, rtol=1e-12, atol=1e-300)


@pytest.mark.parametrize("alpha,beta,kappa", CASES)
def test_zonal_series_pair_agree(alpha, beta, kappa):
    rng = np.random.default_rng(0)
    zs = rng.uniform(-1, 1, 40)
    coeffs = rng.random(800) / np.arange(1, 801) ** 2
    ap, am = numba_impl.zonal_series_pair(zs, coeffs, alpha, beta)
    bp, bm = _series_numpy.zonal_series_pair(zs, coeffs, alpha, beta)
    assert np.allclose(ap, bp, rtol=1e-11, atol=1e-13)
    assert np.allclose(am, bm, rtol=1e-11, atol=1e-13)


@pytest.mark.parametrize("alpha,beta,kappa", CASES)
def test_zonal_sum_table_agree(alpha, beta, kappa):
    rng = np.random.default_rng(1)
    zs = rng.uniform(-1, 1, 60)
    a = numba_impl.zonal_sum_table(zs, alpha, beta, 500)
    b = _series_numpy.zonal_sum_table(zs, alpha, beta, 500)
    assert np.allclose(a, b, rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize("alpha,beta,kappa", CASES)
def test_squared_poly_sums_agree(alpha, beta, kappa):
    rng = np.random.default_rng(2)
    zs = rng.uniform(-1, 1, 80)
    ws = rng.random(80)
    a = numba_impl.squared_poly_sums(zs, ws, alpha + 1, beta + 1, 300)
    b = _series_numpy.squared_poly_sums(zs, ws, alpha + 1, beta + 1, 300)
    assert np.allclose(a, b, rtol=1e-11, atol=1e-300)


def test_empty_inputs():
    for impl in (numba_impl, _series_numpy):
        assert impl.radial_coefficients(1.0, 0.0, 2.0, 0.3, 0).shape == (0,)
        p, m = impl.zonal_series_pair(np.array([0.1]), np.empty(0), 1.0, 0.0)
        assert p[0] == 0.0 and m[0] == 0.0
        t = impl.zonal_sum_table(np.empty(0), 1.0, 0.0, 4)
        assert t[0] == 0.0


def test_numpy_backend_selected_by_env(tmp_path):
    import subprocess
    import sys
    code = ("import geodisc, geodisc.backend as b; "
            "print(b.active_backend())")
    out = subprocess.run([sys.executable, "-c", code],
                         env={"GEODISC_BACKEND": "numpy", "PATH": "/usr/bin:/bin"},
                         capture_output=True, text=True, cwd="/root/pkg")
    assert out.stdout.strip() == "numpy"
