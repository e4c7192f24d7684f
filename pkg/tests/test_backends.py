import os
import subprocess
import sys

import numpy as np
import pytest

from confluent_susy import BACKEND
from confluent_susy._backend import load_backend

python_kernels = load_backend("python")
try:
    cython_kernels = load_backend("cython")
except ImportError:  # extension not built
    cython_kernels = None

needs_ext = pytest.mark.skipif(cython_kernels is None, reason="compiled extension not built")


def test_unknown_backend():
    with pytest.raises(ValueError):
        load_backend("fortran")


def test_theta1_series_small_argument():
    q = 0.05
    v = np.array([1e-4 + 0j])
    t = python_kernels.theta1_derivs(v, q, 8)
    # theta1(v) ~ theta1'(0) v near the origin
    assert t[0, 0] / v[0] == pytest.approx(t[1, 0], rel=1e-7)


@needs_ext
def test_theta_kernels_agree():
    rng = np.random.default_rng(3)
    v = rng.uniform(-3, 3, 500) + 1j * rng.uniform(-0.8, 0.8, 500)
    for q, n in ((0.01, 5), (0.1, 8), (0.3, 14)):
        a = python_kernels.theta1_derivs(v, q, n)
        b = cython_kernels.theta1_derivs(v, q, n)
        np.testing.assert_allclose(b, a, rtol=1e-13, atol=1e-14)


@needs_ext
def test_sn_kernels_agree():
    x = np.linspace(-20, 20, 2001)
    for m in (0.01, 0.5, 0.99):
        np.testing.assert_allclose(cython_kernels.sn_agm(x, m), python_kernels.sn_agm(x, m),
                                   rtol=0, atol=1e-14)


def test_forced_pure_python_backend():
    env = dict(os.environ, CONFLUENT_SUSY_PURE_PYTHON="1")
    code = "import confluent_susy as c; from confluent_susy.suites import run_suites; " \
           "print(c.BACKEND, all(ch.passed for ch in run_suites(['elliptic'])))"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out == ["python", "True"]


def test_default_backend_prefers_extension():
    if os.environ.get("CONFLUENT_SUSY_PURE_PYTHON", "") not in ("", "0"):
        assert BACKEND == "python"
    else:
        assert BACKEND == ("cython" if cython_kernels is not None else "python")
