import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from padic_hardy.kernels import _pykernels

ck = pytest.importorskip("padic_hardy.kernels._ckernels")

vals = arrays(np.float64, st.integers(0, 60), elements=st.floats(-1, 1))


def close(a, b):
    return np.allclose(np.asarray(a, float), np.asarray(b, float), rtol=1e-12, atol=1e-14)


@given(vals, st.floats(0.01, 0.99), st.floats(-2, 2))
def test_hardy_recurrence(c, r, head):
    assert close(ck.hardy_recurrence(c, r, head), _pykernels.hardy_recurrence(c, r, head))


@given(vals, st.floats(-2, 2), st.booleans())
def test_suffix_sum(c, tail, strict):
    assert close(ck.suffix_sum(c, tail, strict), _pykernels.suffix_sum(c, tail, strict))


@given(vals, st.sampled_from([1.5, 2.0, 3.0]), st.floats(0.2, 5), st.floats(0.1, 2))
def test_weighted_power_sum(c, q, ratio, first):
    a, b = ck.weighted_power_sum(c, q, ratio, first), _pykernels.weighted_power_sum(c, q, ratio, first)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(b))


@given(arrays(np.float64, st.integers(1, 30), elements=st.floats(-1, 1)), st.floats(0, 1), st.floats(-1, 1),
       st.sampled_from([1.0, 2.0, 2.5]))
def test_cmo_window(c, head_mass, head_value, q):
    sizes = 0.5 ** np.arange(len(c), 0, -1)
    assert close(ck.cmo_window(c, sizes, head_mass, head_value, q),
                 _pykernels.cmo_window(c, sizes, head_mass, head_value, q))


@given(arrays(np.float64, st.integers(1, 40), elements=st.floats(-1, 1)), st.floats(0, 1), st.floats(0, 0.95),
       st.floats(0, 1), st.floats(0, 0.95), st.booleans())
def test_toeplitz_apply(x, lw, lr, hw, hr, transpose):
    assert close(ck.toeplitz_apply(x, lw, lr, hw, hr, 0.0, transpose),
                 _pykernels.toeplitz_apply(x, lw, lr, hw, hr, 0.0, transpose))


def test_power_iteration():
    x0 = np.sin(np.pi * np.arange(1, 42) / 42)
    a = ck.power_iteration(x0, 0.5, 2**-0.5, 0.5, 2**-0.5, 0.0, 5000, 1e-12)
    b = _pykernels.power_iteration(x0, 0.5, 2**-0.5, 0.5, 2**-0.5, 0.0, 5000, 1e-12)
    assert abs(a[0] - b[0]) < 1e-10 and a[2] == b[2]


def test_pure_backend_selected_by_environment():
    code = "from padic_hardy import kernels; print(kernels.BACKEND)"
    env = dict(os.environ, PADIC_HARDY_PURE="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env.pop("PADIC_HARDY_PURE")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"
