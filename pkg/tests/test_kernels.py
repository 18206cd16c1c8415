import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.special

from drivenlattice.kernels import _fallback, backend

try:
    from drivenlattice.kernels import _native
except ImportError:
    _native = None

needs_native = pytest.mark.skipif(_native is None, reason="extension not built")


class TestFallback:
    def test_matches_reference(self, rng):
        xs = np.concatenate([rng.uniform(-200, 200, 25), [0.0, 2.0, -2.0, 1e-8]])
        table = _fallback.jn_array_batch(300, xs)
        ref = scipy.special.jv(np.arange(301)[None, :], xs[:, None])
        assert np.max(np.abs(table - ref)) < 1e-13

    def test_scalar_equals_batch(self, rng):
        xs = rng.uniform(-40, 40, 20)
        batch = _fallback.jn_array_batch(60, xs)
        for x, row in zip(xs, batch):
            assert np.array_equal(_fallback.jn_array(60, float(x)), row)

    def test_series_recurrence_boundary(self):
        # both evaluation branches must meet the accuracy contract at the cut
        orders = np.arange(41)
        for x in (2.0 - 1e-9, 2.0, 2.0 + 1e-9):
            vals = _fallback.jn_array(40, x)
            ref = scipy.special.jv(orders, x)
            assert np.max(np.abs(vals - ref)) < 1e-13

    def test_zero_argument(self):
        row = _fallback.jn_array(5, 0.0)
        assert row[0] == 1.0 and not row[1:].any()

    def test_parity(self, rng):
        for x in rng.uniform(0.1, 50, 10):
            plus = _fallback.jn_array(21, float(x))
            minus = _fallback.jn_array(21, -float(x))
            signs = (-1.0) ** np.arange(22)
            assert np.allclose(plus * signs, minus, rtol=0, atol=0)

    def test_input_validation(self):
        with pytest.raises(ValueError):
            _fallback.jn_array(-1, 1.0)
        with pytest.raises(ValueError):
            _fallback.jn_array(3, np.inf)
        with pytest.raises(ValueError):
            _fallback.jn_array_batch(3, [1.0, np.nan])


@needs_native
class TestNative:
    def test_identical_to_fallback(self, rng):
        xs = np.concatenate([rng.uniform(-200, 200, 40), [0.0, 2.0, -2.0]])
        a = _native.jn_array_batch(320, xs)
        b = _fallback.jn_array_batch(320, xs)
        assert np.array_equal(a, b)

    def test_scalar_identical(self, rng):
        for x in rng.uniform(-100, 100, 25):
            assert np.array_equal(
                _native.jn_array(90, float(x)), _fallback.jn_array(90, float(x))
            )

    def test_input_validation(self):
        with pytest.raises(ValueError):
            _native.jn_array(-1, 1.0)
        with pytest.raises(ValueError):
            _native.jn_array(3, np.nan)
        with pytest.raises(ValueError):
            _native.jn_array_batch(3, [np.inf])


def test_backend_reported():
    assert backend() in ("cython", "python")


def test_env_var_forces_fallback():
    env = dict(os.environ, DRIVENLATTICE_KERNELS="python")
    out = subprocess.run(
        [sys.executable, "-c", "import drivenlattice.kernels as k; print(k.backend())"],
        capture_output=True, text=True, env=env, check=True,
    )
    assert out.stdout.strip() == "python"
