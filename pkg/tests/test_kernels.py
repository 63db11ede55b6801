"""Parity tests between the compiled kernel lane and the numpy fallback."""

import subprocess
import sys

import numpy as np
import pytest

from chaosboot import doubling_map, generate_trajectory, kernels
from chaosboot import _kernels_py
from chaosboot.spline import SplineKind, build_map_estimate, kernel_arrays

try:
    from chaosboot import _kernels
except ImportError:
    _kernels = None

needs_compiled = pytest.mark.skipif(_kernels is None, reason="extension not built")


def _fitted_arrays(seed=0, n=80):
    spec = doubling_map()
    rng = np.random.default_rng(seed)
    traj = generate_trajectory(spec, 0.3, n, rng)
    est = build_map_estimate(traj, spec.discontinuities, SplineKind.NATURAL_CUBIC)
    return kernel_arrays(est)


def test_backend_reported():
    assert kernels.BACKEND in ("compiled", "python")
    if _kernels is not None:
        assert kernels.BACKEND == "compiled"


@needs_compiled
def test_eval_spline_exact_parity():
    arrays = _fitted_arrays()
    x = np.linspace(0.0, 1.0, 4001)
    a = _kernels.eval_spline(x, *arrays)
    b = _kernels_py.eval_spline(x, *arrays)
    np.testing.assert_array_equal(a, b)


@needs_compiled
@pytest.mark.parametrize("power", [1, 2, 4])
def test_pivot_sums_exact_parity(power):
    arrays = _fitted_arrays(seed=1)
    rng = np.random.default_rng(2)
    x0 = rng.uniform(0.0, 1.0, 500)
    a = _kernels.pivot_sums(x0, 50, power, *arrays)
    b = _kernels_py.pivot_sums(x0, 50, power, *arrays)
    np.testing.assert_array_equal(a, b)


@needs_compiled
def test_multi_segment_parity():
    spec = doubling_map()
    rng = np.random.default_rng(3)
    traj = generate_trajectory(spec, 0.3, 120, rng)
    est = build_map_estimate(traj, (0.5,), SplineKind.LINEAR)
    arrays = kernel_arrays(est)
    x = np.linspace(0.0, 1.0, 1001)
    np.testing.assert_array_equal(
        _kernels.eval_spline(x, *arrays), _kernels_py.eval_spline(x, *arrays)
    )


def test_env_variable_selects_python_lane():
    code = (
        "from chaosboot import kernels, _kernels_py\n"
        "assert kernels.BACKEND == 'python'\n"
        "assert kernels.eval_spline is _kernels_py.eval_spline\n"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "CHAOSBOOT_PURE": "1"},
        cwd="/",
    )
    assert proc.returncode == 0, proc.stderr
