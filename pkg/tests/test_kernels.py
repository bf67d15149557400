import os
import subprocess
import sys

import numpy as np
import pytest

from stegosink import _fallback, kernels


def test_backend_name():
    assert kernels.BACKEND in ("cython", "numpy")
    assert "numpy" in kernels.backends()


@pytest.fixture
def impls():
    found = kernels.backends()
    if "cython" not in found:
        pytest.skip("compiled kernels not built")
    return found["numpy"], found["cython"]


@pytest.mark.parametrize("nbits", [0, 1, 7, 8, 48, 333, 1000])
def test_embed_parity(impls, rng, nbits):
    samples = rng.integers(0, 256, 3 * 1000, dtype=np.uint8)
    data = rng.integers(0, 256, 125, dtype=np.uint8).tobytes()
    out = []
    for impl in impls:
        buf = samples.copy()
        impl.embed_frame(buf, data, nbits)
        out.append(buf)
    assert np.array_equal(out[0], out[1])


def test_extract_parity(impls, rng):
    samples = rng.integers(0, 256, 3 * 4096, dtype=np.uint8)
    for nbytes in (0, 1, 6, 512):
        assert impls[0].extract_frame(samples, nbytes) == impls[1].extract_frame(samples, nbytes)


def test_reductions_parity(impls, rng):
    a = rng.integers(0, 256, 3 * 5000, dtype=np.uint8)
    b = rng.integers(0, 256, 3 * 5000, dtype=np.uint8)
    py, cy = impls
    assert py.sum_sq_diff(a, b) == cy.sum_sq_diff(a, b)
    assert py.dot(a, b) == cy.dot(a, b)
    assert np.array_equal(py.channel_moments(a, b), cy.channel_moments(a, b))


def test_reductions_exact_values():
    a = np.array([0, 255, 3, 10, 20, 30], dtype=np.uint8)
    b = np.array([1, 250, 3, 12, 20, 29], dtype=np.uint8)
    for impl in kernels.backends().values():
        assert impl.sum_sq_diff(a, b) == 1 + 25 + 0 + 4 + 0 + 1
        assert impl.dot(a, b) == 0 + 255 * 250 + 9 + 120 + 400 + 870
        m = impl.channel_moments(a, b)
        assert m[0].tolist() == [10, 13, 100, 145, 120]


@pytest.mark.parametrize("name", ["numpy", "cython"])
def test_bounds_are_checked(name):
    impl = kernels.backends().get(name)
    if impl is None:
        pytest.skip("compiled kernels not built")
    samples = np.zeros(9, dtype=np.uint8)
    with pytest.raises(ValueError):
        impl.embed_frame(samples, b"\xff", 4)
    with pytest.raises(ValueError):
        impl.extract_frame(samples, 1)
    with pytest.raises(ValueError):
        impl.embed_frame(np.zeros(300, dtype=np.uint8), b"\xff", 9)


def test_fallback_positions_follow_channel_cycle():
    samples = np.zeros(3 * 6, dtype=np.uint8)
    _fallback.embed_frame(samples, b"\xfc", 6)
    assert np.flatnonzero(samples).tolist() == [0, 4, 8, 9, 13, 17]


def test_env_var_forces_fallback():
    env = dict(os.environ, STEGOSINK_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import stegosink.kernels as k; print(k.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "numpy"
