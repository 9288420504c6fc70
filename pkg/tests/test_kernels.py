import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hybrid_coherence import _pykernels, kernels

try:
    from hybrid_coherence import _kernels
except ImportError:  # pragma: no cover - extension not built
    _kernels = None

needs_extension = pytest.mark.skipif(_kernels is None, reason="compiled extension not built")


def test_backend_is_reported():
    assert kernels.BACKEND in ("cython", "numpy")
    if _kernels is not None:
        assert kernels.BACKEND == "cython"


def _star_case(n, seed):
    rng = np.random.default_rng(seed)
    c = rng.uniform(0, 0.05, n)
    det = rng.uniform(-3, 3, n)
    return c, det


@needs_extension
@pytest.mark.parametrize("n,steps,every", [(1, 10, 1), (37, 600, 7), (500, 1000, 100)])
def test_star_kernels_agree(n, steps, every):
    c, det = _star_case(n, n)
    a_py, al_py = _pykernels.star_rk4(c, det, 0.6 - 0.2j, 0.01, steps, every)
    a_cy, al_cy = _kernels.star_rk4(c, det, 0.6 - 0.2j, 0.01, steps, every)
    assert a_py.shape == a_cy.shape and al_py.shape == al_cy.shape
    assert np.max(np.abs(a_py - a_cy)) < 1e-13
    assert np.max(np.abs(al_py - al_cy)) < 1e-13


@pytest.mark.parametrize("impl", [_pykernels, _kernels], ids=["numpy", "cython"])
def test_star_kernel_is_fourth_order(impl):
    if impl is None:
        pytest.skip("compiled extension not built")
    c, det = _star_case(20, 3)
    t_final = 20.0
    errs = []
    ref = impl.star_rk4(c, det, 1.0 + 0j, t_final / 8000, 8000, 8000)[0][-1]
    for steps in (250, 500):
        errs.append(abs(impl.star_rk4(c, det, 1.0 + 0j, t_final / steps, steps, steps)[0][-1] - ref))
    assert errs[0] / errs[1] == pytest.approx(16, rel=0.25)


@needs_extension
@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), m=st.integers(1, 40), k=st.integers(1, 30))
def test_telegraph_kernels_agree(seed, m, k):
    rng = np.random.default_rng(seed)
    times = np.cumsum(rng.exponential(0.7, (m, k)), axis=1)
    # pad the tail of some rows as the sampler does
    cut = rng.integers(0, k + 1, m)
    times[np.arange(k)[None, :] >= cut[:, None]] = np.inf
    grid = np.sort(rng.uniform(0, times[np.isfinite(times)].max(initial=1.0), 17))
    i_py, n_py = _pykernels.telegraph_on_grid(times, grid)
    i_cy, n_cy = _kernels.telegraph_on_grid(times, grid)
    assert np.array_equal(n_py, n_cy)
    assert np.allclose(i_py, i_cy, rtol=0, atol=1e-12)


def test_telegraph_dwell_integral_by_hand():
    # +1 on [0, 1), -1 on [1, 3), +1 afterwards
    times = np.array([[1.0, 3.0, np.inf]])
    grid = np.array([0.0, 0.5, 1.0, 2.0, 3.0, 4.5])
    for impl in filter(None, (_pykernels, _kernels)):
        integral, count = impl.telegraph_on_grid(times, grid)
        assert np.allclose(integral[0], [0.0, 0.5, 1.0, 0.0, -1.0, 0.5])
        assert count[0].tolist() == [0, 0, 1, 1, 2, 2]
