import math

import pytest
from hypothesis import strategies as st

from selfsim.params import SelfSimilarParams, derive_offsets
from selfsim.presets import DEFAULT_PRESETS, make


@pytest.fixture(params=DEFAULT_PRESETS)
def preset_params(request):
    return make(request.param)


@st.composite
def lengths(draw, n):
    w = draw(st.lists(st.floats(0.1, 1.0), min_size=n, max_size=n))
    total = math.fsum(w)
    a = [x / total for x in w]
    return a


@st.composite
def continuous_params(draw, max_n=4, max_d=0.9):
    """Random parameter sets satisfying contraction and continuity (e = 0)."""
    n = draw(st.integers(2, max_n))
    a = draw(lengths(n))
    d = draw(st.lists(st.floats(-max_d, max_d), min_size=n, max_size=n))
    f0 = draw(st.floats(-2, 2))
    f1 = draw(st.floats(-2, 2))
    c_hat = draw(st.lists(st.floats(-1, 1), min_size=n - 1, max_size=n - 1))
    # closing condition: sum c_hat = (f1 - f0)(1 - sum d)
    c_hat.append((f1 - f0) * (1.0 - math.fsum(d)) - math.fsum(c_hat))
    beta_hat = derive_offsets(n, a, d, c_hat, f0, f1)
    return SelfSimilarParams(n, tuple(a), (False,) * n, tuple(d), tuple(c_hat), beta_hat, f0, f1)


@st.composite
def salem_like(draw, max_n=4):
    """Increasing singular-type sets: c = 0, f0 = 0, f1 = 1, d_i > 0, sum d = 1."""
    n = draw(st.integers(2, max_n))
    a = draw(lengths(n))
    w = draw(st.lists(st.floats(0.1, 1.0), min_size=n, max_size=n))
    total = math.fsum(w)
    d = [x / total for x in w]
    d[-1] = 1.0 - math.fsum(d[:-1])
    beta_hat = derive_offsets(n, a, d, [0.0] * n, 0.0, 1.0)
    return SelfSimilarParams(n, tuple(a), (False,) * n, tuple(d), (0.0,) * n, beta_hat, 0.0, 1.0)


ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
