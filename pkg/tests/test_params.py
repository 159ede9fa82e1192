import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import continuous_params
from selfsim.errors import IndexOutOfRange, InvalidParams, ParseError, UnsupportedOrientation
from selfsim.params import (
    RegimeKind,
    SelfSimilarParams,
    affine_map,
    check_continuity,
    check_contraction,
    classify_regime,
    derive_offsets,
    from_plain,
    load_params,
    make_params,
    params_from_dict,
    partition_points,
    to_plain,
)
from selfsim.presets import make


def junction_residuals(p):
    """Oracle: mismatch of neighbouring graph pieces at every cell boundary."""
    res = [p.d[0] * p.f0 + p.beta_hat[0] - p.f0]
    for k in range(1, p.n):
        left = p.d[k - 1] * p.f1 + p.c_hat[k - 1] + p.beta_hat[k - 1]
        right = p.d[k] * p.f0 + p.beta_hat[k]
        res.append(left - right)
    res.append(p.d[-1] * p.f1 + p.c_hat[-1] + p.beta_hat[-1] - p.f1)
    return res


def test_partition_points_cantor():
    assert partition_points(make("cantor")) == pytest.approx([0, 1 / 3, 2 / 3, 1], abs=1e-12)


def test_partition_points_salem_general():
    p = make("salem_general(3,[1/5,1/2,3/10],[3/10,1/5,1/2])")
    assert partition_points(p) == pytest.approx([0, 0.2, 0.7, 1.0], abs=1e-12)


def test_n_must_be_at_least_two():
    with pytest.raises(InvalidParams):
        SelfSimilarParams(1, (1.0,), (False,), (0.5,), (0.0,), (0.0,))


@pytest.mark.parametrize(
    "field, value",
    [("a", (0.5, 0.6)), ("a", (1.2, -0.2)), ("d", (0.5,)), ("c_hat", (0.0, 0.0, 0.0))],
)
def test_structural_errors(field, value):
    kwargs = dict(n=2, a=(0.5, 0.5), e=(False, False), d=(0.5, 0.5), c_hat=(0.0, 0.0), beta_hat=(0.0, 0.5))
    kwargs[field] = value
    with pytest.raises(InvalidParams):
        SelfSimilarParams(**kwargs)


def test_affine_map_examples():
    c = make("cantor")
    assert affine_map(c, 3, 1.0) == 1.0
    assert affine_map(c, 1, 1.0) == pytest.approx(1 / 3, abs=1e-15)
    flipped = make_params(2, [0.5, 0.5], [0.5, 0.5], e=[False, True], beta_hat=[0, 0])
    assert affine_map(flipped, 2, 0.0) == 1.0
    assert affine_map(flipped, 2, 1.0) == 0.5
    with pytest.raises(IndexOutOfRange):
        affine_map(c, 4, 0.5)
    with pytest.raises(IndexOutOfRange):
        affine_map(c, 0, 0.5)


@given(continuous_params(), st.floats(0, 1))
def test_affine_map_lands_in_its_cell(p, x):
    for k in range(1, p.n + 1):
        y = affine_map(p, k, x)
        assert p.alpha[k - 1] - 1e-15 <= y <= p.alpha[k] + 1e-15


def test_to_plain_zero_slope():
    p = make_params(2, [0.5, 0.5], [0.3, 0.3], c_hat=[0, 0], beta_hat=[0.25, 0.75], f0=0, f1=1)
    plain = to_plain(p)
    assert plain.c == (0.0, 0.0)
    assert plain.beta == (0.25, 0.75)


def test_to_plain_takagi():
    p = make("takagi(2,1/2)")
    plain = to_plain(p)
    assert plain.c == pytest.approx([1.0, -1.0], abs=1e-15)
    # beta_2 = beta_hat_2 - c_hat_2 alpha_2 / a_2 = 1/2 + 1/2
    assert plain.beta[1] == pytest.approx(p.beta_hat[1] + 0.5, abs=1e-15)
    assert plain.beta == pytest.approx([0.0, 1.0], abs=1e-15)


@given(continuous_params(), st.lists(st.booleans(), min_size=4, max_size=4))
def test_plain_round_trip(p, flags):
    p = p.replace(e=tuple(flags[: p.n]))
    plain = to_plain(p)
    q = from_plain(p.n, p.a, p.e, p.d, plain.c, plain.beta, p.f0, p.f1)
    assert q.c_hat == pytest.approx(p.c_hat, abs=1e-12)
    assert q.beta_hat == pytest.approx(p.beta_hat, abs=1e-12)


@given(continuous_params(), st.floats(0, 1))
def test_plain_and_hat_forms_describe_the_same_pieces(p, t):
    # c_k S_k(t) + beta_k == c_hat_k t + beta_hat_k
    plain = to_plain(p)
    for k in range(p.n):
        x = affine_map(p, k + 1, t)
        assert plain.c[k] * x + plain.beta[k] == pytest.approx(p.c_hat[k] * t + p.beta_hat[k], abs=1e-12)


@pytest.mark.parametrize(
    "d, ok, md",
    [((0.5, 0.0, 0.5), True, 0.5), ((1.0, 0.0, 0.5), False, 1.0), ((-0.99, 0.0, 0.2), True, 0.99)],
)
def test_check_contraction(d, ok, md):
    p = SelfSimilarParams(3, (1 / 3,) * 3, (False,) * 3, d, (0.0,) * 3, (0.0,) * 3)
    assert check_contraction(p) == (ok, md)


def test_check_contraction_kiesswetter():
    assert check_contraction(make("kiesswetter")) == (True, 0.5)


def test_continuity_cantor_and_takagi():
    for p in (make("cantor"), make("takagi(2,0.3)"), make("takagi(6,0.9)")):
        assert check_continuity(p).passed
        assert max(abs(r) for r in junction_residuals(p)) < 1e-12


def test_continuity_takagi_closing_condition_is_zero_slope_sum():
    p = make("takagi(4,0.6)")
    assert math.fsum(p.c_hat) == pytest.approx(0.0, abs=1e-15)


def test_continuity_detects_perturbed_offset():
    p = make("cantor")
    bad = p.replace(beta_hat=(0.0, 0.5 + 1e-3, 0.5))
    verdict = check_continuity(bad, tol=1e-9)
    assert not verdict.passed
    assert [(v.equation, v.k) for v in verdict.violations] == [("7", 2)]
    assert verdict.violations[0].residual == pytest.approx(1e-3, abs=1e-15)


def test_continuity_rejects_reflections():
    p = make("cantor").replace(e=(False, True, False))
    with pytest.raises(UnsupportedOrientation):
        check_continuity(p)


def test_continuity_reports_contraction_failure():
    p = SelfSimilarParams(2, (0.5, 0.5), (False, False), (1.0, 0.0), (0.0, 0.0), (0.0, 1.0))
    verdict = check_continuity(p)
    assert any(v.equation == "5" for v in verdict.violations)


@given(continuous_params())
def test_random_continuous_params_pass_both_checks(p):
    assert check_continuity(p).passed
    assert max(abs(r) for r in junction_residuals(p)) < 1e-12


@given(continuous_params(), st.integers(0, 3), st.floats(1e-6, 1e-2), st.booleans())
def test_injected_offset_error_is_reported_where_injected(p, k, delta, negative):
    k = k % p.n
    delta = -delta if negative else delta
    beta = list(p.beta_hat)
    beta[k] += delta
    verdict = check_continuity(p.replace(beta_hat=tuple(beta)))
    expected = ("6", 1) if k == 0 else ("7", k + 1)
    found = {(v.equation, v.k): v.residual for v in verdict.violations}
    assert found[expected] == pytest.approx(delta, abs=1e-12)
    # the oracle sees the same defect
    assert max(abs(r) for r in junction_residuals(p.replace(beta_hat=tuple(beta)))) > 0.5 * abs(delta)


def test_derive_offsets_examples():
    assert derive_offsets(4, [0.25] * 4, [-0.5, 0.5, 0.5, 0.5], [0] * 4, 0, 1) == pytest.approx(
        [0, -0.5, 0, 0.5], abs=1e-15
    )
    assert derive_offsets(3, [1 / 3] * 3, [0.2, -0.7, 0.4], [0] * 3, 0, 0) == (0.0, 0.0, 0.0)
    assert derive_offsets(2, [0.3, 0.7], [0.7, 0.3], [0, 0], 0, 1) == pytest.approx([0, 0.7], abs=1e-15)


def test_derive_offsets_requires_contraction():
    with pytest.raises(InvalidParams):
        derive_offsets(2, [0.5, 0.5], [1.0, 0.0], [0, 0], 0, 1)


def test_classify_examples():
    cantor = classify_regime(make("cantor"))
    assert cantor.kind is RegimeKind.SUPER_CRITICAL and cantor.i0 == 1
    assert abs(0.5) / (1 / 3) == pytest.approx(1.5)
    assert classify_regime(make("takagi(4,1/4)")).kind is RegimeKind.CRITICAL
    assert classify_regime(make("takagi(10,1/10)")).kind is RegimeKind.CRITICAL
    assert classify_regime(make("takagi(2,1/4)")).kind is RegimeKind.LIPSCHITZ


def test_zero_d_never_forces_super_critical():
    p = make_params(3, [1 / 3] * 3, [0.2, 0.0, 0.2], c_hat=[0, 0, 0], f0=0, f1=0)
    assert classify_regime(p).kind is RegimeKind.LIPSCHITZ


def test_mixed_boundary_case_is_critical():
    p = make_params(2, [0.5, 0.5], [0.5, 0.25], c_hat=[0.25, -0.25], f0=0, f1=0)
    assert classify_regime(p).kind is RegimeKind.CRITICAL


@given(continuous_params(), st.lists(st.booleans(), min_size=4, max_size=4))
def test_regime_ignores_signs_of_d(p, flips):
    d = tuple(-v if f else v for v, f in zip(p.d, flips))
    assert classify_regime(p.replace(d=d)) == classify_regime(p)


@given(continuous_params())
def test_partition_points_strictly_increasing(p):
    pts = partition_points(p)
    assert pts[0] == 0.0 and abs(pts[-1] - 1.0) <= 1e-12
    assert all(b > a for a, b in zip(pts, pts[1:]))


def test_params_file_plain_form(tmp_path):
    doc = {"n": 3, "a": ["1/3", "1/3", "1/3"], "d": [0.5, 0, 0.5], "c": [0, 0, 0], "beta": [0, 0.5, 0.5], "f0": 0, "f1": 1}
    path = tmp_path / "cantor.json"
    path.write_text(json.dumps(doc))
    p = load_params(path)
    assert p == make("cantor").replace(name="")
    assert check_continuity(p).passed


def test_params_file_derived_offsets():
    doc = {"n": 2, "a": [0.5, 0.5], "d": [0.25, 0.25], "c_hat": [0.5, -0.5], "f0": 0, "f1": 0, "derive_offsets": True}
    p = params_from_dict(doc)
    assert p.beta_hat == pytest.approx([0.0, 0.5])


def test_params_file_plain_slopes_converted():
    # T_{2,1/4} in operator form: c = [1, -1], beta = [0, 1]
    doc = {"n": 2, "a": [0.5, 0.5], "d": [0.25, 0.25], "c": [1, -1], "beta": [0, 1], "f0": 0, "f1": 0}
    p = params_from_dict(doc)
    assert p.c_hat == pytest.approx([0.5, -0.5])
    assert p.beta_hat == pytest.approx([0.0, 0.5])


@pytest.mark.parametrize(
    "doc",
    [
        {"n": 2, "a": [0.5, 0.5]},
        {"n": 2, "a": [0.5, 0.5], "d": [0, 0], "c": [0, 0], "c_hat": [0, 0], "beta_hat": [0, 0]},
        {"n": 2, "a": [0.5, 0.5], "d": [0, 0], "c_hat": [0, 0]},
        {"n": 2, "a": [0.5, 0.5], "d": [0, 0], "beta_hat": [0, 0], "colour": "red"},
    ],
)
def test_params_file_schema_errors(doc):
    with pytest.raises(ParseError):
        params_from_dict(doc)


def test_params_file_json_error_has_line_context(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "n": 2,\n  "a": [0.5, 0.5\n}\n')
    with pytest.raises(ParseError) as info:
        load_params(path)
    assert "broken.json:4" in str(info.value)
