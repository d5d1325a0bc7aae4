import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from jensenop import young
from jensenop.errors import ValidationError
from jensenop.young import MeanContext

CTX = MeanContext(2.0, 1.0, 0.1)

# frozen at (a, b, v) = (2, 1, 0.1); K(1/2) = 9/8
FROZEN = {
    "classical": (1.011847940917809, 1.1118271377609912),
    "refined": (1.0169198498282013, 1.0629039439332106),
    "reverse": (0.9286760884104125, 1.0322886252276622),
    "dragomir": (1.0113135192236113, 1.046027859908717),
    "wzl": (0.9472039882699846, 0.9641829665111212),
}
FUNCS = {"classical": young.young_classical, "refined": young.young_refined,
         "reverse": young.young_reverse, "dragomir": young.dragomir, "wzl": young.wzl}


def test_kantorovich():
    assert young.kantorovich(1.0) == 1.0
    assert young.kantorovich(2.0) == 1.125
    assert young.kantorovich(0.5) == young.kantorovich(2.0)
    with pytest.raises(ValidationError):
        young.kantorovich(0.0)


def test_context_validation():
    with pytest.raises(ValidationError):
        MeanContext(0.0, 1.0, 0.5)
    with pytest.raises(ValidationError):
        MeanContext(1.0, 1.0, 1.5)


def test_means_closed_form():
    mu = young.means(CTX)
    assert mu.nabla == pytest.approx(1.9, abs=1e-15)
    assert mu.sharp == pytest.approx(2 ** 0.9, abs=1e-15)
    assert mu.heinz == pytest.approx((2 ** 0.9 + 2 ** 0.1) / 2, abs=1e-15)


@pytest.mark.parametrize("name", sorted(FROZEN))
def test_frozen_bounds(name):
    lo, hi = FUNCS[name](CTX)
    assert lo == pytest.approx(FROZEN[name][0], abs=1e-14)
    assert hi == pytest.approx(FROZEN[name][1], abs=1e-14)


def test_closed_forms_by_hand():
    K = 1.125
    assert young.young_classical(CTX).upper == pytest.approx(K ** 0.9, rel=1e-15)
    assert young.young_refined(CTX).upper == pytest.approx(K ** 0.9 * math.exp(-0.045), rel=1e-15)
    assert young.young_refined(CTX).lower == pytest.approx(K ** 0.1 * math.exp(0.02 / 4), rel=1e-15)
    assert young.young_reverse(CTX).upper == pytest.approx(K ** 0.1 * math.exp(0.02), rel=1e-15)
    assert young.dragomir(CTX).upper == pytest.approx(math.exp(0.045), rel=1e-15)


def test_wzl_normalization_swaps():
    assert young.wzl_normalize(MeanContext(2.0, 1.0, 0.3)) == (0.5, 0.3)
    t, v = young.wzl_normalize(MeanContext(1.0, 2.0, 0.3))
    assert (t, v) == (0.5, pytest.approx(0.7))
    assert young.wzl(MeanContext(1.0, 2.0, 0.3)) == young.wzl(MeanContext(2.0, 1.0, 0.7))


def test_endpoints_collapse():
    for v in (0.0, 1.0):
        rep = young.young_report(MeanContext(3.0, 0.5, v))
        assert rep.ratio == pytest.approx(1.0, abs=1e-15)
        assert rep.holds


def test_reverse_overflow_is_infinite_not_an_error():
    ctx = MeanContext(1e-2, 1e2, 0.3)
    assert young.young_reverse(ctx).upper == math.inf
    assert young.young_report(ctx).holds


def test_report_has_ten_checks():
    rep = young.young_report(CTX)
    assert [(c.name, c.side) for c in rep.bounds] == [
        (n, s) for n in young.TABLE_BOUNDS for s in ("lower", "upper")]
    assert rep.holds


def test_bound_table_row_shape():
    row = young.bound_table_row(CTX)
    bound_cols = [k for k in row if k.endswith(("_lower", "_upper"))]
    assert len(bound_cols) == 10
    assert len([k for k in row if k.endswith("_margin")]) == 10


def test_published_comparisons():
    values = young.compare_bound_families()
    assert set(values) == set(young.PUBLISHED_VALUES)
    for name, published in young.PUBLISHED_VALUES.items():
        assert abs(values[name] - published) <= 1e-6, name


def test_heinz_chain_oracle():
    c = young.heinz_chain(CTX)
    assert c.g == pytest.approx(math.sqrt(2), abs=1e-15)
    assert c.arith == 1.5
    assert c.refined_heinz == pytest.approx(1.430483481691498, abs=1e-14)
    assert c.refined_arith == pytest.approx(1.5 - math.log(2) ** 2 / 8, abs=1e-15)
    assert c.g <= c.refined_heinz <= c.refined_arith <= c.arith
    assert c.dragomir_gap <= c.arith - c.g


def test_kantorovich_dominates_exp():
    K, e, diff = young.kantorovich_vs_exp(1.0, 2.0)
    assert K == 1.125 and e == pytest.approx(math.exp(1 / 16))
    assert diff > 0


_pos = st.floats(1e-3, 1e3)


@settings(max_examples=300, deadline=None)
@given(_pos, _pos, st.floats(0.0, 1.0))
def test_sandwiches_hold(a, b, v):
    ctx = MeanContext(a, b, v)
    rep = young.young_report(ctx)
    assert rep.holds, [c for c in rep.bounds if not c.holds]
    _, checks = young.heinz_report(ctx)
    assert all(c.holds for c in checks)


@settings(max_examples=300, deadline=None)
@given(_pos, _pos, st.floats(0.0, 1.0))
def test_refined_nested_in_classical(a, b, v):
    ctx = MeanContext(a, b, v)
    cl, rf, dr = young.young_classical(ctx), young.young_refined(ctx), young.dragomir(ctx)
    tol = 1e-12
    assert cl.lower <= rf.lower * (1 + tol)
    assert rf.upper <= cl.upper * (1 + tol)
    assert dr.lower <= rf.lower * (1 + tol)
