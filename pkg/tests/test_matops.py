import json

import numpy as np
import pytest

from jensenop import matops
from jensenop.errors import SpectrumError, ValidationError
from jensenop.scalar_fn import Interval, builtin, make_model


def _random_symmetric(rng, n):
    G = rng.standard_normal((n, n))
    return (G + G.T) / 2


def test_as_symmetric_rejects_bad_input():
    with pytest.raises(ValidationError):
        matops.as_symmetric([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(ValidationError):
        matops.as_symmetric([[1.0, 2.0, 3.0]])
    with pytest.raises(ValidationError):
        matops.as_symmetric([[np.nan]])


def test_as_state_requires_unit_norm():
    with pytest.raises(ValidationError):
        matops.as_state([1.0, 1.0])
    assert matops.as_state([0.6, 0.8]).shape == (2,)


@pytest.mark.parametrize("n", [1, 2, 5, 20, 50])
def test_eigh_residuals(n):
    rng = np.random.default_rng(n)
    for _ in range(20):
        A = _random_symmetric(rng, n)
        w, Q = matops.eigh(A)
        scale = 1 + np.linalg.norm(A)
        assert np.linalg.norm(A - (Q * w) @ Q.T) <= 1e-10 * scale
        assert np.linalg.norm(Q.T @ Q - np.eye(n)) <= 1e-10 * scale
        assert np.all(np.diff(w) >= 0)


def test_apply_function_diagonal_oracle():
    A = np.diag([0.5, 1.0, 2.0])
    E = matops.apply_function(builtin("exp", Interval(0.0, 3.0)), A)
    assert np.allclose(E, np.diag(np.exp([0.5, 1.0, 2.0])), rtol=1e-14, atol=0)


def test_apply_function_square_matches_matrix_product():
    rng = np.random.default_rng(3)
    A = _random_symmetric(rng, 6)
    sq = matops.apply_function(make_model("x^2", Interval(-10.0, 10.0)), A)
    assert np.allclose(sq, A @ A, atol=1e-12)


def test_apply_function_spectrum_gate():
    with pytest.raises(SpectrumError) as info:
        matops.apply_function(builtin("neglog"), np.diag([1.0, 3.0]))
    assert list(info.value.offending) == [3.0]


def test_apply_function_clips_within_slack():
    A = np.diag([1.0 - 1e-12, 2.0])
    out = matops.apply_function(builtin("neglog"), A)
    assert out[0, 0] == 0.0


def test_spectrum_interval_and_lambda_min():
    iv = matops.spectrum_interval(np.diag([3.0, -1.0]))
    assert (iv.lo, iv.hi) == (-1.0, 3.0)
    deg = matops.spectrum_interval(np.eye(3) * 2.0)
    assert deg.lo < 2.0 < deg.hi and deg.width < 1e-8
    assert matops.lambda_min(np.diag([4.0, 2.0])) == 2.0


def test_direct_sum_and_quadratic_form():
    D = matops.direct_sum([np.array([[1.0]]), np.array([[2.0, 1.0], [1.0, 3.0]])])
    assert D.shape == (3, 3)
    assert D[1:, 1:].tolist() == [[2.0, 1.0], [1.0, 3.0]]
    assert matops.quadratic_form(D, [0.0, 1.0, 1.0]) == 7.0
    with pytest.raises(ValidationError):
        matops.quadratic_form(D, [1.0, 0.0])


def test_load_round_trip(tmp_path):
    (tmp_path / "A.json").write_text(json.dumps([[1, 2], [2, 5]]))
    (tmp_path / "x.json").write_text(json.dumps([0.6, 0.8]))
    assert matops.load_matrix(tmp_path / "A.json").tolist() == [[1.0, 2.0], [2.0, 5.0]]
    assert matops.load_vector(tmp_path / "x.json").tolist() == [0.6, 0.8]
