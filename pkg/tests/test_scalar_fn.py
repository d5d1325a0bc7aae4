import math

import pytest

from jensenop.errors import DomainError, ValidationError
from jensenop.scalar_fn import (REGISTRY, Interval, builtin, concavifier, convexifier,
                                golden_section_minimize, grid, lipschitz_convexifier,
                                make_model, resolve_model, user_convexifier)

# frozen oracles: closed-form min f'' / max f'' on each registry domain
CONVEXIFIER_ORACLE = {"sin": -1.0, "exp": 1.0, "neglog": 0.25, "pow4": 0.0}
CONCAVIFIER_ORACLE = {"sin": 1.0, "exp": math.e, "neglog": 1.0, "pow4": 12.0}


def test_interval_validation():
    with pytest.raises(ValidationError):
        Interval(1.0, 1.0)
    with pytest.raises(ValidationError):
        Interval(0.0, math.inf)
    iv = Interval(-1.0, 3.0)
    assert iv.width == 4.0
    assert iv.contains(3.0) and not iv.contains(3.1)
    assert iv.clip(5.0) == 3.0


def test_grid_endpoints():
    g = grid(Interval(0.0, 1.0), 11)
    assert g[0] == 0.0 and g[-1] == 1.0 and len(g) == 11


def test_registry_contents():
    assert set(REGISTRY) == {"sin", "exp", "neglog", "pow4"}
    assert builtin("sin").domain.hi == pytest.approx(2 * math.pi)
    assert builtin("neglog").domain == Interval(1.0, 2.0)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_convexifier_oracle(name):
    c = convexifier(builtin(name))
    assert c.alpha <= CONVEXIFIER_ORACLE[name] + 1e-12
    assert c.alpha == pytest.approx(CONVEXIFIER_ORACLE[name], abs=1e-9)


@pytest.mark.parametrize("name", sorted(REGISTRY))
def test_concavifier_oracle(name):
    beta = concavifier(builtin(name))
    assert beta >= CONCAVIFIER_ORACLE[name] - 1e-12
    assert beta == pytest.approx(CONCAVIFIER_ORACLE[name], rel=1e-9, abs=1e-9)


def test_user_function_model():
    m = make_model("x^2 * exp(x)", Interval(-1.0, 1.0))
    assert m(1.0) == pytest.approx(math.e)
    assert m.d1(1.0) == pytest.approx(3 * math.e)
    assert m.d2(0.0) == pytest.approx(2.0)


def test_make_model_rejects_domain_violation():
    with pytest.raises((DomainError, ValidationError)):
        make_model("log(x)", Interval(-1.0, 1.0))


def test_resolve_model_needs_interval_for_text():
    with pytest.raises(ValidationError):
        resolve_model("x^2")
    assert resolve_model("sin", Interval(0.0, 1.0)).domain == Interval(0.0, 1.0)


def test_lipschitz_and_user_convexifier():
    assert lipschitz_convexifier(2.5).alpha == -2.5
    assert user_convexifier(0.3).alpha == 0.3
    with pytest.raises(ValidationError):
        lipschitz_convexifier(-1.0)


def test_golden_section():
    x = golden_section_minimize(lambda t: (t - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-9)
    # an offset flattens f to machine precision within ~sqrt(eps) of the minimiser
    x = golden_section_minimize(lambda t: (t - 0.3) ** 2 + 1.0, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-7)
