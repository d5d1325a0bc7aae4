import numpy as np
import pytest

from jensenop import harness
from jensenop.errors import ValidationError
from jensenop.harness import RandomSpec, derive_seed, run_suite
from jensenop.scalar_fn import Interval


def test_seed_reference_values():
    assert derive_seed(0, 0, 0) == 0x238275BC38FCBE91
    assert derive_seed(1, 0, 0) == 0xB18A02F46D8D86C3
    assert derive_seed(42, 7, 3) == 0xF55E4254D4655539


def test_splitmix64_reference():
    # first output of the reference SplitMix64 generator seeded with 0
    assert harness.splitmix64(0) == 0xE220A8397B1DCDAF


def test_random_spec_validation():
    with pytest.raises(ValidationError):
        RandomSpec(trials=0)
    with pytest.raises(ValidationError):
        RandomSpec(dim_range=(3, 2))


def test_random_symmetric_spectrum_and_determinism():
    spec = RandomSpec(seed=9, dim_range=(3, 12))
    iv = Interval(-2.0, 5.0)
    for trial in range(20):
        A = harness.random_symmetric(spec, trial, interval=iv)
        assert 3 <= A.shape[0] <= 12
        w = np.linalg.eigvalsh(A)
        assert w[0] >= -2.0 - 1e-12 and w[-1] <= 5.0 + 1e-12
        assert np.array_equal(A, harness.random_symmetric(spec, trial, interval=iv))


def test_random_orthogonal():
    Q = harness.random_orthogonal(np.random.default_rng(0), 30)
    assert np.linalg.norm(Q.T @ Q - np.eye(30)) <= 1e-12


def test_vectors_and_weights():
    spec = RandomSpec(seed=4)
    for trial in range(50):
        x = harness.random_unit_vector(spec, trial, 7)
        assert abs(np.linalg.norm(x) - 1) <= 1e-12
        p = harness.random_weights(spec, trial, 5)
        assert abs(p.sum() - 1) <= 1e-12 and p.min() >= 1e-7
        assert np.array_equal(p, harness.random_weights(spec, trial, 5))


def test_unknown_suite():
    with pytest.raises(ValidationError):
        run_suite("nope", RandomSpec())


THEOREM_SUITES = ["jensen-operator", "jensen-equivalence", "pecaric-mitroi", "young-sandwich",
                  "young-nesting", "young-no-ordering", "heinz-chain", "kantorovich-exp",
                  "endpoint-scan", "expr-derivative"]


def test_registry_lists_every_suite():
    assert set(harness.SUITES) == set(THEOREM_SUITES) | {"operator-young"}


@pytest.mark.parametrize("name", THEOREM_SUITES)
def test_suite_has_no_failures(name):
    rep = run_suite(name, RandomSpec(seed=1, trials=40))
    assert rep.failures == 0, rep.counterexamples[:1]
    assert rep.worst_margin >= -1e-9


def test_operator_young_forward_suite():
    rep = run_suite("operator-young", RandomSpec(seed=5, trials=100, dim_range=(1, 8)),
                    chains=("forward",))
    assert rep.failures == 0


def test_counterexample_cap_and_schema():
    rep = run_suite("operator-young", RandomSpec(seed=5, trials=100, dim_range=(1, 8)),
                    chains=("reverse",))
    assert rep.failures > harness.COUNTEREXAMPLE_CAP
    assert len(rep.counterexamples) == harness.COUNTEREXAMPLE_CAP
    assert set(rep.to_dict()) == {"suite", "trials", "failures", "worst_margin",
                                  "counterexamples", "wall_time_ms"}


@pytest.mark.parametrize("name", ["jensen-operator", "operator-young", "jensen-equivalence"])
def test_reports_are_reproducible(name):
    cfg = RandomSpec(seed=12, trials=25, dim_range=(1, 8))
    assert run_suite(name, cfg).to_json(False) == run_suite(name, cfg).to_json(False)
