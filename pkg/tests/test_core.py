import numpy as np
import pytest
from hypothesis import given

from conflictnet.core import (
    ModelParams,
    PerturbationImpulse,
    SignedNetwork,
    SimConfig,
    Trajectory,
    block_vector,
    frobenius_norm,
    relabel,
    spawn_seeds,
    tie_std,
    two_faction_matrix,
)
from conflictnet.errors import DimensionError, NonFiniteError

from .conftest import symmetric_matrices


def test_alpha_is_plateau_over_half_width():
    p = ModelParams(beta=1.0, L=6.0, gamma=200.0)
    assert p.alpha == pytest.approx(0.03)
    q = ModelParams.from_alpha(0.03, beta=1.0, L=6.0)
    assert q.gamma == pytest.approx(200.0)
    assert q.with_alpha(0.06).alpha == pytest.approx(0.06)


@pytest.mark.parametrize("kw", [dict(beta=0, L=1, gamma=1), dict(beta=1, L=-1, gamma=1), dict(beta=1, L=1, gamma=np.inf)])
def test_model_params_reject_nonpositive(kw):
    with pytest.raises(ValueError):
        ModelParams(**kw)


def test_signed_network_validation():
    with pytest.raises(DimensionError):
        SignedNetwork(np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(DimensionError):
        SignedNetwork(np.zeros((1, 1)))
    with pytest.raises(NonFiniteError):
        SignedNetwork(np.array([[0.0, np.nan], [np.nan, 0.0]]))
    with pytest.raises(DimensionError):
        SignedNetwork(np.zeros((2, 2)), labels=["a", "a"])
    net = SignedNetwork(np.eye(2), labels=["a", "b"])
    assert net.index("b") == 1
    assert not net.weights.flags.writeable


def test_tie_std_is_population_std_of_upper_triangle():
    x = np.array([[9.0, 1.0, 2.0], [1.0, 9.0, 3.0], [2.0, 3.0, 9.0]])
    vals = [1.0, 2.0, 3.0]
    mean = sum(vals) / 3
    expected = (sum((v - mean) ** 2 for v in vals) / 3) ** 0.5
    assert tie_std(x) == pytest.approx(expected)


def test_frobenius_counts_both_halves():
    x = np.array([[0.0, 3.0], [3.0, 4.0]])
    assert frobenius_norm(x) == pytest.approx((9 + 9 + 16) ** 0.5)


def test_impulse_requires_unit_direction():
    d = two_faction_matrix(4, diagonal=True)
    with pytest.raises(ValueError):
        PerturbationImpulse(d, 1.0, 0.0, 1.0)
    imp = PerturbationImpulse.from_matrix(3.0 * d, 1.0, 2.0)
    assert imp.sigma == pytest.approx(3.0 * 4.0)
    np.testing.assert_allclose(imp.matrix, 3.0 * d)
    assert imp.active(1.0) and not imp.active(2.0) and not imp.active(0.5)
    with pytest.raises(ValueError):
        PerturbationImpulse(d / 4.0, 1.0, 2.0, 2.0)


def test_sim_config_validation():
    with pytest.raises(ValueError):
        SimConfig(dt=0)
    with pytest.raises(ValueError):
        SimConfig(record_every=0)


def test_trajectory_requires_increasing_times():
    with pytest.raises(ValueError):
        Trajectory(np.array([0.0, 0.0]), np.zeros(2), np.zeros(2))
    with pytest.raises(DimensionError):
        Trajectory(np.array([0.0, 1.0]), np.zeros(1), np.zeros(2))


def test_block_vector_and_factions():
    v = block_vector(4)
    np.testing.assert_array_equal(v, [1, 1, -1, -1])
    x = two_faction_matrix(4, 2.0)
    assert x[0, 1] == 2.0 and x[0, 2] == -2.0 and x[0, 0] == 0.0
    with pytest.raises(ValueError):
        block_vector(3)


def test_spawned_seeds_are_stable_and_distinct():
    a = spawn_seeds(7, 5)
    assert a == spawn_seeds(7, 5)
    assert len(set(a)) == 5
    assert spawn_seeds(7, 3) == a[:3]


@pytest.mark.property
@given(symmetric_matrices())
def test_relabel_preserves_spectrum_and_tie_std(x):
    perm = np.random.default_rng(0).permutation(x.shape[0])
    y = relabel(x, perm)
    np.testing.assert_allclose(np.linalg.eigvalsh(y), np.linalg.eigvalsh(x), atol=1e-9)
    assert tie_std(y) == pytest.approx(tie_std(x), abs=1e-12)
