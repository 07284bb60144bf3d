import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conflictnet.core import ModelParams, SimConfig, block_vector, relabel, two_faction_matrix
from conflictnet.dynamics import Classification, find_equilibrium
from conflictnet.errors import AllZeroNetworkError, DegenerateNullError, DimensionError, NonFiniteError
from conflictnet.ingest import load_wwi_1913
from conflictnet.sbm import gaussian_bias
from conflictnet.spectral import (
    balance_eta,
    eigendecompose,
    eigenvector_polarization,
    leading_eigenpair,
    modularity_matrix,
    orient,
    polarizations,
    triad_imbalance,
)

from .conftest import random_symmetric, symmetric_matrices


def loop_modularity(x):
    n = x.shape[0]
    k = [sum(x[i]) for i in range(n)]
    m = 0.5 * sum(abs(v) for v in x.ravel())
    return np.array([[x[i, j] - k[i] * k[j] / (2 * m) for j in range(n)] for i in range(n)])


def loop_imbalance(x):
    n = x.shape[0]
    total = 0.0
    for i, j, k in itertools.combinations(range(n), 3):
        prod = x[i, j] * x[j, k] * x[k, i]
        if prod < 0:
            total += abs(prod)
    return total


def test_contrast_matrix_has_single_eigenvalue():
    n, mu = 8, 0.3
    u = block_vector(n) / np.sqrt(n)
    spec = eigendecompose(n * mu * np.outer(u, u))
    assert spec.eigenvalues[0] == pytest.approx(n * mu)
    np.testing.assert_allclose(spec.eigenvalues[1:], 0.0, atol=1e-12)
    assert abs(spec.leading_vector @ u) == pytest.approx(1.0)


def test_uniform_matrix_eigenvalue():
    n, omega = 6, 0.7
    spec = eigendecompose(omega * np.ones((n, n)))
    assert spec.leading_value == pytest.approx(n * omega)
    np.testing.assert_allclose(spec.leading_vector, np.ones(n) / np.sqrt(n))


def test_two_by_two():
    spec = eigendecompose(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(spec.eigenvalues, [1.0, -1.0])


def test_errors():
    with pytest.raises(NonFiniteError):
        eigendecompose(np.array([[0.0, np.inf], [np.inf, 0.0]]))
    with pytest.raises(DimensionError):
        eigendecompose(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(AllZeroNetworkError):
        modularity_matrix(np.zeros((3, 3)))


def test_orientation_largest_component_positive():
    v = orient(np.array([[0.1, 0.2], [-0.9, 0.1], [0.3, -0.8]]))
    assert v[1, 0] == 0.9 and v[2, 1] == 0.8


def test_modularity_matches_loops_and_k4_rows():
    x = random_symmetric(5, 3)
    np.testing.assert_allclose(modularity_matrix(x), loop_modularity(x), atol=1e-12)
    k4 = np.ones((4, 4)) - np.eye(4)
    np.testing.assert_allclose(modularity_matrix(k4).sum(axis=1), 0.0, atol=1e-12)


def test_polarization_matches_quadratic_form():
    x = random_symmetric(6, 4)
    spec = eigendecompose(x)
    m = loop_modularity(x)
    expected = [spec.eigenvectors[:, i] @ m @ spec.eigenvectors[:, i] for i in range(6)]
    np.testing.assert_allclose(polarizations(x), expected, atol=1e-12)
    assert eigenvector_polarization(x, 2) == pytest.approx(expected[2])
    with pytest.raises(IndexError):
        eigenvector_polarization(x, 6)


def test_two_factions_leading_vector_is_most_polarized():
    x = two_faction_matrix(8)
    s = leading_eigenpair(x)[1]
    assert abs(s @ block_vector(8)) / np.sqrt(8) == pytest.approx(1.0)
    phi = polarizations(x)
    assert np.argmax(phi) == 0 and phi[0] > np.max(phi[1:]) + 1e-9


def test_uniform_network_leading_vector_has_no_polarization():
    x = np.ones((8, 8)) - np.eye(8)
    phi = polarizations(x)
    assert phi[0] == pytest.approx(0.0, abs=1e-12)
    assert phi[0] >= np.max(phi[1:]) - 1e-12 or phi[0] < np.max(phi[1:])
    assert abs(phi[0]) < 1e-12


def test_wwi_leading_vector_is_most_polarized():
    phi = polarizations(load_wwi_1913())
    assert np.argmax(phi) == 0


def test_triad_imbalance_matches_loops():
    x = random_symmetric(7, 8)
    assert triad_imbalance(x) == pytest.approx(loop_imbalance(x))


def test_eta_zero_for_two_factions():
    assert balance_eta(two_faction_matrix(10), n_null=50) == 0.0


def test_eta_of_null_draw_near_one():
    vals = []
    for seed in range(20):
        vals.append(balance_eta(gaussian_bias(12, 1.0, 0.0, seed), n_null=50, seed=seed))
    assert np.mean(vals) == pytest.approx(1.0, abs=0.15)


def test_eta_of_war_state_is_small():
    x_d = gaussian_bias(20, 0.8, 0.4, 0)
    rep = find_equilibrium(x_d, x_d, ModelParams.from_alpha(0.05, beta=1.0, L=8.0), SimConfig(dt=0.02, t_end=2000.0))
    assert rep.classification == Classification.WAR
    assert balance_eta(rep.state, n_null=50) < 0.05


def test_eta_errors():
    with pytest.raises(DimensionError):
        balance_eta(np.eye(2))
    with pytest.raises(ValueError):
        balance_eta(np.eye(4), n_null=5)
    with pytest.raises(DegenerateNullError):
        balance_eta(np.zeros((4, 4)), n_null=10)


@pytest.mark.property
@given(symmetric_matrices(max_n=9))
def test_spectrum_reconstruction_trace_and_order(x):
    spec = eigendecompose(x)
    scale = max(1.0, np.linalg.norm(x))
    assert np.linalg.norm(spec.reconstruct() - x) <= 1e-8 * scale
    assert np.sum(spec.eigenvalues) == pytest.approx(np.trace(x), abs=1e-9 * scale)
    assert np.all(np.diff(spec.eigenvalues) <= 1e-12)
    resid = x @ spec.eigenvectors - spec.eigenvectors * spec.eigenvalues
    assert np.max(np.linalg.norm(resid, axis=0)) < 1e-8 * scale
    np.testing.assert_allclose(spec.eigenvectors.T @ spec.eigenvectors, np.eye(x.shape[0]), atol=1e-10)


@pytest.mark.property
@given(symmetric_matrices(min_n=3, max_n=7))
def test_polarization_permutation_invariant(x):
    if np.sum(np.abs(x)) == 0:
        return
    spec = eigendecompose(x)
    if np.min(np.abs(np.diff(spec.eigenvalues))) < 1e-6:
        return  # eigenvectors of repeated eigenvalues are not unique
    perm = np.random.default_rng(1).permutation(x.shape[0])
    np.testing.assert_allclose(polarizations(relabel(x, perm)), polarizations(x), atol=1e-8)


@pytest.mark.property
@given(symmetric_matrices(min_n=3, max_n=7), st.integers(0, 2**16))
def test_modularity_permutation_equivariant(x, seed):
    if np.sum(np.abs(x)) == 0:
        return
    perm = np.random.default_rng(seed).permutation(x.shape[0])
    np.testing.assert_allclose(modularity_matrix(relabel(x, perm)), relabel(modularity_matrix(x), perm), atol=1e-12)


@pytest.mark.property
@settings(max_examples=25)
@given(st.integers(4, 9), st.integers(0, 2**16))
def test_eta_zero_for_any_exactly_balanced_network(n, seed):
    rng = np.random.default_rng(seed)
    sigma = np.ones(n)
    sigma[rng.permutation(n)[: rng.integers(1, n)]] = -1.0  # both factions nonempty
    mags = rng.uniform(0.1, 2.0, size=(n, n))
    x = np.outer(sigma, sigma) * (mags + mags.T) / 2
    assert triad_imbalance(x) == 0.0
    assert balance_eta(x, n_null=20, seed=seed) == 0.0


@pytest.mark.property
@settings(max_examples=20)
@given(st.integers(5, 8), st.integers(0, 2**16))
def test_triad_imbalance_invariant_under_node_sign_flips(n, seed):
    rng = np.random.default_rng(seed)
    sigma = rng.choice([-1.0, 1.0], size=n)
    mags = rng.uniform(0.1, 2.0, size=(n, n))
    x = np.outer(sigma, sigma) * (mags + mags.T) / 2 + gaussian_bias(n, 0.5, 0.0, seed)
    # each triad contains an even number of ties touching a flipped node
    flip = np.where(rng.random(n) < 0.5, -1.0, 1.0)
    assert triad_imbalance(np.outer(flip, flip) * x) == pytest.approx(triad_imbalance(x))
