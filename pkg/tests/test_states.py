import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steerpurity import qmat, states
from steerpurity.qmat import InvalidDensityMatrix
from steerpurity.states import Family, FamilySpec

from oracles import jacobi_eigenvalues

P_GRID = np.linspace(0, 1, 101)


def test_werner_endpoints():
    np.testing.assert_allclose(states.werner(0).matrix, np.eye(4) / 4)
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    np.testing.assert_allclose(states.werner(1).matrix, np.outer(psi, psi), atol=1e-15)


@pytest.mark.parametrize("bad", [-0.01, 1.01])
def test_p_out_of_range(bad):
    for ctor in (states.werner, states.asymmetric_noisy_singlet, states.free_entangled):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            ctor(bad)
    with pytest.raises(ValueError):
        states.isotropic(bad, 3)


def test_isotropic_bad_dimension():
    with pytest.raises(ValueError):
        states.isotropic(0.5, 1)


def test_bell_diagonal_examples():
    np.testing.assert_allclose(states.bell_diagonal(0, 0, 0).matrix, np.eye(4) / 4)
    rho = states.bell_diagonal(1, -1, 1)
    np.testing.assert_allclose(rho.matrix, states.werner(1).matrix, atol=1e-15)
    np.testing.assert_allclose(jacobi_eigenvalues(rho.matrix), [0, 0, 0, 1], atol=1e-12)


def test_bell_diagonal_correlations():
    c = (0.3, -0.2, -0.5)
    rho = states.bell_diagonal(*c)
    for cj, s in zip(c, states.PAULI):
        assert np.trace(rho.matrix @ np.kron(s, s)).real == pytest.approx(cj, abs=1e-15)


def test_bell_diagonal_rejects_nonphysical():
    with pytest.raises(InvalidDensityMatrix) as exc:
        states.bell_diagonal(1, 1, 1)
    assert exc.value.violations[0].residual == pytest.approx(0.5)
    with pytest.raises(ValueError, match="c2"):
        states.bell_diagonal(0, 1.5, 0)


def test_bell_diagonal_eigenvalues_closed_form():
    for c in itertools.product(np.linspace(-1, 1, 5), repeat=3):
        m = states._bell_diagonal_matrix(*c)
        np.testing.assert_allclose(np.sort(states.bell_diagonal_eigenvalues(*c)),
                                   jacobi_eigenvalues(m), atol=1e-12)


def test_bell_diagonal_acceptance_equals_tetrahedron():
    for c in itertools.product(np.linspace(-1, 1, 11), repeat=3):
        inside = np.all(states.bell_diagonal_eigenvalues(*c) >= -1e-9)
        try:
            states.bell_diagonal(*c)
            accepted = True
        except InvalidDensityMatrix:
            accepted = False
        assert accepted == inside, c


def test_asymmetric_endpoints():
    single = states.asymmetric_noisy_singlet(1)
    for w in "AB":
        np.testing.assert_allclose(qmat.partial_trace(single, w).matrix, np.eye(2) / 2, atol=1e-15)
    zero = states.asymmetric_noisy_singlet(0)
    np.testing.assert_allclose(zero.matrix, np.diag([2 / 3, 1 / 3, 0, 0]), atol=1e-15)
    assert zero.purity() == pytest.approx(5 / 9, abs=1e-15)


def test_asymmetric_p06_hand_entries():
    p = 0.6
    # |00>: 2(1-p)/3; |01>: p/2 + (1-p)/3; |10>: p/2; <01|rho|10> = -p/2
    m = np.zeros((4, 4))
    m[0, 0] = 2 * (1 - p) / 3
    m[1, 1] = p / 2 + (1 - p) / 3
    m[2, 2] = p / 2
    m[1, 2] = m[2, 1] = -p / 2
    rho = states.asymmetric_noisy_singlet(p)
    np.testing.assert_allclose(rho.matrix, m, atol=1e-15)
    assert rho.purity() == pytest.approx(0.528888889, abs=1e-9)
    rho_b = qmat.partial_trace(rho, "A")
    assert rho_b.purity() == pytest.approx(0.508888889, abs=1e-9)


@pytest.mark.parametrize("d", [2, 3, 4, 6])
def test_isotropic_purities(d):
    for p in P_GRID[::10]:
        rho = states.isotropic(p, d)
        assert rho.purity() == pytest.approx((d * d - 1) * p**2 / d**2 + 1 / d**2, abs=1e-12)
        for w in "AB":
            red = qmat.partial_trace(rho, w)
            np.testing.assert_allclose(red.matrix, np.eye(d) / d, atol=1e-14)


def test_isotropic_d2_is_werner():
    for p in P_GRID:
        np.testing.assert_allclose(states.isotropic(p, 2).matrix, states.werner(p).matrix, atol=1e-12)


def test_free_entangled():
    for p in P_GRID[::5]:
        rho = states.free_entangled(p)
        assert rho.dims == (3, 3)
        assert rho.purity() == pytest.approx(4 * p**2 / 3 - 2 * p / 3 + 1 / 3, abs=1e-12)
        assert qmat.partial_trace(rho, "A").purity() == pytest.approx(1 / 3, abs=1e-12)
    sigma = states.free_entangled(0)
    assert np.count_nonzero(np.abs(sigma.matrix) > 0) == 3
    assert sigma.purity() == pytest.approx(1 / 3)


@pytest.mark.parametrize("family,kw", [
    (Family.WERNER, {}),
    (Family.ASYMMETRIC, {}),
    (Family.FREE_ENTANGLED, {}),
    (Family.ISOTROPIC, {"d": 3}),
    (Family.ISOTROPIC, {"d": 5}),
])
def test_family_grid_validates(family, kw):
    spec = FamilySpec(family, **kw)
    for p in P_GRID:
        rho = spec.with_p(p).build()
        ev = jacobi_eigenvalues(rho.matrix) if rho.dim <= 9 else qmat.hermitian_eigenvalues(rho.matrix)
        assert abs(ev.sum() - 1) <= 1e-9
        assert ev.min() >= -1e-9


def test_family_spec_rejects_bad_params():
    with pytest.raises(ValueError):
        FamilySpec(Family.WERNER, p=2.0)
    with pytest.raises(ValueError):
        FamilySpec(Family.ISOTROPIC, d=1)
    assert FamilySpec("free-entangled").dims == (3, 3)


def test_random_density_deterministic():
    a = states.random_density(2, 3, 123)
    b = states.random_density(2, 3, 123)
    assert np.array_equal(a.matrix, b.matrix)
    assert not np.array_equal(a.matrix, states.random_density(2, 3, 124).matrix)


def test_random_density_purity_range():
    for seed in range(1000):
        rho = states.random_density(2, 2, seed)
        assert 0.25 < rho.purity() < 1


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**63 - 1), st.sampled_from([2, 3, 4]), st.sampled_from([2, 3, 4]))
def test_random_density_always_valid(seed, d_a, d_b):
    rho = states.random_density(d_a, d_b, seed)
    assert qmat.find_violations(rho.matrix, d_a, d_b) == []
    assert 1 / (d_a * d_b) - 1e-9 <= rho.purity() <= 1 + 1e-9


def test_random_pure():
    prod = states.random_pure(2, 3, 8, product=True)
    assert prod.purity() == pytest.approx(1, abs=1e-12)
    for w in "AB":
        assert qmat.partial_trace(prod, w).purity() == pytest.approx(1, abs=1e-9)
    for seed in range(100):
        ent = states.random_pure(2, 2, seed)
        assert ent.purity() == pytest.approx(1, abs=1e-12)
        # Schmidt coefficients from the SVD of the 2x2 amplitude matrix
        vals, vecs = np.linalg.eigh(ent.matrix)
        schmidt = np.linalg.svd(vecs[:, -1].reshape(2, 2), compute_uv=False)
        assert schmidt[1] > 0
        assert qmat.partial_trace(ent, "A").purity() < 1
