import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steerpurity import qmat, states
from steerpurity.qmat import InvalidDensityMatrix, ParseError, Wing

from oracles import jacobi_eigenvalues, kron_loops, partial_trace_loops, purity_by_trace

SX = np.array([[0, 1], [1, 0]])
SZ = np.diag([1, -1])
PSI_PLUS = np.array([1, 0, 0, 1]) / np.sqrt(2)


def test_kron_identity_and_diagonal():
    assert np.array_equal(qmat.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(qmat.kron(SZ, SZ), np.diag([1, -1, -1, 1]))


def test_kron_xx_expectation_on_bell_state():
    rho = np.outer(PSI_PLUS, PSI_PLUS)
    xx = qmat.kron(SX, SX)
    # hand-written 4x4: XX maps |00> <-> |11>, |01> <-> |10>
    expected_xx = np.fliplr(np.eye(4))
    assert np.array_equal(xx, expected_xx)
    assert np.trace(rho @ xx).real == pytest.approx(1.0, abs=1e-15)


def test_kron_matches_loops_rectangular():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
    b = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    np.testing.assert_allclose(qmat.kron(a, b), kron_loops(a, b), atol=1e-15)


def test_kron_overflow():
    big = np.eye(128)
    with pytest.raises(ValueError, match="MAX_DIM"):
        qmat.kron(big, np.eye(64))


def test_kron_rejects_nan():
    with pytest.raises(ValueError, match="NaN"):
        qmat.kron([[np.nan]], [[1.0]])


def test_kron_associative_exact_on_signs():
    # entries +-1: all products exact
    a, b, c = SZ, SX, np.array([[1, -1], [-1, -1]])
    left = qmat.kron(qmat.kron(a, b), c)
    right = qmat.kron(a, qmat.kron(b, c))
    assert np.array_equal(left, right)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(-3, 3), st.floats(-3, 3))
def test_kron_bilinear(seed, s, t):
    rng = np.random.default_rng(seed)
    a1, a2, b = (rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) for _ in range(3))
    lhs = qmat.kron(s * a1 + t * a2, b)
    rhs = s * qmat.kron(a1, b) + t * qmat.kron(a2, b)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12 * (1 + abs(s) + abs(t)) * 10)


def test_partial_trace_bell_state():
    rho = qmat.validate(np.outer(PSI_PLUS, PSI_PLUS), 2, 2)
    red = qmat.partial_trace(rho, "A")
    assert red.dim == 2 and red.traced_out is Wing.A
    np.testing.assert_allclose(red.matrix, np.eye(2) / 2, atol=1e-15)


def test_partial_trace_werner_purity_half():
    red = qmat.partial_trace(states.werner(0.37), Wing.A)
    np.testing.assert_allclose(red.matrix, np.eye(2) / 2, atol=1e-15)
    assert red.purity() == pytest.approx(0.5, abs=1e-15)


def test_partial_trace_product_state_unequal_dims():
    ra = states.random_density(2, 2, 1).matrix[:2, :2]
    ra = ra / np.trace(ra)
    rb = np.diag([0.5, 0.3, 0.2]).astype(complex)
    rho = states.product_state(ra, rb)
    np.testing.assert_allclose(qmat.partial_trace(rho, "A").matrix, rb, atol=1e-15)
    np.testing.assert_allclose(qmat.partial_trace(rho, "B").matrix, ra, atol=1e-15)


@pytest.mark.parametrize("d_a,d_b", [(2, 2), (2, 3), (3, 2), (4, 3)])
def test_partial_trace_matches_loops(d_a, d_b):
    rho = states.random_density(d_a, d_b, 11)
    for w in "AB":
        np.testing.assert_allclose(
            qmat.partial_trace(rho, w).matrix,
            partial_trace_loops(rho.matrix, d_a, d_b, w), atol=1e-15)


def test_partial_trace_preserves_trace_1000_states():
    worst = 0.0
    for seed in range(1000):
        d_a, d_b = 2 + seed % 3, 2 + (seed // 3) % 3
        rho = states.random_density(d_a, d_b, seed)
        for w in "AB":
            red = qmat.partial_trace(rho, w)
            worst = max(worst, abs(np.trace(red.matrix) - np.trace(rho.matrix)))
            assert 1 / red.dim - 1e-9 <= red.purity() <= 1 + 1e-9
    assert worst <= 1e-12


@pytest.mark.parametrize("p", [0.0, 0.25, 0.6, 1.0])
def test_purity_werner(p):
    assert qmat.purity(states.werner(p).matrix) == pytest.approx(3 * p**2 / 4 + 0.25, abs=1e-12)


def test_purity_maximally_mixed():
    assert qmat.purity(np.eye(4) / 4) == 0.25


@pytest.mark.parametrize("p", [0.0, 0.3, 0.5, 1.0])
def test_purity_free_entangled(p):
    expected = 4 * p**2 / 3 - 2 * p / 3 + 1 / 3
    assert qmat.purity(states.free_entangled(p).matrix) == pytest.approx(expected, abs=1e-12)


def test_purity_non_square():
    with pytest.raises(ValueError, match="square"):
        qmat.purity(np.ones((2, 3)))


def test_purity_matches_trace_oracle():
    for seed in range(50):
        m = states.random_density(3, 2, seed).matrix
        assert qmat.purity(m) == pytest.approx(purity_by_trace(m), abs=1e-14)


def test_validate_maximally_mixed():
    rho = qmat.validate(np.eye(4) / 4, 2, 2)
    assert qmat.hermitian_eigenvalues(rho.matrix)[0] == pytest.approx(0.25)


def test_validate_negative_eigenvalue():
    with pytest.raises(InvalidDensityMatrix) as exc:
        qmat.validate(np.diag([1.2, -0.2, 0, 0]), 2, 2)
    (v,) = exc.value.violations
    assert v.invariant == "positive-semidefinite"
    assert v.residual == pytest.approx(0.2)


def test_validate_reports_each_violation():
    m = np.diag([0.5, 0.5, 0.5, -0.2]).astype(complex)
    m[0, 1] = 0.1
    found = {v.invariant for v in qmat.find_violations(m, 2, 2)}
    assert found == {"hermitian", "unit-trace", "positive-semidefinite"}


def test_validate_pure_bell_diagonal():
    # correlations (c1, c2, c3) = (1, 1, -1)
    sy = np.array([[0, -1j], [1j, 0]])
    m = (np.eye(4) + np.kron(SX, SX) + np.kron(sy, sy) - np.kron(SZ, SZ)) / 4
    rho = qmat.validate(m, 2, 2)
    np.testing.assert_allclose(jacobi_eigenvalues(rho.matrix), [0, 0, 0, 1], atol=1e-12)


def test_validate_size_mismatch():
    with pytest.raises(ValueError, match="bipartition"):
        qmat.validate(np.eye(4) / 4, 2, 3)


def test_density_matrix_is_immutable():
    rho = states.werner(0.5)
    with pytest.raises(ValueError):
        rho.matrix[0, 0] = 1


def test_eigenvalues_examples():
    np.testing.assert_allclose(qmat.hermitian_eigenvalues(SZ), [-1, 1])
    np.testing.assert_allclose(qmat.hermitian_eigenvalues(np.outer(PSI_PLUS, PSI_PLUS)),
                               [0, 0, 0, 1], atol=1e-15)
    np.testing.assert_allclose(qmat.hermitian_eigenvalues(states.werner(0.6).matrix),
                               [0.1, 0.1, 0.1, 0.7], atol=1e-12)


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(ValueError, match="Hermitian"):
        qmat.hermitian_eigenvalues([[0, 1], [0, 0]])


@pytest.mark.parametrize("seed", range(10))
def test_eigenvalues_against_jacobi(seed):
    rho = states.random_density(3, 3, seed)
    ev = qmat.hermitian_eigenvalues(rho.matrix)
    np.testing.assert_allclose(ev, jacobi_eigenvalues(rho.matrix), atol=1e-9)
    assert abs(ev.sum() - 1) <= 1e-9


# -- file format ----------------------------------------------------------------


def test_json_round_trip_is_lossless():
    rho = states.random_density(2, 3, 5)
    back = qmat.loads(qmat.dumps(rho))
    assert back.dims == (2, 3)
    assert np.array_equal(back.matrix, rho.matrix)


@pytest.mark.parametrize("payload,match", [
    ("not json", "malformed"),
    ('{"dim_a": 2, "dim_b": 2, "re": [[1]]}', "missing key 'im'"),
    ('{"dim_a": 2, "dim_b": 2, "re": [[1,0,0,0],[0,0,0],[0,0,0,0],[0,0,0,0]], '
     '"im": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}', "row 1"),
    ('{"dim_a": 2, "dim_b": 3, "re": [[1,0],[0,0]], "im": [[0,0],[0,0]]}', "6 rows"),
    ('{"dim_a": 1, "dim_b": 2, "re": [[1]], "im": [[0]]}', "dim_a"),
])
def test_json_parse_errors(payload, match):
    with pytest.raises(ParseError, match=match):
        qmat.loads(payload)


def test_json_invalid_state_rejected():
    data = {"dim_a": 2, "dim_b": 2, "re": np.diag([1.2, -0.2, 0, 0]).tolist(),
            "im": np.zeros((4, 4)).tolist()}
    with pytest.raises(InvalidDensityMatrix):
        qmat.loads(json.dumps(data))
