import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambda_cqed.eigenstructure import (
    EigenLadder,
    analytic_eigen,
    block_hamiltonian,
    jc_ladder,
    ladder_scan,
    numeric_eigen,
    to_bare,
    to_rotated,
)
from lambda_cqed.hamiltonian import SystemParams, assemble_hamiltonian
from lambda_cqed.hilbert import basis_index


def test_block_matrix_layout():
    h = block_hamiltonian(2, 10.0, 3.0, -4.0)
    c = 10.0
    expected = np.array([[0, c, -c], [c, 1.0, -2.0], [-c, -2.0, -5.0]])
    np.testing.assert_allclose(h, expected)
    with pytest.raises(ValueError):
        block_hamiltonian(0, 10, 1, 0)


@pytest.mark.parametrize(
    "n, g, omega, expected",
    [
        (1, 20, 0, [-20, 0, 20]),
        (1, 20, 5, [-np.sqrt(425), 0, np.sqrt(425)]),
        (2, 20, 0, [-20 * np.sqrt(2), 0, 20 * np.sqrt(2)]),
    ],
)
def test_block_eigenvalues(n, g, omega, expected):
    vals, _ = numeric_eigen(n, g, omega, 0.0)
    np.testing.assert_allclose(vals, expected, atol=1e-10)


def test_lambda_plus_with_strong_control():
    ae = analytic_eigen(1, 10, 11)
    assert ae.lambda_plus == pytest.approx(np.sqrt(221))
    assert ae.lambda_plus == pytest.approx(14.866, abs=1e-3)


def test_analytic_requires_control():
    with pytest.raises(ValueError, match="omega_L > 0"):
        analytic_eigen(1, 10, 0.0)


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("g", [10, 20])
@pytest.mark.parametrize("omega", [3, 11])
def test_analytic_vectors_match_numeric(n, g, omega):
    ae = analytic_eigen(n, g, omega)
    # oracle: dense eigensolve of the block, mapped to the bare basis
    vals, vecs = np.linalg.eigh(block_hamiltonian(n, g, omega, 0.0))
    bare = [to_bare(vecs[:, k]) for k in range(3)]
    np.testing.assert_allclose(vals, [ae.lambda_minus, ae.lambda_zero, ae.lambda_plus], atol=1e-10)
    for analytic, numeric in zip((ae.psi_minus, ae.psi_zero, ae.psi_plus), bare):
        assert abs(np.vdot(analytic, numeric)) > 1 - 1e-10
    # the dark state has no excited-state amplitude
    assert ae.psi_zero[1] == 0.0


def test_jc_ladder():
    lm, lp, phim, phip = jc_ladder(1, 10)
    assert (lm, lp) == (-10, 10)
    lm2, lp2, _, _ = jc_ladder(2, 10)
    assert lp2 == pytest.approx(10 * np.sqrt(2))
    for n in range(1, 5):
        assert (jc_ladder(n, 10)[1] - jc_ladder(n, 10)[0]) / 20 == pytest.approx(np.sqrt(n))
    # Phi are eigenvectors of the block with the control switched off
    h = block_hamiltonian(1, 10, 0, 0)
    for lam, phi in ((lm, phim), (lp, phip)):
        np.testing.assert_allclose(h @ to_rotated(phi), lam * to_rotated(phi), atol=1e-12)


def test_basis_change_is_orthogonal():
    v = np.array([0.3, -0.2 + 0.1j, 0.9])
    np.testing.assert_allclose(to_rotated(to_bare(v)), v)
    assert np.linalg.norm(to_bare(v)) == pytest.approx(np.linalg.norm(v))


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 6),
    g=st.floats(0.1, 30),
    omega=st.floats(0, 30),
    delta_L=st.floats(-30, 30),
)
def test_block_invariants(n, g, omega, delta_L):
    h = block_hamiltonian(n, g, omega, delta_L)
    np.testing.assert_array_equal(h, h.T)
    vals, vecs = numeric_eigen(n, g, omega, delta_L)
    assert np.all(np.diff(vals) >= 0)
    assert abs(vals.sum() - delta_L) <= 1e-12 * max(1.0, abs(delta_L), np.abs(vals).max())
    np.testing.assert_allclose(vecs.T @ vecs, np.eye(3), atol=1e-10)


def test_resonant_control_grid():
    for omega_over_g in np.linspace(0, 1.5, 20):
        for n in range(1, 5):
            g = 20.0
            omega = omega_over_g * g
            vals, _ = numeric_eigen(n, g, omega, 0.0)
            lam = np.sqrt(omega**2 + n * g**2)
            np.testing.assert_allclose(vals, [-lam, 0, lam], atol=1e-10)


def test_degenerate_tie_break():
    # delta_L = -g, omega = 0: |m> is degenerate with Phi_-
    vals, vecs = numeric_eigen(1, 20, 0.0, -20.0)
    np.testing.assert_allclose(vals, [-20, -20, 20], atol=1e-10)
    assert abs(vecs[0, 0]) >= abs(vecs[0, 1])


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("omega, delta_L", [(0.0, 0.0), (4.5, 0.0), (9.0, -10.0), (2.0, 7.0)])
def test_block_matches_full_hamiltonian_sector(n, omega, delta_L):
    # block eigenvalues = -(sector energies of the full H at delta_p = 0, eta = 0)
    n_max = 4
    p = SystemParams(g=10, eta=0, omega_L=omega, delta_p=0, delta_L=delta_L, n_max=n_max)
    H = assemble_hamiltonian(p)
    idx = [basis_index("g", n, n_max), basis_index("e", n - 1, n_max), basis_index("m", n - 1, n_max)]
    sector = np.linalg.eigvalsh(H[np.ix_(idx, idx)])
    vals, _ = numeric_eigen(n, 10, omega, delta_L)
    np.testing.assert_allclose(np.sort(-sector), vals, atol=1e-10)


def test_ladder_scan_rows():
    rows = ladder_scan(20, 0.0, [0.0, 5.0], [1, 2])
    assert len(rows) == 4
    assert rows[0][:2] == (0.0, 1)
    assert rows[1][4] == pytest.approx(20 * np.sqrt(2))
    assert rows[2][4] == pytest.approx(np.sqrt(425))
    with pytest.raises(ValueError):
        ladder_scan(20, 0, [], [1])


def test_ladder_scan_detuned_control_limit():
    rows = ladder_scan(20, -20.0, [1e-6], [1])
    assert min(abs(np.array(rows[0][2:]) + 20)) < 1e-5


def test_ladder_scan_monotone_top():
    grid = np.linspace(0, 30, 31)
    rows = ladder_scan(20, 0.0, grid, [1])
    top = [r[4] for r in rows]
    assert np.all(np.diff(top) > 0)


def test_eigen_ladder_container():
    ladder = EigenLadder.build(20, 5.0, 0.0, [1, 2, 3])
    assert [n for n, _, _ in ladder] == [1, 2, 3]
    for n, vals, vecs in ladder:
        assert vals[1] == pytest.approx(0.0, abs=1e-10)
        assert vecs.shape == (3, 3)
