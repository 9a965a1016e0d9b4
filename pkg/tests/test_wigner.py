import numpy as np
import pytest

from qps.field import REFERENCE, BasisIndex, line_point
from qps.mub import momentum_state, mub_family
from qps.operators import random_density, random_hermitian, schwinger_x, schwinger_z
from qps.wigner import (DimensionMismatch, NonRealWignerValue, WignerGrid, characteristic_function,
                        inverse_wigner, line_operator, line_operator_explicit, line_operator_mub,
                        overlap, radon_marginal, wigner_from_characteristic, wigner_transform,
                        wigner_transform_complex)

from conftest import pure_states, states

S = BasisIndex.shifted


def direct_wigner(a, n):
    """Oracle: Tr(A P) with P from the basis-sum construction."""
    fam = mub_family(n)
    return np.array([[np.trace(a @ line_operator_mub(q, p, fam)) for p in range(n)] for q in range(n)])


@pytest.mark.parametrize("n", [3, 5, 7])
def test_line_operator_hermitian_unit_trace(n):
    for q in range(n):
        for p in range(n):
            P = line_operator(q, p, n)
            assert np.abs(P - P.conj().T).max() <= 1e-12
            assert abs(np.trace(P) - 1) <= 1e-12


@pytest.mark.parametrize("n", [3, 5, 7])
def test_closed_form_matches_basis_sum(n):
    fam = mub_family(n)
    for q in range(n):
        for p in range(n):
            assert np.abs(line_operator(q, p, n) - line_operator_mub(q, p, fam)).max() <= 1e-10


@pytest.mark.parametrize("n", [3, 5])
def test_explicit_phase_sum_matches(n):
    fam = mub_family(n)
    for q in range(n):
        for p in range(n):
            assert np.abs(line_operator_explicit(q, p, fam) - line_operator_mub(q, p, fam)).max() <= 1e-10
    P = line_operator_explicit(0, 0, mub_family(3))
    assert np.abs(P - P.conj().T).max() <= 1e-12


def test_closed_form_spot_values():
    P = line_operator(0, 0, 5)
    assert P[0, 1] == pytest.approx(1)
    assert P[3, 3] == pytest.approx(0, abs=1e-15)
    oracle = line_operator_mub(0, 0, mub_family(5))
    assert oracle[0, 1] == pytest.approx(1)
    assert abs(oracle[3, 3]) <= 1e-12


@pytest.mark.parametrize("n", [3, 5, 7])
def test_orthogonality_and_closure(n):
    ops = [line_operator(q, p, n) for q in range(n) for p in range(n)]
    gram = np.array([[np.trace(a @ b) / n for b in ops] for a in ops])
    assert np.abs(gram - np.eye(n * n)).max() <= 1e-10
    assert np.abs(sum(ops) / n - np.eye(n)).max() <= 1e-10


def test_mixed_state_is_flat():
    w = wigner_transform(np.eye(3) / 3)
    np.testing.assert_allclose(w.values, np.full((3, 3), 1 / 3), atol=1e-14)


@pytest.mark.parametrize("q0", range(5))
def test_position_state(q0):
    rho = np.zeros((5, 5))
    rho[q0, q0] = 1
    expected = np.zeros((5, 5))
    expected[q0, :] = 1
    np.testing.assert_allclose(wigner_transform(rho).values, expected, atol=1e-12)
    np.testing.assert_allclose(direct_wigner(rho, 5).real, expected, atol=1e-12)


@pytest.mark.parametrize("b", [REFERENCE] + [S(b) for b in range(5)])
def test_basis_projector_wigner_is_line_indicator(b):
    fam = mub_family(5)
    for m in range(5):
        w = wigner_transform(fam.projector(m, b)).values
        expected = np.array([[float(line_point(q, p, b, 5) == m) for p in range(5)] for q in range(5)])
        assert np.abs(w - expected).max() <= 1e-12


def test_matches_basis_sum_oracle_on_random_states():
    for rho in states(5, 5):
        assert np.abs(wigner_transform(rho).values - direct_wigner(rho.matrix, 5)).max() <= 1e-12


def test_reality_and_rejection_of_non_hermitian():
    for rho in states(7, 5):
        assert np.abs(wigner_transform_complex(rho).imag).max() <= 1e-10
    with pytest.raises(NonRealWignerValue):
        wigner_transform(schwinger_x(5))
    # the complex path still works for non-Hermitian input
    assert wigner_transform_complex(schwinger_x(5)).shape == (5, 5)


def test_characteristic_function_identity_and_clock():
    t = characteristic_function(np.eye(5))
    assert t.l[0] == pytest.approx(5)
    assert np.abs(t.l[1:]).max() <= 1e-12 and np.abs(t.kb).max() <= 1e-12
    t = characteristic_function(schwinger_z(5))
    expected_l = np.zeros(5)
    expected_l[1] = 5
    assert np.abs(t.l - expected_l).max() <= 1e-12
    assert np.abs(t.kb).max() <= 1e-12


def test_characteristic_reassembly_matches_transform():
    for rho in states(5, 3):
        table = characteristic_function(rho)
        assert np.abs(wigner_from_characteristic(table) - wigner_transform(rho).values).max() <= 1e-10


def test_inverse_round_trip():
    for seed in range(5):
        a = random_hermitian(7, seed)
        back = inverse_wigner(wigner_transform(a))
        assert np.abs(back - a).max() <= 1e-10
    np.testing.assert_allclose(inverse_wigner(WignerGrid.from_array(np.full((3, 3), 1 / 3))), np.eye(3) / 3,
                               atol=1e-14)
    grid = np.zeros((5, 5))
    grid[2, :] = 1
    target = np.zeros((5, 5))
    target[2, 2] = 1
    np.testing.assert_allclose(inverse_wigner(WignerGrid.from_array(grid)), target, atol=1e-12)


def test_overlap():
    for rho in pure_states(5, 3):
        assert overlap(wigner_transform(rho), wigner_transform(rho)) == pytest.approx(1, abs=1e-12)
    rho = random_density(5, 3)
    ones = wigner_transform(np.eye(5))
    np.testing.assert_allclose(ones.values, 1, atol=1e-12)
    assert overlap(wigner_transform(rho), ones) == pytest.approx(1, abs=1e-12)
    for seed in range(5):
        a, b = random_hermitian(5, seed), random_hermitian(5, seed + 100)
        assert abs(overlap(wigner_transform(a), wigner_transform(b)) - np.trace(a @ b).real) <= 1e-10
    with pytest.raises(DimensionMismatch):
        overlap(wigner_transform(np.eye(3) / 3), wigner_transform(np.eye(5) / 5))


@pytest.mark.parametrize("n", [3, 5, 7])
def test_marginals(n):
    fam = mub_family(n)
    for rho in states(n, 5, seed=n):
        w = wigner_transform(rho)
        for q0 in range(n):
            assert radon_marginal(w, q0, REFERENCE) == pytest.approx(w.values[q0].sum() / n)
            assert abs(radon_marginal(w, q0, REFERENCE) - rho.matrix[q0, q0].real) <= 1e-10
        for p0 in range(n):
            ket = momentum_state(p0, n)
            prob = (ket.conj() @ rho.matrix @ ket).real
            assert abs(radon_marginal(w, (n - p0) % n, S(0)) - prob) <= 1e-10
            assert abs(w.values[:, p0].sum() / n - prob) <= 1e-10
        for b in fam.indices:
            total = sum(radon_marginal(w, m, b) for m in range(n))
            assert total == pytest.approx(1, abs=1e-12)
            for m in range(n):
                assert abs(radon_marginal(w, m, b) - fam.expectation(rho, m, b)) <= 1e-10


def test_normalization():
    for n in (3, 5, 7, 11):
        for rho in states(n, 3):
            assert abs(wigner_transform(rho).normalization() - 1) <= 1e-10
