"""Tests for the truncated Fock space and the coherent-state identities."""

import math

import numpy as np
import pytest

from modlab.errors import DimensionMismatch, TruncationBudgetExceeded
from modlab.fock import (
    FockVector,
    StandardSubspaceData,
    TruncatedFock,
    annihilate,
    coherent_entropy_check,
    create,
    dgamma,
    gamma,
    gamma_adjoint_check,
    number_estimate_check,
    segal_field,
    truncation_tolerance,
    weyl,
    weyl_derivative_check,
    weyl_relation_residual,
    wdgamma_identity_check,
)
from modlab.linalg import dagger, expi_hermitian
from modlab.modular import random_unitary


@pytest.fixture(scope="module")
def tf():
    return TruncatedFock(2, 12)


@pytest.fixture(scope="module")
def tf_small():
    return TruncatedFock(2, 8)


def basis_vector(tf, occ):
    v = np.zeros(tf.dim, dtype=complex)
    v[tf.index[occ]] = 1.0
    return v


class TestSpace:
    def test_dimension(self, tf):
        # sum_{k=0}^{12} (k+1) states for two modes
        assert tf.dim == sum(k + 1 for k in range(13))

    def test_vacuum_annihilated(self, tf):
        for m in range(tf.modes):
            assert np.linalg.norm(tf.lower[m] @ tf.vacuum) == 0.0

    def test_ccr_below_cutoff(self, tf):
        p = tf.sector_projector(tf.cutoff - 1)
        for i in range(2):
            for j in range(2):
                comm = tf.lower[i] @ tf.raise_op(j) - tf.raise_op(j) @ tf.lower[i]
                expected = np.eye(tf.dim) if i == j else np.zeros((tf.dim, tf.dim))
                assert np.linalg.norm(p @ (comm - expected) @ p, 2) <= 1e-14

    def test_particle_degree(self, tf):
        v = basis_vector(tf, (2, 1)) + 0.3 * basis_vector(tf, (0, 1))
        assert tf.particle_degree(v) == 3


class TestSegalField:
    def test_zero(self, tf):
        assert np.linalg.norm(segal_field(tf, np.zeros(2))) == 0.0

    def test_vacuum_two_point_function(self, tf):
        rng = np.random.default_rng(0)
        for _ in range(5):
            chi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            phi = segal_field(tf, chi)
            got = np.vdot(tf.vacuum, phi @ phi @ tf.vacuum)
            assert abs(got - np.linalg.norm(chi) ** 2 / 2.0) <= 1e-13 * np.linalg.norm(chi) ** 2

    def test_hermitian(self, tf):
        rng = np.random.default_rng(1)
        chi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        phi = segal_field(tf, chi)
        assert np.linalg.norm(phi - dagger(phi)) <= 1e-14 * np.linalg.norm(phi)

    def test_real_linearity(self, tf):
        chi, xi = np.array([0.3, -0.1j]), np.array([0.2j, 0.5])
        lhs = segal_field(tf, 2.0 * chi + 3.0 * xi)
        rhs = 2.0 * segal_field(tf, chi) + 3.0 * segal_field(tf, xi)
        assert np.allclose(lhs, rhs)


class TestWeyl:
    def test_w0_is_identity(self, tf):
        assert np.allclose(weyl(tf, np.zeros(2)), np.eye(tf.dim))

    def test_guard(self, tf):
        with pytest.raises(TruncationBudgetExceeded):
            weyl(tf, np.array([0.6, 0.0]))

    def test_weyl_relation(self, tf):
        pairs = [
            (np.array([0.5, 0.0]), np.array([0.0 + 0.5j, 0.0])),
            (np.array([0.5, 0.0]), np.array([0.35, 0.35j])),
        ]
        rng = np.random.default_rng(2)
        for _ in range(5):
            c = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            pairs.append((0.5 * c / np.linalg.norm(c), 0.5 * x / np.linalg.norm(x)))
        for chi, xi in pairs:
            assert weyl_relation_residual(tf, chi, xi) <= 1e-6

    def test_weyl_inverse_on_low_sectors(self, tf):
        chi = np.array([0.5, 0.0])
        p = tf.sector_projector(4)
        prod = weyl(tf, chi) @ weyl(tf, -chi) - np.eye(tf.dim)
        assert np.linalg.norm(p @ prod @ p, 2) <= 1e-8

    def test_unitarity_on_low_sectors(self, tf):
        chi = np.array([0.3, 0.4j])
        w = weyl(tf, chi)
        p = tf.sector_projector(tf.cutoff // 2)
        defect = np.linalg.norm(p @ (dagger(w) @ w - np.eye(tf.dim)) @ p, 2)
        assert defect <= truncation_tolerance(tf.cutoff - tf.cutoff // 2, 0.5)

    def test_phase_antisymmetry_via_commutator(self, tf):
        # W(chi) W(xi) W(chi)^-1 W(xi)^-1 = exp(-i Im<chi, xi>) on low sectors
        chi, xi = np.array([0.4, 0.0]), np.array([0.2j, 0.3])
        comm = (weyl(tf, chi) @ weyl(tf, xi) @ weyl(tf, -chi) @ weyl(tf, -xi))
        phase = np.exp(-1j * np.imag(np.vdot(chi, xi)))
        p = tf.sector_projector(4)
        assert np.linalg.norm(p @ (comm - phase * np.eye(tf.dim)) @ p, 2) <= 1e-6


class TestDGamma:
    def test_number_operator(self, tf):
        assert np.allclose(dgamma(tf, np.eye(2)), tf.number_op())

    def test_one_particle_block(self, tf):
        rng = np.random.default_rng(3)
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        h = (g + dagger(g)) / 2
        idx = tf.sector_slice(1)
        block = dgamma(tf, h)[np.ix_(idx, idx)]
        # basis order within the sector is lexicographic in occupations:
        # (0,1) carries mode-1, (1,0) carries mode-0
        perm = [0, 1] if tf.basis[idx[0]] == (0, 1) else [1, 0]
        hp = h[np.ix_([1, 0], [1, 0])] if perm == [0, 1] else h
        assert np.allclose(block, hp)

    def test_kills_vacuum(self, tf):
        rng = np.random.default_rng(4)
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        h = (g + dagger(g)) / 2
        assert np.linalg.norm(dgamma(tf, h) @ tf.vacuum) == 0.0

    def test_exponentiation_matches_gamma(self, tf):
        # exp(i t dGamma(h)) against the ladder-built Gamma(exp(i t h));
        # both are sector-exact so they must agree to rounding
        rng = np.random.default_rng(5)
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        h = (g + dagger(g)) / 2
        t = 0.7
        lhs = expi_hermitian(t * dgamma(tf, h))
        rhs = gamma(tf, expi_hermitian(t * h))
        p = tf.sector_projector(tf.cutoff - 2)
        assert np.linalg.norm(p @ (lhs - rhs) @ p, 2) <= 1e-8

    def test_additive_on_product_sectors(self, tf):
        h = np.diag([1.0, 2.0]).astype(complex)
        dg = dgamma(tf, h)
        v = basis_vector(tf, (2, 3))
        assert np.linalg.norm(dg @ v - (2 * 1.0 + 3 * 2.0) * v) <= 1e-13


class TestGammaAdjoint:
    def test_identity(self, tf):
        assert gamma_adjoint_check(tf, np.eye(2), np.array([0.3, 0.1])) <= 1e-12

    def test_single_mode_phase(self):
        tf1 = TruncatedFock(1, 12)
        u = np.array([[np.exp(0.7j)]])
        assert gamma_adjoint_check(tf1, u, np.array([0.4])) <= 1e-8

    def test_random_unitary(self, tf):
        rng = np.random.default_rng(6)
        u = random_unitary(2, rng)
        assert gamma_adjoint_check(tf, u, np.array([0.5, 0.0])) <= 1e-6


class TestNumberEstimate:
    def test_vacuum_one_point(self, tf):
        psi = FockVector.from_array(tf, tf.vacuum)
        chi = np.array([0.3, 0.4])
        rep = number_estimate_check(tf, chi, psi, 1)
        assert abs(rep["lhs"] - np.linalg.norm(chi) / math.sqrt(2)) <= 1e-13
        assert rep["pass"]

    def test_zero_amplitude(self, tf):
        psi = FockVector.from_array(tf, tf.vacuum)
        rep = number_estimate_check(tf, np.zeros(2), psi, 2)
        assert rep["lhs"] == 0.0 and rep["pass"]

    def test_random_degree_three(self, tf):
        rng = np.random.default_rng(7)
        idx3 = tf.sector_slice(3)
        for k in range(100):
            v = np.zeros(tf.dim, dtype=complex)
            v[idx3] = rng.standard_normal(idx3.size) + 1j * rng.standard_normal(idx3.size)
            v[tf.index[(0, 0)]] = 0.2
            psi = FockVector.from_array(tf, v)
            chi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            n_pow = 1 + k % 4
            rep = number_estimate_check(tf, chi, psi, n_pow)
            assert rep["pass"] and rep["margin"] > 0.0

    def test_budget_guard(self, tf):
        psi = FockVector.from_array(tf, basis_vector(tf, (6, 5)))
        with pytest.raises(TruncationBudgetExceeded):
            number_estimate_check(tf, np.array([0.1, 0.0]), psi, 3)


class TestWeylDerivative:
    def test_linear_path_from_vacuum(self, tf):
        psi = FockVector.from_array(tf, tf.vacuum)
        chi = np.array([0.3, 0.2j])
        res = weyl_derivative_check(tf, lambda t: t * chi, chi, psi)
        assert res <= 1e-6 * (1 + psi.norm)
        # the derivative itself is i a*(chi) vacuum / sqrt(2)
        analytic = 1j * create(tf, chi) @ tf.vacuum / math.sqrt(2)
        w_plus = weyl(tf, 1e-4 * chi) @ tf.vacuum
        w_minus = weyl(tf, -1e-4 * chi) @ tf.vacuum
        assert np.linalg.norm((w_plus - w_minus) / 2e-4 - analytic) <= 1e-6

    def test_constant_path(self, tf):
        psi = FockVector.from_array(tf, tf.vacuum)
        res = weyl_derivative_check(tf, lambda t: np.zeros(2), np.zeros(2), psi)
        assert res == 0.0

    def test_exponential_path(self, tf):
        v = basis_vector(tf, (1, 1)) / 1.0
        psi = FockVector.from_array(tf, v)
        xi = np.array([0.2, 0.1])
        k = 1.3
        res = weyl_derivative_check(tf, lambda t: (np.exp(1j * t * k) - 1.0) * xi,
                                    1j * k * xi, psi)
        assert res <= 1e-6 * (1 + psi.norm)


class TestWDGamma:
    def test_zero_displacement(self, tf):
        assert wdgamma_identity_check(tf, np.eye(2), np.zeros(2)) <= 1e-14

    def test_unit_k_small_xi(self, tf):
        xi = np.array([0.1, 0.0])
        assert 0.5 * np.vdot(xi, xi).real == pytest.approx(0.005)
        assert wdgamma_identity_check(tf, np.eye(2), xi) <= 1e-6

    def test_random_k(self, tf):
        rng = np.random.default_rng(8)
        for _ in range(5):
            g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            k = (g + dagger(g)) / 2
            xi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            xi = 0.3 * xi / np.linalg.norm(xi)
            assert wdgamma_identity_check(tf, k, xi) <= 1e-5


class TestCoherentEntropy:
    def test_equal_states_zero(self, tf):
        ssd = StandardSubspaceData.two_mode(2.0)
        rep = coherent_entropy_check(tf, ssd, np.zeros(2), np.array([0.3, 0.1j]))
        assert abs(rep["matrix_value"]) <= 1e-8

    def test_spectral_closed_form(self, tf):
        # displacement along the eigenvector with modular weight +log(2)
        ssd = StandardSubspaceData.two_mode(2.0)
        rep = coherent_entropy_check(tf, ssd, np.array([0.0, 0.2]), np.array([0.3, 0.1j]))
        assert rep["analytic"] == pytest.approx(0.5 * math.log(2.0) * 0.04)
        assert rep["analytic"] == pytest.approx(0.013863, abs=5e-7)
        assert rep["relative_deviation"] <= 1e-4
        assert rep["operator_residual"] <= 1e-5

    def test_random_subspaces(self, tf):
        rng = np.random.default_rng(9)
        for _ in range(5):
            lam = rng.uniform(1.2, 3.0)
            ssd = StandardSubspaceData.two_mode(lam)
            h = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            h = 0.2 * h / np.linalg.norm(h)
            chi = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            chi = 0.3 * chi / np.linalg.norm(chi)
            rep = coherent_entropy_check(tf, ssd, h, chi)
            assert rep["relative_deviation"] <= 1e-4

    def test_modular_relation_enforced(self):
        from modlab.modular import AntilinearMap
        with pytest.raises(DimensionMismatch):
            StandardSubspaceData(np.diag([2.0, 2.0]).astype(complex),
                                 AntilinearMap(np.array([[0, 1], [1, 0]], dtype=complex)))


class TestTruncationMonotonicity:
    def test_weyl_relation_improves_with_cutoff(self):
        chi, xi = np.array([0.5, 0.0]), np.array([0.0 + 0.5j, 0.0])
        res = []
        for n in (6, 8, 10):
            tfn = TruncatedFock(2, n)
            res.append(weyl_relation_residual(tfn, chi, xi, max_particles=3))
        assert res[1] <= res[0] and res[2] <= res[1]

    def test_wdgamma_improves_with_cutoff(self):
        xi = np.array([0.45, 0.2])
        res = []
        for n in (6, 8, 10):
            tfn = TruncatedFock(2, n)
            res.append(wdgamma_identity_check(tfn, np.eye(2), xi, max_particles=3))
        assert res[1] <= res[0] and res[2] <= res[1]


class TestGammaConstruction:
    def test_gamma_unitary_sectorwise(self, tf_small):
        rng = np.random.default_rng(10)
        u = random_unitary(2, rng)
        g = gamma(tf_small, u)
        assert np.linalg.norm(dagger(g) @ g - np.eye(tf_small.dim), 2) <= 1e-12

    def test_gamma_preserves_sectors(self, tf_small):
        rng = np.random.default_rng(11)
        u = random_unitary(2, rng)
        g = gamma(tf_small, u)
        n_op = tf_small.number_op()
        assert np.linalg.norm(g @ n_op - n_op @ g, 2) <= 1e-12

    def test_annihilate_adjoint(self, tf_small):
        chi = np.array([0.2, 0.7j])
        assert np.allclose(annihilate(tf_small, chi), dagger(create(tf_small, chi)))
