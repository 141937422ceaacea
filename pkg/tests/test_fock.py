import numpy as np
import pytest

from open_boson import DomainError, TruncationError
from open_boson.fock import (DensityMatrix, FockSpace, build_ops, expect, required_dim, tail_mass,
                             thermal_density)


def test_dim_two_annihilator():
    ops = build_ops(FockSpace(2))
    assert np.array_equal(ops.annihilate, np.array([[0, 1], [0, 0]], dtype=complex))


def test_dim_three_number_diagonal():
    assert np.array_equal(np.diag(build_ops(3).number).real, [0, 1, 2])


def test_commutator_below_top_level():
    ops = build_ops(20)
    comm = ops.annihilate @ ops.create - ops.create @ ops.annihilate
    assert np.max(np.abs(np.diag(comm)[:19] - 1.0)) < 1e-14
    assert np.max(np.abs(comm - np.diag(np.diag(comm)))) == 0
    # the hard truncation breaks the identity on the last level
    assert np.diag(comm)[19].real == pytest.approx(-19.0)


def test_creation_action():
    ops = build_ops(12)
    for n in range(11):
        ket = np.zeros(12)
        ket[n] = 1
        expected = np.zeros(12)
        expected[n + 1] = np.sqrt(n + 1)
        assert np.allclose(ops.create @ ket, expected, atol=1e-15)


def test_create_is_adjoint():
    ops = build_ops(9)
    assert np.array_equal(ops.create, ops.annihilate.conj().T)


@pytest.mark.parametrize("dim", [0, 1, 2.5])
def test_small_space_rejected(dim):
    with pytest.raises(DomainError):
        FockSpace(dim)


def test_thermal_density_vacuum():
    rho = thermal_density(16, 0.0).rho
    expected = np.zeros((16, 16))
    expected[0, 0] = 1
    assert np.array_equal(rho, expected)


def test_thermal_density_unit_occupation():
    rho = thermal_density(80, 1.0)
    assert rho.rho[0, 0].real == pytest.approx(0.5, rel=1e-12)
    assert rho.rho[1, 1].real == pytest.approx(0.25, rel=1e-12)
    assert np.all(np.diff(rho.populations()) < 0)


@pytest.mark.parametrize("n_bar", [0.3, 2.0, 4.5])
def test_thermal_density_mean(n_bar):
    space = FockSpace.for_occupation(n_bar)
    rho = thermal_density(space, n_bar)
    assert expect(rho, build_ops(space).number).real == pytest.approx(n_bar, abs=1e-9)


def test_thermal_density_truncation_error():
    with pytest.raises(TruncationError) as info:
        thermal_density(20, 5.0)
    assert info.value.required_dim == required_dim(5.0)
    assert tail_mass(5.0, required_dim(5.0)) < 1e-10


def test_required_dim_rule():
    assert required_dim(0.0) == 16
    assert required_dim(0.01) == 16
    # ceil(1.25 * ln(1e-10 * 6) / ln(5/6))
    assert required_dim(5.0) == 146


def test_expect_examples():
    ops = build_ops(10)
    rho = DensityMatrix.fock(10, 3)
    assert expect(rho, np.eye(10)) == pytest.approx(1.0)
    assert expect(rho, ops.number) == pytest.approx(3.0)
    rho2 = thermal_density(FockSpace.for_occupation(2.0), 2.0)
    assert expect(rho2, build_ops(rho2.dim).number).real == pytest.approx(2.0, abs=1e-9)
    with pytest.raises(DomainError):
        expect(rho, np.eye(4))


def test_expect_linear(rng):
    dim = 8
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    psi /= np.linalg.norm(psi)
    rho = DensityMatrix(np.outer(psi, psi.conj()))
    for _ in range(10):
        x = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        y = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        c = complex(rng.normal(), rng.normal())
        assert expect(rho, x + c * y) == pytest.approx(expect(rho, x) + c * expect(rho, y), abs=1e-12)
    hermitian = a + a.conj().T
    assert abs(expect(rho, hermitian).imag) < 1e-10
    assert expect(rho, a) == pytest.approx(np.trace(a @ rho.rho), abs=1e-12)


def test_density_matrix_invariants():
    with pytest.raises(DomainError):
        DensityMatrix(np.diag([0.5, 0.6]))
    with pytest.raises(DomainError):
        DensityMatrix(np.array([[0.5, 0.1], [0.2, 0.5]]))
    with pytest.raises(DomainError):
        DensityMatrix(np.diag([1.5, -0.5]))
    unchecked = DensityMatrix(np.diag([1.5, -0.5]), check=False)
    assert unchecked.min_eigenvalue() == pytest.approx(-0.5)
