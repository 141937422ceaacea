"""Truncated Fock-space operators and density matrices (dense numpy)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, TruncationError

TAIL_TOLERANCE = 1e-10
HEADROOM = 1.25
MIN_DIM = 16


def tail_mass(n_bar: float, dim: int) -> float:
    """Thermal population lying at or above level ``dim``."""
    if n_bar <= 0:
        return 0.0
    return (n_bar / (n_bar + 1.0)) ** dim


def required_dim(n_bar: float, tail: float = TAIL_TOLERANCE, headroom: float = HEADROOM,
                 floor: int = MIN_DIM) -> int:
    """Truncation size keeping the thermal tail below ``tail`` with headroom."""
    if n_bar < 0:
        raise DomainError("mean occupation must be non-negative")
    if n_bar == 0:
        return floor
    bare = math.log(tail * (n_bar + 1.0)) / math.log(n_bar / (n_bar + 1.0))
    return max(floor, math.ceil(headroom * bare))


@dataclass(frozen=True)
class FockSpace:
    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise DomainError(f"Fock space needs an integer dim >= 2, got {self.dim!r}")

    @classmethod
    def for_occupation(cls, n_bar: float) -> "FockSpace":
        return cls(required_dim(n_bar))


@dataclass(frozen=True, eq=False)
class LadderOps:
    annihilate: np.ndarray
    create: np.ndarray
    number: np.ndarray

    @property
    def dim(self) -> int:
        return self.annihilate.shape[0]


def build_ops(space: FockSpace | int) -> LadderOps:
    if not isinstance(space, FockSpace):
        space = FockSpace(space)
    a = np.diag(np.sqrt(np.arange(1, space.dim, dtype=float)), k=1).astype(complex)
    return LadderOps(annihilate=a, create=a.conj().T.copy(), number=np.diag(np.arange(space.dim)).astype(complex))


class DensityMatrix:
    """A density operator on a truncated Fock basis.

    Construction checks the invariants (hermitian, unit trace, positive
    semidefinite) at the tolerances below unless ``check=False``.
    """

    HERMITIAN_TOL = 1e-10
    TRACE_TOL = 1e-10
    EIGEN_TOL = 1e-8

    def __init__(self, rho, check: bool = True):
        rho = np.array(rho, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1] or rho.shape[0] < 2:
            raise DomainError(f"density matrix must be square with dim >= 2, got shape {rho.shape}")
        self.rho = rho
        if check:
            self.validate()

    @property
    def dim(self) -> int:
        return self.rho.shape[0]

    def trace_defect(self) -> float:
        return abs(np.trace(self.rho) - 1.0)

    def hermiticity_defect(self) -> float:
        return float(np.max(np.abs(self.rho - self.rho.conj().T)))

    def min_eigenvalue(self) -> float:
        # symmetrize so eigvalsh sees an exactly hermitian matrix
        herm = 0.5 * (self.rho + self.rho.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.rho)).copy()

    def validate(self) -> None:
        if self.hermiticity_defect() >= self.HERMITIAN_TOL:
            raise DomainError(f"density matrix not hermitian: {self.hermiticity_defect():.3e}")
        if self.trace_defect() >= self.TRACE_TOL:
            raise DomainError(f"density matrix trace defect {self.trace_defect():.3e}")
        if self.min_eigenvalue() <= -self.EIGEN_TOL:
            raise DomainError(f"density matrix has negative eigenvalue {self.min_eigenvalue():.3e}")

    @classmethod
    def fock(cls, dim: int, n: int) -> "DensityMatrix":
        """Projector onto the number state ``|n><n|``."""
        if not 0 <= n < dim:
            raise DomainError(f"number state {n} outside a basis of size {dim}")
        rho = np.zeros((dim, dim), dtype=complex)
        rho[n, n] = 1.0
        return cls(rho)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def thermal_density(space: FockSpace | int, n_bar: float) -> DensityMatrix:
    if not isinstance(space, FockSpace):
        space = FockSpace(space)
    if n_bar < 0:
        raise DomainError("mean occupation must be non-negative")
    if tail_mass(n_bar, space.dim) >= TAIL_TOLERANCE:
        raise TruncationError(f"dim {space.dim} leaves thermal tail {tail_mass(n_bar, space.dim):.2e}",
                              required_dim(n_bar))
    n = np.arange(space.dim)
    pops = (n_bar / (n_bar + 1.0)) ** n / (n_bar + 1.0)
    return DensityMatrix(np.diag(pops / pops.sum()))


def expect(rho: DensityMatrix | np.ndarray, obs: np.ndarray) -> complex:
    """``tr(obs @ rho)``."""
    mat = rho.rho if isinstance(rho, DensityMatrix) else np.asarray(rho)
    obs = np.asarray(obs)
    if obs.shape != mat.shape:
        raise DomainError(f"observable shape {obs.shape} does not match state shape {mat.shape}")
    # tr(AB) without forming the product
    return complex(np.sum(obs * mat.T))
