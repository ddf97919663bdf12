"""SU(2) Liouville-space basis and the mu-dependent eigensystem.

State bookkeeping uses the time-dependent operator basis

    H = (omega*sz + eps*sx)/2,  L = (eps*sz - omega*sx)/2,  C = (Omega/2)*sy,

whose expectation values form the real vector v = (h, l, c).  The identity
coefficient is carried as a separate scalar (it is a constant of motion), so
a 3x3 space is enough.  In this basis the factorized generator is

    B'(mu) = i * [[0, mu, 0], [-mu, 0, 1], [0, -1, 0]],

a Hermitian matrix with spectrum {0, +kappa, -kappa}, kappa = sqrt(1+mu^2).
``eigensystem`` returns closed-form diagonalizers; the eigenvalue/column
pairing is verified by direct substitution at construction rather than taken
from any printed convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotNormalized


@dataclass(frozen=True)
class LiouvilleVec:
    """Real expectation-value triple; id_coeff rides along unchanged."""

    h: float
    l: float
    c: float
    id_coeff: float = 1.0

    def as_array(self) -> np.ndarray:
        return np.array([self.h, self.l, self.c], dtype=float)

    @staticmethod
    def from_array(arr, id_coeff: float = 1.0) -> "LiouvilleVec":
        h, l, c = (float(x) for x in arr)
        return LiouvilleVec(h=h, l=l, c=c, id_coeff=id_coeff)


@dataclass(frozen=True)
class GeneratorMatrix:
    """The 3x3 generator B'(mu) together with the mu it was built from."""

    entries: np.ndarray
    mu: float


@dataclass(frozen=True)
class SpinorState:
    """Two-level amplitudes (amp0, amp1)."""

    amp0: complex
    amp1: complex

    def norm(self) -> float:
        return float(np.sqrt(abs(self.amp0) ** 2 + abs(self.amp1) ** 2))

    def as_array(self) -> np.ndarray:
        return np.array([self.amp0, self.amp1], dtype=complex)


@dataclass(frozen=True)
class EigenSystem:
    """Closed-form eigensystem of B'(mu).

    Columns of ``p`` are the eigenoperator coefficient vectors ordered as
    eigenvalues (0, +kappa, -kappa); rows of ``p_inv`` are the bi-orthogonal
    partners.  The zero-branch column is scaled to (1, 0, mu) so the matrix
    stays regular through mu = 0.
    """

    mu: float
    kappa: float
    eigenvalues: tuple
    p: np.ndarray
    p_inv: np.ndarray


def kappa_of(mu: float) -> float:
    """kappa(mu) = sqrt(1 + mu^2)."""
    return float(np.hypot(1.0, mu))


def bprime(mu: float) -> GeneratorMatrix:
    """Generator B'(mu) = i*[[0, mu, 0], [-mu, 0, 1], [0, -1, 0]]."""
    m = np.array(
        [[0.0, mu, 0.0], [-mu, 0.0, 1.0], [0.0, -1.0, 0.0]], dtype=float
    )
    return GeneratorMatrix(entries=1j * m, mu=float(mu))


def real_generator(mu: float) -> np.ndarray:
    """-i*B'(mu): the real antisymmetric matrix driving dv/dtheta."""
    return np.array(
        [[0.0, mu, 0.0], [-mu, 0.0, 1.0], [0.0, -1.0, 0.0]], dtype=float
    )


def eigensystem(mu: float) -> EigenSystem:
    """Diagonalize B'(mu) in closed form.

    The eigenvalue order is (0, +kappa, -kappa).  Which of the two complex
    columns belongs to +kappa is fixed here by checking B'p = lambda*p
    directly, since sign conventions for the printed eigenvectors are easy
    to get wrong.
    """
    mu = float(mu)
    k = kappa_of(mu)
    k2 = k * k
    col0 = np.array([1.0, 0.0, mu], dtype=complex)
    col_plus = np.array([-mu, 1j * k, 1.0], dtype=complex) / (2.0 * k2)
    col_minus = col_plus.conjugate()
    p = np.column_stack([col0, col_plus, col_minus])
    p_inv = np.array(
        [
            [1.0 / k2, 0.0, mu / k2],
            [-mu, -1j * k, 1.0],
            [-mu, 1j * k, 1.0],
        ],
        dtype=complex,
    )

    b = bprime(mu).entries
    lams = (0.0, k, -k)
    for idx, lam in enumerate(lams):
        residual = np.abs(b @ p[:, idx] - lam * p[:, idx]).max()
        if residual > 1e-10 * max(1.0, k):
            raise ArithmeticError(
                f"eigenpair verification failed for lambda={lam:g} at mu={mu:g} "
                f"(residual {residual:.3e})"
            )
    return EigenSystem(mu=mu, kappa=k, eigenvalues=lams, p=p, p_inv=p_inv)


def pauli_expectations(psi: SpinorState) -> tuple:
    """(<sx>, <sy>, <sz>) of a spinor, no normalization applied."""
    a0, a1 = psi.amp0, psi.amp1
    z = np.conjugate(a0) * a1
    sx = 2.0 * z.real
    sy = 2.0 * z.imag
    sz = abs(a0) ** 2 - abs(a1) ** 2
    return float(sx), float(sy), float(sz)


def expectations_from_spinor(psi: SpinorState, omega: float, epsilon: float) -> LiouvilleVec:
    """Map a normalized spinor onto the (h, l, c) expectation triple."""
    if abs(psi.norm() - 1.0) > 1e-6:
        raise NotNormalized(f"spinor norm {psi.norm():.9f} deviates from 1 by > 1e-6")
    sx, sy, sz = pauli_expectations(psi)
    omega_rabi = float(np.hypot(omega, epsilon))
    h = 0.5 * (omega * sz + epsilon * sx)
    l = 0.5 * (epsilon * sz - omega * sx)
    c = 0.5 * omega_rabi * sy
    return LiouvilleVec(h=h, l=l, c=c, id_coeff=1.0)
