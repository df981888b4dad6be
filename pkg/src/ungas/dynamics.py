"""Single-excitation Heisenberg dynamics on a group scheme network.

Units have hbar = 1.  The one-excitation Hamiltonian is ``H = 2 sum_l J_l A_l``;
the constant diagonal shift of the full Heisenberg block is dropped since it
only contributes a global phase.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import EigenMatrices, ZetaTable, _conj_index

NORM_TOL = 1e-10
UNITARY_TOL = 1e-10
TRACE_TOL = 1e-10
EIG_FLOOR = 1e-14

SIGMA_YY = np.array([[0, 0, 0, -1], [0, 0, 1, 0], [0, 1, 0, 0], [-1, 0, 0, 0]], dtype=complex)


class DynamicsError(ValueError):
    pass


@dataclass(frozen=True)
class InitialState:
    """Reference qubit prepared as ``sin(theta) e^{i phi} |0> + cos(theta) |1>``."""

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi / 2 + 1e-15:
            raise DynamicsError(f"theta must lie in [0, pi/2], got {self.theta}")
        if not 0.0 <= self.phi < 2 * np.pi:
            raise DynamicsError(f"phi must lie in [0, 2 pi), got {self.phi}")


@dataclass(frozen=True, eq=False)
class AmplitudeProfile:
    t: float
    alpha: np.ndarray
    kappa: tuple

    @property
    def probabilities(self) -> np.ndarray:
        """Probability of finding the excitation anywhere in each stratum."""
        return np.array(self.kappa) * np.abs(self.alpha) ** 2

    @property
    def norm_residual(self) -> float:
        return float(abs(self.probabilities.sum() - 1.0))


def check_dual_couplings(J, dual, tol: float = 1e-12) -> None:
    J = np.asarray(J, dtype=float)
    for i, j in enumerate(dual):
        if abs(J[i] - J[j]) > tol:
            raise DynamicsError(
                f"couplings J_{i} = {J[i]} and J_{j} = {J[j]} of dual classes differ; "
                "the Hamiltonian would not be Hermitian")


def reduced_hamiltonian(A, J, dual=None) -> np.ndarray:
    """``H = 2 sum_l J_l A_l`` on the one-excitation sector."""
    A = np.asarray(A, dtype=float)
    J = np.asarray(J, dtype=float)
    if len(J) != len(A):
        raise DynamicsError(f"expected {len(A)} couplings, got {len(J)}")
    if dual is None:
        dual = [next(j for j in range(len(A)) if np.array_equal(a.T, A[j])) for a in A]
    check_dual_couplings(J, dual)
    H = 2.0 * np.einsum("l,lab->ab", J, A)
    return 0.5 * (H + H.T)


def evolve_dense(H, t: float) -> np.ndarray:
    """``exp(-i H t)`` through the eigendecomposition of the symmetric ``H``."""
    H = np.asarray(H, dtype=float)
    try:
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise DynamicsError(f"eigensolver failed: {exc}") from None
    U = (V * np.exp(-1j * w * t)) @ V.T
    res = np.abs(U @ U.conj().T - np.eye(len(H))).max()
    if res > UNITARY_TOL:
        raise DynamicsError(f"evolution operator not unitary (residual {res:.3e})")
    return U


def dense_amplitudes(U, strata, reference: int = 0, tol: float = 1e-9) -> np.ndarray:
    """Column ``reference`` of ``U`` averaged per stratum, after checking that
    it is constant on each stratum."""
    col = U[:, reference]
    strata = np.asarray(strata)
    out = np.empty(strata.max() + 1, dtype=complex)
    for m in range(len(out)):
        vals = col[strata == m]
        if np.abs(vals - vals[0]).max() > tol:
            raise DynamicsError(f"amplitude not constant on stratum {m}")
        out[m] = vals.mean()
    return out


def amplitudes(em: EigenMatrices, J, t: float) -> AmplitudeProfile:
    """Stratum amplitudes ``alpha_m(t) = (1/n) sum_l exp(-2it sum_k J_k P[l, k]) Q[m, l]``."""
    J = np.asarray(J, dtype=float)
    P, Q = em.P, em.Q
    check_dual_couplings(J, _conj_index(P.T))
    kappa = tuple(int(round(k)) for k in P[0].real)
    n = sum(kappa)
    lam = P @ J
    alpha = Q @ np.exp(-2j * t * lam) / n
    prof = AmplitudeProfile(t=t, alpha=alpha, kappa=kappa)
    if prof.norm_residual > NORM_TOL:
        raise DynamicsError(f"normalization residual {prof.norm_residual:.3e}")
    return prof


def amplitudes_from_phases(z: ZetaTable, theta) -> np.ndarray:
    """Merged-stratum amplitudes ``(1/n) sum_l d_l coeff[l, m] e^{i theta_l}``."""
    theta = np.asarray(theta, dtype=float)
    w = np.array(z.dims) * np.exp(1j * theta)
    return w @ z.coeff / z.n


def phases_from_couplings(em: EigenMatrices, J, t: float) -> np.ndarray:
    """Row phases ``theta_l = -2t sum_k J_k P[l, k]`` (real for dual-symmetric J)."""
    return (-2.0 * t * (em.P @ np.asarray(J, dtype=float))).real


# -- two-qubit state and concurrence -------------------------------------------

def reduced_density(s: InitialState, f: complex, f_prime: complex) -> np.ndarray:
    """Reduced state of two vertices with amplitudes ``f`` and ``f_prime``.

    Basis order ``|00>, |01>, |10>, |11>``; ``|01>`` is the second vertex excited.
    """
    if abs(f) ** 2 + abs(f_prime) ** 2 > 1 + 1e-12:
        raise DynamicsError("|f|^2 + |f'|^2 exceeds 1")
    c2 = np.cos(s.theta) ** 2
    h = 0.5 * np.sin(2 * s.theta)
    e = np.exp(-1j * s.phi)
    fc, fpc = np.conj(f), np.conj(f_prime)
    rho = np.array([
        [1 - c2 * (abs(f) ** 2 + abs(f_prime) ** 2), h * e * f_prime, h * e * f, 0],
        [h * np.conj(e) * fpc, c2 * abs(f_prime) ** 2, c2 * f * fpc, 0],
        [h * np.conj(e) * fc, c2 * fc * f_prime, c2 * abs(f) ** 2, 0],
        [0, 0, 0, 0],
    ], dtype=complex)
    tr = np.trace(rho).real
    if abs(tr - 1) > TRACE_TOL:
        raise DynamicsError(f"trace {tr} != 1")
    return rho


def wootters_lambdas(rho) -> np.ndarray:
    """Square roots of the eigenvalues of ``rho (Y x Y) rho* (Y x Y)``, descending.

    Taken as the singular values of ``sqrt(rho) (Y x Y) sqrt(rho*)``, which
    share them; eigenvalues of ``rho`` below ``EIG_FLOOR`` are zeroed so that
    rank-deficient states do not pick up ``sqrt(roundoff)`` errors.
    """
    rho = np.asarray(rho, dtype=complex)
    try:
        w, V = np.linalg.eigh(0.5 * (rho + rho.conj().T))
    except np.linalg.LinAlgError as exc:
        raise DynamicsError(f"eigensolver failed: {exc}") from None
    if w.min() < -1e-10:
        raise DynamicsError(f"density matrix has negative eigenvalue {w.min():.3e}")
    w = np.where(w < EIG_FLOOR, 0.0, w)
    root = (V * np.sqrt(w)) @ V.conj().T
    return np.linalg.svd(root @ SIGMA_YY @ root.conj(), compute_uv=False)


def concurrence_wootters(rho) -> float:
    """Wootters concurrence ``max(0, l1 - l2 - l3 - l4)``."""
    lam = wootters_lambdas(rho)
    return float(max(0.0, lam[0] - lam[1:].sum()))


def concurrence_pair(s: InitialState, f: complex, f_prime: complex) -> float:
    """Closed form ``2 cos^2(theta) |f| |f'|`` for the state of `reduced_density`.

    The square on the cosine follows from the one-excitation block, whose
    weights all carry ``cos^2(theta)``; it agrees with `concurrence_wootters`
    for every ``theta``.
    """
    return float(2 * np.cos(s.theta) ** 2 * abs(f) * abs(f_prime))
