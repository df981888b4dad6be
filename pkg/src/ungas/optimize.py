"""Optimal pairwise entanglement: closed form within a stratum, numeric across strata.

All stratum indices here are merged strata, i.e. columns of a `ZetaTable`.
A class and its inverse class always share their amplitude once the
couplings of dual classes are tied, so they form one merged stratum.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .characters import ZetaTable, eigenmatrices
from .dynamics import amplitudes_from_phases, check_dual_couplings

ROUND_TRIP_TOL = 1e-9


class OptimizeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SameStratumResult:
    stratum: int
    alpha_opt: float
    concurrence_opt: float
    t_star: float
    branch_integers: tuple
    global_phase: float
    couplings: np.ndarray


@dataclass(frozen=True, eq=False)
class CrossStrataResult:
    strata: tuple
    concurrence: float
    phases: np.ndarray
    couplings: np.ndarray
    starts_used: int
    converged: bool
    grad_norm: float


def optimal_amplitude(z: ZetaTable, m: int) -> float:
    """Largest reachable ``|alpha_m|``: ``(1/n) sum_l d_l |coeff[l, m]|``."""
    return float(np.dot(z.dims, np.abs(z.coeff[:, m])) / z.n)


def optimal_concurrence_same_stratum(z: ZetaTable, m: int) -> float:
    if z.merged_kappa[m] < 2:
        raise OptimizeError(
            f"stratum {m} holds a single vertex (kappa = {z.merged_kappa[m]}); "
            "no pair lies inside it")
    return 2.0 * optimal_amplitude(z, m) ** 2


def couplings_from_phases(z: ZetaTable, theta, t: float = 1.0) -> np.ndarray:
    """Couplings, one per raw class, whose row phases at time ``t`` are ``theta``.

    Solves ``-2t P J = theta`` through ``J = Q (-theta / 2t) / n``, with each
    retained phase copied to its conjugate row.
    """
    if t <= 0:
        raise OptimizeError(f"time must be positive, got {t}")
    em = eigenmatrices(z.table)
    raw = np.empty(z.table.d_plus_1)
    for l, rows in enumerate(z.row_members):
        raw[list(rows)] = theta[l]
    J = em.Q @ (-raw / (2.0 * t)) / z.n
    if np.abs(J.imag).max() > 1e-9:
        raise OptimizeError(f"recovered couplings are not real (residual {np.abs(J.imag).max():.3e})")
    J = J.real
    dual = z.table.col_dual
    J = 0.5 * (J + J[list(dual)])
    check_dual_couplings(J, dual)
    return J


def target_phases(z: ZetaTable, m: int, branch_integers=None, Phi: float = 0.0) -> np.ndarray:
    """Row phases ``2 (n_l pi + xi_ml + Phi)`` that align every term of ``alpha_m``."""
    nl = np.zeros(z.d_prime_plus_1) if branch_integers is None else np.asarray(branch_integers, float)
    if len(nl) != z.d_prime_plus_1:
        raise OptimizeError(f"expected {z.d_prime_plus_1} branch integers, got {len(nl)}")
    return 2.0 * (nl * np.pi + z.xi[m] + Phi)


def synthesize_couplings(z: ZetaTable, m: int, t_star: float = 1.0,
                         branch_integers=None, Phi: float = 0.0) -> np.ndarray:
    theta = target_phases(z, m, branch_integers, Phi)
    J = couplings_from_phases(z, theta, t_star)
    got = abs(_raw_amplitude(z, J, t_star, z.col_members[m][0]))
    want = optimal_amplitude(z, m)
    if abs(got - want) > ROUND_TRIP_TOL:
        raise OptimizeError(f"synthesized couplings reach |alpha| = {got}, expected {want}")
    return J


def _raw_amplitude(z, J, t, cls):
    em = eigenmatrices(z.table)
    lam = em.P @ J
    return (em.Q[cls] @ np.exp(-2j * t * lam)) / z.n


def same_stratum_optimum(z: ZetaTable, m: int, t_star: float = 1.0,
                         branch_integers=None, Phi: float = 0.0) -> SameStratumResult:
    c = optimal_concurrence_same_stratum(z, m)
    J = synthesize_couplings(z, m, t_star, branch_integers, Phi)
    nl = (0,) * z.d_prime_plus_1 if branch_integers is None else tuple(int(v) for v in branch_integers)
    return SameStratumResult(
        stratum=m,
        alpha_opt=optimal_amplitude(z, m),
        concurrence_opt=c,
        t_star=t_star,
        branch_integers=nl,
        global_phase=Phi,
        couplings=J,
    )


# -- cross strata -------------------------------------------------------------

def _target_and_grad(free, z, i, j):
    theta = np.concatenate([[0.0], free])
    e = np.array(z.dims) * np.exp(1j * theta)
    a = e @ z.coeff / z.n
    ai, aj = a[i], a[j]
    mi, mj = abs(ai), abs(aj)
    T = 2.0 * mi * mj
    if mi == 0.0 or mj == 0.0:
        return T, np.zeros_like(free)
    # d a_m / d theta_l = i e_l coeff[l, m] / n
    dai = 1j * e * z.coeff[:, i] / z.n
    daj = 1j * e * z.coeff[:, j] / z.n
    dmi = (np.conj(ai) * dai).real / mi
    dmj = (np.conj(aj) * daj).real / mj
    g = 2.0 * (dmi * mj + mi * dmj)
    return T, g[1:]


def cross_strata_target(z: ZetaTable, i: int, j: int, theta) -> float:
    """``2 |alpha_i| |alpha_j|`` at row phases ``theta``."""
    a = amplitudes_from_phases(z, theta)
    return float(2 * abs(a[i]) * abs(a[j]))


def cross_strata_optimize(z: ZetaTable, i: int, j: int, starts: int = 64, seed: int = 0,
                          tol: float = 1e-10, max_iter: int = 500) -> CrossStrataResult:
    """Maximize ``2 |alpha_i| |alpha_j|`` over the row phases with ``theta_0 = 0``.

    Every point of the phase torus is reachable by some couplings, so the
    search runs unconstrained on the torus from ``starts`` random points.
    Ties between starts go to the lowest start index.
    """
    if i == j:
        raise OptimizeError("cross-strata optimization needs two different strata")
    dp1 = z.d_prime_plus_1
    for s in (i, j):
        if not 0 <= s < dp1:
            raise OptimizeError(f"stratum {s} out of range [0, {dp1})")
    rng = np.random.default_rng(seed)
    x0s = rng.uniform(0.0, 2 * np.pi, size=(starts, dp1 - 1))

    def neg(x):
        T, g = _target_and_grad(x, z, i, j)
        return -T, -g

    best = None
    any_converged = False
    for x0 in x0s:
        if dp1 == 1:
            x, T, gn = x0, cross_strata_target(z, i, j, [0.0]), 0.0
        else:
            res = minimize(neg, x0, jac=True, method="BFGS",
                           options={"gtol": tol, "maxiter": max_iter})
            x = res.x
            T, g = _target_and_grad(x, z, i, j)
            gn = float(np.linalg.norm(g))
        ok = gn <= max(tol, 1e-7)
        any_converged |= ok
        if best is None or T > best[0] + 1e-12:
            best = (T, x, gn)
    T, x, gn = best
    theta = np.mod(np.concatenate([[0.0], x]), 2 * np.pi)
    return CrossStrataResult(
        strata=(i, j),
        concurrence=float(T),
        phases=theta,
        couplings=couplings_from_phases(z, theta, 1.0),
        starts_used=starts,
        converged=bool(any_converged),
        grad_norm=gn,
    )


def bound_product(z: ZetaTable, i: int, j: int) -> float:
    """``2 |alpha_i|_opt |alpha_j|_opt``."""
    return 2.0 * optimal_amplitude(z, i) * optimal_amplitude(z, j)


def bound_conservation(kappa_i: int, kappa_j: int) -> float:
    """``1 / sqrt(kappa_i kappa_j)``: all probability shared by the two strata."""
    if kappa_i < 1 or kappa_j < 1:
        raise OptimizeError("stratum sizes must be positive")
    return 1.0 / np.sqrt(kappa_i * kappa_j)
