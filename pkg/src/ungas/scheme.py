"""Adjacency matrices, idempotents and axiom checks for group association schemes.

Relation ``R_i`` holds ``(alpha, beta)`` when ``alpha beta^{-1}`` lies in class
``C_i``.  The reference vertex is the identity element, so stratum ``i`` is
the class ``C_i`` itself.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import CharacterTable, EigenMatrices, eigenmatrices, intersection_numbers_by_counting
from .groups import ConjugacyPartition, GroupTable

IDEMPOTENT_TOL = 1e-9


class SchemeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SchemeData:
    n: int
    A: tuple
    E: tuple
    strata: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    intersection: np.ndarray

    @property
    def d_plus_1(self) -> int:
        return len(self.A)


def adjacency_matrices(g: GroupTable, p: ConjugacyPartition) -> list:
    """``(A_i)[alpha, beta] = 1`` iff ``alpha beta^{-1}`` is in class ``i``."""
    rel = p.class_of[g.mul[:, g.inv]]
    return [(rel == i).astype(np.int64) for i in range(len(p))]


def bose_mesner_check(A, t) -> int:
    """Largest entry of ``|A_i A_j - sum_k p_ij^k A_k|`` over all ``(i, j)``.

    Raises `SchemeError` naming the first ``(i, j)`` with a nonzero residual.
    """
    A = np.asarray(A, dtype=np.int64)
    t = np.asarray(t, dtype=np.int64)
    worst = 0
    for i in range(len(A)):
        for j in range(len(A)):
            lhs = A[i] @ A[j]
            rhs = np.tensordot(t[i, j], A, axes=1)
            r = int(np.abs(lhs - rhs).max())
            if r:
                raise SchemeError(f"A_{i} A_{j} is not sum_k p_{i}{j}^k A_k (residual {r})")
            worst = max(worst, r)
    return worst


def idempotents(A, em: EigenMatrices) -> list:
    """Primitive idempotents ``E_i = (1/n) sum_j Q[j, i] A_j``."""
    A = np.asarray(A, dtype=float)
    n = A.shape[1]
    E = np.einsum("ji,jab->iab", em.Q, A) / n
    eye = np.eye(n)
    worst = 0.0
    for i in range(len(E)):
        for j in range(len(E)):
            target = E[i] if i == j else 0.0
            worst = max(worst, np.abs(E[i] @ E[j] - target).max())
    worst = max(worst, np.abs(E.sum(axis=0) - eye).max(), np.abs(E[0] - 1.0 / n).max())
    for j in range(len(A)):
        worst = max(worst, np.abs(np.einsum("i,iab->ab", em.P[:, j], E) - A[j]).max())
    if worst > IDEMPOTENT_TOL:
        raise SchemeError(f"idempotent residual {worst:.3e} exceeds {IDEMPOTENT_TOL}")
    return list(E)


def stratify(g: GroupTable, p: ConjugacyPartition) -> np.ndarray:
    """Stratum index of every vertex relative to the identity."""
    return np.array(p.class_of, dtype=np.int64)


def build_scheme(g: GroupTable, p: ConjugacyPartition, ct: CharacterTable) -> SchemeData:
    A = adjacency_matrices(g, p)
    t = intersection_numbers_by_counting(g, p)
    bose_mesner_check(A, t)
    em = eigenmatrices(ct)
    E = idempotents(A, em)
    return SchemeData(n=g.n, A=tuple(A), E=tuple(E), strata=stratify(g, p),
                      P=em.P, Q=em.Q, intersection=t)


def verify_axioms(A) -> dict:
    """Check the association scheme axioms on a list of 0/1 matrices.

    AS3' (every relation symmetric) is reported but not required.
    """
    A = np.asarray(A, dtype=np.int64)
    n = A.shape[1]
    out = {
        "AS1": bool(np.array_equal(A.sum(axis=0), np.ones((n, n), dtype=np.int64))
                    and np.all(A.reshape(len(A), -1).max(axis=1) == 1)),
        "AS2": bool(np.array_equal(A[0], np.eye(n, dtype=np.int64))),
        "AS3": all(any(np.array_equal(a.T, b) for b in A) for a in A),
        "AS3_symmetric": all(np.array_equal(a, a.T) for a in A),
    }
    ok = True
    for a in A:
        for b in A:
            prod = a @ b
            for c in A:
                vals = np.unique(prod[c == 1])
                if len(vals) != 1:
                    ok = False
    out["AS4"] = ok
    return out


def transpose_map(A) -> list:
    """Index ``j`` with ``A_i^T == A_j`` for each ``i``."""
    out = []
    for a in A:
        out.append(next(j for j, b in enumerate(A) if np.array_equal(a.T, b)))
    return out


def spectral_residual(A, P, dims) -> float:
    """Distance between the spectrum of each ``A_j`` and the eigenvalues
    ``P[i, j]`` repeated ``d_i^2`` times."""
    worst = 0.0
    for j, a in enumerate(A):
        ev = np.linalg.eigvals(np.asarray(a, dtype=float))
        target = np.concatenate([[P[i, j]] * (d * d) for i, d in enumerate(dims)])
        remaining = list(target)
        for x in ev:
            k = int(np.argmin(np.abs(np.array(remaining) - x)))
            worst = max(worst, abs(remaining.pop(k) - x))
    return float(worst)
