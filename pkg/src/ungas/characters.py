"""Character tables, intersection numbers, eigenmatrices and the merged real table.

Row ``l`` of a character table is an irreducible character, column ``m`` a
conjugacy class in the order produced by `ungas.groups.conjugacy_classes`.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .groups import (
    ConjugacyPartition,
    FamilySpec,
    GroupTable,
    build_family,
    conjugacy_classes,
    sl2_elements,
)

VERIFY_TOL = 1e-9
INTEGER_TOL = 1e-6
MAX_RESAMPLES = 8


class CharacterError(ValueError):
    pass


def _ro(a, dtype=None):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class CharacterTable:
    n: int
    chi: np.ndarray
    dims: tuple
    kappa: tuple
    row_dual: tuple
    col_dual: tuple
    row_labels: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "chi", _ro(self.chi, complex))

    @property
    def d_plus_1(self) -> int:
        return self.chi.shape[0]

    @property
    def is_real(self) -> bool:
        return bool(np.all(np.abs(self.chi.imag) <= VERIFY_TOL))


@dataclass(frozen=True, eq=False)
class EigenMatrices:
    P: np.ndarray
    Q: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "P", _ro(self.P, complex))
        object.__setattr__(self, "Q", _ro(self.Q, complex))

    @property
    def n(self) -> int:
        return int(round(self.P[0].real.sum()))


@dataclass(frozen=True, eq=False)
class ZetaTable:
    """Real table obtained by merging each class with its inverse class and
    keeping one character of each complex-conjugate pair.

    ``zeta[l, m]`` sums the retained character ``l`` over the members of
    merged class ``m``; it is the coefficient that couples ``J_m`` into the
    phase of row ``l``.  ``coeff[l, m]`` sums the members of row pair ``l``
    at a single vertex of merged class ``m``; it is the coefficient of
    ``e^{i theta_l}`` in the transition amplitude.  For real tables both
    equal the character table.
    """

    n: int
    zeta: np.ndarray
    coeff: np.ndarray
    dims: tuple
    merged_kappa: tuple
    class_kappa: tuple
    col_members: tuple
    row_members: tuple
    table: CharacterTable

    def __post_init__(self):
        object.__setattr__(self, "zeta", _ro(self.zeta, float))
        object.__setattr__(self, "coeff", _ro(self.coeff, float))

    @property
    def d_prime_plus_1(self) -> int:
        return self.zeta.shape[0]

    @property
    def xi(self) -> np.ndarray:
        """``xi[m, l]``: half the phase of ``zeta[l, m]`` (0 or pi/2)."""
        return np.where(self.zeta.T < 0, np.pi / 2, 0.0)

    @property
    def n_real_rows(self) -> int:
        return sum(len(r) == 1 for r in self.row_members)

    @property
    def n_complex_columns(self) -> int:
        return sum(len(c) for c in self.col_members if len(c) == 2)

    def merged_index(self, cls: int) -> int:
        """Merged stratum containing raw class ``cls``."""
        for m, members in enumerate(self.col_members):
            if cls in members:
                return m
        raise IndexError(cls)


# -- verification -------------------------------------------------------------

def verify_character_table(ct: CharacterTable) -> dict:
    chi, n = ct.chi, ct.n
    kappa = np.array(ct.kappa, dtype=float)
    col = chi.T @ chi.conj()
    col_res = np.abs(col - np.diag(n / kappa)).max()
    row = (chi * kappa) @ chi.conj().T
    row_res = np.abs(row - n * np.eye(len(kappa))).max()
    dual_res = np.abs(chi[:, list(ct.col_dual)] - chi.conj()).max()
    rdual_res = np.abs(chi[list(ct.row_dual), :] - chi.conj()).max()
    res = {
        "column_orthogonality": float(col_res),
        "row_orthogonality": float(row_res),
        "column_dual": float(dual_res),
        "row_dual": float(rdual_res),
    }
    for key, val in res.items():
        if val > VERIFY_TOL:
            raise CharacterError(f"{key} residual {val:.3e} exceeds {VERIFY_TOL}")
    if sum(d * d for d in ct.dims) != n:
        raise CharacterError(f"sum of squared dimensions {sum(d * d for d in ct.dims)} != {n}")
    return res


def _conj_index(vectors, tol=1e-6):
    """For each row of ``vectors``, the index of the row equal to its conjugate."""
    out = []
    for i, v in enumerate(vectors):
        dist = np.abs(vectors - v.conj()).max(axis=1)
        j = int(np.argmin(dist))
        if dist[j] > tol:
            raise CharacterError(f"row {i} has no complex-conjugate partner")
        out.append(j)
    return tuple(out)


def _make_table(chi, kappa, n, row_labels=()):
    chi = np.asarray(chi, dtype=complex)
    dims = tuple(int(round(v)) for v in chi[:, 0].real)
    ct = CharacterTable(
        n=n,
        chi=chi,
        dims=dims,
        kappa=tuple(int(k) for k in kappa),
        row_dual=_conj_index(chi),
        col_dual=_conj_index(chi.T),
        row_labels=tuple(row_labels),
    )
    verify_character_table(ct)
    return ct


# -- intersection numbers -----------------------------------------------------

def intersection_numbers_by_counting(g: GroupTable, p: ConjugacyPartition,
                                     checks: int = 3, seed: int = 0) -> np.ndarray:
    """``p[i, j, k]``: number of ``gamma`` with ``(alpha, gamma) in R_i`` and
    ``(gamma, beta) in R_j`` for a pair ``(alpha, beta) in R_k``.

    The count is taken at ``(g_k, e)`` and re-checked at ``checks`` random
    pairs of each relation.
    """
    d1 = len(p)
    cls = p.class_of
    mul, inv = g.mul, g.inv
    rng = np.random.default_rng(seed)

    def count(alpha, beta):
        # class of alpha gamma^-1 and of gamma beta^-1 for every gamma
        ci = cls[mul[alpha, inv]]
        cj = cls[mul[:, inv[beta]]]
        out = np.zeros((d1, d1), dtype=np.int64)
        np.add.at(out, (ci, cj), 1)
        return out

    t = np.zeros((d1, d1, d1), dtype=np.int64)
    for k, c in enumerate(p.classes):
        ref = count(c[0], g.identity)
        t[:, :, k] = ref
        for _ in range(checks):
            beta = int(rng.integers(g.n))
            alpha = int(mul[c[int(rng.integers(len(c)))], beta])
            if not np.array_equal(count(alpha, beta), ref):
                raise CharacterError(
                    f"intersection counts for relation {k} depend on the pair "
                    f"({alpha}, {beta}); not an association scheme")
    return t


def intersection_numbers_by_characters(ct: CharacterTable) -> np.ndarray:
    """Structure constants from the character table.

    ``p[i, j, k] = (k_i k_j / n) sum_m chi_m(g_i) chi_m(g_j) conj(chi_m(g_k)) / d_m``
    """
    chi = ct.chi
    kappa = np.array(ct.kappa, dtype=float)
    dims = np.array(ct.dims, dtype=float)
    s = np.einsum("mi,mj,mk,m->ijk", chi, chi, chi.conj(), 1.0 / dims)
    val = s * np.outer(kappa, kappa)[:, :, None] / ct.n
    rounded = np.rint(val.real)
    err = max(np.abs(val - rounded).max(), 0.0)
    if err > INTEGER_TOL or rounded.min() < 0:
        raise CharacterError(f"intersection numbers not non-negative integers (residual {err:.3e})")
    return rounded.astype(np.int64)


# -- numeric character table (Burnside) ---------------------------------------

def character_table_numeric(t: np.ndarray, kappa, n: int, seed: int = 0) -> CharacterTable:
    """Characters as common eigenvectors of the class multiplication matrices.

    ``(M_i)[j, k] = p[i, j, k]``; a central character ``v`` satisfies
    ``M_i v = v_i v``.  A random real combination of the ``M_i`` separates
    the eigenvectors.
    """
    t = np.asarray(t, dtype=float)
    d1 = t.shape[0]
    kappa = np.asarray(kappa, dtype=float)
    rng = np.random.default_rng(seed)
    for _ in range(MAX_RESAMPLES):
        r = rng.standard_normal(d1)
        M = np.einsum("i,ijk->jk", r, t)
        w, V = np.linalg.eig(M)
        gaps = np.abs(w[:, None] - w[None, :])
        np.fill_diagonal(gaps, np.inf)
        if d1 == 1 or gaps.min() > 1e-6:
            break
    else:
        raise CharacterError(f"eigenvalue collision persisted after {MAX_RESAMPLES} resamples")
    rows = []
    for v in V.T:
        v = v / v[0]
        dsq = n / np.sum(np.abs(v) ** 2 / kappa)
        d = np.sqrt(dsq)
        if abs(d - round(d)) > INTEGER_TOL:
            raise CharacterError(f"non-integer character degree {d:.9f}")
        rows.append(round(d) * v / kappa)
    rows.sort(key=lambda r: (abs(r - 1).max() > 1e-6, round(r[0].real),
                             tuple(np.round(r.real, 6)), tuple(np.round(r.imag, 6))))
    return _make_table(np.array(rows), kappa, n)


# -- eigenmatrices ------------------------------------------------------------

def eigenmatrices(ct: CharacterTable) -> EigenMatrices:
    """``P[i, j] = k_j conj(chi_i(g_j)) / d_i`` and ``Q[i, j] = d_j chi_j(g_i)``.

    With these, ``A_j = sum_i P[i, j] E_i``, ``E_i = (1/n) sum_j Q[j, i] A_j``
    and ``PQ = QP = nI`` also for non-real tables.
    """
    chi = ct.chi
    kappa = np.array(ct.kappa, dtype=float)
    dims = np.array(ct.dims, dtype=float)
    P = chi.conj() * kappa[None, :] / dims[:, None]
    Q = (chi * dims[:, None]).T
    eye = ct.n * np.eye(len(kappa))
    for name, prod in (("PQ", P @ Q), ("QP", Q @ P)):
        res = np.abs(prod - eye)
        if res.max() > VERIFY_TOL:
            i, j = np.unravel_index(np.argmax(res), res.shape)
            raise CharacterError(f"{name} != nI: residual {res.max():.3e} at ({i}, {j})")
    return EigenMatrices(P=P, Q=Q)


# -- merged real table --------------------------------------------------------

def zeta_table(ct: CharacterTable) -> ZetaTable:
    chi = ct.chi
    col_members = tuple(
        (m,) if ct.col_dual[m] == m else (m, ct.col_dual[m])
        for m in range(ct.d_plus_1) if ct.col_dual[m] >= m
    )
    row_members = tuple(
        (l,) if ct.row_dual[l] == l else (l, ct.row_dual[l])
        for l in range(ct.d_plus_1) if ct.row_dual[l] >= l
    )
    if len(col_members) != len(row_members):
        raise CharacterError("merged table is not square")
    zeta = np.array([[chi[r[0], list(c)].sum() for c in col_members] for r in row_members])
    coeff = np.array([[chi[list(r), c[0]].sum() for c in col_members] for r in row_members])
    for name, a in (("zeta", zeta), ("coefficient", coeff)):
        if np.abs(a.imag).max() > VERIFY_TOL:
            raise CharacterError(f"merged {name} table has imaginary residual {np.abs(a.imag).max():.3e}")
    return ZetaTable(
        n=ct.n,
        zeta=zeta.real,
        coeff=coeff.real,
        dims=tuple(ct.dims[r[0]] for r in row_members),
        merged_kappa=tuple(sum(ct.kappa[i] for i in c) for c in col_members),
        class_kappa=tuple(ct.kappa[c[0]] for c in col_members),
        col_members=col_members,
        row_members=row_members,
        table=ct,
    )


# -- analytic tables for the built-in families ---------------------------------

def _cyclic_rows(n):
    ls = [0] + ([n // 2] if n % 2 == 0 else [])
    for l in range(1, (n + 1) // 2):
        ls += [l, n - l]
    return ls


def _dihedral_characters(s):
    """Characters of D_{2s} as functions of (f, r) for ``b^f a^r``."""
    chars = [
        ("chi_trivial", lambda f, r: 1.0),
        ("chi_b_sign", lambda f, r: (-1.0) ** f),
    ]
    if s % 2 == 0:
        chars.append(("chi_a_sign", lambda f, r: (-1.0) ** r))
        chars.append(("chi_ab_sign", lambda f, r: (-1.0) ** (r + f)))
    for h in range(1, (s - 1) // 2 + 1):
        chars.append((f"rho_{h}", lambda f, r, h=h: 0.0 if f else 2 * np.cos(2 * np.pi * h * r / s)))
    return chars


def _v8k_representations(k):
    """Matrix images of ``(a, b)`` for every irreducible of V8k, in table order."""
    w = np.exp(1j * np.pi / k)
    reps = [
        ("chi_1", np.array([[1.0]]), np.array([[1.0]])),
        ("chi_2", np.array([[1.0]]), np.array([[-1.0]])),
        ("chi_3", np.array([[-1.0]]), np.array([[1.0]])),
        ("chi_4", np.array([[-1.0]]), np.array([[-1.0]])),
    ]
    for j in range(k):
        lam = w ** (2 * j)
        reps.append((f"psi_{j}", np.diag([lam, -1 / lam]), np.array([[0, 1], [-1, 0]], dtype=complex)))
    for j in range(1, k):
        mu = w ** j
        reps.append((f"phi_{j}", np.diag([mu, 1 / mu]), np.array([[0, 1], [1, 0]], dtype=complex)))
    return reps


def _sl2_3_published_classes(g: GroupTable, p: ConjugacyPartition):
    """Class indices of SL(2,3) in the column order e, -I, g_2 .. g_6 where
    g_3 contains the first order-3 element x, g_4 its inverse, g_5 = -x^{-1}
    and g_6 = -x."""
    elems = sl2_elements(3)
    index = {e: i for i, e in enumerate(elems)}
    minus = index[(2, 0, 0, 2)]
    order4 = next(x for x in range(g.n) if g.order_of(x) == 4)
    x = next(x for x in range(g.n) if g.order_of(x) == 3)
    xi = int(g.inv[x])
    reps = [g.identity, minus, order4, x, xi, int(g.mul[minus, xi]), int(g.mul[minus, x])]
    return [int(p.class_of[r]) for r in reps]


def _sl2_3_published_table():
    w = np.exp(2j * np.pi / 3)
    w2 = w * w
    rows = [
        [1, 1, 1, 1, 1, 1, 1],
        [1, 1, 1, w, w2, w2, w],
        [1, 1, 1, w2, w, w, w2],
        [3, 3, -1, 0, 0, 0, 0],
        [2, -2, 0, -w2, -w, w, w2],
        [2, -2, 0, -w, -w2, w2, w],
        [2, -2, 0, -1, -1, 1, 1],
    ]
    return np.array(rows, dtype=complex)


def published_column_order(spec: FamilySpec, g: GroupTable | None = None,
                           p: ConjugacyPartition | None = None) -> list:
    """Class indices listed in the column order of the published tables.

    Cyclic groups list ``e, a, ..., a^{n-1}``; the published table for
    ``Z_{2k}`` shows only the merged columns ``e, a, ..., a^k``, which are
    the first ``k + 1`` entries here.
    """
    g = build_family(spec) if g is None else g
    p = conjugacy_classes(g) if p is None else p
    cls = p.class_of
    fam, q = spec.family, spec.param
    if fam == "cyclic":
        return [int(cls[i]) for i in range(q)]
    if fam == "dihedral":
        s = q // 2
        reps = [0] + list(range(1, s // 2 + 1)) + [s] + ([s + 1] if s % 2 == 0 else [])
        return list(dict.fromkeys(int(cls[r]) for r in reps))
    if fam == "v8k":
        m = 2 * q
        reps = [0, 2 * m]
        reps += [2 * r + 1 for r in range(q)]
        reps += [2 * s for s in range(1, (q - 1) // 2 + 1)]
        reps += [2 * m + 2 * s for s in range(1, (q - 1) // 2 + 1)]
        reps += [m, m + 1]
        return [int(cls[r]) for r in reps]
    if fam == "sl2" and q == 3:
        return _sl2_3_published_classes(g, p)
    raise CharacterError(f"no published column order for {spec.label}")


def family_character_table(spec: FamilySpec, g: GroupTable | None = None,
                           p: ConjugacyPartition | None = None) -> CharacterTable:
    """Analytic character table, columns in this library's class order.

    SL2(p) has an analytic table only for p = 3; other primes fall back to
    `character_table_numeric`.
    """
    g = build_family(spec) if g is None else g
    p = conjugacy_classes(g) if p is None else p
    reps = p.representatives
    fam, q = spec.family, spec.param
    if fam == "cyclic":
        ls = _cyclic_rows(q)
        chi = [[np.exp(2j * np.pi * l * x / q) for x in reps] for l in ls]
        labels = [f"chi_{l}" for l in ls]
    elif fam == "dihedral":
        s = q // 2
        chars = _dihedral_characters(s)
        chi = [[f(x // s, x % s) for x in reps] for _, f in chars]
        labels = [name for name, _ in chars]
    elif fam == "v8k":
        m = 2 * q
        labels, chi = [], []
        for name, A, B in _v8k_representations(q):
            labels.append(name)
            chi.append([np.trace(np.linalg.matrix_power(A, x % m) @ np.linalg.matrix_power(B, x // m))
                        for x in reps])
    elif fam == "sl2" and q == 3:
        order = _sl2_3_published_classes(g, p)
        pub = _sl2_3_published_table()
        chi = np.empty_like(pub)
        chi[:, order] = pub
        labels = [f"chi_{i}" for i in range(1, 8)]
    else:
        t = intersection_numbers_by_counting(g, p)
        return character_table_numeric(t, p.sizes, g.n)
    return _make_table(np.array(chi, dtype=complex), p.sizes, g.n, labels)


def match_tables(a: CharacterTable, b: CharacterTable, tol: float = VERIFY_TOL):
    """Row and column permutations ``(rows, cols)`` with
    ``b.chi[rows][:, cols] == a.chi`` entrywise, or None.

    Columns are only permuted among classes of equal size; fine for the
    small tables compared in tests.
    """
    if a.chi.shape != b.chi.shape:
        return None
    d1 = a.d_plus_1
    groups = {}
    for j, k in enumerate(a.kappa):
        groups.setdefault(k, []).append(j)
    bgroups = {}
    for j, k in enumerate(b.kappa):
        bgroups.setdefault(k, []).append(j)
    if {k: len(v) for k, v in groups.items()} != {k: len(v) for k, v in bgroups.items()}:
        return None

    def col_candidates():
        keys = sorted(groups)
        def rec(i, acc):
            if i == len(keys):
                yield acc
                return
            src = groups[keys[i]]
            for perm in permutations(bgroups[keys[i]]):
                yield from rec(i + 1, {**acc, **dict(zip(src, perm))})
        yield from rec(0, {})

    for cmap in col_candidates():
        cols = [cmap[j] for j in range(d1)]
        bc = b.chi[:, cols]
        rows, used = [], set()
        for r in a.chi:
            dist = np.abs(bc - r).max(axis=1)
            hit = [i for i in np.flatnonzero(dist <= tol) if i not in used]
            if not hit:
                break
            rows.append(int(hit[0]))
            used.add(int(hit[0]))
        else:
            return rows, cols
    return None
