"""Finite groups as explicit multiplication tables.

Built-in families and their element enumeration (element 0 is always the
identity):

Cyclic(n)
    index ``i`` is ``a^i``.
Dihedral(2s)
    index ``r`` is ``a^r`` and index ``s + r`` is ``b a^r`` for ``0 <= r < s``.
V8k(k odd)
    presentation ``a^{2k} = b^4 = 1, ba = a^{-1} b^{-1}, b^{-1} a = a^{-1} b``;
    index ``2k j + i`` is ``a^i b^j`` for ``0 <= i < 2k``, ``0 <= j < 4``.
SL2(p)
    the identity matrix first, then every other matrix ``(a, b, c, d)``
    with ``ad - bc = 1 (mod p)`` in lexicographic order.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

EXHAUSTIVE_ASSOCIATIVITY_LIMIT = 64


class InvalidGroupError(ValueError):
    """Raised for malformed tables and invalid family parameters."""


def _frozen(a, dtype=np.int64):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GroupTable:
    n: int
    mul: np.ndarray
    identity: int
    inv: np.ndarray
    name: str = "G"

    def __post_init__(self):
        object.__setattr__(self, "mul", _frozen(self.mul))
        object.__setattr__(self, "inv", _frozen(self.inv))

    def order_of(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = self.mul[y, x]
            k += 1
        return k

    def conjugate(self, x: int, h: int) -> int:
        """Return ``h x h^{-1}``."""
        return int(self.mul[self.mul[h, x], self.inv[h]])

    def __eq__(self, other):
        if not isinstance(other, GroupTable):
            return NotImplemented
        return (
            self.n == other.n
            and self.identity == other.identity
            and np.array_equal(self.mul, other.mul)
            and np.array_equal(self.inv, other.inv)
        )

    def __hash__(self):
        return hash((self.n, self.identity, self.mul.tobytes()))


@dataclass(frozen=True)
class FamilySpec:
    """A built-in family.

    ``family`` is one of ``"cyclic"``, ``"dihedral"``, ``"v8k"``, ``"sl2"``.
    ``param`` is the group order for cyclic and dihedral groups, ``k`` for
    V8k and the prime ``p`` for SL2.
    """

    family: str
    param: int

    def __post_init__(self):
        fam = self.family.lower()
        object.__setattr__(self, "family", fam)
        p = self.param
        if fam == "cyclic":
            if p < 1:
                raise InvalidGroupError(f"Cyclic(n) needs n >= 1, got {p}")
        elif fam == "dihedral":
            if p < 2 or p % 2:
                raise InvalidGroupError(
                    f"Dihedral(2s) needs an even order >= 2, got {p}")
        elif fam == "v8k":
            if p < 1 or p % 2 == 0:
                raise InvalidGroupError(f"V8k needs k odd and positive, got k = {p}")
        elif fam == "sl2":
            if not _is_prime(p):
                raise InvalidGroupError(f"SL2(p) needs p prime, got p = {p}")
        else:
            raise InvalidGroupError(f"unknown family {self.family!r}")

    @property
    def order(self) -> int:
        fam, p = self.family, self.param
        if fam in ("cyclic", "dihedral"):
            return p
        if fam == "v8k":
            return 8 * p
        return p * (p * p - 1)

    @property
    def label(self) -> str:
        return {
            "cyclic": f"Z{self.param}",
            "dihedral": f"D{self.param}",
            "v8k": f"V{8 * self.param}",
            "sl2": f"SL(2,{self.param})",
        }[self.family]

    @classmethod
    def cyclic(cls, n):
        return cls("cyclic", n)

    @classmethod
    def dihedral(cls, order):
        return cls("dihedral", order)

    @classmethod
    def v8k(cls, k):
        return cls("v8k", k)

    @classmethod
    def sl2(cls, p):
        return cls("sl2", p)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, int(p**0.5) + 1))


@dataclass(frozen=True, eq=False)
class ConjugacyPartition:
    classes: tuple
    class_of: np.ndarray
    representatives: tuple
    sizes: tuple
    dual: tuple

    def __post_init__(self):
        object.__setattr__(self, "class_of", _frozen(self.class_of))

    def __len__(self):
        return len(self.classes)

    @property
    def self_dual(self) -> tuple:
        return tuple(self.dual[i] == i for i in range(len(self)))

    @property
    def ambivalent(self) -> bool:
        return all(self.self_dual)


# -- family constructions -----------------------------------------------------

def _cyclic_table(n):
    i = np.arange(n)
    return (i[:, None] + i[None, :]) % n


def _dihedral_table(order):
    s = order // 2
    # element (f, r) is b^f a^r;  a^r b = b a^{-r}
    elems = [(0, r) for r in range(s)] + [(1, r) for r in range(s)]
    mul = np.empty((order, order), dtype=np.int64)
    for x, (f1, r1) in enumerate(elems):
        for y, (f2, r2) in enumerate(elems):
            f = (f1 + f2) % 2
            r = ((-r1 if f2 else r1) + r2) % s
            mul[x, y] = f * s + r
    return mul


def _v8k_table(k):
    m = 2 * k

    def b_times(i, e):
        # b (a^i b^e) = a^{-i} b^{1 + 2i + e}
        return (-i) % m, (1 + 2 * i + e) % 4

    mul = np.empty((8 * k, 8 * k), dtype=np.int64)
    for j1 in range(4):
        for i1 in range(m):
            x = j1 * m + i1
            for j2 in range(4):
                for i2 in range(m):
                    i, e = i2, 0
                    for _ in range(j1):
                        i, e = b_times(i, e)
                    i, e = (i1 + i) % m, (e + j2) % 4
                    mul[x, j2 * m + i2] = e * m + i
    return mul


def sl2_elements(p: int) -> list:
    """Matrices ``(a, b, c, d)`` of SL(2, p) in this library's element order."""
    ident = (1, 0, 0, 1)
    others = [
        (a, b, c, d)
        for a in range(p) for b in range(p) for c in range(p) for d in range(p)
        if (a * d - b * c) % p == 1 and (a, b, c, d) != ident
    ]
    return [ident] + others


def _sl2_table(p):
    elems = sl2_elements(p)
    index = {e: i for i, e in enumerate(elems)}
    n = len(elems)
    mul = np.empty((n, n), dtype=np.int64)
    for x, (a1, b1, c1, d1) in enumerate(elems):
        for y, (a2, b2, c2, d2) in enumerate(elems):
            prod = (
                (a1 * a2 + b1 * c2) % p,
                (a1 * b2 + b1 * d2) % p,
                (c1 * a2 + d1 * c2) % p,
                (c1 * b2 + d1 * d2) % p,
            )
            mul[x, y] = index[prod]
    return mul


def build_family(spec: FamilySpec) -> GroupTable:
    fam, p = spec.family, spec.param
    if fam == "cyclic":
        mul = _cyclic_table(p)
    elif fam == "dihedral":
        mul = _dihedral_table(p)
    elif fam == "v8k":
        mul = _v8k_table(p)
    else:
        mul = _sl2_table(p)
    return load_table(mul, name=spec.label)


# -- validation ---------------------------------------------------------------

def _check_associative(mul, rng=None):
    n = mul.shape[0]
    if n <= EXHAUSTIVE_ASSOCIATIVITY_LIMIT:
        bad = np.argwhere(mul[mul] != mul[:, mul])
        if bad.size:
            return tuple(int(v) for v in bad[0])
        return None
    rng = np.random.default_rng(0) if rng is None else rng
    trip = rng.integers(0, n, size=(10 * n * n, 3))
    a, b, c = trip.T
    bad = np.flatnonzero(mul[mul[a, b], c] != mul[a, mul[b, c]])
    if bad.size:
        return tuple(int(v) for v in trip[bad[0]])
    return None


def load_table(raw, name: str = "G") -> GroupTable:
    """Validate a raw multiplication table and wrap it as a `GroupTable`.

    Raises
    ------
    InvalidGroupError
        If the table is not square, has out-of-range entries, is not a
        Latin square, lacks an identity or inverses, or is not associative.
    """
    try:
        mul = np.asarray(raw)
    except Exception as exc:  # ragged nested lists
        raise InvalidGroupError(f"table is not square: {exc}") from None
    if mul.dtype == object or mul.ndim != 2 or mul.shape[0] != mul.shape[1]:
        raise InvalidGroupError(f"table is not square (shape {mul.shape})")
    n = mul.shape[0]
    if n == 0:
        raise InvalidGroupError("table is empty")
    if not np.issubdtype(mul.dtype, np.integer):
        if not np.all(np.equal(np.mod(mul, 1), 0)):
            raise InvalidGroupError("table entries must be integers")
    mul = mul.astype(np.int64)
    if mul.min() < 0 or mul.max() >= n:
        raise InvalidGroupError(f"table entries must lie in [0, {n})")
    target = np.arange(n)
    for i in range(n):
        if not np.array_equal(np.sort(mul[i]), target):
            raise InvalidGroupError(f"not a Latin square: row {i} repeats an entry")
        if not np.array_equal(np.sort(mul[:, i]), target):
            raise InvalidGroupError(f"not a Latin square: column {i} repeats an entry")
    ids = [e for e in range(n)
           if np.array_equal(mul[e], target) and np.array_equal(mul[:, e], target)]
    if not ids:
        raise InvalidGroupError("no identity element")
    e = ids[0]
    inv = np.empty(n, dtype=np.int64)
    for x in range(n):
        (ys,) = np.nonzero(mul[x] == e)
        y = int(ys[0])
        if mul[y, x] != e:
            raise InvalidGroupError(f"element {x} has no two-sided inverse")
        inv[x] = y
    bad = _check_associative(mul)
    if bad is not None:
        a, b, c = bad
        raise InvalidGroupError(
            f"associativity fails at (a, b, c) = ({a}, {b}, {c}): "
            f"(ab)c = {mul[mul[a, b], c]} but a(bc) = {mul[a, mul[b, c]]}")
    return GroupTable(n=n, mul=mul, identity=e, inv=inv, name=name)


# -- conjugacy ----------------------------------------------------------------

def conjugacy_classes(g: GroupTable) -> ConjugacyPartition:
    """Conjugacy classes, identity class first, then by (size, smallest element)."""
    n = g.n
    assigned = np.full(n, -1)
    raw = []
    for x in range(n):
        if assigned[x] >= 0:
            continue
        orbit = np.unique(g.mul[g.mul[:, x], g.inv])
        assigned[orbit] = len(raw)
        raw.append(tuple(int(v) for v in orbit))
    raw.sort(key=lambda c: (g.identity not in c, len(c), c[0]))
    class_of = np.empty(n, dtype=np.int64)
    for i, c in enumerate(raw):
        class_of[list(c)] = i
    part = ConjugacyPartition(
        classes=tuple(raw),
        class_of=class_of,
        representatives=tuple(c[0] for c in raw),
        sizes=tuple(len(c) for c in raw),
        dual=tuple(range(len(raw))),
    )
    return ConjugacyPartition(
        classes=part.classes,
        class_of=part.class_of,
        representatives=part.representatives,
        sizes=part.sizes,
        dual=inverse_class_map(g, part),
    )


def inverse_class_map(g: GroupTable, p: ConjugacyPartition) -> tuple:
    """Map each class index to the index of the class of inverses."""
    dual = []
    for i, c in enumerate(p.classes):
        targets = {int(p.class_of[g.inv[x]]) for x in c}
        if len(targets) != 1:
            raise InvalidGroupError(f"inverses of class {i} span several classes")
        dual.append(targets.pop())
    return tuple(dual)
