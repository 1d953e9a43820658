"""Exact arithmetic in Z[zeta_E] for E a prime power, and class functions.

A cyclotomic integer of level E is a coefficient vector of length phi(E) in
the power basis 1, zeta, ..., zeta^(phi(E)-1).  Class functions on a group
1+U carry one such vector per group element (rows in element order).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .algrp import AlgebraGroup, LinearCharacter, conjugacy_classes, coset_labels
from .errors import GroupMismatch, LevelMismatch, LevelTooSmall, NotAnInteger, NotSubgroup
from .gf import prime_factors


def _prime_of(E: int) -> int:
    if E == 1:
        return 1
    ps = prime_factors(E)
    if len(ps) != 1:
        raise LevelMismatch(f"level {E} is not a prime power")
    return ps[0]


def phi(E: int) -> int:
    if E == 1:
        return 1
    p = _prime_of(E)
    return E - E // p


@lru_cache(maxsize=None)
def reduction_matrix(E: int) -> np.ndarray:
    """Row k holds the canonical coordinates of zeta^k, 0 <= k < E."""
    f = phi(E)
    R = np.zeros((E, f), dtype=np.int64)
    if E == 1:
        R[0, 0] = 1
        return R
    p = _prime_of(E)
    s = E // p
    for k in range(E):
        if k < f:
            R[k, k] = 1
        else:
            r = k - f
            for j in range(p - 1):
                R[k, j * s + r] -= 1
    R.setflags(write=False)
    return R


@lru_cache(maxsize=None)
def conj_matrix(E: int) -> np.ndarray:
    """Coordinates of conj(v) are v @ conj_matrix(E)."""
    R = reduction_matrix(E)
    C = R[(-np.arange(phi(E))) % E]
    C.setflags(write=False)
    return C


def fold(S: np.ndarray, E: int) -> np.ndarray:
    """Reduce coefficients of zeta^0..zeta^{E-1} (last axis) to canonical form."""
    return S @ reduction_matrix(E)


def root_of_unity(E: int, k) -> np.ndarray:
    """Canonical vectors of zeta_E^k (vectorized over k)."""
    return reduction_matrix(E)[np.asarray(k) % E]


@dataclass(frozen=True)
class CyclotomicInteger:
    level: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != phi(self.level):
            raise LevelMismatch(f"expected {phi(self.level)} coefficients at level {self.level}")

    @classmethod
    def from_array(cls, E: int, v) -> "CyclotomicInteger":
        return cls(E, tuple(int(x) for x in v))

    @classmethod
    def integer(cls, E: int, n: int) -> "CyclotomicInteger":
        return cls(E, (n,) + (0,) * (phi(E) - 1))

    @classmethod
    def zeta(cls, E: int, k: int = 1) -> "CyclotomicInteger":
        return cls.from_array(E, root_of_unity(E, k))

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def __add__(self, o):
        _same(self, o)
        return CyclotomicInteger.from_array(self.level, self.array + o.array)

    def __sub__(self, o):
        _same(self, o)
        return CyclotomicInteger.from_array(self.level, self.array - o.array)

    def __neg__(self):
        return CyclotomicInteger.from_array(self.level, -self.array)

    def __mul__(self, o):
        if isinstance(o, int):
            return CyclotomicInteger.from_array(self.level, self.array * o)
        _same(self, o)
        E = self.level
        prod = np.convolve(self.array, o.array)
        S = np.zeros(E, dtype=np.int64)
        np.add.at(S, np.arange(prod.size) % E, prod)
        return CyclotomicInteger.from_array(E, fold(S, E))

    __rmul__ = __mul__

    def conj(self) -> "CyclotomicInteger":
        return CyclotomicInteger.from_array(self.level, self.array @ conj_matrix(self.level))

    def raise_level(self, E2: int) -> "CyclotomicInteger":
        return CyclotomicInteger.from_array(E2, raise_array(self.array, self.level, E2))

    def evaluate_mod(self, ell: int, w: int) -> int:
        """Image under zeta -> w in F_ell (w of multiplicative order level)."""
        return sum(c * pow(w, i, ell) for i, c in enumerate(self.coeffs)) % ell

    def __repr__(self):
        return f"Cyc({self.level}, {list(self.coeffs)})"


def _same(a, b):
    if not isinstance(b, CyclotomicInteger) or a.level != b.level:
        raise LevelMismatch("operands have different levels")


def raise_array(v: np.ndarray, E: int, E2: int) -> np.ndarray:
    """Re-express level-E coordinates (last axis) at level E2 (a multiple of E)."""
    if E2 == E:
        return v
    if E2 % E or (E > 1 and _prime_of(E2) != _prime_of(E)):
        raise LevelMismatch(f"cannot raise level {E} to {E2}")
    step = E2 // E
    idx = np.arange(phi(E)) * step
    return v @ reduction_matrix(E2)[idx]


def cyclo_arith(op: str, *operands):
    if op == "add":
        return operands[0] + operands[1]
    if op == "mul":
        return operands[0] * operands[1]
    if op == "conj":
        return operands[0].conj()
    if op == "scalar_mul":
        n, x = operands
        return x * int(n)
    if op == "raise_level":
        x, E2 = operands
        return x.raise_level(int(E2))
    raise ValueError(f"unknown operation {op!r}")


def group_level(A) -> int:
    """A p-power multiple of the exponent of 1+A: (1+a)^(p^k) = 1+a^(p^k)."""
    if A.nclass <= 1:
        return 1
    p = A.field.p
    E = 1
    while E < A.nclass:
        E *= p
    return E


def character_value(chi: LinearCharacter, g, level: int) -> CyclotomicInteger:
    if level % chi.level:
        raise LevelTooSmall(f"level {level} is not a multiple of {chi.level}")
    e = int(chi.exponent_of(np.asarray(g, dtype=np.int64).reshape(1, -1))[0])
    return CyclotomicInteger.zeta(level, e * (level // chi.level))


# ---------------------------------------------------------------------------
# class functions

class ClassFunction:
    """A class function on the group 1+U, one value per element."""

    def __init__(self, group: AlgebraGroup, level: int, values: np.ndarray):
        values = np.asarray(values, dtype=np.int64)
        if values.shape != (group.order, phi(level)):
            raise LevelMismatch(f"values must have shape {(group.order, phi(level))}")
        values.setflags(write=False)
        self.group = group
        self.level = level
        self.values = values

    @classmethod
    def from_linear(cls, chi: LinearCharacter, level: int) -> "ClassFunction":
        if level % chi.level:
            raise LevelTooSmall(f"level {level} is not a multiple of {chi.level}")
        return cls(chi.domain.ambient, level, root_of_unity(level, chi.values * (level // chi.level)))

    @classmethod
    def trivial(cls, group: AlgebraGroup, level: int) -> "ClassFunction":
        v = np.zeros((group.order, phi(level)), dtype=np.int64)
        v[:, 0] = 1
        return cls(group, level, v)

    def __repr__(self):
        return f"ClassFunction(order={self.group.order}, level={self.level}, degree={self.degree})"

    @property
    def degree(self) -> int:
        return int(self.values[0, 0])

    def value(self, g) -> CyclotomicInteger:
        i = int(self.group.index(np.asarray(g, dtype=np.int64).reshape(1, -1))[0])
        return CyclotomicInteger.from_array(self.level, self.values[i])

    @cached_property
    def _hash(self):
        return hash((self.group, self.level, self.values.tobytes()))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, ClassFunction) or other.group != self.group:
            return False
        E = max(self.level, other.level)
        a, b = self.at_level(E), other.at_level(E)
        return np.array_equal(a.values, b.values)

    def at_level(self, E: int) -> "ClassFunction":
        if E == self.level:
            return self
        return ClassFunction(self.group, E, raise_array(self.values, self.level, E))

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        _check_group(self, other)
        E = max(self.level, other.level)
        return ClassFunction(self.group, E, self.at_level(E).values + other.at_level(E).values)

    def __mul__(self, other: "ClassFunction") -> "ClassFunction":
        _check_group(self, other)
        E = max(self.level, other.level)
        a, b = self.at_level(E).values, other.at_level(E).values
        f = phi(E)
        S = np.zeros((a.shape[0], E), dtype=np.int64)
        for i in range(f):
            for j in range(f):
                S[:, (i + j) % E] += a[:, i] * b[:, j]
        return ClassFunction(self.group, E, fold(S, E))

    def scale(self, n: int) -> "ClassFunction":
        return ClassFunction(self.group, self.level, self.values * n)

    def conj(self) -> "ClassFunction":
        return ClassFunction(self.group, self.level, self.values @ conj_matrix(self.level))

    def permuted(self, perm: np.ndarray) -> "ClassFunction":
        """The function g_i -> self(g_{perm[i]})."""
        return ClassFunction(self.group, self.level, self.values[perm])

    def class_view(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        cc = conjugacy_classes(self.group.A, group=self.group)
        el = self.group.elements
        return [(tuple(int(x) for x in el[r]), tuple(int(x) for x in self.values[r])) for r in cc.reps]

    def is_class_function(self) -> bool:
        cc = conjugacy_classes(self.group.A, group=self.group)
        return bool(np.array_equal(self.values, self.values[cc.reps[cc.labels]]))

    def to_json(self) -> dict:
        return {"level": self.level,
                "classes": [{"rep": list(r), "value": list(v)} for r, v in self.class_view()]}


def _check_group(f1: ClassFunction, f2: ClassFunction):
    if f1.group != f2.group:
        raise GroupMismatch("class functions live on different groups")


def inner_product_raw(f1: ClassFunction, f2: ClassFunction) -> np.ndarray:
    """sum_g f1(g) conj(f2(g)) in canonical coordinates."""
    _check_group(f1, f2)
    E = max(f1.level, f2.level)
    a = f1.at_level(E).values
    b = f2.at_level(E).values @ conj_matrix(E)
    M = a.T @ b
    f = phi(E)
    S = np.zeros(E, dtype=np.int64)
    ij = (np.arange(f)[:, None] + np.arange(f)[None, :]) % E
    np.add.at(S, ij.ravel(), M.ravel())
    return fold(S, E)


def inner_product(f1: ClassFunction, f2: ClassFunction) -> int:
    s = inner_product_raw(f1, f2)
    n = f1.group.order
    if np.any(s[1:]) or s[0] % n:
        raise NotAnInteger(f"inner product sum {s.tolist()} is not an integer multiple of {n}")
    return int(s[0] // n)


def is_irreducible(f: ClassFunction) -> bool:
    return inner_product(f, f) == 1


def restrict(f: ClassFunction, H: AlgebraGroup) -> ClassFunction:
    G = f.group
    if H.A != G.A or not (H.U <= G.U):
        raise NotSubgroup("not a subgroup of the function's group")
    return ClassFunction(H, f.level, f.values[G.index(H.elements)])


def left_transversal(G: AlgebraGroup, H: AlgebraGroup) -> np.ndarray:
    """Indices (in G) of the smallest element of each left coset gH."""
    labels, n = coset_labels(G, H.generators)
    reps = np.full(n, G.order, dtype=np.int64)
    np.minimum.at(reps, labels, np.arange(G.order))
    return reps


def induce(f: ClassFunction, G: AlgebraGroup) -> ClassFunction:
    """(Ind f)(g) = sum over left coset representatives x with x^-1 g x in H of f(x^-1 g x)."""
    H = f.group
    if H.A != G.A or not (H.U <= G.U):
        raise NotSubgroup("inducing subgroup is not contained in the target group")
    if H.order == G.order:
        return ClassFunction(G, f.level, f.values)
    el = G.elements
    out = np.zeros((G.order, f.values.shape[1]), dtype=np.int64)
    reps = left_transversal(G, H)
    xs = el[reps]
    xinv = G.inv(xs)
    for x, xi in zip(xs, xinv):
        y = G.mul(G.mul(np.broadcast_to(xi, el.shape), el), np.broadcast_to(x, el.shape))
        idx = H.index(y, check=False)
        m = idx >= 0
        out[m] += f.values[idx[m]]
    return ClassFunction(G, f.level, out)
