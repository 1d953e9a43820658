"""Finite fields F_{p^m} with table-driven arithmetic.

An element of F = F_p[t]/(modulus) is stored as a plain ``int``: the
little-endian base-p digits of the integer are its coefficients in the
power basis 1, t, ..., t^{m-1}.  Elements carry no reference to their
field; every operation takes the :class:`FieldDescriptor` explicitly.

Arithmetic is done through lookup tables (``add``, ``mul``, ``neg``,
``inv``, ``frob``) built once per field and cached.  The tables are
numpy arrays so that vectorized code elsewhere can index them directly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import (
    DegreeMismatch,
    DivisionByZero,
    FieldMismatch,
    NoEmbedding,
    NotASubfield,
    NotPrime,
    ReducibleModulus,
    TooLarge,
)

MAX_FIELD_SIZE = 1 << 10


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists little-endian, no trailing zeros

def _ptrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _ptrim(out)


def _pmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _ptrim(out)


def _pdivmod(a, b, p):
    a = _ptrim(a)
    b = _ptrim(b)
    inv_lead = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        c = a[-1] * inv_lead % p
        s = len(a) - len(b)
        q[s] = c
        for i, y in enumerate(b):
            a[s + i] = (a[s + i] - c * y) % p
        a = _ptrim(a)
    return _ptrim(q), a


def _pgcd(a, b, p):
    a, b = _ptrim(a), _ptrim(b)
    while b:
        a, b = b, _pdivmod(a, b, p)[1]
    return a


def _ppowmod(base, e, mod, p):
    result = [1]
    base = _pdivmod(base, mod, p)[1]
    while e:
        if e & 1:
            result = _pdivmod(_pmul(result, base, p), mod, p)[1]
        base = _pdivmod(_pmul(base, base, p), mod, p)[1]
        e >>= 1
    return result


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Rabin-style test: gcd(f, x^{p^i} - x) = 1 for all i <= m/2."""
    f = _ptrim(modulus)
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    xp = x
    for _ in range(1, m // 2 + 1):
        xp = _ppowmod(xp, p, f, p)
        g = _pgcd(f, _psub(xp, x, p), p)
        if len(g) > 1:
            return False
    return True


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldDescriptor:
    p: int
    m: int
    modulus: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.p ** self.m

    def to_json(self) -> dict:
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldDescriptor":
        return make_field(int(obj["p"]), int(obj["m"]), obj.get("modulus"))

    def __str__(self) -> str:
        return f"F_{self.q}"


def make_field(p: int, m: int = 1, modulus: Sequence[int] | None = None) -> FieldDescriptor:
    """Validated field descriptor; the default modulus is the smallest
    monic irreducible of degree ``m`` (comparing coefficient sequences from
    the leading term down, i.e. by the integer sum c_i p^i)."""
    if not is_prime(p):
        raise NotPrime(f"{p} is not prime")
    if m < 1:
        raise DegreeMismatch(f"degree must be >= 1, got {m}")
    if p ** m > MAX_FIELD_SIZE:
        raise TooLarge(f"F_{p}^{m} exceeds the supported field size {MAX_FIELD_SIZE}")
    if modulus is None:
        return _canonical_field(p, m)
    mod = tuple(int(c) % p for c in modulus)
    if len(mod) != m + 1 or mod[-1] != 1:
        raise DegreeMismatch(f"modulus {list(modulus)} is not monic of degree {m}")
    if not is_irreducible(mod, p):
        raise ReducibleModulus(f"modulus {list(mod)} is reducible over F_{p}")
    return FieldDescriptor(p, m, mod)


@lru_cache(maxsize=None)
def _canonical_field(p: int, m: int) -> FieldDescriptor:
    for code in range(p ** m):
        coeffs = [(code // p ** i) % p for i in range(m)] + [1]
        if is_irreducible(coeffs, p):
            return FieldDescriptor(p, m, tuple(coeffs))
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


def subfield(F: FieldDescriptor, size: int) -> FieldDescriptor:
    """Canonical descriptor of the subfield of ``F`` with ``size`` elements."""
    s = _subfield_degree(F, size)
    return make_field(F.p, s)


def _subfield_degree(F: FieldDescriptor, size: int) -> int:
    s = 0
    n = size
    while n > 1 and n % F.p == 0:
        n //= F.p
        s += 1
    if n != 1 or s == 0 or F.m % s:
        raise NotASubfield(f"F_{size} is not a subfield of {F}")
    return s


# ---------------------------------------------------------------------------

class FieldTables:
    """Lookup tables for one field.  Built lazily through :func:`tables`."""

    def __init__(self, F: FieldDescriptor):
        self.F = F
        p, m, q = F.p, F.m, F.q
        self.p, self.m, self.q = p, m, q
        codes = np.arange(q, dtype=np.int64)
        digits = np.stack([(codes // p ** i) % p for i in range(m)], axis=1)
        self.digits = digits
        weights = p ** np.arange(m, dtype=np.int64)
        self.weights = weights
        self.add = ((digits[:, None, :] + digits[None, :, :]) % p) @ weights
        self.neg = ((-digits) % p) @ weights
        self.sub = self.add[:, self.neg]
        # multiplication through a primitive element
        gen, exp_tab = self._primitive()
        self.primitive = gen
        self.exp = exp_tab
        log = np.zeros(q, dtype=np.int64)
        log[exp_tab] = np.arange(q - 1)
        self.log = log
        la = log[:, None] + log[None, :]
        mul = exp_tab[la % (q - 1)] if q > 1 else np.zeros((1, 1), np.int64)
        mul[0, :] = 0
        mul[:, 0] = 0
        self.mul = mul
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = exp_tab[(-log[1:]) % (q - 1)]
        self.inv = inv
        frob = np.zeros(q, dtype=np.int64)
        frob[1:] = exp_tab[(log[1:] * p) % (q - 1)]
        self.frob = frob

    def _mul_slow(self, a: int, b: int) -> int:
        F = self.F
        pa = [(a // F.p ** i) % F.p for i in range(F.m)]
        pb = [(b // F.p ** i) % F.p for i in range(F.m)]
        r = _pdivmod(_pmul(pa, pb, F.p), list(F.modulus), F.p)[1]
        return sum(c * F.p ** i for i, c in enumerate(r))

    def _primitive(self):
        q = self.q
        if q == 2:
            return 1, np.array([1], dtype=np.int64)
        for g in range(2, q):
            powers = [1]
            x = g
            while x != 1:
                powers.append(x)
                x = self._mul_slow(x, g)
            if len(powers) == q - 1:
                return g, np.array(powers, dtype=np.int64)
        raise AssertionError("no primitive element")  # pragma: no cover

    # scalar helpers -------------------------------------------------------
    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e < 0:
                raise DivisionByZero("0 has no inverse")
            return 1 if e == 0 else 0
        return int(self.exp[(int(self.log[x]) * e) % (self.q - 1)])

    def frobenius_power(self, s: int) -> np.ndarray:
        """Table of x -> x^{p^s}."""
        t = np.arange(self.q, dtype=np.int64)
        for _ in range(s % self.m if self.m else 0):
            t = self.frob[t]
        return t


@lru_cache(maxsize=None)
def tables(F: FieldDescriptor) -> FieldTables:
    return FieldTables(F)


def coeffs(F: FieldDescriptor, x: int) -> list[int]:
    return [(int(x) // F.p ** i) % F.p for i in range(F.m)]


def from_coeffs(F: FieldDescriptor, c: Sequence[int]) -> int:
    c = list(c)
    if len(c) != F.m:
        raise FieldMismatch(f"element {c} has length {len(c)}, field degree {F.m}")
    return sum((int(v) % F.p) * F.p ** i for i, v in enumerate(c))


def _check(F: FieldDescriptor, *xs: int) -> None:
    for x in xs:
        if not 0 <= int(x) < F.q:
            raise FieldMismatch(f"{x} is not an element of {F}")


def field_arith(F: FieldDescriptor, op: str, *operands):
    """Dispatch a single field operation; results are canonical ints.

    ``trace_to_subfield`` and ``norm_to_subfield`` take the subfield size as
    their second operand and return an element of ``F`` lying in that
    subfield.
    """
    T = tables(F)
    if op == "add":
        a, b = operands
        _check(F, a, b)
        return int(T.add[a, b])
    if op == "sub":
        a, b = operands
        _check(F, a, b)
        return int(T.sub[a, b])
    if op == "neg":
        (a,) = operands
        _check(F, a)
        return int(T.neg[a])
    if op == "mul":
        a, b = operands
        _check(F, a, b)
        return int(T.mul[a, b])
    if op == "inv":
        (a,) = operands
        _check(F, a)
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return int(T.inv[a])
    if op == "pow":
        a, e = operands
        _check(F, a)
        return T.pow(a, e)
    if op in ("trace_to_subfield", "norm_to_subfield"):
        a, size = operands
        _check(F, a)
        s = _subfield_degree(F, size)
        n = F.m // s
        frob_q = T.frobenius_power(s)
        acc = 0 if op == "trace_to_subfield" else 1
        x = int(a)
        for _ in range(n):
            acc = int(T.add[acc, x]) if op == "trace_to_subfield" else int(T.mul[acc, x])
            x = int(frob_q[x])
        return acc
    raise ValueError(f"unknown field operation {op!r}")


def frobenius(F: FieldDescriptor, x: int, q: int) -> int:
    """x -> x^q for q the size of a subfield of F."""
    s = _subfield_degree(F, q)
    _check(F, x)
    return int(tables(F).frobenius_power(s)[x])


def frobenius_table(F: FieldDescriptor, q: int) -> np.ndarray:
    return tables(F).frobenius_power(_subfield_degree(F, q))


def subfield_elements(F: FieldDescriptor, size: int) -> np.ndarray:
    """Sorted encodings of the elements of F lying in the subfield of ``size``."""
    fr = frobenius_table(F, size)
    return np.flatnonzero(fr == np.arange(F.q))


# ---------------------------------------------------------------------------
# embeddings

def embedding_table(src: FieldDescriptor, dst: FieldDescriptor) -> np.ndarray:
    """Array mapping encodings of ``src`` to their images in ``dst``."""
    if src.p != dst.p or dst.m % src.m:
        raise NoEmbedding(f"{src} does not embed in {dst}")
    return _embedding_table(src, dst)


@lru_cache(maxsize=None)
def _embedding_table(src: FieldDescriptor, dst: FieldDescriptor) -> np.ndarray:
    p = src.p
    if src.m == 1:
        tab = np.arange(p, dtype=np.int64)
        tab.setflags(write=False)
        return tab
    if src == dst:
        tab = np.arange(src.q, dtype=np.int64)
        tab.setflags(write=False)
        return tab
    D = tables(dst)
    xs = np.arange(dst.q, dtype=np.int64)
    val = np.zeros(dst.q, dtype=np.int64)
    for c in reversed(src.modulus):
        val = D.add[D.mul[val, xs], c]
    roots = np.flatnonzero(val == 0)
    # compatibility with the already fixed embeddings of the maximal subfields
    constraints = []
    for ell in prime_factors(src.m):
        S = make_field(p, src.m // ell)
        constraints.append((embedding_table(S, src), embedding_table(S, dst)))
    src_digits = tables(src).digits
    for r in roots:
        powers = [1]
        for _ in range(1, src.m):
            powers.append(int(D.mul[powers[-1], r]))
        tab = np.zeros(src.q, dtype=np.int64)
        for i, pw in enumerate(powers):
            # digit * r^i as repeated addition in dst (digit < p)
            term = np.zeros(src.q, dtype=np.int64)
            for k in range(1, p):
                mask = src_digits[:, i] == k
                term[mask] = D.mul[k, pw]
            tab = D.add[tab, term]
        if all(np.array_equal(tab[s_in_src], s_in_dst) for s_in_src, s_in_dst in constraints):
            tab.setflags(write=False)
            return tab
    raise AssertionError(f"no compatible embedding {src} -> {dst}")  # pragma: no cover


def embed(src: FieldDescriptor, dst: FieldDescriptor, x: int) -> int:
    _check(src, x)
    return int(embedding_table(src, dst)[x])


def restriction_table(src: FieldDescriptor, dst: FieldDescriptor) -> dict[int, int]:
    """Inverse of the embedding on its image: dst-encoding -> src-encoding."""
    tab = embedding_table(src, dst)
    return {int(v): i for i, v in enumerate(tab)}


def extension_field(F: FieldDescriptor, n: int) -> FieldDescriptor:
    """The canonical field of degree n over F (as a field F_{p^{mn}})."""
    return make_field(F.p, F.m * n)
