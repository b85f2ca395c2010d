"""Small finite fields as lookup tables.

An element of F_{p^s} is encoded as the integer whose base-p digits are its
coefficients in the polynomial basis 1, x, x^2, ... modulo a fixed
irreducible polynomial.  So in F_4 the generator ``g = x`` is the code 2 and
``g^2 = g + 1`` is the code 3.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

# x^s = -(c_0 + c_1 x + ... + c_{s-1} x^{s-1}); stored as (p, [c_0, ..., c_{s-1}])
MODULI = {
    2: (2, []),
    4: (2, [1, 1]),  # x^2 + x + 1
    8: (2, [1, 1, 0]),  # x^3 + x + 1
    16: (2, [1, 1, 0, 0]),  # x^4 + x + 1
    3: (3, []),
    9: (3, [1, 0]),  # x^2 + 1
    5: (5, []),
}


def _digits(a: int, p: int, s: int) -> list[int]:
    out = []
    for _ in range(s):
        out.append(a % p)
        a //= p
    return out


def _code(d, p: int) -> int:
    return sum(int(c) * p**i for i, c in enumerate(d))


class Field:
    """The field with ``q = p^s`` elements; all arithmetic through uint8 tables."""

    def __init__(self, q: int):
        if q not in MODULI:
            raise ValueError(f"unsupported field size {q}; choose from {sorted(MODULI)}")
        p, low = MODULI[q]
        s = max(len(low), 1)
        self.q, self.p, self.s = q, p, s
        self.modulus = low
        add = np.zeros((q, q), np.uint8)
        mul = np.zeros((q, q), np.uint8)
        for a in range(q):
            da = _digits(a, p, s)
            for b in range(q):
                db = _digits(b, p, s)
                add[a, b] = _code([(x + y) % p for x, y in zip(da, db)], p)
                mul[a, b] = self._mul_digits(da, db)
        self.add_t = add
        self.mul_t = mul
        self.neg_t = np.array([int(np.nonzero(add[a] == 0)[0][0]) for a in range(q)], np.uint8)
        self.sub_t = add[:, self.neg_t]
        inv = np.zeros(q, np.uint8)
        for a in range(1, q):
            inv[a] = int(np.nonzero(mul[a] == 1)[0][0])
        self.inv_t = inv
        sq = mul[np.arange(q), np.arange(q)]
        self.square_t = sq
        if p == 2:
            sqrt = np.zeros(q, np.uint8)
            sqrt[sq] = np.arange(q, dtype=np.uint8)
            self.sqrt_t = sqrt
        else:
            self.sqrt_t = None
        for t in (self.add_t, self.mul_t, self.neg_t, self.sub_t, self.inv_t, self.square_t):
            t.flags.writeable = False

    def _mul_digits(self, da, db) -> int:
        p, s, low = self.p, self.s, self.modulus
        prod = [0] * (2 * s)
        for i, x in enumerate(da):
            for j, y in enumerate(db):
                prod[i + j] += x * y
        # reduce x^k for k >= s using x^s = -sum c_i x^i
        for k in range(2 * s - 1, s - 1, -1):
            c = prod[k] % p
            prod[k] = 0
            if c:
                for i, ci in enumerate(low):
                    prod[k - s + i] -= c * ci
        return _code([c % p for c in prod[:s]], p)

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def is_prime(self) -> bool:
        return self.s == 1

    @property
    def generator(self) -> int:
        """The class of ``x`` (or 1 for a prime field)."""
        return self.p if self.s > 1 else 1

    def add(self, a, b):
        return int(self.add_t[a, b])

    def sub(self, a, b):
        return int(self.sub_t[a, b])

    def mul(self, a, b):
        return int(self.mul_t[a, b])

    def neg(self, a):
        return int(self.neg_t[a])

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        return int(self.inv_t[a])

    def power(self, a, k: int) -> int:
        out = 1
        for _ in range(k):
            out = self.mul(out, a)
        return out

    def from_int(self, k: int) -> int:
        """Image of the integer ``k`` in the prime subfield."""
        return k % self.p

    def frobenius(self, a) -> int:
        return self.power(a, self.p)

    def __repr__(self) -> str:
        return f"Field(q={self.q})"


class CharacteristicError(ValueError):
    """An operation needs characteristic 2 (or odd characteristic) and got the other."""


def frobenius_sqrt(F: Field, a: int) -> int:
    if F.p != 2:
        raise CharacteristicError("square roots via Frobenius need characteristic 2")
    b = int(F.sqrt_t[a])
    assert F.mul(b, b) == a
    return b


@lru_cache(maxsize=None)
def get_field(q: int) -> Field:
    return Field(q)
