"""Small finite fields with elements encoded as integers.

GF(p) uses plain residues.  GF(p^k) encodes a polynomial over F_p in base
p, reduced modulo the smallest monic irreducible of degree k (smallest in
the base-p encoding, so the field is the same object every run).
"""

from __future__ import annotations

from ..errors import MasureError


def _smallest_prime_factor(n: int) -> int:
    d = 2
    while d * d <= n:
        if n % d == 0:
            return d
        d += 1
    return n


class GF:
    """Arithmetic in the field with q elements, q a prime power."""

    def __init__(self, q: int):
        if q < 2:
            raise MasureError(f"no field of order {q}")
        p = _smallest_prime_factor(q)
        k = 0
        m = q
        while m % p == 0:
            m //= p
            k += 1
        if m != 1:
            raise MasureError(f"{q} is not a prime power")
        self.q = q
        self.p = p
        self.k = k
        self.zero = 0
        self.one = 1
        self.modulus = self._find_irreducible() if k > 1 else None

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF) and self.q == other.q

    def __hash__(self) -> int:
        return hash(("GF", self.q))

    # polynomial encoding: integer n encodes sum n_i x^i, digits base p

    def _digits(self, n: int) -> list[int]:
        out = []
        while n:
            out.append(n % self.p)
            n //= self.p
        return out

    def _undigits(self, ds) -> int:
        out = 0
        for c in reversed(ds):
            out = out * self.p + c
        return out

    def _poly_mul(self, a: list[int], b: list[int]) -> list[int]:
        if not a or not b:
            return []
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    out[i + j] = (out[i + j] + ai * bj) % self.p
        while out and out[-1] == 0:
            out.pop()
        return out

    def _poly_rem(self, a: list[int], b: list[int]) -> list[int]:
        a = list(a)
        inv_lead = pow(b[-1], self.p - 2, self.p)
        while len(a) >= len(b):
            c = (a[-1] * inv_lead) % self.p
            shift = len(a) - len(b)
            if c:
                for i, bi in enumerate(b):
                    a[shift + i] = (a[shift + i] - c * bi) % self.p
            a.pop()
            while a and a[-1] == 0:
                a.pop()
        return a

    def _find_irreducible(self) -> list[int]:
        # monic degree k; trial division by every lower-degree monic poly
        for n in range(self.p**self.k, 2 * self.p**self.k):
            cand = self._digits(n)
            if self._irreducible(cand):
                return cand
        raise MasureError("no irreducible polynomial found")  # unreachable

    def _irreducible(self, poly: list[int]) -> bool:
        for d in range(1, len(poly) - 1):
            for m in range(self.p**d, 2 * self.p**d):
                if not self._poly_rem(poly, self._digits(m)):
                    return False
        return True

    # field operations

    def add(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a + b) % self.p
        da, db = self._digits(a), self._digits(b)
        if len(da) < len(db):
            da, db = db, da
        for i, c in enumerate(db):
            da[i] = (da[i] + c) % self.p
        return self._undigits(da)

    def neg(self, a: int) -> int:
        if self.k == 1:
            return (-a) % self.p
        return self._undigits([(-c) % self.p for c in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.k == 1:
            return (a * b) % self.p
        prod = self._poly_mul(self._digits(a), self._digits(b))
        return self._undigits(self._poly_rem(prod, self.modulus))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        if self.k == 1:
            return pow(a, self.p - 2, self.p)
        out = 1
        e = self.q - 2
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def elements(self) -> range:
        return range(self.q)
