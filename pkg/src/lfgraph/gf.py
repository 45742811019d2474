"""Exact arithmetic in GF(p^k) for small prime powers.

An element is a canonical integer in [0, q): the base-p packing of its
polynomial coordinates, with digit i holding the coefficient of x^i.  For
prime fields (k = 1) this is the usual residue 0..p-1.  All binary
operations go through dense q-by-q lookup tables built once at
construction, so arithmetic is O(1) and reproducible bit for bit.

Extension fields need a monic irreducible modulus of degree k over F_p,
given as a coefficient tuple (c0, c1, ..., ck) with ck = 1.  A built-in
table covers the orders this package is normally run at (4, 8, 9, 16, 25,
27); a caller-supplied modulus is validated by exhaustive factor search,
which is instant at these degrees.
"""

from __future__ import annotations

from itertools import product

# order q -> monic irreducible modulus over F_p, index i = coefficient of x^i
BUILTIN_MODULI = {
    4: (1, 1, 1),          # x^2 + x + 1
    8: (1, 1, 0, 1),       # x^3 + x + 1
    9: (1, 0, 1),          # x^2 + 1
    16: (1, 1, 0, 0, 1),   # x^4 + x + 1
    25: (2, 0, 1),         # x^2 + 2
    27: (1, 2, 0, 1),      # x^3 + 2x + 1
}

# tables are dense q*q lists; keep fields deliberately small
MAX_ORDER = 256


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


def _poly_trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_rem(a: list[int], b: list[int], p: int) -> list[int]:
    """Remainder of a modulo b over F_p; b must be nonzero."""
    r = list(a)
    _poly_trim(r)
    db = len(b) - 1
    lead_inv = pow(b[-1], -1, p)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        factor = (r[-1] * lead_inv) % p
        for i, bi in enumerate(b):
            r[shift + i] = (r[shift + i] - factor * bi) % p
        _poly_trim(r)
    return r


def is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    m = _poly_trim(list(modulus))
    k = len(m) - 1
    if k < 1:
        return False
    for d in range(1, k // 2 + 1):
        for tail in product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not _poly_rem(m, divisor, p):
                return False
    return True


class Field:
    """GF(p^k) with table-backed add/sub/mul/neg/inv and Frobenius maps."""

    def __init__(self, p: int, k: int = 1, modulus=None):
        if not is_prime(p):
            raise ValueError(f"p = {p} is not prime")
        if k < 1:
            raise ValueError(f"extension degree must be >= 1, got {k}")
        q = p ** k
        if q > MAX_ORDER:
            raise ValueError(f"field order {q} exceeds supported maximum {MAX_ORDER}")
        self.p = p
        self.k = k
        self.q = q
        if k == 1:
            if modulus is not None:
                raise ValueError("a modulus is only meaningful for k > 1")
            self.modulus = None
        else:
            if modulus is None:
                modulus = BUILTIN_MODULI.get(q)
                if modulus is None:
                    raise ValueError(f"no built-in modulus for q = {q}; supply one")
            modulus = tuple(int(c) % p for c in modulus)
            if len(modulus) != k + 1:
                raise ValueError(f"modulus must have degree {k}")
            if modulus[-1] != 1:
                raise ValueError("modulus must be monic")
            if not is_irreducible(modulus, p):
                raise ValueError(f"modulus {modulus} is reducible over F_{p}")
            self.modulus = modulus
        self._build_tables()

    # ---------- element encoding ----------

    def decode(self, a: int) -> tuple[int, ...]:
        """Coefficient tuple (c0..c_{k-1}) of element index a."""
        if not 0 <= a < self.q:
            raise ValueError(f"element index {a} out of range for q = {self.q}")
        digits = []
        for _ in range(self.k):
            a, r = divmod(a, self.p)
            digits.append(r)
        return tuple(digits)

    def encode(self, digits) -> int:
        digits = tuple(digits)
        if len(digits) != self.k or any(not 0 <= d < self.p for d in digits):
            raise ValueError(f"bad coefficient tuple {digits}")
        a = 0
        for d in reversed(digits):
            a = a * self.p + d
        return a

    # ---------- table construction ----------

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        dec = [self.decode(a) for a in range(q)]
        self._neg = [self.encode(tuple((-d) % p for d in dec[a])) for a in range(q)]
        self._add = [
            [self.encode(tuple((x + y) % p for x, y in zip(dec[a], dec[b])))
             for b in range(q)]
            for a in range(q)
        ]
        if k == 1:
            self._mul = [[(a * b) % p for b in range(q)] for a in range(q)]
        else:
            mod = list(self.modulus)
            self._mul = []
            for a in range(q):
                row = []
                pa = _poly_trim(list(dec[a]))
                for b in range(q):
                    pb = _poly_trim(list(dec[b]))
                    r = _poly_rem(_poly_mul(pa, pb, p), mod, p)
                    r += [0] * (k - len(r))
                    row.append(self.encode(tuple(r)))
                self._mul.append(row)
        self._inv = [0] * q
        for a in range(1, q):
            row = self._mul[a]
            self._inv[a] = row.index(1)

    # ---------- arithmetic ----------

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no multiplicative inverse")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        acc = 1
        base = a
        while e:
            if e & 1:
                acc = self._mul[acc][base]
            base = self._mul[base][base]
            e >>= 1
        return acc

    def frobenius(self, a: int, j: int) -> int:
        """a -> a^(p^j), the j-th power of the absolute Frobenius."""
        if not 0 <= j < self.k:
            raise ValueError(f"Frobenius exponent {j} out of range [0, {self.k})")
        return self.pow(a, self.p ** j)

    # ---------- iteration and identity ----------

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def __eq__(self, other):
        return (isinstance(other, Field)
                and (self.p, self.k, self.modulus) == (other.p, other.k, other.modulus))

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __repr__(self):
        if self.k == 1:
            return f"Field(p={self.p})"
        return f"Field(p={self.p}, k={self.k}, modulus={self.modulus})"


def field_automorphisms(field: Field) -> list[int]:
    """Frobenius exponents j of all field automorphisms a -> a^(p^j)."""
    return list(range(field.k))


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return (p, k) with q = p^k, or raise if q is not a prime power."""
    if q < 2:
        raise ValueError(f"{q} is not a prime power")
    p = 2
    while p * p <= q:
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise ValueError(f"{q} is not a prime power")
            return p, k
        p += 1
    return q, 1  # q itself is prime


def field_from_order(q: int, modulus=None) -> Field:
    p, k = factor_prime_power(q)
    return Field(p, k, modulus)
