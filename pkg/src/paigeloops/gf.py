"""Exact arithmetic in GF(p^k) for small q.

Elements are plain ints 0..q-1.  The int encodes the coefficient vector of the
representative polynomial in little-endian digit order: value = c0 + c1*p +
... + c_{k-1}*p^(k-1), so 0 is the additive and 1 the multiplicative identity
and the natural int order is the canonical element order.  On prime fields the
int is just the residue.

The modulus of an extension field is chosen deterministically: the
lexicographically least irreducible monic polynomial of degree k over GF(p),
coefficients compared low-degree-first.  All arithmetic goes through
precomputed numpy tables so bulk code can gather straight from them.
"""

import functools

import numpy as np

from .config import FIELD_MAX_Q
from .errors import DomainError, LimitError


def _factor_prime_power(q):
    """Return (p, k) with q = p^k, or raise DomainError."""
    if q < 2:
        raise DomainError(f"q = {q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            k = 0
            m = q
            while m % p == 0:
                m //= p
                k += 1
            if m != 1:
                raise DomainError(f"q = {q} is not a prime power")
            return p, k
    raise DomainError(f"q = {q} is not a prime power")


# -- polynomial helpers over GF(p), little-endian coefficient tuples --------


def _pol_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def _pol_divmod(a, b, p):
    """Divide a by b (b monic-izable), return (quotient, remainder)."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv_lb = pow(lb, p - 2, p)
    q = [0] * max(1, len(a) - db)
    while len(a) - 1 >= db and any(a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - 1 - db
        coef = a[-1] * inv_lb % p
        q[shift] = coef
        for i, bi in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bi) % p
        while len(a) > 1 and a[-1] == 0:
            a.pop()
    return tuple(q), tuple(a)


def _pol_is_irreducible(f, p):
    """Trial division by every monic polynomial of degree 1..deg(f)//2."""
    deg = len(f) - 1
    for d in range(1, deg // 2 + 1):
        for val in range(p**d):
            g = _int_to_coeffs(val, p, d) + (1,)
            _, r = _pol_divmod(f, g, p)
            if not any(r):
                return False
    return True


def _int_to_coeffs(val, p, k):
    out = []
    for _ in range(k):
        out.append(val % p)
        val //= p
    return tuple(out)


def _coeffs_to_int(coeffs, p):
    val = 0
    for c in reversed(coeffs):
        val = val * p + c
    return val


def _least_irreducible(p, k):
    """Least irreducible monic degree-k poly, low-degree-first lexicographic.

    Candidates are ordered by the tuple (c0, c1, ..., c_{k-1}); the leading
    coefficient is always 1.
    """
    import itertools

    for lower in itertools.product(range(p), repeat=k):
        f = lower + (1,)
        if _pol_is_irreducible(f, p):
            return f
    raise DomainError(f"no irreducible polynomial of degree {k} over GF({p})")


class Field:
    """GF(q) with all unary/binary operations tabulated.

    Tables (numpy, int16): add/sub/mul are (q, q); neg/inv/frob are (q,).
    inv[0] is -1 and guarded in inv().
    """

    def __init__(self, q):
        p, k = _factor_prime_power(q)
        self.q = q
        self.p = p
        self.k = k
        self.modulus = None if k == 1 else _least_irreducible(p, k)

        if k == 1:
            idx = np.arange(q, dtype=np.int64)
            add = (idx[:, None] + idx[None, :]) % p
            mul = (idx[:, None] * idx[None, :]) % p
        else:
            coeff = np.array(
                [_int_to_coeffs(v, p, k) for v in range(q)], dtype=np.int64
            )
            add_c = (coeff[:, None, :] + coeff[None, :, :]) % p
            add = np.zeros((q, q), dtype=np.int64)
            for i in range(k):
                add += add_c[:, :, i] * p**i
            mul = np.zeros((q, q), dtype=np.int64)
            for a in range(q):
                ca = _int_to_coeffs(a, p, k)
                for b in range(q):
                    prod = _pol_mul(ca, _int_to_coeffs(b, p, k), p)
                    _, rem = _pol_divmod(prod, self.modulus, p)
                    rem = rem + (0,) * (k - len(rem))
                    mul[a, b] = _coeffs_to_int(rem[:k], p)
        self.add_table = add.astype(np.int16)
        self.mul_table = mul.astype(np.int16)

        neg = np.zeros(q, dtype=np.int16)
        inv = np.full(q, -1, dtype=np.int16)
        for a in range(q):
            neg[a] = int(np.nonzero(self.add_table[a] == 0)[0][0])
            hits = np.nonzero(self.mul_table[a] == 1)[0]
            if len(hits):
                inv[a] = int(hits[0])
        self.neg_table = neg
        self.inv_table = inv
        self.sub_table = self.add_table[:, neg][np.arange(q)[:, None],
                                                np.arange(q)[None, :]]
        # frobenius x -> x^p
        frob = np.zeros(q, dtype=np.int16)
        for a in range(q):
            acc = 1
            for _ in range(p):
                acc = int(self.mul_table[acc, a])
            frob[a] = acc
        self.frob_table = frob

    # -- scalar operations ---------------------------------------------------

    def check(self, a):
        if not isinstance(a, (int, np.integer)) or not 0 <= a < self.q:
            raise DomainError(f"{a!r} is not an element of GF({self.q})")
        return int(a)

    def add(self, a, b):
        return int(self.add_table[self.check(a), self.check(b)])

    def sub(self, a, b):
        return int(self.sub_table[self.check(a), self.check(b)])

    def mul(self, a, b):
        return int(self.mul_table[self.check(a), self.check(b)])

    def neg(self, a):
        return int(self.neg_table[self.check(a)])

    def inv(self, a):
        a = self.check(a)
        if a == 0:
            raise DomainError("0 has no multiplicative inverse")
        return int(self.inv_table[a])

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def frobenius(self, a):
        return int(self.frob_table[self.check(a)])

    def pow(self, a, n):
        a = self.check(a)
        if n < 0:
            a, n = self.inv(a), -n
        acc = 1
        for _ in range(n):
            acc = int(self.mul_table[acc, a])
        return acc

    # -- structure -----------------------------------------------------------

    def elements(self):
        return range(self.q)

    def coeffs(self, a):
        """Little-endian coefficient tuple of a (length k)."""
        return _int_to_coeffs(self.check(a), self.p, self.k)

    def from_coeffs(self, coeffs):
        if len(coeffs) != self.k or any(not 0 <= c < self.p for c in coeffs):
            raise DomainError(f"bad coefficient vector {coeffs!r} for GF({self.q})")
        return _coeffs_to_int(tuple(coeffs), self.p)

    def automorphisms(self):
        """The k powers of Frobenius, each as a length-q image array."""
        maps = []
        cur = np.arange(self.q, dtype=np.int16)
        for _ in range(self.k):
            maps.append(cur.copy())
            cur = self.frob_table[cur]
        return maps

    # -- text encoding ---------------------------------------------------------

    def format_element(self, a):
        a = self.check(a)
        if self.k == 1:
            return str(a)
        return ",".join(str(c) for c in self.coeffs(a))

    def parse_element(self, text):
        parts = text.strip().split(",")
        try:
            vals = [int(t) for t in parts]
        except ValueError:
            raise DomainError(f"cannot parse {text!r} as a GF({self.q}) element")
        if self.k == 1:
            if len(vals) != 1:
                raise DomainError(f"cannot parse {text!r} as a GF({self.q}) element")
            return self.check(vals[0])
        return self.from_coeffs(vals)

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.q})"
        mod = "+".join(
            f"{c}*t^{i}" if i else str(c)
            for i, c in enumerate(self.modulus)
            if c
        )
        return f"GF({self.q})=GF({self.p})[t]/({mod})"

    def __eq__(self, other):
        return isinstance(other, Field) and other.q == self.q

    def __hash__(self):
        return hash(("Field", self.q))


@functools.lru_cache(maxsize=None)
def field(q):
    """Shared Field instance for GF(q); DomainError if q is not a prime power,
    LimitError above the configured bound."""
    if isinstance(q, bool) or not isinstance(q, int):
        raise DomainError(f"q must be an int, got {q!r}")
    p, k = _factor_prime_power(q)
    if q > FIELD_MAX_Q:
        raise LimitError(f"q = {q} exceeds the field bound {FIELD_MAX_Q}",
                         bound=FIELD_MAX_Q)
    return Field(q)
