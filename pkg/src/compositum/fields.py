"""Exact arithmetic in GF(p), GF(p^n), and Q.

Field objects describe a field and act as element factories; elements are
immutable wrappers around a raw representation (an int residue, a tuple of
residues, or a Fraction).  Extension fields carry an explicit monic
irreducible modulus over GF(p), and the modulus travels with every
serialized result so computations replay exactly.

No floating point is used anywhere.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd

from .errors import (
    DivideByZero,
    IncompatibleFields,
    InvalidModulus,
    UnsupportedOperation,
)


# ---------------------------------------------------------------------------
# integer polynomials modulo p  (coefficient lists, ascending exponents)

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _ip_add(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _trim(out)


def _ip_sub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _trim(out)


def _ip_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _trim([c % p for c in out])


def _ip_divmod(a, b, p):
    if not b:
        raise DivideByZero("polynomial division by zero")
    r = [c % p for c in a]
    _trim(r)
    db = len(b) - 1
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(r) - db)
    while len(r) - 1 >= db and r:
        c = (r[-1] * inv) % p
        k = len(r) - 1 - db
        q[k] = c
        for i, bc in enumerate(b):
            r[k + i] = (r[k + i] - c * bc) % p
        _trim(r)
    return _trim(q), r


def _ip_gcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _ip_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [(c * inv) % p for c in a]
    return a


def _ip_xgcd(a, b, p):
    # returns (g, u, v) with u*a + v*b = g, g monic
    r0, r1 = list(a), list(b)
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        q, r = _ip_divmod(r0, r1, p)
        r0, r1 = r1, r
        u0, u1 = u1, _ip_sub(u0, _ip_mul(q, u1, p), p)
        v0, v1 = v1, _ip_sub(v0, _ip_mul(q, v1, p), p)
    if r0:
        inv = pow(r0[-1], -1, p)
        r0 = [(c * inv) % p for c in r0]
        u0 = [(c * inv) % p for c in u0]
        v0 = [(c * inv) % p for c in v0]
    return r0, u0, v0


def _ip_powmod(a, e, m, p):
    result = [1]
    base = _ip_divmod(a, m, p)[1]
    while e:
        if e & 1:
            result = _ip_divmod(_ip_mul(result, base, p), m, p)[1]
        base = _ip_divmod(_ip_mul(base, base, p), m, p)[1]
        e >>= 1
    return result


_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for the integer sizes used here."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors by trial division (small inputs only)."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out.append(n)
    return out


def is_irreducible(coeffs, p: int) -> bool:
    """Irreducibility over GF(p) via the Frobenius test.

    Checks x^(p^n) = x mod f together with gcd(x^(p^(n/l)) - x, f) = 1 for
    every prime l dividing n = deg f.
    """
    f = _trim([c % p for c in coeffs])
    n = len(f) - 1
    if n <= 0:
        return False
    if n == 1:
        return True
    inv = pow(f[-1], -1, p)
    f = [(c * inv) % p for c in f]
    checkpoints = {n // ell for ell in prime_factors(n)}
    x = [0, 1]
    t = list(x)
    for i in range(1, n + 1):
        t = _ip_powmod(t, p, f, p)
        if i in checkpoints:
            if _ip_gcd(_ip_sub(t, x, p), f, p) != [1]:
                return False
    return t == x


# ---------------------------------------------------------------------------
# field descriptors

class Field:
    """Base class for field descriptors.

    Calling a field coerces a value into it: ``GF(5)(7)`` is ``2 mod 5``.
    Two descriptors are equal iff kind, characteristic, and modulus agree.
    """

    kind = None
    p = 0
    degree = 1
    modulus = None  # ascending coefficient tuple over GF(p), extension only
    size = None     # number of elements, None when infinite

    def __call__(self, x):
        return FieldElement(self, self.coerce(x))

    def key(self):
        return (self.kind, self.p, self.modulus)

    def __eq__(self, other):
        return isinstance(other, Field) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return self.name

    @property
    def zero(self):
        return FieldElement(self, self.zero_val)

    @property
    def one(self):
        return FieldElement(self, self.one_val)

    def elements(self):
        """Iterate over all elements in a fixed canonical order."""
        raise UnsupportedOperation(f"{self.name} is not finite")

    def random_element(self, rng: random.Random):
        raise UnsupportedOperation(f"{self.name} has no bounded sampler")

    # raw-value inverse helpers shared by subclasses
    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one_val
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result


class PrimeField(Field):
    kind = "prime"

    def __init__(self, p):
        if not is_prime(p):
            raise InvalidModulus(f"{p} is not prime")
        self.p = p
        self.size = p
        self.name = f"GF({p})"
        self.zero_val = 0
        self.one_val = 1

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field.key() == self.key():
                return x.val
            raise IncompatibleFields(f"cannot coerce {x.field!r} into {self!r}")
        if isinstance(x, int):
            return x % self.p
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a == 0:
            raise DivideByZero("inverse of zero")
        return pow(a, -1, self.p)

    def pow(self, a, e):
        if e < 0:
            return pow(self.inv(a), -e, self.p)
        return pow(a, e, self.p)

    def elements(self):
        for v in range(self.p):
            yield FieldElement(self, v)

    def random_element(self, rng):
        return FieldElement(self, rng.randrange(self.p))

    def sort_key(self, val):
        return val

    def fmt(self, val):
        b = val if val <= self.p // 2 else val - self.p
        return str(b)


class ExtensionField(Field):
    kind = "extension"

    def __init__(self, p, modulus):
        if not is_prime(p):
            raise InvalidModulus(f"{p} is not prime")
        mod = tuple(c % p for c in modulus)
        if len(mod) < 3 or mod[-1] != 1:
            raise InvalidModulus("modulus must be monic of degree >= 2")
        if not is_irreducible(mod, p):
            raise InvalidModulus("modulus is reducible")
        self.p = p
        self.modulus = mod
        n = len(mod) - 1
        self.degree = n
        self.size = p ** n
        self.name = f"GF({p}^{n})"
        self.zero_val = (0,) * n
        self.one_val = (1,) + (0,) * (n - 1)
        self._tail = mod[:-1]

    @property
    def gen(self):
        n = self.degree
        return FieldElement(self, (0, 1) + (0,) * (n - 2))

    def coerce(self, x):
        n = self.degree
        if isinstance(x, FieldElement):
            if x.field.key() == self.key():
                return x.val
            if x.field.kind == "prime" and x.field.p == self.p:
                return (x.val,) + (0,) * (n - 1)
            raise IncompatibleFields(
                f"cannot coerce {x.field!r} into {self!r}; use embed()")
        if isinstance(x, int):
            return (x % self.p,) + (0,) * (n - 1)
        if isinstance(x, (tuple, list)):
            if len(x) > n:
                raise ValueError("coefficient vector too long")
            vals = [c % self.p for c in x]
            return tuple(vals + [0] * (n - len(vals)))
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def add(self, a, b):
        p = self.p
        return tuple((x + y) % p for x, y in zip(a, b))

    def sub(self, a, b):
        p = self.p
        return tuple((x - y) % p for x, y in zip(a, b))

    def neg(self, a):
        p = self.p
        return tuple((-x) % p for x in a)

    def mul(self, a, b):
        p = self.p
        n = self.degree
        t = [0] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    t[i + j] += ai * bj
        tail = self._tail
        for i in range(2 * n - 2, n - 1, -1):
            c = t[i] % p
            if c:
                off = i - n
                for j, mj in enumerate(tail):
                    if mj:
                        t[off + j] -= c * mj
            t[i] = 0
        return tuple(c % p for c in t[:n])

    def inv(self, a):
        if not any(a):
            raise DivideByZero("inverse of zero")
        g, u, _ = _ip_xgcd(_trim(list(a)), list(self.modulus), self.p)
        if g != [1]:
            raise InvalidModulus("modulus is not irreducible")  # unreachable
        return self.coerce(tuple(u))

    def frob(self, a, k=1):
        """Raise to the p^k power (field automorphism)."""
        k %= self.degree
        if k == 0:
            return a
        return self.pow(a, self.p ** k)

    def elements(self):
        for tup in itertools.product(range(self.p), repeat=self.degree):
            yield FieldElement(self, tup[::-1])

    def random_element(self, rng):
        return FieldElement(
            self, tuple(rng.randrange(self.p) for _ in range(self.degree)))

    def sort_key(self, val):
        return val

    def fmt(self, val):
        terms = []
        for e in range(self.degree - 1, -1, -1):
            c = val[e]
            if not c:
                continue
            b = c if c <= self.p // 2 else c - self.p
            sign = "-" if b < 0 else "+"
            mag = abs(b)
            if e == 0:
                body = str(mag)
            elif e == 1:
                body = "w" if mag == 1 else f"{mag}*w"
            else:
                body = f"w^{e}" if mag == 1 else f"{mag}*w^{e}"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += sign + body
        return out


class RationalField(Field):
    kind = "rationals"
    p = 0

    def __init__(self):
        self.name = "QQ"
        self.zero_val = Fraction(0)
        self.one_val = Fraction(1)

    def coerce(self, x):
        if isinstance(x, FieldElement):
            if x.field.key() == self.key():
                return x.val
            raise IncompatibleFields(f"cannot coerce {x.field!r} into QQ")
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise DivideByZero("inverse of zero")
        return 1 / a

    def random_element(self, rng):
        # small fractions; enough variety for property tests
        return FieldElement(self, Fraction(rng.randrange(-9, 10),
                                           rng.randrange(1, 7)))

    def sort_key(self, val):
        return val

    def fmt(self, val):
        return str(val)


QQ = RationalField()

_FIELD_CACHE: dict = {}


def GF(p: int, n: int = 1, modulus=None, seed: int = 0) -> Field:
    """Return GF(p) or GF(p^n).

    Without an explicit modulus the degree-n modulus is generated
    deterministically from ``seed``.
    """
    if n == 1 and modulus is None:
        key = ("prime", p, None)
        if key not in _FIELD_CACHE:
            _FIELD_CACHE[key] = PrimeField(p)
        return _FIELD_CACHE[key]
    if modulus is not None:
        mod = tuple(c % p for c in modulus)
        if len(mod) - 1 != n:
            raise InvalidModulus(
                f"modulus degree {len(mod) - 1} does not match n = {n}")
        key = ("extension", p, mod)
        if key not in _FIELD_CACHE:
            _FIELD_CACHE[key] = ExtensionField(p, mod)
        return _FIELD_CACHE[key]
    return make_extension(p, n, seed)


def make_extension(p: int, n: int, seed: int = 0) -> Field:
    """Build GF(p^n) with a deterministically chosen irreducible modulus.

    Candidates are drawn from a seeded stream and accepted by the Frobenius
    irreducibility test, so a (p, n, seed) triple always yields the same
    field.  n = 1 returns the prime field itself.
    """
    if not is_prime(p):
        raise InvalidModulus(f"{p} is not prime")
    if n < 1:
        raise InvalidModulus("extension degree must be positive")
    if n == 1:
        return GF(p)
    key = ("gen", p, n, seed)
    if key in _FIELD_CACHE:
        return _FIELD_CACHE[key]
    rng = random.Random(f"modulus:{p}:{n}:{seed}")
    while True:
        cand = [rng.randrange(p) for _ in range(n)] + [1]
        if cand[0] == 0:
            cand[0] = 1 + rng.randrange(p - 1) if p > 2 else 1
        if is_irreducible(cand, p):
            fld = GF(p, n, modulus=cand)
            _FIELD_CACHE[key] = fld
            return fld


class FieldElement:
    """Immutable element of a Field; supports the usual operators."""

    __slots__ = ("field", "val")

    def __init__(self, field, val):
        self.field = field
        self.val = val

    def _other(self, x):
        if isinstance(x, FieldElement):
            if x.field.key() != self.field.key():
                raise IncompatibleFields(
                    f"mixing {self.field!r} and {x.field!r}; use embed()")
            return x.val
        if isinstance(x, int) or (self.field.kind == "rationals"
                                  and isinstance(x, Fraction)):
            return self.field.coerce(x)
        return None

    def __add__(self, x):
        v = self._other(x)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.add(self.val, v))

    __radd__ = __add__

    def __sub__(self, x):
        v = self._other(x)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(self.val, v))

    def __rsub__(self, x):
        v = self._other(x)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.sub(v, self.val))

    def __mul__(self, x):
        v = self._other(x)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.mul(self.val, v))

    __rmul__ = __mul__

    def __truediv__(self, x):
        v = self._other(x)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(self.val, v))

    def __rtruediv__(self, x):
        v = self._other(x)
        if v is None:
            return NotImplemented
        return FieldElement(self.field, self.field.div(v, self.val))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.val))

    def __pow__(self, e):
        if not isinstance(e, int):
            return NotImplemented
        return FieldElement(self.field, self.field.pow(self.val, e))

    def __eq__(self, x):
        if isinstance(x, FieldElement):
            return self.field.key() == x.field.key() and self.val == x.val
        if isinstance(x, (int, Fraction)):
            try:
                return self.val == self.field.coerce(x)
            except (TypeError, IncompatibleFields):
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field.key(), self.val))

    def __bool__(self):
        return self.val != self.field.zero_val

    @property
    def is_zero(self):
        return self.val == self.field.zero_val

    def sort_key(self):
        return self.field.sort_key(self.val)

    def __str__(self):
        return self.field.fmt(self.val)

    def __repr__(self):
        return f"{self.field!r}:{self}"


# ---------------------------------------------------------------------------
# Frobenius, element degree, embeddings

def frobenius(e: FieldElement, k: int = 1) -> FieldElement:
    """e^(p^k), computed by square-and-multiply."""
    fld = e.field
    if fld.kind == "rationals":
        if k == 0:
            return e
        raise UnsupportedOperation("Frobenius is undefined over QQ")
    if fld.kind == "prime":
        return e
    return FieldElement(fld, fld.frob(e.val, k))


def element_degree(e: FieldElement) -> int:
    """Least d >= 1 with e^(p^d) = e; the degree of e over GF(p)."""
    fld = e.field
    if fld.kind == "rationals":
        raise UnsupportedOperation("element degree is undefined over QQ")
    if fld.kind == "prime":
        return 1
    cur = e.val
    for d in range(1, fld.degree + 1):
        cur = fld.frob(cur, 1)
        if cur == e.val:
            return d
    raise AssertionError("Frobenius orbit did not close")  # unreachable


# chosen embedding roots, keyed by (source key, target key); composing
# through previously chosen roots keeps chains of embeddings coherent
_EMBED_ROOTS: dict = {}
_KNOWN_EXT: dict = {}
_SUBFIELD_SOLVERS: dict = {}


def _embedding_root(src: ExtensionField, tgt: ExtensionField):
    key = (src.key(), tgt.key())
    if key in _EMBED_ROOTS:
        return _EMBED_ROOTS[key]
    # prefer factoring through an already-known intermediate field
    for mid in list(_KNOWN_EXT.values()):
        if (mid.key() == src.key() or mid.key() == tgt.key()
                or mid.p != src.p):
            continue
        k1 = (src.key(), mid.key())
        k2 = (mid.key(), tgt.key())
        if k1 in _EMBED_ROOTS and k2 in _EMBED_ROOTS:
            lower = _EMBED_ROOTS[k1]
            root = _apply_root(mid, lower, tgt, _EMBED_ROOTS[k2])
            _EMBED_ROOTS[key] = root
            return root
    from .poly import Polynomial, roots_in

    src_mod = Polynomial(GF(src.p), list(src.modulus))
    roots = roots_in(src_mod, tgt)
    if not roots:
        raise IncompatibleFields(
            f"{src!r} does not embed into {tgt!r}")  # unreachable given pre
    root = min(r.root.val for r in roots)
    _EMBED_ROOTS[key] = root
    return root


def _apply_root(src: ExtensionField, vec, tgt: Field, root):
    # evaluate the coefficient vector of `vec` (over src's generator) at
    # `root` inside tgt
    acc = tgt.zero_val
    for c in reversed(vec):
        acc = tgt.mul(acc, root)
        if c:
            acc = tgt.add(acc, tgt.coerce(c))
    return acc


def embed(e: FieldElement, target: Field) -> FieldElement:
    """Canonical field embedding of e into target.

    Sources: the same field (identity), the prime subfield, or an extension
    whose degree divides the target degree.
    """
    src = e.field
    if src.key() == target.key():
        return e
    if src.kind == "rationals" or target.kind == "rationals":
        raise IncompatibleFields("QQ only embeds into itself")
    if src.p != target.p:
        raise IncompatibleFields("different characteristics")
    if src.kind == "prime":
        return target(e.val)
    if target.kind == "prime" or target.degree % src.degree != 0:
        raise IncompatibleFields(
            f"{src!r} does not embed into {target!r}")
    _KNOWN_EXT.setdefault(src.key(), src)
    _KNOWN_EXT.setdefault(target.key(), target)
    root = _embedding_root(src, target)
    return FieldElement(target, _apply_root(src, e.val, target, root))


def subfield_preimage(e: FieldElement, sub: Field):
    """The element of `sub` mapping to e under embed(), or None."""
    tgt = e.field
    if sub.key() == tgt.key():
        return e
    if sub.kind == "rationals" or tgt.kind == "rationals":
        return None
    if sub.p != tgt.p:
        return None
    if sub.kind == "prime":
        if tgt.kind == "prime":
            return None
        if all(c == 0 for c in e.val[1:]):
            return sub(e.val[0])
        return None
    if tgt.kind == "prime" or tgt.degree % sub.degree != 0:
        return None
    key = (sub.key(), tgt.key())
    solver = _SUBFIELD_SOLVERS.get(key)
    if solver is None:
        solver = _build_subfield_solver(sub, tgt)
        _SUBFIELD_SOLVERS[key] = solver
    return solver(e)


def _build_subfield_solver(sub: ExtensionField, tgt: ExtensionField):
    p = tgt.p
    m, n = sub.degree, tgt.degree
    root = _embedding_root(sub, tgt)
    # columns = images of the power basis of sub
    cols = []
    cur = tgt.one_val
    for _ in range(m):
        cols.append(cur)
        cur = tgt.mul(cur, root)

    def solve(e):
        # Gaussian elimination on the n x m system over GF(p)
        rows = [[cols[j][i] for j in range(m)] + [e.val[i]] for i in range(n)]
        piv_cols = []
        r = 0
        for c in range(m):
            piv = next((i for i in range(r, n) if rows[i][c]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][c], -1, p)
            rows[r] = [(x * inv) % p for x in rows[r]]
            for i in range(n):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[r])]
            piv_cols.append(c)
            r += 1
        sol = [0] * m
        for i, c in enumerate(piv_cols):
            sol[c] = rows[i][m]
        for i in range(r, n):
            if rows[i][m]:
                return None
        # confirm (defensive; the system is consistent iff e is in the image)
        img = _apply_root(sub, tuple(sol), tgt, root)
        if img != e.val:
            return None
        return FieldElement(sub, tuple(sol))

    return solve
