"""Dense univariate polynomials over the exact fields.

Coefficients are stored as raw field values (ascending exponents, trailing
zeros stripped); the element-level API hands out FieldElement wrappers.
All operations are pure; polynomials hash and compare by value.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DivideByZero, IncompatibleFields
from .fields import Field, FieldElement, embed

__all__ = [
    "Polynomial", "RootMultiplicity", "gcd_monic", "divrem", "compose",
    "in_xp_subring", "multiplicity", "roots_in", "factor_degrees", "pow_mod",
]


@dataclass(frozen=True)
class RootMultiplicity:
    root: FieldElement
    multiplicity: int


def _extends(big: Field, small: Field) -> bool:
    """True when `small` embeds canonically into `big` (finite fields)."""
    if big.key() == small.key():
        return True
    if big.p != small.p or big.kind == "rationals" or small.kind == "rationals":
        return False
    if small.kind == "prime":
        return True
    return big.kind == "extension" and big.degree % small.degree == 0


class Polynomial:
    __slots__ = ("field", "_c")

    def __init__(self, field: Field, coeffs=()):
        vals = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                if c.field.key() != field.key():
                    raise IncompatibleFields("coefficient from a different field")
                vals.append(c.val)
            else:
                vals.append(field.coerce(c))
        while vals and vals[-1] == field.zero_val:
            vals.pop()
        self.field = field
        self._c = tuple(vals)

    # -- constructors -------------------------------------------------------
    @classmethod
    def _raw(cls, field, vals):
        p = object.__new__(cls)
        n = len(vals)
        z = field.zero_val
        while n and vals[n - 1] == z:
            n -= 1
        p.field = field
        p._c = tuple(vals[:n])
        return p

    @classmethod
    def zero(cls, field):
        return cls._raw(field, [])

    @classmethod
    def one(cls, field):
        return cls._raw(field, [field.one_val])

    @classmethod
    def x(cls, field):
        return cls._raw(field, [field.zero_val, field.one_val])

    @classmethod
    def const(cls, field, v):
        return cls._raw(field, [field.coerce(v)])

    @classmethod
    def monomial(cls, field, k, c=1):
        return cls._raw(field, [field.zero_val] * k + [field.coerce(c)])

    # -- inspection ----------------------------------------------------------
    @property
    def degree(self):
        return len(self._c) - 1

    @property
    def is_zero(self):
        return not self._c

    @property
    def coeffs(self):
        return tuple(FieldElement(self.field, v) for v in self._c)

    def coeff(self, k):
        v = self._c[k] if 0 <= k < len(self._c) else self.field.zero_val
        return FieldElement(self.field, v)

    @property
    def lead(self):
        if not self._c:
            return self.field.zero
        return FieldElement(self.field, self._c[-1])

    @property
    def constant(self):
        return self.coeff(0)

    @property
    def is_monic(self):
        return bool(self._c) and self._c[-1] == self.field.one_val

    def constant_value(self):
        if self.degree > 0:
            raise ValueError("polynomial is not constant")
        return self.coeff(0)

    # -- ring operations ------------------------------------------------------
    def _same(self, other):
        if isinstance(other, Polynomial):
            if other.field.key() != self.field.key():
                raise IncompatibleFields("polynomials over different fields")
            return other
        if isinstance(other, (int, FieldElement, Fraction)):
            return Polynomial.const(self.field, other)
        return None

    def __add__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        F = self.field
        a, b = self._c, o._c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, v in enumerate(b):
            out[i] = F.add(out[i], v)
        return Polynomial._raw(F, out)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        F = self.field
        n = max(len(self._c), len(o._c))
        z = F.zero_val
        out = [z] * n
        for i, v in enumerate(self._c):
            out[i] = v
        for i, v in enumerate(o._c):
            out[i] = F.sub(out[i], v)
        return Polynomial._raw(F, out)

    def __rsub__(self, other):
        o = self._same(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        F = self.field
        return Polynomial._raw(F, [F.neg(v) for v in self._c])

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement, Fraction)):
            c = other.val if isinstance(other, FieldElement) else \
                self.field.coerce(other)
            if isinstance(other, FieldElement) and \
                    other.field.key() != self.field.key():
                raise IncompatibleFields("scalar from a different field")
            F = self.field
            return Polynomial._raw(F, [F.mul(v, c) for v in self._c])
        o = self._same(other)
        if o is None:
            return NotImplemented
        F = self.field
        a, b = self._c, o._c
        if not a or not b:
            return Polynomial.zero(F)
        z = F.zero_val
        out = [z] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai != z:
                for j, bj in enumerate(b):
                    if bj != z:
                        out[i + j] = F.add(out[i + j], F.mul(ai, bj))
        return Polynomial._raw(F, out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if not isinstance(e, int) or e < 0:
            return NotImplemented
        result = Polynomial.one(self.field)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def divrem(self, other):
        """Exact quotient and remainder."""
        o = self._same(other)
        if o is None or o.is_zero:
            raise DivideByZero("polynomial division by zero")
        F = self.field
        z = F.zero_val
        r = list(self._c)
        db = o.degree
        binv = F.inv(o._c[-1])
        q = [z] * max(0, len(r) - db)
        while len(r) - 1 >= db and r:
            c = F.mul(r[-1], binv)
            k = len(r) - 1 - db
            q[k] = c
            for i, bc in enumerate(o._c):
                r[k + i] = F.sub(r[k + i], F.mul(c, bc))
            while r and r[-1] == z:
                r.pop()
        return Polynomial._raw(F, q), Polynomial._raw(F, r)

    def __floordiv__(self, other):
        return self.divrem(other)[0]

    def __mod__(self, other):
        return self.divrem(other)[1]

    def monic(self):
        if self.is_zero or self.is_monic:
            return self
        F = self.field
        inv = F.inv(self._c[-1])
        return Polynomial._raw(F, [F.mul(v, inv) for v in self._c])

    def derivative(self):
        F = self.field
        if len(self._c) <= 1:
            return Polynomial.zero(F)
        out = [F.mul(self._c[i], F.coerce(i)) for i in range(1, len(self._c))]
        return Polynomial._raw(F, out)

    def __call__(self, a):
        """Evaluate; `a` may live in an extension of the coefficient field."""
        if isinstance(a, (int, Fraction)):
            a = self.field(a)
        if not isinstance(a, FieldElement):
            raise TypeError("evaluation point must be a field element")
        if a.field.key() != self.field.key():
            if a.field.p != self.field.p or self.field.kind == "rationals" \
                    or a.field.kind == "rationals":
                raise IncompatibleFields("evaluation point in an unrelated field")
            if _extends(a.field, self.field):
                return self.map_to(a.field)(a)
            if _extends(self.field, a.field):
                a = embed(a, self.field)
            else:
                raise IncompatibleFields("evaluation point in an unrelated field")
        F = self.field
        acc = F.zero_val
        for v in reversed(self._c):
            acc = F.add(F.mul(acc, a.val), v)
        return FieldElement(F, acc)

    def map_to(self, target: Field) -> "Polynomial":
        """Apply the canonical embedding to every coefficient."""
        if target.key() == self.field.key():
            return self
        vals = [embed(FieldElement(self.field, v), target).val
                for v in self._c]
        return Polynomial._raw(target, vals)

    def shift_down_root(self, a: FieldElement):
        """Exact division by (x - a); remainder must vanish."""
        F = self.field
        out = []
        acc = F.zero_val
        for v in reversed(self._c):
            acc = F.add(F.mul(acc, a.val), v)
            out.append(acc)
        rem = out.pop()
        if rem != F.zero_val:
            raise ValueError("not a root")
        return Polynomial._raw(F, out[::-1])

    # -- comparisons ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return (self.field.key() == other.field.key()
                    and self._c == other._c)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.key(), self._c))

    def sort_key(self):
        return (len(self._c), tuple(self.field.sort_key(v) for v in self._c))

    # -- printing -------------------------------------------------------------
    def to_text(self, var: str = "x") -> str:
        """Canonical text form: descending exponents, signs folded in."""
        if self.is_zero:
            return "0"
        F = self.field
        parts = []
        for e in range(len(self._c) - 1, -1, -1):
            v = self._c[e]
            if v == F.zero_val:
                continue
            neg, body, atomic = _term_text(F, v)
            if e == 0:
                term = body
            else:
                xp = var if e == 1 else f"{var}^{e}"
                if atomic and body == "1":
                    term = xp
                elif atomic:
                    term = f"{body}*{xp}"
                else:
                    term = f"({body})*{xp}"
            parts.append(("-" if neg else "+", term))
        sign0, term0 = parts[0]
        out = ("-" if sign0 == "-" else "") + term0
        for sign, term in parts[1:]:
            out += sign + term
        return out

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Polynomial({self.field!r}, '{self}')"


def _term_text(F, v):
    """(negative, magnitude_text, atomic) for one coefficient."""
    if F.kind == "prime":
        b = v if v <= F.p // 2 else v - F.p
        return b < 0, str(abs(b)), True
    if F.kind == "rationals":
        return v < 0, str(abs(v)), True
    # extension: fold the sign only for single-term values
    nonzero = [(i, c) for i, c in enumerate(v) if c]
    if len(nonzero) == 1:
        i, c = nonzero[0]
        b = c if c <= F.p // 2 else c - F.p
        mag = abs(b)
        if i == 0:
            return b < 0, str(mag), True
        wp = "w" if i == 1 else f"w^{i}"
        return b < 0, (wp if mag == 1 else f"{mag}*{wp}"), True
    return False, F.fmt(v), False


# ---------------------------------------------------------------------------
# module-level operations

def divrem(a: Polynomial, b: Polynomial):
    return a.divrem(b)


def gcd_monic(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor."""
    if a.field.key() != b.field.key():
        raise IncompatibleFields("gcd of polynomials over different fields")
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def compose(outer: Polynomial, inner: Polynomial) -> Polynomial:
    """outer(inner(x)) by Horner's rule over the polynomial ring."""
    if outer.field.key() != inner.field.key():
        raise IncompatibleFields("composition over different fields")
    F = outer.field
    acc = Polynomial.zero(F)
    for v in reversed(outer._c):
        acc = acc * inner + Polynomial.const(F, FieldElement(F, v))
    return acc


def pow_mod(base: Polynomial, e: int, mod: Polynomial) -> Polynomial:
    """base^e modulo mod (e >= 0)."""
    result = Polynomial.one(base.field) % mod
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


def in_xp_subring(f: Polynomial) -> bool:
    """True iff f is a polynomial in x^p, i.e. its derivative vanishes.

    Over characteristic zero this is False for every nonconstant f (and we
    return False rather than raising).
    """
    if f.field.p == 0:
        return False
    return f.derivative().is_zero


def multiplicity(f: Polynomial, a: FieldElement) -> int:
    """Largest m with (x - a)^m dividing f(x) - f(a)."""
    if f.degree < 1:
        raise ValueError("multiplicity needs a nonconstant polynomial")
    if a.field.key() != f.field.key():
        f = f.map_to(a.field)
    g = f - Polynomial.const(f.field, f(a))
    m = 0
    while not g.is_zero and g(a).is_zero:
        g = g.shift_down_root(a)
        m += 1
    return m


# -- roots ------------------------------------------------------------------

def roots_in(f: Polynomial, ambient: Field | None = None):
    """All roots of f lying in `ambient`, with multiplicities.

    Over finite fields the ambient may be any extension of the coefficient
    field; over QQ only rational roots are reported.  The result is sorted
    canonically.
    """
    if f.is_zero:
        raise ValueError("roots of the zero polynomial")
    ambient = ambient or f.field
    if ambient.kind == "rationals":
        if f.field.kind != "rationals":
            raise IncompatibleFields("rational roots need rational input")
        found = _rational_roots(f)
    else:
        g = f.map_to(ambient)
        if g.degree < 1:
            return []
        roots = _distinct_roots(g, ambient)
        found = []
        for r in roots:
            h = g
            m = 0
            while not h.is_zero and h(r).is_zero:
                h = h.shift_down_root(r)
                m += 1
            found.append(RootMultiplicity(r, m))
    found.sort(key=lambda rm: rm.root.sort_key())
    return found


def _rational_roots(f: Polynomial):
    out = []
    # strip powers of x
    k = 0
    g = f
    while g.degree >= 1 and g.coeff(0).is_zero:
        g = g.shift_down_root(f.field.zero)
        k += 1
    if k:
        out.append(RootMultiplicity(f.field.zero, k))
    if g.degree < 1:
        return out
    # clear denominators, divide by content
    den = 1
    for v in g._c:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in g._c]
    content = 0
    for v in ints:
        content = gcd(content, v)
    ints = [v // content for v in ints]
    a0, an = abs(ints[0]), abs(ints[-1])
    for pnum in _divisors(a0):
        for qden in _divisors(an):
            if gcd(pnum, qden) != 1:
                continue
            for s in (1, -1):
                cand = Fraction(s * pnum, qden)
                r = f.field(cand)
                if not g(r).is_zero:
                    continue
                h = g
                m = 0
                while not h.is_zero and h(r).is_zero:
                    h = h.shift_down_root(r)
                    m += 1
                out.append(RootMultiplicity(r, m))
    # deduplicate (p/q enumeration may repeat a root)
    seen = {}
    for rm in out:
        seen[rm.root.val] = rm
    return list(seen.values())


def _divisors(n: int):
    n = abs(n)
    if n == 0:
        return [1]
    small, big = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d != n // d:
                big.append(n // d)
        d += 1
    return small + big[::-1]


def _distinct_roots(g: Polynomial, ambient: Field):
    """Distinct roots of g inside the finite field `ambient`."""
    q = ambient.size
    if q <= 1024:
        return [a for a in ambient.elements() if g(a).is_zero]
    # gcd with x^q - x isolates the ambient-rational part, then split
    x = Polynomial.x(ambient)
    xq = pow_mod(x, q, g.monic())
    w = gcd_monic(g, xq - x)
    return _split_linear(w, ambient)


def _content_seed(*parts) -> int:
    h = hashlib.sha256()
    for p in parts:
        h.update(repr(p).encode())
        h.update(b"|")
    return int.from_bytes(h.digest()[:8], "big")


def _split_linear(w: Polynomial, ambient: Field):
    """Split a product of distinct monic linear factors into its roots.

    Equal-degree splitting with content-derived seeding, so results are
    reproducible without shared state.
    """
    if w.degree <= 0:
        return []
    if w.degree == 1:
        return [-(w.coeff(0) / w.coeff(1))]
    rng = random.Random(_content_seed("split", ambient.key(), w._c))
    x = Polynomial.x(ambient)
    q = ambient.size
    p = ambient.p
    for _ in range(200):
        if p == 2:
            c = ambient.random_element(rng)
            if c.is_zero:
                continue
            # trace map of c*x splits the roots by absolute trace
            u = (x * c) % w
            acc = u
            for _ in range(ambient.degree - 1):
                u = (u * u) % w
                acc = (acc + u) % w
            g = gcd_monic(w, acc)
        else:
            delta = ambient.random_element(rng)
            u = pow_mod(x + Polynomial.const(ambient, delta), (q - 1) // 2, w)
            g = gcd_monic(w, u - Polynomial.one(ambient))
        if 0 < g.degree < w.degree:
            return _split_linear(g, ambient) + _split_linear(w // g, ambient)
    raise AssertionError("equal-degree splitting failed to converge")


# -- squarefree part and factor degrees --------------------------------------

def _pth_root_coeff(F: Field, v):
    if F.kind == "prime":
        return v
    return F.frob(v, F.degree - 1)


def _squarefree_decomposition(f: Polynomial):
    """[(g, m)] with f monic = prod g^m, the g squarefree and coprime."""
    F = f.field
    p = F.p
    f = f.monic()
    factors = []
    outer = 1
    while True:
        d = f.derivative()
        if not d.is_zero:
            g = gcd_monic(f, d)
            w = f // g
            i = 1
            while w.degree > 0:
                y = gcd_monic(w, g)
                z = w // y
                if z.degree > 0:
                    factors.append((z, i * outer))
                i += 1
                w = y
                g = g // y
            if g.degree == 0:
                return factors
            f = g
        # here f is a polynomial in x^p: take the p-th root
        vals = [_pth_root_coeff(F, f._c[i]) for i in range(0, len(f._c), p)]
        f = Polynomial._raw(F, vals)
        outer *= p


def squarefree_part(f: Polynomial) -> Polynomial:
    """Product of the distinct monic irreducible factors of f."""
    out = Polynomial.one(f.field)
    for g, _ in _squarefree_decomposition(f):
        out = out * g
    return out


def factor_degrees(f: Polynomial):
    """Degrees of the irreducible factors of the squarefree part.

    Returns a sorted tuple of (degree, count) pairs, computed by
    distinct-degree factorization over the coefficient field.
    """
    if f.is_zero:
        raise ValueError("factor degrees of the zero polynomial")
    if f.field.kind == "rationals":
        raise IncompatibleFields("factor degrees need a finite field")
    if f.degree < 1:
        return ()
    rem = squarefree_part(f)
    q = f.field.size
    out = []
    x = Polynomial.x(f.field)
    h = x % rem if rem.degree > 1 else x
    d = 0
    while rem.degree >= 2 * (d + 1):
        d += 1
        h = pow_mod(h, q, rem)
        g = gcd_monic(rem, h - x)
        if g.degree > 0:
            out.append((d, g.degree // d))
            rem = rem // g
            if rem.degree > 1:
                h = h % rem
    if rem.degree > 0:
        out.append((rem.degree, 1))
    out.sort()
    return tuple(out)
