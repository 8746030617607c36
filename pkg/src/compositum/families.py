"""Generators with known minimal composites, and tame decomposition.

Covers Dickson polynomials, the power/additive pairs (x^n, x^(p^r) - x)
and (x^n, (x-1)^m) whose minimal composites follow explicit degree
formulas, degree-two pairs, tame two-family constructions, and extraction
of a common right composition factor of tame pairs.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dfield
from math import comb, gcd, lcm

from .errors import InvalidParams
from .fields import GF, Field, FieldElement, is_prime
from .poly import Polynomial, compose
from .search import extract_cofactor, normalize_monic_zero

MATERIALIZE_CAP = 2 ** 16


@dataclass(frozen=True)
class FamilyInstance:
    f1: Polynomial
    f2: Polynomial
    expected_min_degree: int
    family_tag: str
    expected_h: Polynomial | None = None
    params: dict = dfield(default_factory=dict)


# ---------------------------------------------------------------------------
# integer factorization helpers (small arguments; exact)

def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise InvalidParams("factorize needs a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n and d < 10 ** 6:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if not is_prime(n):
            raise InvalidParams(f"cofactor {n} is too large to factor")
        out[n] = out.get(n, 0) + 1
    return out


def multiplicative_order(a: int, m: int) -> int:
    """Order of a in (Z/m)^*, via the factorization of the group exponent."""
    if m < 1 or gcd(a, m) != 1:
        raise InvalidParams(f"{a} is not a unit mod {m}")
    if m == 1:
        return 1
    exponent = 1
    for q, e in factorize(m).items():
        if q == 2 and e >= 3:
            lam = 2 ** (e - 2)
        else:
            lam = q ** (e - 1) * (q - 1)
        exponent = lcm(exponent, lam)
    order = exponent
    for q in factorize(exponent):
        while order % q == 0 and pow(a, order // q, m) == 1:
            order //= q
    return order


# ---------------------------------------------------------------------------
# Dickson polynomials

def dickson(n: int, alpha: FieldElement) -> Polynomial:
    """Degree-n Dickson polynomial with parameter alpha.

    Defined by D(x + alpha/x) = x^n + (alpha/x)^n; computed here by the
    recurrence D_n = x*D_{n-1} - alpha*D_{n-2} with D_0 = 2, D_1 = x.
    """
    if n < 0:
        raise InvalidParams("dickson index must be nonnegative")
    F = alpha.field
    x = Polynomial.x(F)
    prev2 = Polynomial.const(F, 2)
    if n == 0:
        return prev2
    prev = x
    for _ in range(n - 1):
        prev2, prev = prev, x * prev - prev2 * alpha
    return prev


def dickson_closed_form(n: int, alpha: FieldElement) -> Polynomial:
    """The explicit sum formula; an independent cross-check of dickson().

    Coefficients n/(n-i) * C(n-i, i) are computed exactly over Z before
    reduction, so characteristic p dividing n - i is harmless.
    """
    if n < 1:
        raise InvalidParams("closed form needs n >= 1")
    F = alpha.field
    out = Polynomial.zero(F)
    for i in range(n // 2 + 1):
        num = n * comb(n - i, i)
        q, r = divmod(num, n - i)
        assert r == 0
        coeff = Polynomial.const(F, q) * (-alpha) ** i
        out = out + coeff * Polynomial.monomial(F, n - 2 * i)
    return out


# ---------------------------------------------------------------------------
# known-answer families

def _additive_poly(field: Field, q: int) -> Polynomial:
    # x^q - x
    out = [field.zero_val] * (q + 1)
    out[1] = field.neg(field.one_val)
    out[q] = field.one_val
    return Polynomial._raw(field, out)


def additive_family(n: int, p: int, r: int = 1,
                    cap: int = MATERIALIZE_CAP) -> FamilyInstance:
    """(x^n, x^(p^r) - x) over GF(p); minimal composite (x^(p^(r*d)) - x)^n
    where d is the multiplicative order of p^r mod n."""
    if not is_prime(p):
        raise InvalidParams(f"{p} is not prime")
    if n < 1 or r < 1 or n % p == 0:
        raise InvalidParams("need n >= 1 coprime to p and r >= 1")
    F = GF(p)
    if p ** r > cap:
        raise InvalidParams(f"x^(p^r) - x with p^r = {p ** r} exceeds the cap")
    d = multiplicative_order(pow(p, r, n) if n > 1 else 1, n)
    f1 = Polynomial.monomial(F, n)
    f2 = _additive_poly(F, p ** r)
    degree = n * p ** (r * d)
    expected = None
    if degree <= cap:
        expected = _additive_poly(F, p ** (r * d)) ** n
    return FamilyInstance(f1, f2, degree, "cyclic_additive", expected,
                          {"n": n, "p": p, "r": r, "d": d})


def shifted_family(n: int, m: int, p: int,
                   cap: int = MATERIALIZE_CAP) -> FamilyInstance:
    """(x^n, (x-1)^m) over GF(p); minimal composite (x^(p^d) - x)^lcm(m, n)
    where d is the multiplicative order of p mod lcm(m, n)."""
    if not is_prime(p):
        raise InvalidParams(f"{p} is not prime")
    if n <= 1 or m <= 1 or (n * m) % p == 0:
        raise InvalidParams("need n, m > 1 with p dividing neither")
    F = GF(p)
    L = lcm(m, n)
    d = multiplicative_order(p % L, L)
    f1 = Polynomial.monomial(F, n)
    f2 = (Polynomial.x(F) - Polynomial.one(F)) ** m
    degree = L * p ** d
    expected = None
    if degree <= cap:
        expected = _additive_poly(F, p ** d) ** L
    return FamilyInstance(f1, f2, degree, "cyclic_shifted", expected,
                          {"n": n, "m": m, "p": p, "d": d})


def deg2_family(a, b, field: Field) -> FamilyInstance:
    """(x^2 + a*x, x^2 + b*x); minimal composite degree 2p (2 when a = b)."""
    if field.p == 0:
        raise InvalidParams("degree-two family lives in characteristic p > 0")
    x = Polynomial.x(field)
    av = a if isinstance(a, FieldElement) else field(a)
    bv = b if isinstance(b, FieldElement) else field(b)
    f1 = x * x + x * av
    f2 = x * x + x * bv
    degree = 2 if av == bv else 2 * field.p
    return FamilyInstance(f1, f2, degree, "deg2_pair",
                          None, {"a": str(av), "b": str(bv), "p": field.p})


def linear_inverse(ell: Polynomial) -> Polynomial:
    """Functional inverse of a degree-one polynomial."""
    if ell.degree != 1:
        raise InvalidParams("inverse needs a degree-one polynomial")
    u, v = ell.coeff(1), ell.coeff(0)
    x = Polynomial.x(ell.field)
    return (x - Polynomial.const(ell.field, v)) * (ell.field.one / u)


def tame_family(kind: str, **params) -> FamilyInstance:
    """Two tame constructions with coprime core degrees.

    kind='cyclic': f1 = l1(x^r * P(x^n) (h(x))), f2 = l2(x^n (h(x))) with
    gcd(r, n) = 1; kind='dickson': f1 = l1(D_m(h(x), alpha)),
    f2 = l2(D_n(h(x), alpha)) with gcd(m, n) = 1.  The minimal composite
    degree is lcm(deg f1, deg f2); an explicit composite is materialized.
    """
    if kind == "cyclic":
        P = params["P"]
        r = params["r"]
        n = params["n"]
        F = P.field
        h = params.get("h") or Polynomial.x(F)
        l1 = params.get("l1") or Polynomial.x(F)
        l2 = params.get("l2") or Polynomial.x(F)
        if r < 1 or n < 1 or gcd(r, n) != 1:
            raise InvalidParams("need r, n >= 1 with gcd(r, n) = 1")
        if P.is_zero or h.degree < 1 or l1.degree != 1 or l2.degree != 1:
            raise InvalidParams("bad cyclic family parameters")
        core1 = Polynomial.monomial(F, r) * compose(P, Polynomial.monomial(F, n))
        core2 = Polynomial.monomial(F, n)
        if F.p and (core1.degree * core2.degree * h.degree) % F.p == 0:
            raise InvalidParams("characteristic divides a degree (wild case)")
        f1 = compose(l1, compose(core1, h))
        f2 = compose(l2, compose(core2, h))
        # core1^n = (x^r P(x)^n) applied to x^n, so both sides reach it
        comp_core = core1 ** n
        g1 = compose(Polynomial.monomial(F, n), linear_inverse(l1))
        g2 = compose(Polynomial.monomial(F, r) * P ** n, linear_inverse(l2))
        expected = compose(comp_core, h)
        tag = "tame_cyclic"
        par = {"r": r, "n": n}
    elif kind == "dickson":
        m = params["m"]
        n = params["n"]
        alpha = params["alpha"]
        F = alpha.field
        h = params.get("h") or Polynomial.x(F)
        l1 = params.get("l1") or Polynomial.x(F)
        l2 = params.get("l2") or Polynomial.x(F)
        if m < 1 or n < 1 or gcd(m, n) != 1:
            raise InvalidParams("need gcd(m, n) = 1")
        if F.p and (m * n * h.degree) % F.p == 0:
            raise InvalidParams("characteristic divides a degree (wild case)")
        if h.degree < 1 or l1.degree != 1 or l2.degree != 1:
            raise InvalidParams("bad dickson family parameters")
        f1 = compose(l1, compose(dickson(m, alpha), h))
        f2 = compose(l2, compose(dickson(n, alpha), h))
        g1 = compose(dickson(n, alpha ** m), linear_inverse(l1))
        g2 = compose(dickson(m, alpha ** n), linear_inverse(l2))
        expected = compose(dickson(m * n, alpha), h)
        tag = "tame_dickson"
        par = {"m": m, "n": n, "alpha": str(alpha)}
    else:
        raise InvalidParams(f"unknown tame family kind {kind!r}")
    assert compose(g1, f1) == expected and compose(g2, f2) == expected
    return FamilyInstance(f1, f2, lcm(f1.degree, f2.degree), tag,
                          expected, par)


# ---------------------------------------------------------------------------
# tame right components

def tame_right_component(f: Polynomial, n: int):
    """Decompose f = g(r(x)) with deg r = n, r monic and r(0) = 0.

    The cofactor degree m = deg f / n must be invertible in the field; the
    candidate r is read off the top coefficients of f against r^m and then
    confirmed by exact cofactor extraction.  Returns (g, r) or None.
    """
    df = f.degree
    if df < 1 or n < 1 or df % n:
        raise InvalidParams(f"degree {n} does not divide deg f = {df}")
    F = f.field
    m = df // n
    if F.p and m % F.p == 0:
        raise InvalidParams("wild cofactor: characteristic divides deg f / n")
    if m == 1:
        r = normalize_monic_zero(f)
        g = Polynomial.x(F) * f.lead + Polynomial.const(F, f.constant)
        assert compose(g, r) == f
        return g, r
    fm = f.monic()
    r = Polynomial.monomial(F, n)
    m_elt = FieldElement(F, F.coerce(m))
    for j in range(1, n):
        rm = r ** m
        delta = fm.coeff(df - j) - rm.coeff(df - j)
        if not delta.is_zero:
            r = r + Polynomial.monomial(F, n - j, delta / m_elt)
    g = extract_cofactor(f, r)
    if g is None:
        return None
    return g, r


def common_right_component(f1: Polynomial, f2: Polynomial):
    """A normalized r of degree gcd(deg f1, deg f2) with both f_i = g_i(r).

    Returns None when no such tame component exists (including the wild
    case where the characteristic divides a cofactor degree).
    """
    d = gcd(f1.degree, f2.degree)
    if d == 1:
        return Polynomial.x(f1.field)
    try:
        t1 = tame_right_component(f1, d)
        t2 = tame_right_component(f2, d)
    except InvalidParams:
        return None
    if t1 is None or t2 is None:
        return None
    if t1[1] != t2[1]:
        return None
    return t1[1]
