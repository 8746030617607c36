"""Constructive search for common composites.

Two independent engines: an incremental linear-dependence search over the
span of powers of f1 and f2, and the alternating minimal-polynomial
iteration that builds up divisors of a hypothetical composite.  Both emit
the same normalized certificate when a composite exists, which makes them
cross-checkable oracles for one another.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import IncompatibleFields, InvalidBound, InvalidCap
from .fields import Field, FieldElement, subfield_preimage
from .poly import Polynomial, compose

__all__ = [
    "CompositeCertificate", "SearchOutcome", "VerifyResult", "DescentReport",
    "search_linear", "minimal_poly_mod", "fiber_iterate", "extract_cofactor",
    "verify_certificate", "descent_check", "default_bound", "normalize_monic_zero",
]


@dataclass(frozen=True)
class CompositeCertificate:
    """A machine-verifiable witness h = g1(f1) = g2(f2)."""

    f1: Polynomial
    f2: Polynomial
    h: Polynomial
    g1: Polynomial
    g2: Polynomial
    minimal: bool = False
    normalized: bool = True


@dataclass(frozen=True)
class SearchOutcome:
    """Found(certificate) | NoneBelow(bound) | CapExceeded(trace)."""

    status: str  # "found" | "none_below" | "cap_exceeded"
    certificate: CompositeCertificate | None = None
    bound: int | None = None
    trace: tuple = ()

    @property
    def found(self):
        return self.status == "found"


@dataclass(frozen=True)
class VerifyResult:
    ok: bool
    reason: str = "ok"

    def __bool__(self):
        return self.ok


def default_bound(f1: Polynomial, f2: Polynomial) -> int:
    """4 * lcm(deg f1, deg f2) * p^2 in characteristic p > 0, lcm over Q."""
    L = lcm(f1.degree, f2.degree)
    p = f1.field.p
    return 4 * L * p * p if p else L


def normalize_monic_zero(h: Polynomial) -> Polynomial:
    """The unique monic, zero-constant-term polynomial u*(h - h(0))."""
    h0 = h - Polynomial.const(h.field, h.constant)
    return h0.monic()


# ---------------------------------------------------------------------------
# incremental row reduction with expression tracking

class _Span:
    """Row-reduced span of coefficient vectors with provenance.

    insert() returns None if the vector was independent, otherwise the
    combination {generator_id: coefficient} that sums to zero (with the
    inserted generator carrying coefficient one).
    """

    def __init__(self, fld: Field):
        self.fld = fld
        self.rows = {}  # pivot index -> (vector, combination)
        self.rational = fld.kind == "rationals"

    def _rescale(self, vec, comb):
        # keep rational rows integral and primitive (fraction-free growth)
        denoms = [v.denominator for v in vec if v] + \
                 [v.denominator for v in comb.values() if v]
        nums = [abs(v.numerator) for v in vec if v] + \
               [abs(v.numerator) for v in comb.values() if v]
        if not nums:
            return vec, comb
        d = 1
        for x in denoms:
            d = d * x // gcd(d, x)
        g = 0
        for x in nums:
            g = gcd(g, x)
        scale = Fraction(d, g)
        if scale != 1:
            vec = [v * scale for v in vec]
            comb = {k: v * scale for k, v in comb.items()}
        return vec, comb

    def insert(self, vec, gen_id):
        F = self.fld
        z = F.zero_val
        v = list(vec)
        comb = {gen_id: F.one_val}
        while True:
            piv = len(v) - 1
            while piv >= 0 and v[piv] == z:
                piv -= 1
            if piv < 0:
                return comb
            if piv in self.rows:
                rvec, rcomb = self.rows[piv]
                c = F.div(v[piv], rvec[piv])
                for i, rv in enumerate(rvec):
                    if rv != z:
                        v[i] = F.sub(v[i], F.mul(c, rv))
                for k, rc in rcomb.items():
                    comb[k] = F.sub(comb.get(k, z), F.mul(c, rc))
                if self.rational:
                    v, comb = self._rescale(v, comb)
            else:
                self.rows[piv] = (v, comb)
                return None


def _coeff_vector(poly: Polynomial, length: int):
    F = poly.field
    z = F.zero_val
    out = [z] * length
    for i, c in enumerate(poly._c):
        out[i] = c
    return out


def search_linear(f1: Polynomial, f2: Polynomial, bound: int | None = None) -> SearchOutcome:
    """Find the minimal-degree common composite of degree <= bound.

    Powers 1, f1, f2, f1^2, f2^2, ... are inserted in ascending degree
    (f1-powers first on ties) into an exactly row-reduced span; the first
    linear dependence yields the minimal composite, normalized monic with
    zero constant term.  If no dependence appears the outcome NoneBelow
    asserts no common composite of degree <= bound exists.
    """
    if f1.field.key() != f2.field.key():
        raise IncompatibleFields("inputs over different fields")
    d1, d2 = f1.degree, f2.degree
    if d1 < 1 or d2 < 1:
        raise InvalidBound("inputs must be nonconstant")
    if bound is None:
        bound = default_bound(f1, f2)
    if bound < max(d1, d2):
        raise InvalidBound(f"bound {bound} below max degree {max(d1, d2)}")
    F = f1.field
    gens = [(k * d1, 1, k) for k in range(1, bound // d1 + 1)]
    gens += [(k * d2, 2, k) for k in range(1, bound // d2 + 1)]
    gens.sort()
    span = _Span(F)
    span.insert(_coeff_vector(Polynomial.one(F), bound + 1), (0, 0))
    powers = {1: Polynomial.one(F), 2: Polynomial.one(F)}
    exps = {1: 0, 2: 0}
    for deg, fam, k in gens:
        base = f1 if fam == 1 else f2
        while exps[fam] < k:
            powers[fam] = powers[fam] * base
            exps[fam] += 1
        comb = span.insert(_coeff_vector(powers[fam], bound + 1), (fam, k))
        if comb is None:
            continue
        # dependence fires on an f2 power: assemble G2(f2) = G1(f1)
        assert fam == 2, "dependence can only appear on the second family"
        scale = F.inv(comb[(2, k)])
        g2_c = {k: F.one_val}
        g1_c = {}
        c0 = F.zero_val
        for (gfam, gk), cv in comb.items():
            cv = F.mul(cv, scale)
            if cv == F.zero_val or (gfam, gk) == (2, k):
                continue
            if gfam == 2:
                g2_c[gk] = cv
            elif gfam == 1:
                g1_c[gk] = F.neg(cv)
            else:
                c0 = F.neg(cv)
        G2 = Polynomial._raw(
            F, [g2_c.get(i, F.zero_val) for i in range(k + 1)])
        top1 = max(g1_c) if g1_c else 0
        coeffs1 = [F.zero_val] * (top1 + 1)
        for i, cv in g1_c.items():
            coeffs1[i] = cv
        coeffs1[0] = F.add(coeffs1[0], c0)
        G1 = Polynomial._raw(F, coeffs1)
        h_raw = compose(G2, f2)
        assert h_raw == compose(G1, f1), "internal dependence mismatch"
        lead_inv = F.inv(h_raw._c[-1])
        shift = h_raw.constant
        h = ((h_raw - Polynomial.const(F, shift)) * FieldElement(F, lead_inv))
        g1 = ((G1 - Polynomial.const(F, shift)) * FieldElement(F, lead_inv))
        g2 = ((G2 - Polynomial.const(F, shift)) * FieldElement(F, lead_inv))
        cert = CompositeCertificate(f1, f2, h, g1, g2,
                                    minimal=True, normalized=True)
        return SearchOutcome("found", certificate=cert)
    return SearchOutcome("none_below", bound=bound)


def minimal_poly_mod(f: Polynomial, r: Polynomial) -> Polynomial:
    """The monic m of least degree with r dividing m(f(x))."""
    if f.degree < 1 or r.degree < 1:
        raise InvalidBound("minimal_poly_mod needs nonconstant inputs")
    F = f.field
    rm = r.monic()
    span = _Span(F)
    n = rm.degree
    power = Polynomial.one(F) % rm
    k = 0
    while True:
        comb = span.insert(_coeff_vector(power, n), k)
        if comb is not None:
            scale = F.inv(comb[k])
            coeffs = [F.zero_val] * (k + 1)
            for j, cv in comb.items():
                coeffs[j] = F.mul(cv, scale)
            return Polynomial._raw(F, coeffs)
        k += 1
        power = (power * f) % rm


def fiber_iterate(f1: Polynomial, f2: Polynomial,
                  degree_cap: int | None = None) -> SearchOutcome:
    """Alternating minimal-polynomial iteration.

    Starting from r1 = f1 - f1(0), each step replaces r by m(f(x)) where m
    is the minimal polynomial of the other input mod r.  Each r divides the
    next, so degrees are nondecreasing; stabilization means r is a
    minimal-degree common composite.  Inputs are first made monic with zero
    constant term, which changes neither existence nor the minimal degree.
    """
    if f1.field.key() != f2.field.key():
        raise IncompatibleFields("inputs over different fields")
    d1, d2 = f1.degree, f2.degree
    if d1 < 1 or d2 < 1:
        raise InvalidCap("inputs must be nonconstant")
    if degree_cap is None:
        degree_cap = default_bound(f1, f2)
    if degree_cap < max(d1, d2):
        raise InvalidCap(f"cap {degree_cap} below max degree {max(d1, d2)}")
    F = f1.field
    n1 = normalize_monic_zero(f1)
    n2 = normalize_monic_zero(f2)
    r = n1
    trace = [r]
    nxt, other = n2, n1
    while True:
        m = minimal_poly_mod(nxt, r)
        r_next = compose(m, nxt)
        if r_next == r:
            h = r
            g1 = extract_cofactor(h, f1)
            g2 = extract_cofactor(h, f2)
            assert g1 is not None and g2 is not None
            cert = CompositeCertificate(f1, f2, h, g1, g2,
                                        minimal=True, normalized=True)
            return SearchOutcome("found", certificate=cert,
                                 trace=tuple(trace))
        trace.append(r_next)
        if r_next.degree > degree_cap:
            return SearchOutcome("cap_exceeded", trace=tuple(trace))
        r = r_next
        nxt, other = other, nxt


def extract_cofactor(h: Polynomial, f: Polynomial) -> Polynomial | None:
    """The unique g with g(f(x)) = h(x), or None when none exists."""
    if f.degree < 1:
        raise InvalidBound("cofactor base must be nonconstant")
    if h.field.key() != f.field.key():
        if h.field.p == f.field.p and h.field.kind != "rationals" \
                and f.field.kind in ("prime", "extension"):
            f = f.map_to(h.field)
        else:
            raise IncompatibleFields("mismatched fields")
    if h.is_zero:
        return Polynomial.zero(h.field)
    df = f.degree
    if h.degree % df != 0:
        return None
    F = h.field
    k = h.degree // df
    powers = [Polynomial.one(F)]
    for _ in range(k):
        powers.append(powers[-1] * f)
    rem = h
    out = [F.zero_val] * (k + 1)
    for j in range(k, -1, -1):
        c = rem.coeff(j * df)
        if not c.is_zero:
            a = c / (f.lead ** j)
            out[j] = a.val
            rem = rem - powers[j] * a
    if rem.is_zero:
        return Polynomial._raw(F, out)
    return None


def verify_certificate(cert: CompositeCertificate) -> VerifyResult:
    """Re-derive every claim of a composite certificate."""
    polys = (cert.f1, cert.f2, cert.h, cert.g1, cert.g2)
    key = cert.h.field.key()
    if any(p.field.key() != key for p in polys):
        return VerifyResult(False, "field_mismatch")
    if any(p.degree < 1 for p in polys):
        return VerifyResult(False, "constant_component")
    if compose(cert.g1, cert.f1) != cert.h:
        return VerifyResult(False, "compose_f1")
    if compose(cert.g2, cert.f2) != cert.h:
        return VerifyResult(False, "compose_f2")
    if cert.h.degree != cert.g1.degree * cert.f1.degree or \
            cert.h.degree != cert.g2.degree * cert.f2.degree:
        return VerifyResult(False, "degree")
    if cert.normalized and not (cert.h.is_monic and cert.h.constant.is_zero):
        return VerifyResult(False, "normalization")
    if cert.minimal:
        L = lcm(cert.f1.degree, cert.f2.degree)
        if cert.h.degree > L:
            outcome = search_linear(cert.f1, cert.f2, cert.h.degree - 1)
            if outcome.status != "none_below":
                return VerifyResult(False, "minimality")
    return VerifyResult(True)


@dataclass(frozen=True)
class DescentReport:
    base_outcome: SearchOutcome
    ext_outcome: SearchOutcome
    same_status: bool
    same_degree: bool
    coeffs_in_base: bool
    h_descended: Polynomial | None

    @property
    def ok(self):
        return self.same_status and self.same_degree and self.coeffs_in_base


def descent_check(f1: Polynomial, f2: Polynomial, ext: Field,
                  bound: int | None = None) -> DescentReport:
    """Search over the base field and over an extension with one bound.

    Minimal degrees must agree, and the normalized minimal composite found
    over the extension must have all coefficients in the embedded base
    field (where it coincides with the base-field result).
    """
    if bound is None:
        bound = default_bound(f1, f2)
    base_out = search_linear(f1, f2, bound)
    ext_out = search_linear(f1.map_to(ext), f2.map_to(ext), bound)
    same_status = base_out.status == ext_out.status
    if base_out.found and ext_out.found:
        hb, he = base_out.certificate.h, ext_out.certificate.h
        same_degree = hb.degree == he.degree
        descended = []
        ok = True
        for c in he.coeffs:
            pre = subfield_preimage(c, f1.field)
            if pre is None:
                ok = False
                break
            descended.append(pre)
        h_desc = Polynomial(f1.field, descended) if ok else None
        coeffs_in_base = ok and h_desc == hb
        return DescentReport(base_out, ext_out, same_status, same_degree,
                             coeffs_in_base, h_desc)
    return DescentReport(base_out, ext_out, same_status,
                         same_degree=same_status, coeffs_in_base=same_status,
                         h_descended=None)
