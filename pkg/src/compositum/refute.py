"""Refutation machinery: fiber-graph cycles and the two product tests.

A fiber cycle is a tuple of distinct points c1..c_{2d} with f1(c_i) =
f1(c_{i+1}) for odd i and f2(c_i) = f2(c_{i+1}) for even i (indices mod
2d).  If a common composite exists, the alternating multiplicity-ratio
product around any such cycle equals 1, and when the degree of c1 over the
base field has a prime factor exceeding both input degrees the analogous
derivative products must agree.  Violations are certificates of
nonexistence, re-checkable from f1 and f2 alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import (
    ExtensionCapExceeded,
    IncompatibleFields,
    InseparableInput,
    InvalidCycle,
    InvalidParams,
)
from .fields import Field, FieldElement, element_degree, embed, make_extension, prime_factors
from .poly import (
    Polynomial,
    factor_degrees,
    gcd_monic,
    in_xp_subring,
    multiplicity,
    roots_in,
)
from .closure import _canonical_cycle, _ratio_product

DEFAULT_MAX_D = 5
DEFAULT_ENUM_CAP = 1024
DEFAULT_CYCLE_CAP = 10000
DEFAULT_MAX_EXT = 60


@dataclass(frozen=True)
class FiberCycle:
    points: tuple[FieldElement, ...]
    ambient: Field

    @property
    def half_length(self):
        return len(self.points) // 2


@dataclass(frozen=True)
class RefutationCertificate:
    """A verifiable witness that no common composite exists.

    kinds: multiplicity_cycle, derivative_cycle, inconsistent_set,
    module_nonexistence (characteristic zero only, where a composite would
    force one of degree exactly lcm of the input degrees).
    """

    kind: str
    f1: Polynomial
    f2: Polynomial
    cycle: FiberCycle | None = None
    set_points: tuple = ()
    product: Fraction | None = None
    lhs: FieldElement | None = None
    rhs: FieldElement | None = None
    witness_degree: int | None = None
    witness_prime: int | None = None
    bound: int | None = None


def validate_cycle(f1: Polynomial, f2: Polynomial, cycle: FiberCycle):
    pts = cycle.points
    n = len(pts)
    if n < 2 or n % 2:
        raise InvalidCycle(f"cycle length {n} is not a positive even number")
    if len({p.val for p in pts}) != n:
        raise InvalidCycle("cycle points are not distinct")
    fa = f1.map_to(cycle.ambient)
    fb = f2.map_to(cycle.ambient)
    for i in range(n):
        f = fa if i % 2 == 0 else fb
        if f(pts[i]) != f(pts[(i + 1) % n]):
            which = 1 if i % 2 == 0 else 2
            raise InvalidCycle(
                f"edge {i + 1} is not an f{which}-fiber relation")


def multiplicity_test(f1: Polynomial, f2: Polynomial,
                      cycle: FiberCycle) -> RefutationCertificate | None:
    """Alternating multiplicity-ratio product; a value != 1 refutes."""
    validate_cycle(f1, f2, cycle)
    prod = _ratio_product([(multiplicity(f1, p), multiplicity(f2, p))
                           for p in cycle.points])
    if prod == 1:
        return None
    return RefutationCertificate("multiplicity_cycle", f1, f2, cycle=cycle,
                                 product=prod)


def degree_hypothesis(f1: Polynomial, f2: Polynomial, cycle: FiberCycle):
    """(holds, degree of c1 over the base field, witness prime or None)."""
    base = f1.field
    e = element_degree(cycle.points[0])
    if base.kind == "extension":
        rel = lcm(e, base.degree) // base.degree
    else:
        rel = e
    cap = max(f1.degree, f2.degree)
    for q in prime_factors(rel):
        if q > cap:
            return True, rel, q
    return False, rel, None


def derivative_test(f1: Polynomial, f2: Polynomial,
                    cycle: FiberCycle) -> RefutationCertificate | None:
    """Derivative-product test under the large-prime degree hypothesis.

    Returns None both when the products agree and when the hypothesis
    fails (differing products prove nothing without it).
    """
    if in_xp_subring(f1) or in_xp_subring(f2):
        raise InseparableInput(
            "derivative test needs inputs with nonzero derivative")
    validate_cycle(f1, f2, cycle)
    holds, rel, prime = degree_hypothesis(f1, f2, cycle)
    if not holds:
        return None
    amb = cycle.ambient
    d1 = f1.derivative().map_to(amb)
    d2 = f2.derivative().map_to(amb)
    lhs = amb.one
    rhs = amb.one
    pts = cycle.points
    for i, p in enumerate(pts):
        if i % 2 == 0:  # odd position in 1-based indexing
            lhs = lhs * d1(p)
            rhs = rhs * d2(p)
        else:
            lhs = lhs * d2(p)
            rhs = rhs * d1(p)
    if lhs == rhs:
        return None
    return RefutationCertificate("derivative_cycle", f1, f2, cycle=cycle,
                                 lhs=lhs, rhs=rhs, witness_degree=rel,
                                 witness_prime=prime)


# ---------------------------------------------------------------------------
# cycle search

def cycle_search(f1: Polynomial, f2: Polynomial, max_d: int = DEFAULT_MAX_D,
                 ambient: Field | None = None,
                 max_ext: int = DEFAULT_MAX_EXT,
                 enum_cap: int = DEFAULT_ENUM_CAP,
                 cycle_cap: int = DEFAULT_CYCLE_CAP,
                 field_seed: int = 0) -> list[FiberCycle]:
    """Enumerate fiber cycles with 2d <= 2*max_d distinct points.

    With an explicit ambient the whole fiber graph of that field is
    searched.  Otherwise extensions of degree 1, 2, ... are enumerated
    while their size stays within enum_cap (each cycle is emitted in the
    smallest field containing it), and 2-cycles beyond the enumeration
    range are located exactly by eliminating one variable from the pair of
    fiber equations.  Cycles are deduplicated up to rotation/reflection and
    sorted canonically.
    """
    if f1.field.kind == "rationals":
        raise IncompatibleFields("cycle search runs over finite fields")
    if max_d < 1:
        raise InvalidParams("max_d must be positive")
    out = []
    if ambient is not None:
        if ambient.size is None or ambient.size > 16384:
            raise InvalidParams(
                f"explicit ambient of size {ambient.size} is not enumerable")
        out.extend(_enum_cycles(f1, f2, max_d, ambient, cycle_cap, None))
    else:
        for cyc in _schedule_cycles(f1, f2, max_d, max_ext, enum_cap,
                                    cycle_cap, field_seed):
            out.append(cyc)
    out.sort(key=lambda c: (len(c.points), c.ambient.degree,
                            tuple(p.sort_key() for p in c.points)))
    return out


def _schedule_cycles(f1, f2, max_d, max_ext, enum_cap, cycle_cap, field_seed):
    p = f1.field.p
    base_deg = f1.field.degree if f1.field.kind == "extension" else 1
    k = 1
    enumerated = 0
    while k <= max_ext and p ** k <= enum_cap:
        amb = f1.field if k == base_deg else make_extension(p, k, field_seed)
        yield from _enum_cycles(f1, f2, max_d, amb, cycle_cap, k)
        enumerated = k
        k += 1
    yield from _pair_cycles(f1, f2, enumerated, max_ext, enum_cap,
                            field_seed)


def _enum_cycles(f1, f2, max_d, ambient, cycle_cap, new_degree_only):
    """DFS over the fiber graph of one finite field.

    Paths alternate f1-partners and f2-partners; anchors are cycle minima,
    so every cycle is generated a bounded number of times and canonical
    deduplication keeps one copy.
    """
    base_deg = f1.field.degree if f1.field.kind == "extension" else 1
    if ambient.kind == "extension" and ambient.degree % base_deg:
        return
    fa = f1.map_to(ambient)
    fb = f2.map_to(ambient)
    elems = sorted(ambient.elements(), key=lambda e: e.sort_key())
    bucket1 = {}
    bucket2 = {}
    for e in elems:
        bucket1.setdefault(fa(e).val, []).append(e)
        bucket2.setdefault(fb(e).val, []).append(e)
    seen = set()
    found = 0
    limit = 2 * max_d
    for anchor in elems:
        akey = anchor.sort_key()
        path = [anchor]
        used = {anchor.val}

        def dfs():
            nonlocal found
            if found >= cycle_cap:
                return
            depth = len(path)
            cur = path[-1]
            if depth % 2 == 0 and fb(cur) == fb(anchor):
                cyc = _canonical_cycle(tuple(path))
                key = tuple(p.val for p in cyc)
                if key not in seen:
                    seen.add(key)
                    if new_degree_only is None or _cycle_degree(
                            cyc) == new_degree_only:
                        found += 1
                        yield FiberCycle(cyc, ambient)
            if depth >= limit:
                return
            bucket = bucket1 if depth % 2 == 1 else bucket2
            f = fa if depth % 2 == 1 else fb
            for nxt in bucket[f(cur).val]:
                if nxt.val in used or nxt.sort_key() < akey:
                    continue
                path.append(nxt)
                used.add(nxt.val)
                yield from dfs()
                path.pop()
                used.remove(nxt.val)

        yield from dfs()


def _cycle_degree(points):
    d = 1
    for p in points:
        d = lcm(d, element_degree(p))
    return d


def _difference_quotient(f: Polynomial):
    """(f(x) - f(y)) / (x - y) as a list over x-powers of polynomials in y."""
    F = f.field
    d = f.degree
    out = [Polynomial.zero(F) for _ in range(d)]
    for i in range(1, d + 1):
        c = f.coeff(i)
        if c.is_zero:
            continue
        for j in range(i):
            out[j] = out[j] + Polynomial.monomial(F, i - 1 - j, c)
    return out


def _resultant_x(A, B, field):
    """Resultant in x of two polynomials with coefficients in field[y]."""
    m = len(A) - 1
    n = len(B) - 1
    if m < 0 or n < 0:
        return Polynomial.zero(field)
    size = m + n
    if size == 0:
        return Polynomial.one(field)
    rows = []
    for i in range(n):
        row = [Polynomial.zero(field)] * size
        for j, c in enumerate(reversed(A)):
            row[i + j] = c
        rows.append(row)
    for i in range(m):
        row = [Polynomial.zero(field)] * size
        for j, c in enumerate(reversed(B)):
            row[i + j] = c
        rows.append(row)
    return _bareiss_det(rows, field)


def _bareiss_det(M, field):
    """Fraction-free determinant over field[y] (exact divisions)."""
    n = len(M)
    sign = 1
    prev = Polynomial.one(field)
    for k in range(n - 1):
        if M[k][k].is_zero:
            pivot = next((i for i in range(k + 1, n) if not M[i][k].is_zero),
                         None)
            if pivot is None:
                return Polynomial.zero(field)
            M[k], M[pivot] = M[pivot], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = M[i][j] * M[k][k] - M[i][k] * M[k][j]
                q, r = num.divrem(prev)
                assert r.is_zero, "Bareiss division was not exact"
                M[i][j] = q
            M[i][k] = Polynomial.zero(field)
        prev = M[k][k]
    det = M[n - 1][n - 1]
    return -det if sign < 0 else det


def _pair_cycles(f1, f2, skip_below, max_ext, enum_cap, field_seed):
    """2-cycles (b, a) beyond the enumerated fields, found by elimination.

    b ranges over roots of Res_x(A1, B1) where A1, B1 are the difference
    quotients of f1, f2; partners a are the other common roots of
    f1(x) - f1(b) and f2(x) - f2(b).
    """
    base = f1.field
    p = base.p
    A1 = _difference_quotient(f1)
    B1 = _difference_quotient(f2)
    R = _resultant_x(A1, B1, base)
    if R.is_zero or R.degree < 1:
        return
    seen = set()
    for e, _count in factor_degrees(R):
        deg_over_prime = e * (base.degree if base.kind == "extension" else 1)
        if p ** deg_over_prime <= enum_cap and deg_over_prime <= skip_below:
            continue
        if deg_over_prime > max_ext:
            continue
        amb = make_extension(p, deg_over_prime, field_seed) \
            if deg_over_prime > 1 else base
        fa = f1.map_to(amb)
        fb = f2.map_to(amb)
        for rm in roots_in(R, amb):
            b = rm.root
            g = gcd_monic(fa - Polynomial.const(amb, fa(b)),
                          fb - Polynomial.const(amb, fb(b)))
            while not g.is_zero and g(b).is_zero:
                g = g.shift_down_root(b)
            if g.degree < 1:
                continue
            need = 1
            for d, _c in factor_degrees(g):
                need = lcm(need, d)
            cyc_amb = amb
            if need > 1:
                grown = amb.degree * need
                if grown > max_ext:
                    continue
                cyc_amb = make_extension(p, grown, field_seed)
                b = embed(b, cyc_amb)
                g = g.map_to(cyc_amb)
            partners = [r.root for r in roots_in(g, cyc_amb)]
            for a in partners:
                cyc = _canonical_cycle((b, a))
                key = (cyc_amb.key(), tuple(x.val for x in cyc))
                if key in seen:
                    continue
                seen.add(key)
                yield FiberCycle(cyc, cyc_amb)


def refute(f1: Polynomial, f2: Polynomial, max_d: int = DEFAULT_MAX_D,
           max_ext: int = DEFAULT_MAX_EXT, enum_cap: int = DEFAULT_ENUM_CAP,
           cycle_cap: int = DEFAULT_CYCLE_CAP,
           field_seed: int = 0) -> RefutationCertificate | None:
    """First refutation certificate found over the cycle schedule, if any.

    Every cycle gets the multiplicity test and then (when both inputs have
    nonzero derivative) the derivative test.  Returns None once the search
    caps are exhausted; that is not a proof of existence.
    """
    if f1.field.kind == "rationals":
        raise IncompatibleFields("refute runs over finite fields")
    separable = not (in_xp_subring(f1) or in_xp_subring(f2))
    for cyc in _schedule_cycles(f1, f2, max_d, max_ext, enum_cap, cycle_cap,
                                field_seed):
        cert = multiplicity_test(f1, f2, cyc)
        if cert is not None:
            return cert
        if separable:
            cert = derivative_test(f1, f2, cyc)
            if cert is not None:
                return cert
    return None


def verify_refutation(cert: RefutationCertificate):
    """Re-check a refutation certificate from its inputs and witness."""
    from .search import VerifyResult, search_linear

    if cert.kind == "module_nonexistence":
        if cert.f1.field.p != 0:
            return VerifyResult(False, "module_bound_needs_char_zero")
        L = lcm(cert.f1.degree, cert.f2.degree)
        if cert.bound != L:
            return VerifyResult(False, "module_bound_mismatch")
        if search_linear(cert.f1, cert.f2, L).status != "none_below":
            return VerifyResult(False, "module_dependence_found")
        return VerifyResult(True)
    if cert.cycle is None:
        return VerifyResult(False, "missing_cycle")
    try:
        validate_cycle(cert.f1, cert.f2, cert.cycle)
    except InvalidCycle as e:
        return VerifyResult(False, f"invalid_cycle: {e}")
    if cert.kind in ("multiplicity_cycle", "inconsistent_set"):
        prod = _ratio_product(
            [(multiplicity(cert.f1, p), multiplicity(cert.f2, p))
             for p in cert.cycle.points])
        if prod == 1:
            return VerifyResult(False, "product_is_one")
        if cert.product is not None and prod != cert.product:
            return VerifyResult(False, "product_mismatch")
        return VerifyResult(True)
    if cert.kind == "derivative_cycle":
        if in_xp_subring(cert.f1) or in_xp_subring(cert.f2):
            return VerifyResult(False, "inputs_have_zero_derivative")
        holds, rel, prime = degree_hypothesis(cert.f1, cert.f2, cert.cycle)
        if not holds:
            return VerifyResult(False, "degree_hypothesis_fails")
        redo = derivative_test(cert.f1, cert.f2, cert.cycle)
        if redo is None:
            return VerifyResult(False, "derivative_products_agree")
        if cert.lhs is not None and (redo.lhs != cert.lhs
                                     or redo.rhs != cert.rhs):
            return VerifyResult(False, "product_values_mismatch")
        return VerifyResult(True)
    return VerifyResult(False, f"unknown_kind:{cert.kind}")
