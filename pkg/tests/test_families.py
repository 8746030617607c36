import random

import pytest

from compositum import (
    GF,
    QQ,
    Polynomial,
    additive_family,
    common_right_component,
    compose,
    deg2_family,
    dickson,
    dickson_closed_form,
    multiplicative_order,
    parse_poly,
    search_linear,
    shifted_family,
    tame_family,
    tame_right_component,
    verify_certificate,
)
from compositum.errors import InvalidParams
from compositum.search import CompositeCertificate, extract_cofactor

F2 = GF(2)
F3 = GF(3)
F5 = GF(5)


def test_multiplicative_order_basics():
    assert multiplicative_order(2, 3) == 2
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(3, 2) == 1
    assert multiplicative_order(2, 11) == 10
    assert multiplicative_order(1, 1) == 1
    with pytest.raises(InvalidParams):
        multiplicative_order(2, 4)
    # lcm across prime factors
    assert multiplicative_order(2, 143) == 60  # lcm(ord mod 11, ord mod 13)


def test_dickson_small():
    assert dickson(0, QQ(1)) == Polynomial.const(QQ, 2)
    assert dickson(1, QQ(5)) == Polynomial.x(QQ)
    a = QQ(3)
    assert dickson(2, a) == parse_poly("x^2-6", QQ)
    assert dickson(3, QQ(1)) == parse_poly("x^3-3*x", QQ)


def test_dickson_recurrence_equals_closed_form():
    for fld, aval in ((F2, 1), (F3, 2), (F5, 3), (QQ, 7)):
        alpha = fld(aval)
        for n in range(1, 13):
            assert dickson(n, alpha) == dickson_closed_form(n, alpha)


def test_dickson_functional_equation():
    # D(x + a/x) = x^n + (a/x)^n at 100 random points
    rng = random.Random(17)
    checks = 0
    while checks < 100:
        fld = (F5, QQ)[checks % 2]
        alpha = fld.random_element(rng)
        beta = fld.random_element(rng)
        if beta.is_zero:
            continue
        n = rng.randrange(1, 9)
        lhs = dickson(n, alpha)(beta + alpha / beta)
        rhs = beta ** n + (alpha / beta) ** n
        assert lhs == rhs
        checks += 1


def test_dickson_composition_law():
    rng = random.Random(18)
    for _ in range(30):
        fld = (F5, QQ)[rng.randrange(2)]
        alpha = fld.random_element(rng)
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 5)
        x = fld.random_element(rng)
        lhs = dickson(m, alpha ** n)(dickson(n, alpha)(x))
        rhs = dickson(m * n, alpha)(x)
        assert lhs == rhs


def test_additive_family_examples():
    inst = additive_family(3, 2, 1)
    assert inst.params["d"] == 2
    assert inst.expected_min_degree == 12
    assert inst.expected_h == parse_poly("(x^4-x)^3", F2)
    out = search_linear(inst.f1, inst.f2, 12)
    assert out.found and out.certificate.h.degree == 12

    inst = additive_family(2, 3, 1)
    assert inst.params["d"] == 1
    assert inst.expected_h == parse_poly("(x^3-x)^2", F3)
    out = search_linear(inst.f1, inst.f2, 6)
    assert out.found and out.certificate.h.degree == 6

    with pytest.raises(InvalidParams):
        additive_family(4, 2, 1)


def test_additive_family_certificates_verify():
    for n, p, r in ((3, 2, 1), (2, 3, 1), (5, 2, 2), (4, 3, 1)):
        inst = additive_family(n, p, r)
        if inst.expected_h is None:
            continue
        h = inst.expected_h
        g1 = extract_cofactor(h, inst.f1)
        g2 = extract_cofactor(h, inst.f2)
        assert g1 is not None and g2 is not None
        cert = CompositeCertificate(inst.f1, inst.f2, h, g1, g2,
                                    minimal=False, normalized=False)
        assert verify_certificate(cert)
        out = search_linear(inst.f1, inst.f2, h.degree)
        assert out.found and out.certificate.h.degree == h.degree


def test_shifted_family_formula_level():
    inst = shifted_family(11, 13, 2)
    assert inst.params["d"] == 60
    assert inst.expected_min_degree == 143 * 2 ** 60
    assert inst.expected_h is None  # far beyond the materialization cap
    assert inst.f1 == parse_poly("x^11", F2)
    assert inst.f2 == parse_poly("(x-1)^13", F2)

    inst = shifted_family(1447, 1451, 2)
    assert inst.params["d"] == 1048350
    assert inst.expected_min_degree == 1447 * 1451 * 2 ** 1048350

    with pytest.raises(InvalidParams):
        shifted_family(4, 2, 2)


def test_shifted_family_small_materialized():
    inst = shifted_family(2, 3, 5)
    # d = ord(5 mod 6) = 2, degree 6 * 25
    assert inst.params["d"] == 2
    assert inst.expected_min_degree == 150
    h = inst.expected_h
    assert h is not None and h.degree == 150
    assert extract_cofactor(h, inst.f1) is not None
    assert extract_cofactor(h, inst.f2) is not None


def test_deg2_family():
    inst = deg2_family(1, 2, F3)
    assert inst.expected_min_degree == 6
    out = search_linear(inst.f1, inst.f2, 6)
    assert out.found and out.certificate.h.degree == 6
    inst = deg2_family(2, 2, F3)
    assert inst.expected_min_degree == 2


def test_tame_family_cyclic():
    P = parse_poly("x+1", QQ)
    inst = tame_family("cyclic", P=P, r=1, n=2)
    assert inst.f1 == parse_poly("x^3+x", QQ)
    assert inst.f2 == parse_poly("x^2", QQ)
    assert inst.expected_min_degree == 6
    out = search_linear(inst.f1, inst.f2, 6)
    assert out.found and out.certificate.h.degree == 6
    # the materialized composite is a genuine common composite
    assert compose(extract_cofactor(inst.expected_h, inst.f1), inst.f1) == \
        inst.expected_h


def test_tame_family_dickson():
    inst = tame_family("dickson", m=2, n=3, alpha=QQ(1))
    assert inst.expected_min_degree == 6
    out = search_linear(inst.f1, inst.f2, 6)
    assert out.found and out.certificate.h.degree == 6
    assert inst.expected_h == dickson(6, QQ(1))


def test_tame_family_with_linear_twists():
    h = parse_poly("x^2+x", QQ)
    l1 = parse_poly("2*x+1", QQ)
    l2 = parse_poly("x-3", QQ)
    inst = tame_family("cyclic", P=parse_poly("x+2", QQ), r=1, n=2,
                       h=h, l1=l1, l2=l2)
    assert inst.f1.degree == 6 and inst.f2.degree == 4
    assert inst.expected_min_degree == 12
    g1 = extract_cofactor(inst.expected_h, inst.f1)
    g2 = extract_cofactor(inst.expected_h, inst.f2)
    assert g1 is not None and g2 is not None


def test_tame_family_identity_case():
    inst = tame_family("dickson", m=1, n=1, alpha=QQ(2))
    assert inst.f1 == inst.f2 == Polynomial.x(QQ)
    with pytest.raises(InvalidParams):
        tame_family("cyclic", P=parse_poly("x", F2), r=1, n=2)  # wild


def test_tame_right_component_quadratic():
    r0 = parse_poly("x^2+1", QQ)
    g0 = parse_poly("x^3+x", QQ)
    f = compose(g0, r0)
    got = tame_right_component(f, 2)
    assert got is not None
    g, r = got
    assert r == parse_poly("x^2", QQ)  # normalized: monic, zero constant
    assert compose(g, r) == f


def test_tame_right_component_monomials():
    g, r = tame_right_component(parse_poly("x^6", QQ), 3)
    assert r == parse_poly("x^3", QQ) and g == parse_poly("x^2", QQ)


def test_tame_right_component_degenerate_cofactor():
    f = parse_poly("x^2+x", F2)
    g, r = tame_right_component(f, 2)
    assert r == f and compose(g, r) == f


def test_tame_right_component_rejects_wild():
    with pytest.raises(InvalidParams):
        tame_right_component(parse_poly("x^4+x", F2), 2)  # m = 2 = char
    with pytest.raises(InvalidParams):
        tame_right_component(parse_poly("x^5", QQ), 2)  # no divisibility


def test_tame_right_component_absent():
    # h = x^4+x^3+x^2+x has no quadratic right component over Q
    f = parse_poly("x^4+x^3", QQ)
    assert tame_right_component(f, 2) is None


def test_common_right_component_roundtrip():
    rng = random.Random(19)
    recovered = 0
    for _ in range(25):
        fld = (QQ, F5, GF(7))[rng.randrange(3)]
        h = Polynomial(fld, [fld.random_element(rng),
                             fld.random_element(rng), fld.one])  # deg 2
        degs = [(2, 3), (3, 2), (2, 5), (3, 4)][rng.randrange(4)]
        if fld.p and (degs[0] % fld.p == 0 or degs[1] % fld.p == 0):
            continue
        g1 = Polynomial(fld, [fld.random_element(rng)
                              for _ in range(degs[0])] + [fld.one])
        g2 = Polynomial(fld, [fld.random_element(rng)
                              for _ in range(degs[1])] + [fld.one])
        if __import__("math").gcd(g1.degree * 2, g2.degree * 2) != 2:
            continue
        f1 = compose(g1, h)
        f2 = compose(g2, h)
        r = common_right_component(f1, f2)
        assert r is not None
        # r equals h up to the normalization (monic, zero constant term)
        from compositum.search import normalize_monic_zero
        assert r == normalize_monic_zero(h)
        recovered += 1
    assert recovered >= 10


def test_common_right_component_wild_caveat():
    for p in (2, 3, 5):
        fld = GF(p)
        inst = deg2_family(1, 2, fld)
        if p == 2:
            # wild: cofactor degree 1 path still applies, mismatch decides
            assert common_right_component(inst.f1, inst.f2) is None
        else:
            assert common_right_component(inst.f1, inst.f2) is None


def test_common_right_component_trivial_gcd():
    f1 = parse_poly("x^2+x", QQ)
    f2 = parse_poly("x^3", QQ)
    assert common_right_component(f1, f2) == Polynomial.x(QQ)
