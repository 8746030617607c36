import random

import pytest

from compositum import (
    GF,
    QQ,
    IncompatibleFields,
    UnsupportedOperation,
    DivideByZero,
    element_degree,
    embed,
    frobenius,
    is_irreducible,
    make_extension,
    subfield_preimage,
)
from compositum.fields import FieldElement

PSI = [1, 1, 0, 0, 1, 0, 1, 1, 1, 1, 1, 0, 0, 0, 1]  # x^14+x^10+x^9+x^8+x^7+x^6+x^4+x+1


def test_make_extension_degree_one_is_prime_field():
    assert make_extension(2, 1, seed=7) is GF(2)
    assert make_extension(2, 1, seed=7).kind == "prime"


def test_make_extension_deterministic_and_irreducible():
    k1 = make_extension(2, 14, seed=3)
    k2 = make_extension(2, 14, seed=3)
    assert k1.modulus == k2.modulus
    assert is_irreducible(k1.modulus, 2)
    k3 = make_extension(2, 14, seed=4)
    assert is_irreducible(k3.modulus, 2)


def test_degree14_modulus_from_text_passes_check():
    assert is_irreducible(PSI, 2)
    # a couple of reducible controls
    assert not is_irreducible([1, 0, 1], 2)        # x^2+1 = (x+1)^2
    assert not is_irreducible([0, 1, 1], 2)        # x^2+x = x(x+1)
    assert not is_irreducible([1], 2)              # constants never count


def test_gf9_contains_square_root_of_minus_one():
    # solve z^2 + 1 = 0 exhaustively over the nine elements
    F9 = GF(3, 2)
    sols = [z for z in F9.elements() if (z * z + 1).is_zero]
    assert len(sols) == 2
    assert sols[0] == -sols[1]


def test_field_axioms_exhaustive_and_random():
    fields = [GF(2), GF(3), GF(2, 2), GF(3, 2), GF(2, 3)]
    for fld in fields:
        elems = list(fld.elements())
        assert len(elems) == fld.size
        for a in elems:
            for b in elems:
                assert a + b == b + a
                assert a * b == b * a
                if not a.is_zero:
                    inv = fld.one / a
                    assert a * inv == fld.one
        # associativity/distributivity on all triples for tiny fields,
        # random triples otherwise
        rng = random.Random(11)
        if fld.size <= 9:
            triples = [(a, b, c) for a in elems for b in elems for c in elems]
        else:
            triples = [(fld.random_element(rng), fld.random_element(rng),
                        fld.random_element(rng)) for _ in range(200)]
        for a, b, c in triples:
            assert (a + b) + c == a + (b + c)
            assert (a * b) * c == a * (b * c)
            assert a * (b + c) == a * b + a * c


def test_field_axioms_exhaustive_up_to_81():
    F81 = GF(3, 4)
    elems = list(F81.elements())
    assert len(elems) == 81
    rng = random.Random(5)
    sample = [elems[rng.randrange(81)] for _ in range(60)]
    for a in sample:
        for b in sample:
            for c in sample[:10]:
                assert (a + b) + c == a + (b + c)
                assert a * (b + c) == a * b + a * c
    for a in elems:
        if not a.is_zero:
            assert a * (F81.one / a) == F81.one


def test_rationals_arithmetic():
    a = QQ(3) / QQ(2)
    assert a + a == QQ(3)
    assert (a * QQ(4)).val == 6
    with pytest.raises(DivideByZero):
        QQ(1) / QQ(0)


def test_embed_prime_into_extension_is_constant_vector():
    K = GF(2, 14, modulus=PSI)
    one = embed(GF(2)(1), K)
    assert one == K.one
    F5 = GF(5)
    L = GF(5, 3)
    for a in F5.elements():
        img = embed(a, L)
        assert img.val[1:] == (0,) * (L.degree - 1)


def test_embed_f4_generator_into_f16_has_order_3():
    F4 = GF(2, 2)
    F16 = GF(2, 4)
    g = embed(F4.gen, F16)
    order = 1
    cur = g
    while cur != F16.one:
        cur = cur * g
        order += 1
        assert order <= 15
    assert order == 3


def test_embed_is_ring_homomorphism():
    rng = random.Random(1)
    F9 = GF(3, 2)
    F81 = GF(3, 4)
    for _ in range(50):
        a = F9.random_element(rng)
        b = F9.random_element(rng)
        assert embed(a + b, F81) == embed(a, F81) + embed(b, F81)
        assert embed(a * b, F81) == embed(a, F81) * embed(b, F81)
    # injectivity on a full small field
    imgs = {embed(a, F81).val for a in F9.elements()}
    assert len(imgs) == 9


def test_embed_chain_matches_direct():
    F4 = GF(2, 2)
    F16 = GF(2, 4)
    F256 = GF(2, 8)
    for a in F4.elements():
        assert embed(embed(a, F16), F256) == embed(a, F256)


def test_embed_rejects_bad_degrees():
    with pytest.raises(IncompatibleFields):
        embed(GF(2, 2).gen, GF(2, 3))
    with pytest.raises(IncompatibleFields):
        embed(GF(2)(1), GF(3, 2))


def test_frobenius_identity_on_whole_field():
    for fld in (GF(2, 3), GF(3, 2)):
        n = fld.degree
        for a in fld.elements():
            assert frobenius(a, n) == a


def test_frobenius_fixed_subfield_exhaustive():
    # frobenius(., k) fixes exactly GF(p^gcd(k, n)) when p^n <= 81
    import math
    for fld in (GF(2, 4), GF(3, 4), GF(2, 6)):
        if fld.size > 81:
            continue
        n = fld.degree
        for k in range(1, n):
            fixed = [a for a in fld.elements() if frobenius(a, k) == a]
            assert len(fixed) == fld.p ** math.gcd(k, n)


def test_frobenius_psi_root_128():
    K = GF(2, 14, modulus=PSI)
    a = K.gen
    assert frobenius(a, 7) == a ** 128


def test_frobenius_squares_in_char_2():
    mod = [1, 0, 1, 0, 1, 0, 0, 0, 0, 1, 1]  # t^10+t^9+t^4+t^2+1
    K = GF(2, 10, modulus=mod)
    w = K.gen
    assert (w ** 10 + w ** 9 + w ** 4 + w ** 2) == K.one
    assert frobenius(w, 1) == w * w


def test_frobenius_unsupported_over_rationals():
    assert frobenius(QQ(5), 0) == QQ(5)
    with pytest.raises(UnsupportedOperation):
        frobenius(QQ(5), 1)


def test_element_degree():
    assert element_degree(GF(7)(3)) == 1
    F4 = GF(2, 2)
    omega = F4.gen
    assert element_degree(omega) == 2
    assert element_degree(F4.one) == 1
    K = GF(2, 14, modulus=PSI)
    assert element_degree(K.gen) == 14
    with pytest.raises(UnsupportedOperation):
        element_degree(QQ(2))


def test_element_degree_divides_ambient():
    rng = random.Random(3)
    K = GF(2, 12)
    for _ in range(40):
        a = K.random_element(rng)
        assert 12 % element_degree(a) == 0


def test_subfield_preimage_roundtrip():
    F4 = GF(2, 2)
    F16 = GF(2, 4)
    for a in F4.elements():
        img = embed(a, F16)
        assert subfield_preimage(img, F4) == a
    # an element of degree 4 has no preimage in F4
    assert subfield_preimage(F16.gen, F4) is None
    assert element_degree(F16.gen) == 4


def test_field_spec_equality():
    assert GF(5) == GF(5)
    assert GF(2, 2) == GF(2, 2, modulus=GF(2, 2).modulus)
    assert GF(2, 2) != GF(2)
    assert QQ != GF(2)
    assert hash(GF(3)) == hash(GF(3))


def test_element_equality_and_coercion():
    F7 = GF(7)
    assert F7(10) == F7(3)
    assert F7(3) == 3
    assert F7(3) != GF(5)(3)
    assert F7(2) + 6 == F7(1)
    with pytest.raises(IncompatibleFields):
        F7(1) + GF(5)(1)
