import random
from fractions import Fraction

import pytest

from cmred.group_algebra import (
    AlgebraElement,
    ClassFunction,
    class_project,
    convolve,
    evaluate,
    gamma_inv,
    gamma_mul,
    reflex,
)
from cmred.permgroup import close_generators, conjugacy_classes, left_cosets

S3_GENS = [(1, 0, 2), (1, 2, 0)]


def s3():
    return close_generators(3, S3_GENS)


def z4():
    return close_generators(4, [(1, 2, 3, 0)])


def oracle_convolve(G, a, b):
    """Definition-level double loop, independent of the library path."""
    out = {}
    for (y, by), av in a.coeffs.items():
        for x in range(G.order):
            for bx in (0, 1):
                # b evaluated at y^-1 x with bit by ^ bx target bit bx
                w = G.mul(G.inv(y), x)
                bv = b.coeffs.get((w, (by + bx) & 1))
                if bv:
                    out[(x, bx)] = out.get((x, bx), Fraction(0)) + av * bv
    return {k: v for k, v in out.items() if v}


def random_element(G, rng, size=4, rational=True):
    coeffs = {}
    for _ in range(size):
        x = (rng.randrange(G.order), rng.randrange(2))
        if rational:
            coeffs[x] = Fraction(rng.randint(-6, 6), rng.randint(1, 9))
        else:
            coeffs[x] = Fraction(rng.randint(-6, 6))
    return AlgebraElement(G, coeffs)


def trace_of(G):
    return AlgebraElement(G, {(g, 0): 1 for g in range(G.order)})


def test_delta_is_identity():
    G = s3()
    rng = random.Random(3)
    e = AlgebraElement.delta(G, (0, 0))
    for _ in range(10):
        f = random_element(G, rng)
        assert convolve(e, f) == f
        assert convolve(f, e) == f


def test_trace_squared():
    G = s3()
    tr = trace_of(G)
    assert convolve(tr, tr) == tr.scale(G.order)


def test_convolution_matches_oracle():
    rng = random.Random(17)
    for G in (s3(), z4()):
        for _ in range(10):
            a = random_element(G, rng)
            b = random_element(G, rng)
            assert convolve(a, b).coeffs == oracle_convolve(G, a, b)


def test_dense_int_path_matches_sparse_path():
    rng = random.Random(23)
    G = s3()
    for _ in range(10):
        a = random_element(G, rng, size=6, rational=False)
        b = random_element(G, rng, size=6, rational=False)
        assert convolve(a, b).coeffs == oracle_convolve(G, a, b)


def test_convolution_associative():
    rng = random.Random(7)
    for G in (s3(), z4()):
        for _ in range(8):
            a, b, c = (random_element(G, rng) for _ in range(3))
            assert convolve(convolve(a, b), c) == convolve(a, convolve(b, c))


def test_convolution_bilinear():
    rng = random.Random(41)
    G = s3()
    a, b, c = (random_element(G, rng) for _ in range(3))
    lam = Fraction(3, 7)
    assert convolve(a.scale(lam) + b, c) == convolve(a, c).scale(lam) + convolve(b, c)


def test_reflex_involution():
    rng = random.Random(9)
    for G in (s3(), z4()):
        for _ in range(10):
            a = random_element(G, rng)
            assert reflex(reflex(a)) == a


def test_reflex_of_delta_keeps_bit():
    G = s3()
    g = 3
    d = AlgebraElement.delta(G, (g, 1))
    assert reflex(d) == AlgebraElement.delta(G, (G.inv(g), 1))


def test_reflex_antihomomorphism():
    rng = random.Random(13)
    G = s3()
    for _ in range(8):
        a = random_element(G, rng)
        b = random_element(G, rng)
        assert reflex(convolve(a, b)) == convolve(reflex(b), reflex(a))


def test_gamma_ops():
    G = s3()
    rho = (0, 1)
    assert gamma_mul(G, rho, rho) == (0, 0)
    x = (2, 1)
    assert gamma_mul(G, x, gamma_inv(G, x)) == (0, 0)
    # rho central
    for g in range(G.order):
        assert gamma_mul(G, rho, (g, 0)) == gamma_mul(G, (g, 0), rho)


def test_class_project_idempotent_linear():
    rng = random.Random(29)
    G = s3()
    P = conjugacy_classes(G)
    for _ in range(10):
        a = random_element(G, rng)
        b = random_element(G, rng)
        fa = class_project(a, P)
        fb = class_project(b, P)
        lam = Fraction(-5, 3)
        assert class_project(a.scale(lam) + b, P) == fa.scale(lam) + fb
        # idempotent: re-project the class function seen as an algebra element
        back = AlgebraElement(G, {(g, bit): fa.values[P.class_of[g]][bit]
                                  for g in range(G.order) for bit in (0, 1)})
        assert class_project(back, P) == fa


def test_class_project_preserves_mass():
    rng = random.Random(31)
    G = s3()
    P = conjugacy_classes(G)
    for _ in range(10):
        a = random_element(G, rng)
        f = class_project(a, P)
        total = sum(f.values[c][b] * P.sizes[c] for c in range(P.count) for b in (0, 1))
        assert total == a.mass()


def test_class_project_delta_values():
    # oracle: average the delta over all Gamma conjugators directly
    G = s3()
    P = conjugacy_classes(G)
    transposition = G.index_of((0, 2, 1))
    d = AlgebraElement.delta(G, (transposition, 0))
    f = class_project(d, P)
    for g in range(G.order):
        acc = Fraction(0)
        for x in range(G.order):
            conj = G.mul(G.mul(x, g), G.inv(x))
            acc += d.coeffs.get((conj, 0), Fraction(0))
        assert evaluate(f, (g, 0)) == acc / G.order
    # value on the transposition class is 1/|class| = 1/3
    assert evaluate(f, (transposition, 0)) == Fraction(1, 3)
    # the identity-delta projects to itself
    f0 = class_project(AlgebraElement.delta(G, (0, 0)), P)
    assert evaluate(f0, (0, 0)) == 1


def test_evaluate_and_equality():
    G = s3()
    P = conjugacy_classes(G)
    a = AlgebraElement(G, {(1, 0): Fraction(1, 2)})
    f = class_project(a, P)
    zero = AlgebraElement(G)
    assert a + zero == a
    assert f + ClassFunction.zero(G, P) == f
    g = class_project(a + zero, P)
    assert f == g


def test_denominator_bound():
    # denominators never leave the lattice generated by the inputs and |Gamma|
    rng = random.Random(37)
    G = s3()
    P = conjugacy_classes(G)
    gamma = 2 * G.order
    for _ in range(10):
        a = random_element(G, rng)
        b = random_element(G, rng)
        denom_in = 1
        for v in list(a.coeffs.values()) + list(b.coeffs.values()):
            denom_in *= v.denominator
        c = convolve(a, b)
        for v in c.coeffs.values():
            assert denom_in % v.denominator == 0
        f = class_project(c, P)
        for row in f.values:
            for v in row:
                assert (denom_in * gamma) % v.denominator == 0
