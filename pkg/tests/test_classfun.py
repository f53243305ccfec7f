import cmath
import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transfer_torsion.charring import (
    character,
    character_basis,
    from_coefficients,
    one,
    transfer,
    transfer_unit,
)
from transfer_torsion.classfun import (
    ClassFunction,
    CyclotomicInteger,
    character_map,
    class_transfer,
    classfun_ideal_image,
    cyclo_add,
    cyclo_mul,
    totient,
)
from transfer_torsion.groups import (
    abelian_p_groups,
    enumerate_subgroups,
    generated_subgroup,
    make_group,
    maximal_subgroups,
)

import oracles

LEVELS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]


def embed(u: CyclotomicInteger, k: int = 1) -> complex:
    w = cmath.exp(2j * math.pi * k / u.level)
    return sum(c * w**i for i, c in enumerate(u.coeffs))


def cyclos(p, e, bound=6):
    return st.lists(st.integers(-bound, bound), min_size=totient(p, e), max_size=totient(p, e)).map(
        lambda c: CyclotomicInteger(p, e, tuple(c))
    )


def test_cyclotomic_examples():
    z4 = CyclotomicInteger.zeta(2, 2)
    assert z4 * z4 == CyclotomicInteger.from_int(2, 2, -1)
    z3 = CyclotomicInteger.zeta(3, 1)
    assert (1 + z3 + z3 * z3).is_zero()
    for p, e in LEVELS:
        z = CyclotomicInteger.zeta(p, e)
        assert z ** (p**e) == CyclotomicInteger.from_int(p, e, 1)
        m = p ** (e - 1)
        assert sum((z ** (j * m) for j in range(p)), CyclotomicInteger.from_int(p, e, 0)).is_zero()


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_norm_of_one_minus_zeta(p):
    u = 1 - CyclotomicInteger.zeta(p, 1)
    assert u.norm() == p
    w = u ** (p - 1)
    assert w.is_divisible_by(p)
    assert abs(w.exact_div(p).norm()) == 1
    # for p = 2 the element 1 - zeta is 2 itself
    assert u.is_divisible_by(p) == (p == 2)


@pytest.mark.parametrize("p, e", LEVELS)
def test_cyclotomic_ring_and_domain(p, e):
    @given(cyclos(p, e), cyclos(p, e), cyclos(p, e))
    @settings(max_examples=30, deadline=None)
    def run(u, v, w):
        assert cyclo_mul(u, cyclo_add(v, w)) == u * v + u * w
        assert (u * v) * w == u * (v * w)
        assert u * v == v * u
        for k in range(1, p**e):
            if k % p:
                assert abs(embed(u * v, k) - embed(u, k) * embed(v, k)) < 1e-6
        if (u * v).is_zero():
            assert u.is_zero() or v.is_zero()
        conj = [embed(u, k) for k in range(1, p**e) if k % p]
        assert u.norm() == round(np.prod(conj).real)

    run()


def test_level_handling():
    u = CyclotomicInteger.zeta(2, 1)
    v = CyclotomicInteger.zeta(2, 2)
    with pytest.raises(ValueError):
        u + v
    raised = u.raise_level(2)
    assert raised == v * v
    assert CyclotomicInteger.zeta(3, 1).raise_level(2) == CyclotomicInteger.zeta(3, 2) ** 3
    with pytest.raises(ValueError):
        v.raise_level(1)
    with pytest.raises(ValueError):
        CyclotomicInteger.from_int(2, 1, 3).exact_div(2)


@pytest.mark.parametrize("shape", [(2, [1]), (2, [1, 1]), (2, [2, 1]), (3, [1, 1]), (3, [2]), (5, [1]), (2, [3, 1])])
def test_character_map_matches_complex_values(shape):
    G = make_group(*shape)
    rng = random.Random(7)
    mods = G.factor_orders
    for _ in range(5):
        coeffs = [rng.randint(-3, 3) for _ in range(G.order)]
        f = character_map(from_coefficients(G, coeffs))
        for a in G.elements:
            expected = sum(c * oracles.pairing_value(mods, chi, a) for c, chi in zip(coeffs, G.characters))
            assert abs(embed(f.value(a)) - expected) < 1e-9


def test_character_map_examples():
    Z2 = make_group(2, [1])
    assert character_map(one(Z2)) == ClassFunction.constant(Z2, 1)
    f = character_map(from_coefficients(Z2, [1, 1]))
    assert f.value((0,)) == CyclotomicInteger.from_int(2, 1, 2)
    assert f.value((1,)).is_zero()
    A = make_group(2, [1, 1])
    V1 = generated_subgroup(A, [(1, 0)])
    g = character_map(transfer_unit(A, V1))
    for a in A.elements:
        assert g.value(a) == CyclotomicInteger.from_int(2, 1, 2 if a in V1 else 0)


HOM_GROUPS = [G for p in (2, 3) for G in abelian_p_groups(p, 64)] + [make_group(5, [1, 1]), make_group(7, [2])]


@pytest.mark.parametrize("G", HOM_GROUPS, ids=lambda G: G.descriptor())
def test_character_map_ring_homomorphism(G):
    @given(st.lists(st.integers(-3, 3), min_size=G.order, max_size=G.order),
           st.lists(st.integers(-3, 3), min_size=G.order, max_size=G.order))
    @settings(max_examples=8, deadline=None)
    def run(a, b):
        x, y = from_coefficients(G, a), from_coefficients(G, b)
        assert character_map(x * y) == character_map(x) * character_map(y)
        assert character_map(x + y) == character_map(x) + character_map(y)

    run()


@pytest.mark.parametrize("G", [G for p in (2, 3, 5, 7) for G in abelian_p_groups(p, 64)], ids=lambda G: G.descriptor())
def test_character_map_injective(G):
    cols = [character_map(character(G, chi)).table.reshape(-1) for chi in G.characters]
    # entries are small integers, so a floating-point rank is reliable here
    M = np.array(cols, dtype=float)
    assert np.linalg.matrix_rank(M) == G.order


def _check_unit_values(G, S):
    table = character_map(transfer_unit(G, S)).table
    assert np.array_equal(table[:, 0], S.mask * S.index)
    assert not table[:, 1:].any()


@pytest.mark.parametrize("G", [G for p in (2, 3, 5, 7) for G in abelian_p_groups(p, 128)], ids=lambda G: G.descriptor())
def test_transfer_unit_values(G):
    for S in enumerate_subgroups(G):
        _check_unit_values(G, S)


@pytest.mark.parametrize("G", [G for p in (2, 3) for G in abelian_p_groups(p, 256, min_order=243)], ids=lambda G: G.descriptor())
def test_transfer_unit_values_large(G):
    # full lattices at this size are large; sample subgroups generated by random elements
    rng = random.Random(G.order)
    for _ in range(40):
        gens = [rng.choice(G.elements) for _ in range(rng.randint(0, G.rank))]
        _check_unit_values(G, generated_subgroup(G, gens))


def _averaging_transfer(f: ClassFunction, G):
    """``(1/|H|) sum_{k in G, k+g-k in H} f(k+g-k)`` evaluated literally."""
    H = f.carrier
    out = []
    for g in G.elements:
        total = CyclotomicInteger.from_int(G.prime, f.exp, 0)
        for k in G.elements:
            conj = G.add(G.add(k, g), G.neg(k))
            if conj in H:
                total = total + f.value(conj)
        out.append(total.exact_div(H.order))
    return ClassFunction.from_values(G, out)


@pytest.mark.parametrize("shape", [(2, [1, 1]), (2, [2, 1]), (3, [1, 1]), (2, [3])])
def test_class_transfer_matches_averaging_formula(shape):
    G = make_group(*shape)
    rng = random.Random(3)
    for S in enumerate_subgroups(G):
        n = len(character_basis(S))
        f = character_map(from_coefficients(S, [rng.randint(-4, 4) for _ in range(n)]))
        assert class_transfer(f, G) == _averaging_transfer(f, G)


def test_class_transfer_examples():
    A = make_group(2, [1, 1])
    f = ClassFunction.constant(A.trivial_subgroup(), 1)
    t = class_transfer(f, A)
    assert t.value((0, 0)) == CyclotomicInteger.from_int(2, 1, 4)
    assert all(t.value(a).is_zero() for a in A.elements[1:])
    assert class_transfer(ClassFunction.constant(A, 1), A) == ClassFunction.constant(A, 1)
    with pytest.raises(ValueError):
        class_transfer(ClassFunction.constant(A, 1), generated_subgroup(A, [(1, 0)]))


def test_transfer_square_random_on_rank_two_three_group():
    G = make_group(3, [1, 1])
    subs = enumerate_subgroups(G)

    @given(st.sampled_from(subs), st.data())
    @settings(max_examples=30, deadline=None)
    def run(S, data):
        n = len(character_basis(S))
        y = from_coefficients(S, data.draw(st.lists(st.integers(-5, 5), min_size=n, max_size=n)))
        assert character_map(transfer(y, G)) == class_transfer(character_map(y), G)

    run()


@pytest.mark.parametrize("G", [G for p in (2, 3) for G in abelian_p_groups(p, 32)], ids=lambda G: G.descriptor())
def test_transfer_square_on_bases(G):
    for S in enumerate_subgroups(G):
        n = len(character_basis(S))
        for k in range(n):
            y = from_coefficients(S, [int(i == k) for i in range(n)])
            assert character_map(transfer(y, G)) == class_transfer(character_map(y), G)


def test_pointwise_arithmetic():
    G = make_group(2, [2])
    f = character_map(character(G, (1,)))
    assert f * f == character_map(character(G, (2,)))
    assert f - f == ClassFunction.constant(G, 0)
    assert 3 * f == f + f + f
    with pytest.raises(ValueError):
        f + ClassFunction.constant(make_group(2, [1]), 1)
    with pytest.raises(ValueError):
        ClassFunction(G, np.zeros((4, 3), dtype=int))


def test_ideal_image_examples():
    A = make_group(2, [1, 1])
    gens = [character_map(transfer_unit(A, V)) for V in maximal_subgroups(A)]
    L = classfun_ideal_image(A, gens)
    assert L.projection_divisible_by((0, 0), 2)
    assert all(v.is_divisible_by(2) for v in L.projection_at((0, 0)))
    for p in (2, 3, 5):
        Zp = make_group(p, [1])
        f = character_map(transfer_unit(Zp, Zp.trivial_subgroup()))
        assert f.value((0,)) == CyclotomicInteger.from_int(p, 1, p)
    empty = classfun_ideal_image(A, [])
    assert empty.vectors.shape == (0, 4)
    with pytest.raises(ValueError):
        classfun_ideal_image(A, [ClassFunction.constant(make_group(2, [2]), 1)])


@pytest.mark.parametrize("G", [G for p in (2, 3, 5) for G in abelian_p_groups(p, 128) if not G.is_cyclic],
                         ids=lambda G: G.descriptor())
def test_values_at_zero_lie_in_p(G):
    gens = [character_map(transfer_unit(G, V)) for V in maximal_subgroups(G)]
    assert all(g.value((0,) * G.rank).is_divisible_by(G.prime) for g in gens)
