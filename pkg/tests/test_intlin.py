import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from transfer_torsion.intlin import (
    QuotientStructure,
    as_int_matrix,
    determinant,
    hermite_normal_form,
    is_smith_normal_form,
    lattice_contains,
    quotient_structure,
    smith_normal_form,
)

import oracles


def matrices(max_dim=5, bound=20):
    return st.integers(1, max_dim).flatmap(
        lambda m: st.integers(1, max_dim).flatmap(
            lambda n: st.lists(
                st.lists(st.integers(-bound, bound), min_size=n, max_size=n), min_size=m, max_size=m
            )
        )
    )


def check_smith(M):
    U, D, V = smith_normal_form(M)
    M = as_int_matrix(M)
    assert np.array_equal((U.astype(object) @ M.astype(object)) @ V.astype(object), D.astype(object))
    assert abs(oracles.frac_det(U.tolist())) == 1
    assert abs(oracles.frac_det(V.tolist())) == 1
    assert is_smith_normal_form(D)
    return [int(d) for d in np.diag(D)] if D.size else []


@pytest.mark.parametrize(
    "M, diag",
    [
        ([[2, 0], [0, 3]], [1, 6]),
        ([[1, 0], [0, 1]], [1, 1]),
        ([[2, 0], [0, 2]], [2, 2]),
        ([[0, 0], [0, 0]], [0, 0]),
        ([[4, 6]], [2]),
    ],
)
def test_smith_examples(M, diag):
    assert check_smith(M) == diag


def test_smith_identity_transforms():
    U, D, V = smith_normal_form(np.eye(3, dtype=int))
    assert np.array_equal(D, np.eye(3))


def test_smith_empty():
    U, D, V = smith_normal_form(np.zeros((0, 3), dtype=int))
    assert D.shape == (0, 3) and U.shape == (0, 0) and V.shape == (3, 3)


@given(matrices())
@settings(max_examples=150, deadline=None)
def test_smith_postconditions(M):
    check_smith(M)


@given(matrices(max_dim=4, bound=9))
@settings(max_examples=80, deadline=None)
def test_smith_matches_determinantal_divisors(M):
    diag = [d for d in check_smith(M) if d]
    assert diag == oracles.determinantal_invariants(M)


def test_smith_promotes_past_int64():
    big = 2**70
    M = [[big, 3], [5, big + 1], [7, 11]]
    diag = check_smith(M)
    assert diag == oracles.determinantal_invariants(M)


def test_smith_on_overflowing_products():
    rng = random.Random(5)
    M = [[rng.randint(-(10**12), 10**12) for _ in range(5)] for _ in range(5)]
    check_smith(M)


def test_is_smith_normal_form():
    assert is_smith_normal_form(np.diag([1, 2, 4, 0]))
    assert not is_smith_normal_form(np.diag([2, 3]))
    assert not is_smith_normal_form(np.array([[1, 1], [0, 2]]))
    assert not is_smith_normal_form(np.diag([0, 2]))


@given(matrices(max_dim=5, bound=30))
def test_determinant_matches_oracle(M):
    n = min(len(M), len(M[0]))
    square = [row[:n] for row in M[:n]]
    assert determinant(square) == oracles.frac_det(square)


@given(matrices(max_dim=6, bound=15))
@settings(max_examples=100, deadline=None)
def test_hnf_shape_and_lattice(M):
    n = len(M[0])
    H = hermite_normal_form(M, n)
    assert H.shape[0] == oracles.frac_rank(M)
    piv = []
    for i, row in enumerate(H.tolist()):
        j = next(k for k, x in enumerate(row) if x)
        assert row[j] > 0
        piv.append(j)
        for r in range(i):
            assert 0 <= H[r, j] < row[j]
    assert piv == sorted(piv) and len(set(piv)) == len(piv)
    # same row lattice: each generating set lies in the other's span
    assert all(lattice_contains(n, H.tolist(), v) for v in M)
    assert all(lattice_contains(n, M, v) for v in H.tolist())


@pytest.mark.parametrize(
    "n, gens, free, divs",
    [
        (2, [(2, 0)], 1, (2,)),
        (2, [], 2, ()),
        (4, [(1, 1, 0, 0), (0, 0, 1, 1), (1, 0, 1, 0), (0, 1, 0, 1), (1, 0, 0, 1), (0, 1, 1, 0)], 0, (2,)),
        (3, [(2, 0, 0), (0, 4, 0), (0, 0, 8)], 0, (2, 4, 8)),
        (2, [(2, 0), (0, 3)], 0, (6,)),
    ],
)
def test_quotient_examples(n, gens, free, divs):
    q = quotient_structure(n, gens, prime=2)
    assert (q.free_rank, q.elementary_divisors) == (free, divs)


def test_worked_four_group_relations():
    # Z[a,b]/(a^2-1, b^2-1) with basis 1, b, a, ab; relations 1+a, 1+b, 1+ab and their twists
    basis = {"1": 0, "b": 1, "a": 2, "ab": 3}
    mult = {("a", "1"): "a", ("a", "a"): "1", ("a", "b"): "ab", ("a", "ab"): "b",
            ("b", "1"): "b", ("b", "b"): "1", ("b", "a"): "ab", ("b", "ab"): "a",
            ("ab", "1"): "ab", ("ab", "ab"): "1", ("ab", "a"): "b", ("ab", "b"): "a"}
    gens = []
    for rel in ("a", "b", "ab"):
        for chi in basis:
            v = [0] * 4
            v[basis[chi]] += 1
            v[basis[mult[(rel, chi)]]] += 1
            gens.append(v)
    q = quotient_structure(4, gens, prime=2)
    assert (q.free_rank, q.elementary_divisors) == (0, (2,))
    assert lattice_contains(4, gens, [2, 0, 0, 0])


@given(matrices(max_dim=5, bound=8), st.randoms(use_true_random=False))
@settings(max_examples=80, deadline=None)
def test_quotient_invariant_under_scramble_and_duplication(M, rnd):
    n = len(M[0])
    q = quotient_structure(n, M, prime=2)
    rows = [list(r) for r in M]
    rows += [list(rnd.choice(M)) for _ in range(3)]
    if len(rows) > 1:
        i, j = rnd.sample(range(len(rows)), 2)
        k = rnd.randint(-3, 3)
        rows[i] = [a + k * b for a, b in zip(rows[i], rows[j])]
    rnd.shuffle(rows)
    assert quotient_structure(n, rows, prime=2) == q


@given(st.integers(1, 6).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n), min_size=n, max_size=n + 2))
))
@settings(max_examples=150, deadline=None)
def test_quotient_order_matches_enumeration(args):
    n, gens = args
    q = quotient_structure(n, gens)
    expected = oracles.quotient_order_by_enumeration(gens, n)
    if expected is None:
        return
    assert q.free_rank == 0
    assert q.torsion_order == expected


@pytest.mark.parametrize(
    "gens, v, expected",
    [
        ([(2, 0), (0, 2)], (2, 2), True),
        ([(2, 0)], (1, 0), False),
        ([(2, 0)], (0, 0), True),
        ([], (0, 1), False),
        ([(3, 1), (1, 3)], (4, 4), True),
        ([(3, 1), (1, 3)], (1, -1), False),
    ],
)
def test_lattice_contains_examples(gens, v, expected):
    assert lattice_contains(2, gens, v) is expected


@given(matrices(max_dim=4, bound=6), st.data())
@settings(max_examples=80, deadline=None)
def test_membership_consistent_with_quotient(M, data):
    n = len(M[0])
    v = data.draw(st.lists(st.integers(-6, 6), min_size=n, max_size=n))
    q = quotient_structure(n, M)
    if lattice_contains(n, M, v):
        assert quotient_structure(n, M + [v]) == q
    else:
        assert quotient_structure(n, M + [v]) != q
    coeffs = data.draw(st.lists(st.integers(-3, 3), min_size=len(M), max_size=len(M)))
    combo = [sum(c * row[j] for c, row in zip(coeffs, M)) for j in range(n)]
    assert lattice_contains(n, M, combo)


def test_quotient_structure_fields_and_validation():
    q = QuotientStructure(prime=3, free_rank=1, elementary_divisors=(3, 9), p_annihilates=False)
    assert q.p_torsion_present and q.is_nonzero and q.torsion_is_p_primary
    assert q.torsion_order == 27
    assert QuotientStructure.from_dict(q.to_dict()) == q
    r = QuotientStructure(prime=2, free_rank=0, elementary_divisors=(3,))
    assert not r.p_torsion_present and not r.torsion_is_p_primary
    assert not QuotientStructure(prime=2, free_rank=0).is_nonzero
    with pytest.raises(ValueError):
        QuotientStructure(prime=2, free_rank=0, elementary_divisors=(2, 3))
    with pytest.raises(ValueError):
        QuotientStructure(prime=2, free_rank=0, elementary_divisors=(1, 2))


def test_matrix_input_validation():
    with pytest.raises(TypeError):
        as_int_matrix([[1.5, 2]])
    with pytest.raises(ValueError):
        as_int_matrix([[1, 2]], ncols=3)
    assert as_int_matrix([[2**80]]).dtype == object
