import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmarr.arrangement import (
    CombinatorialType,
    Realization,
    RealizationError,
    Weights,
    affine_circuits,
    betanbc_frames,
    bases_and_circuits,
    betti_and_euler,
    compute_type,
    dense_edges,
    frames,
    general_position_type,
    nbc_sets,
    stv_check,
)
from gmarr.exact import PathPoly, parse_path_poly, parse_rational

from _helpers import (
    betti_oracle,
    brute_nbc,
    cofactor_det,
    good_primes,
    random_realization,
)

F = Fraction


def rational_rows(rows):
    return [[parse_rational(e) for e in row] for row in rows]


def path_rows(rows):
    return [[parse_path_poly(e) for e in row] for row in rows]


TRIPLE_POINT = rational_rows(
    [["0", "1", "1"], ["0", "1", "0"], ["0", "1", "-1"], ["-1", "0", "1"]]
)
SELBERG = rational_rows(
    [["0", "1", "0"], ["-1", "1", "0"], ["0", "0", "1"], ["-1", "0", "1"], ["0", "1", "-1"]]
)


# ---------------------------------------------------------------------------
# realizations and minors
# ---------------------------------------------------------------------------


def test_row_indexing_and_infinity():
    r = Realization(TRIPLE_POINT)
    assert r.n == 4 and r.ell == 2
    assert r.row(1) == (F(0), F(1), F(1))
    assert r.row(5) == (F(1), F(0), F(0))
    with pytest.raises(ValueError):
        r.row(6)
    with pytest.raises(ValueError):
        r.row(0)


def test_minor_matches_cofactor_expansion():
    r = Realization(TRIPLE_POINT)
    for I in itertools.combinations(range(1, 6), 3):
        expected = cofactor_det([list(r.row(i)) for i in I])
        assert r.minor(I) == expected


def test_minor_random_matches_cofactor_expansion():
    rng = random.Random(20240817)
    for _ in range(10):
        r = random_realization(rng, 5, 3)
        for I in itertools.combinations(range(1, 7), 4):
            assert r.minor(I) == cofactor_det([list(r.row(i)) for i in I])


def test_minor_validates_index_sets():
    r = Realization(TRIPLE_POINT)
    with pytest.raises(ValueError):
        r.minor((2, 1, 3))  # unsorted
    with pytest.raises(ValueError):
        r.minor((1, 2))  # wrong size
    with pytest.raises(ValueError):
        r.minor((1, 2, 6))  # out of range


def test_zero_row_rejected():
    rows = [[F(0), F(0), F(0)], [F(0), F(1), F(0)], [F(1), F(1), F(1)]]
    with pytest.raises(RealizationError):
        Realization(rows)


def test_projectively_duplicate_rows_rejected():
    rows = [[F(1), F(2), F(3)], [F(-2), F(-4), F(-6)], [F(0), F(1), F(0)]]
    with pytest.raises(RealizationError):
        Realization(rows)


def test_row_parallel_to_infinity_rejected():
    rows = [[F(3), F(0), F(0)], [F(0), F(1), F(0)], [F(0), F(0), F(1)]]
    with pytest.raises(RealizationError):
        Realization(rows)


def test_ragged_rows_rejected():
    with pytest.raises(RealizationError):
        Realization([[F(0), F(1), F(1)], [F(0), F(1)]])


def test_normal_position_flag():
    assert Realization(TRIPLE_POINT).normal_position
    # first two rows of the second example are parallel lines
    assert not Realization(SELBERG).normal_position


def test_path_specialize_and_minor():
    rows = path_rows(
        [["0", "1", "0"], ["-1", "1", "0"], ["0", "0", "1"], ["-t", "0", "1"], ["0", "t", "-1"]]
    )
    r = Realization(rows)
    assert r.is_path
    assert r.minor((3, 4, 5)) == PathPoly((F(0), F(0), F(-1)))  # -t^2
    at1 = r.specialize(1)
    assert not at1.is_path
    assert at1.row(4) == (F(-1), F(0), F(1))
    at0 = r.specialize(0, allow_coincident=True)
    assert at0.row(4) == (F(0), F(0), F(1))
    with pytest.raises(RealizationError):
        r.specialize(0)  # rows collapse together without the escape hatch


def test_specialize_requires_path():
    with pytest.raises(ValueError):
        Realization(TRIPLE_POINT).specialize(1)


# ---------------------------------------------------------------------------
# combinatorial types
# ---------------------------------------------------------------------------


def test_triple_point_type():
    T = compute_type(Realization(TRIPLE_POINT))
    assert (T.n, T.ell) == (4, 2)
    assert sorted(T.dep) == [(1, 2, 3)]
    assert T.normal_position


def test_selberg_type():
    S = compute_type(Realization(SELBERG))
    assert sorted(S.dep) == [(1, 2, 6), (1, 3, 5), (2, 4, 5), (3, 4, 6)]
    assert not S.normal_position


def test_general_position_type():
    G = general_position_type(4, 2)
    assert G.dep == frozenset()
    assert G.is_general_position()


def test_compute_type_rejects_paths():
    rows = path_rows([["0", "1", "1"], ["0", "1", "0"], ["0", "1", "-1"], ["-t", "0", "1"]])
    with pytest.raises(ValueError):
        compute_type(Realization(rows))


def test_affine_circuits_triple_point():
    T = compute_type(Realization(TRIPLE_POINT))
    assert affine_circuits(T) == ((1, 2, 3),)


def test_affine_circuits_selberg():
    S = compute_type(Realization(SELBERG))
    assert affine_circuits(S) == ((1, 3, 5), (2, 4, 5))


def test_matroid_data_exposes_both_circuit_kinds():
    S = compute_type(Realization(SELBERG))
    data = bases_and_circuits(S)
    assert data.circuits_affine == ((1, 3, 5), (2, 4, 5))
    assert (1, 2, 6) in data.circuits


# ---------------------------------------------------------------------------
# nbc sets and frames
# ---------------------------------------------------------------------------


def test_nbc_triple_point_frozen():
    T = compute_type(Realization(TRIPLE_POINT))
    assert nbc_sets(T, 0) == ((),)
    assert nbc_sets(T, 1) == ((1,), (2,), (3,), (4,))
    assert nbc_sets(T, 2) == ((1, 2), (1, 3), (1, 4), (2, 4), (3, 4))


def test_nbc_matches_brute_force_on_examples():
    for rows in (TRIPLE_POINT, SELBERG):
        r = Realization(rows)
        T = compute_type(r)
        for q in range(T.ell + 1):
            assert nbc_sets(T, q) == tuple(brute_nbc(r, q))


def test_nbc_matches_brute_force_random():
    rng = random.Random(99)
    for _ in range(6):
        r = random_realization(rng, 5, 2)
        T = compute_type(r)
        for q in range(3):
            assert nbc_sets(T, q) == tuple(brute_nbc(r, q))


def test_betanbc_frozen_values():
    T = compute_type(Realization(TRIPLE_POINT))
    S = compute_type(Realization(SELBERG))
    assert betanbc_frames(T) == ((2, 4), (3, 4))
    assert betanbc_frames(S) == ((2, 4), (2, 5))
    assert betanbc_frames(general_position_type(4, 2)) == ((2, 3), (2, 4), (3, 4))


def test_betanbc_general_position_count():
    # ell-subsets of {2..n}: binomial(n-1, ell) of them
    import math

    for n, ell in [(4, 2), (5, 2), (6, 3), (5, 4)]:
        G = general_position_type(n, ell)
        got = betanbc_frames(G)
        assert len(got) == math.comb(n - 1, ell)
        assert all(B[0] >= 2 for B in got)


def test_betanbc_subset_of_general_position():
    rng = random.Random(4)
    for _ in range(8):
        r = random_realization(rng, 5, 2)
        T = compute_type(r)
        G = general_position_type(5, 2)
        assert set(betanbc_frames(T)) <= set(betanbc_frames(G))


def test_betanbc_exchange_property():
    # every member of a frame in the distinguished set can be swapped down
    rng = random.Random(11)
    for _ in range(10):
        r = random_realization(rng, 6, 2)
        T = compute_type(r)
        all_frames = set(frames(T))
        for B in betanbc_frames(T):
            for k, jk in enumerate(B):
                replaced = [
                    tuple(sorted(set(B) - {jk} | {h}))
                    for h in range(1, jk)
                    if h not in B
                ]
                assert any(Bp in all_frames for Bp in replaced), (B, jk)


# ---------------------------------------------------------------------------
# betti numbers against finite-field point counts
# ---------------------------------------------------------------------------


def test_betti_triple_point():
    r = Realization(TRIPLE_POINT)
    T = compute_type(r)
    be = betti_and_euler(T)
    assert be.betti == (1, 4, 5)
    assert be.euler == 2
    assert betti_oracle(r, (101, 103, 107)) == ([1, 4, 5], 2)


def test_betti_selberg():
    r = Realization(SELBERG)
    S = compute_type(r)
    be = betti_and_euler(S)
    assert be.betti == (1, 5, 6)
    assert be.euler == 2
    assert betti_oracle(r, (101, 103, 107)) == ([1, 5, 6], 2)


def test_betti_general_position():
    G = general_position_type(4, 2)
    assert betti_and_euler(G).betti == (1, 4, 6)
    assert betti_and_euler(G).euler == 3


def test_betti_random_against_point_counts():
    rng = random.Random(321)
    for _ in range(4):
        r = random_realization(rng, 5, 2)
        T = compute_type(r)
        be = betti_and_euler(T)
        assert betti_oracle(r, good_primes(r, 3)) == (list(be.betti), be.euler)


def test_betti_random_dimension_three():
    rng = random.Random(322)
    r = random_realization(rng, 4, 3)
    T = compute_type(r)
    be = betti_and_euler(T)
    assert betti_oracle(r, good_primes(r, 4)) == (list(be.betti), be.euler)


def test_betanbc_counts_euler_characteristic():
    rng = random.Random(5150)
    for _ in range(12):
        r = random_realization(rng, 5, 2)
        T = compute_type(r)
        assert len(betanbc_frames(T)) == abs(betti_and_euler(T).euler)


# ---------------------------------------------------------------------------
# dense edges and the nonresonance check
# ---------------------------------------------------------------------------


def test_dense_edges_triple_point():
    T = compute_type(Realization(TRIPLE_POINT))
    members = [f.members for f in dense_edges(T)]
    assert members == [(1,), (2,), (3,), (4,), (5,), (1, 2, 3)]


def test_dense_edges_selberg():
    S = compute_type(Realization(SELBERG))
    members = [f.members for f in dense_edges(S)]
    assert members == [
        (1,), (2,), (3,), (4,), (5,), (6,),
        (1, 2, 6), (1, 3, 5), (2, 4, 5), (3, 4, 6),
    ]


def test_stv_generic_is_symbolic():
    T = compute_type(Realization(TRIPLE_POINT))
    report = stv_check(T, Weights.generic(4))
    assert report.ok and report.generic
    assert [c[0] for c in report.conditions] == [
        (1,), (2,), (3,), (4,), (5,), (1, 2, 3)
    ]


def test_stv_concrete_values_frozen():
    T = compute_type(Realization(TRIPLE_POINT))
    w = Weights.concrete([F(-1, 2), F(-1, 3), F(-1, 5), F(-1, 7)])
    report = stv_check(T, w)
    assert report.ok and not report.generic
    sums = dict((c[0], c[1]) for c in report.conditions)
    assert sums[(5,)] == F(247, 210)
    assert sums[(1, 2, 3)] == F(-31, 30)


def test_stv_flags_nonnegative_integer_sums():
    T = compute_type(Realization(TRIPLE_POINT))
    w = Weights.concrete([F(1), F(-1, 3), F(-1, 5), F(-1, 7)])
    report = stv_check(T, w)
    assert not report.ok
    assert ((1,), F(1)) in report.violations
    # a negative or non-integer sum is fine
    w2 = Weights.concrete([F(-3, 2), F(-1, 3), F(-1, 5), F(-1, 7)])
    assert stv_check(T, w2).ok


def test_weights_infinity_index():
    w = Weights.concrete([F(-1, 2), F(-1, 3), F(-1, 5), F(-1, 7)])
    assert w.weight(5) == F(247, 210)
    g = Weights.generic(4)
    assert str(g.weight(5)) == "-l1 - l2 - l3 - l4"
    assert str(g.weight_sum((1, 2, 5))) == "-l3 - l4"
    with pytest.raises(ValueError):
        g.weight(6)


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_type_is_stable_under_row_scaling(seed):
    rng = random.Random(seed)
    r = random_realization(rng, 4, 2)
    scaled_rows = []
    for row in r.rows:
        c = Fraction(rng.choice([1, 2, 3, -1, -5]))
        scaled_rows.append([c * x for x in row])
    scaled = Realization(scaled_rows)
    assert compute_type(scaled) == compute_type(r)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_betanbc_euler_random(seed):
    rng = random.Random(seed)
    n, ell = rng.choice([(4, 2), (5, 2), (5, 3)])
    r = random_realization(rng, n, ell)
    T = compute_type(r)
    assert len(betanbc_frames(T)) == abs(betti_and_euler(T).euler)


def test_combinatorial_type_equality_and_hash():
    T1 = CombinatorialType(4, 2, frozenset({(1, 2, 3)}))
    T2 = CombinatorialType(4, 2, frozenset({(1, 2, 3)}))
    assert T1 == T2 and hash(T1) == hash(T2)
    assert T1 != CombinatorialType(4, 2, frozenset())
