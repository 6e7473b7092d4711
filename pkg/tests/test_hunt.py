from itertools import combinations, permutations

import pytest

from ybx.hunt import (CHECKS, BudgetExceeded, CapExceeded, SearchConfig, canonical_table,
                      conjugate_table, cross_validate, enumerate_linear, enumerate_set_theoretic,
                      passes, run_config)
from ybx.kernel import (PermutationMap, check_eq13, complete_solution, to_permutation,
                        verify_crossing_matrix, verify_qybe_set, verify_set,
                        verify_unitarity_set)
from ybx.modmat import GroupSpec, Matrix, Ring, is_invertible

from oracles import all_matrices

# Frozen from an independent numpy double loop over all (a, b).
LINEAR_COUNTS = {(2, 1): 1, (4, 1): 4, (2, 2): 18, (3, 2): 96, (5, 2): 960}

# Frozen from a scan of all 9! tables with the kernel verifiers.
CENSUS_N3_ALL = [
    (0, 1, 2, 3, 4, 5, 6, 7, 8), (0, 1, 2, 3, 8, 7, 6, 5, 4), (0, 1, 5, 3, 4, 2, 7, 6, 8),
    (0, 2, 1, 6, 4, 5, 3, 7, 8), (0, 2, 1, 6, 8, 7, 3, 5, 4), (0, 7, 2, 5, 4, 3, 6, 1, 8),
    (4, 3, 2, 1, 0, 5, 6, 7, 8), (4, 3, 5, 1, 0, 2, 7, 6, 8), (5, 3, 4, 8, 6, 7, 2, 0, 1),
    (7, 8, 6, 1, 2, 0, 4, 5, 3), (8, 1, 6, 3, 4, 5, 2, 7, 0), (8, 7, 6, 5, 4, 3, 2, 1, 0),
]


def brute_linear(m, N):
    out = []
    for a in all_matrices(m, N):
        if not is_invertible(1 - a @ a):
            continue
        for b in all_matrices(m, N):
            if is_invertible(b) and check_eq13(a, b):
                out.append((a, b))
    return out


def test_linear_examples():
    assert [(a.tolist(), b.tolist()) for a, b in enumerate_linear(2, 1)] == [([[0]], [[1]])]
    got = {(a[0, 0], b[0, 0]) for a, b in enumerate_linear(4, 1)}
    assert got == {(0, 1), (0, 3), (2, 1), (2, 3)}
    R2 = Ring(2)
    pair = (Matrix.of([[1, 1], [1, 0]], R2), Matrix.of([[0, 1], [1, 0]], R2))
    assert pair in enumerate_linear(2, 2)


@pytest.mark.parametrize("mN", sorted(LINEAR_COUNTS))
def test_linear_counts(mN):
    assert len(enumerate_linear(*mN)) == LINEAR_COUNTS[mN]


@pytest.mark.parametrize("mN", [(2, 1), (3, 1), (4, 1), (6, 1), (2, 2), (3, 2)])
def test_linear_matches_double_loop(mN):
    got = enumerate_linear(*mN)
    assert got == brute_linear(*mN)
    keys = [(a.entries(), b.entries()) for a, b in got]
    assert keys == sorted(keys)


def test_linear_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_linear(4, 2, budget=1000)


def test_linear_prune_safety():
    # rejected a's have 1 - a^2 singular, so completion fails for every b
    m, N = 3, 2
    kept = {a for a, _ in enumerate_linear(m, N)}
    for a in all_matrices(m, N):
        if not is_invertible(1 - a @ a):
            assert a not in kept


def test_set_examples():
    c = enumerate_set_theoretic(1)
    assert c.tables == [(0,)]
    assert verify_set(PermutationMap.from_table(c.tables[0], 1)).ok
    c = enumerate_set_theoretic(2, ("qybe", "unitarity"))
    assert (0, 1, 2, 3) in c.tables and PermutationMap.flip(2).table in c.tables
    for a, b in enumerate_linear(2, 1):
        assert to_permutation(complete_solution(GroupSpec(2, 1), a, b)).table in c.tables
    assert c.count_raw == 3
    full = enumerate_set_theoretic(2)
    assert PermutationMap.flip(2).table not in full.tables
    assert full.tables == [(0, 1, 2, 3), (3, 2, 1, 0)]


def test_set_matches_straight_loop_n2():
    for k in range(len(CHECKS) + 1):
        for checks in combinations(CHECKS, k):
            want = []
            for t in permutations(range(4)):
                R = PermutationMap.from_table(t, 2)
                rep = verify_set(R, checks)
                if rep.ok:
                    want.append(t)
            assert enumerate_set_theoretic(2, checks).tables == want


def test_set_census_n3():
    c = enumerate_set_theoretic(3)
    assert c.tables == CENSUS_N3_ALL
    assert c.count_canonical == 5
    assert enumerate_set_theoretic(3, ("qybe", "unitarity")).count_raw == 19


def test_set_cap():
    with pytest.raises(CapExceeded) as err:
        enumerate_set_theoretic(4)
    assert err.value.candidates == 20922789888000


def test_soundness_against_kernel():
    for n in (2, 3):
        for t in enumerate_set_theoretic(n).tables:
            assert verify_set(PermutationMap.from_table(t, n)).ok


def test_hot_loop_agrees_with_kernel_on_random_tables():
    import random
    rng = random.Random(11)
    for _ in range(300):
        n = rng.choice([2, 3])
        t = list(range(n * n))
        rng.shuffle(t)
        R = PermutationMap.from_table(t, n)
        assert passes(t, n, ("unitarity",)) == bool(verify_unitarity_set(R))
        assert passes(t, n, ("qybe",)) == bool(verify_qybe_set(R))
        assert passes(t, n, ("crossing",)) == bool(verify_crossing_matrix(R))


def test_unitarity_pruning_is_safe():
    # every table rejected by the unitarity prefilter also fails the full check
    for t in permutations(range(4)):
        if not passes(t, 2, ("unitarity",)):
            assert not verify_set(PermutationMap.from_table(t, 2)).ok


def test_canonical_relabeling():
    t = (8, 7, 6, 5, 4, 3, 2, 1, 0)
    assert canonical_table(t, 3) == min(
        conjugate_table(t, 3, s) for s in permutations(range(3)))
    # conjugating by a relabeling preserves solution status
    for s in permutations(range(3)):
        u = conjugate_table(CENSUS_N3_ALL[5], 3, s)
        assert u in CENSUS_N3_ALL
        assert canonical_table(u, 3) == canonical_table(CENSUS_N3_ALL[5], 3)


def test_cross_validate():
    cv = cross_validate(2, 1)
    assert cv.inclusion
    assert cv.residue == [(3, 2, 1, 0)]
    cv3 = cross_validate(3, 1)
    assert cv3.inclusion and len(cv3.linear_tables) == 2
    off = enumerate_set_theoretic(2, ("qybe", "unitarity"))
    assert set(cv.census.tables) <= set(off.tables)


@pytest.mark.parametrize("workers", [1, 3])
def test_worker_count_does_not_change_output(workers):
    assert enumerate_set_theoretic(2, workers=workers).tables == [(0, 1, 2, 3), (3, 2, 1, 0)]
    assert enumerate_linear(3, 2, workers=workers) == enumerate_linear(3, 2, workers=1)


def test_search_config():
    with pytest.raises(ValueError):
        SearchConfig(checks=("bogus",))
    pairs, census = run_config(SearchConfig(m=2, N=1, workers=1))
    assert len(pairs) == 1 and census.count_raw == 2
    pairs, census = run_config(SearchConfig(m=3, N=2, workers=1))
    assert len(pairs) == 96 and census is None
