import pytest
from hypothesis import given, strategies as st

from hamcyl.brute_oracle import GuardError
from hamcyl.transfer_engine import (
    SeriesPrefix,
    count_walks,
    digraph,
    h_contractible,
    phi,
    phi_profile,
    series,
    walk_profile,
)

from conftest import cached_oracle

PHI3 = [1, 4, 12, 32, 83, 212, 540, 1372, 3485, 8848, 22464]


def test_empty_walk():
    assert count_walks([[0]], 0, {0: 1}, [0]) == 1


def test_negative_length():
    with pytest.raises(ValueError):
        count_walks([[0]], -1, {0: 1}, [0])


@given(st.integers(0, 30))
def test_two_cycle_walks(k):
    # 0 <-> 1: closed walks from 0 exist only at even length
    assert count_walks([[1], [0]], k, {0: 1}, [0]) == (1 - k % 2)


@given(st.lists(st.lists(st.integers(0, 4), max_size=4), min_size=5, max_size=5), st.integers(0, 8))
def test_profile_matches_matrix_power(rows, k):
    succ = [tuple(r) for r in rows]
    mat = [[sum(1 for y in succ[i] if y == j) for j in range(5)] for i in range(5)]
    power = [[int(i == j) for j in range(5)] for i in range(5)]
    for _ in range(k):
        power = [[sum(power[i][t] * mat[t][j] for t in range(5)) for j in range(5)] for i in range(5)]
    assert walk_profile(succ, {0: 1}, {3: 1}, k)[k] == power[0][3]


def test_m2_unique_triple():
    d = digraph(2, "ext")
    assert len(d.boundary) == 1
    assert phi(2, 2, "ext") == 2 and h_contractible(2, 4, "ext") == 8


@pytest.mark.parametrize("coding", ["ext", "int"])
def test_m3_phi(coding):
    assert phi_profile(digraph(3, coding), 10) == PHI3


def test_examples():
    assert phi(3, 4, "int") == 83
    assert phi(3, 9, "ext") == phi(3, 9, "int") == 8848
    assert phi(3, 0, "ext") == 1
    assert h_contractible(3, 12, "int") == 269568
    assert h_contractible(4, 7, "ext") == 0
    assert h_contractible(4, 8, "ext") == 44288
    assert h_contractible(5, 6, "int") == 35964
    assert h_contractible(5, 8, "int") == 1575288


@pytest.mark.parametrize("m", [1, 2, 3])
@pytest.mark.parametrize("n", range(2, 7))
def test_methods_agree_with_oracle(m, n):
    o = cached_oracle(m, n).h_c
    assert h_contractible(m, n, "ext") == h_contractible(m, n, "int") == o


def test_oracle_method():
    assert h_contractible(3, 4, "oracle") == 48
    with pytest.raises(GuardError):
        h_contractible(5, 12, "oracle")


def test_m6_series_prefix():
    got = [h for h in series(6, 16, "int").coefficients() if h]
    assert got == [2, 2032, 263736, 22337664, 1641664580, 113092326312, 7512031798348, 487293888097600]


def test_m7_prefix():
    assert series(7, 5, "int").coefficients() == [2, 192, 8192, 127860]


def test_threads_do_not_change_values():
    assert phi_profile(digraph(5, "int"), 40, workers=3) == phi_profile(digraph(5, "int"), 40)


@pytest.mark.parametrize("m", range(1, 7))
def test_parity_and_divisibility(m):
    for n, h in series(m, 20, "ext").values:
        assert h % n == 0
        assert (h == 0) == (m % 2 == 0 and n % 2 == 1)


def test_series_prefix_checks():
    with pytest.raises(AssertionError):
        SeriesPrefix(3, "int", [(4, 7)])
    with pytest.raises(AssertionError):
        SeriesPrefix(2, "int", [(3, 3)])
    sp = series(4, 9, "int")
    assert sp.coefficients() == [2, 0, 136, 0, 2832, 0, 44288, 0]
    assert sp.to_csv().splitlines()[1] == "4,2,int,2"
    assert '"h_c": "44288"' in sp.to_json()


def test_bad_arguments():
    with pytest.raises(ValueError):
        series(3, 1, "int")
    with pytest.raises(ValueError):
        series(3, 5, "bogus")
    with pytest.raises(ValueError):
        h_contractible(3, 1, "int")
