import pytest

from hamcyl.color_words import Variant, satisfies
from hamcyl.columns import factors, parse, render, sign
from hamcyl.ext_coding import (
    ExtRules,
    arc_valid_ext,
    build_ext_digraph,
    column_valid_ext,
    encode_hc_ext,
    first_columns,
)
from hamcyl.transfer_engine import digraph, phi_profile

from conftest import cached_rooted
from helpers import accepts_ext, charpoly

# vertex order used by the published m = 3 listing
V3 = ["(0^0,0^0,0^0)", "(0^0,1^0,0^0)", "(0^0,1^0,1^0)", "(0^0,2^0,0^0)", "(0^0,1^1,0^0)",
      "(-1^0,-1^0,0^0)", "(-1^0,0^0,1^0)", "(0^0,-2^{-1},0^0)", "(0^0,-2^0,0^0)",
      "(0^0,2^{-1},0^0)", "(0^0,-1^0,0^0)"]
F3 = ["(1^0,1^0,1^0)", "(2^0,2^0,0^0)", "(1^1,1^1,0^0)"]
# the published matrix, minus its row-10 entry in column 5 (see test below)
M3 = [
    "00110111110", "11000000000", "11000000000", "00110000000", "10001000000", "10000000001",
    "10000000000", "00000001000", "00000100100", "00000000010", "10000000001",
]
LFS3 = {(10, 1, 1), (10, 1, 2), (1, 1, 1), (1, 1, 2), (10, 2, 4), (10, 2, 3), (1, 2, 4), (1, 2, 3),
        (3, 3, 1), (3, 3, 5), (2, 3, 1), (2, 3, 5)}


def _matrix(d, names):
    idx = {v: k for k, v in enumerate(d.vertices)}
    order = [idx[parse(s)] for s in names]
    return [[int(order[j] in d.succ[order[i]]) for j in range(len(order))] for i in range(len(order))]


@pytest.mark.parametrize("m,sizes", [(2, (3, 1, 4, 1)), (3, (11, 3, 24, 12)), (5, (174, 28, 677, 406))])
def test_table_sizes(m, sizes):
    d = build_ext_digraph(m)
    assert (len(d.vertices), len(d.first), d.arc_count, len(d.boundary)) == sizes


def test_m3_vertices_and_first():
    d = digraph(3, "ext")
    assert {render(v) for v in d.vertices} == set(V3)
    assert {render(f) for f in d.first} == set(F3)


def test_m3_matrix():
    assert _matrix(digraph(3, "ext"), V3) == [[int(c) for c in row] for row in M3]


def test_m3_typo_arc_absent():
    # the printed matrix has 25 ones against 24 arcs in the size table; the
    # extra entry is v10 -> v5, whose removal reproduces the printed
    # characteristic polynomial exactly
    d = digraph(3, "ext")
    assert not arc_valid_ext(3, parse(V3[9]), parse(V3[4]))
    assert d.arc_count == 24


def test_m3_characteristic_polynomial():
    # -x^2 + 7x^3 - 22x^4 + 38x^5 - 34x^6 + 6x^7 + 18x^8 - 18x^9 + 7x^10 - x^11
    want = [0, 0, -1, 7, -22, 38, -34, 6, 18, -18, 7, -1]
    assert charpoly(_matrix(digraph(3, "ext"), V3)) == want


def test_m3_triples():
    d = digraph(3, "ext")
    vpos = {parse(s): k + 1 for k, s in enumerate(V3)}
    fpos = {parse(s): k + 1 for k, s in enumerate(F3)}
    got = {(vpos[d.vertices[l]], fpos[d.first[f]], vpos[d.vertices[s]]) for l, f, s in d.boundary}
    assert got == LFS3


def test_arc_examples():
    v = {k + 1: parse(s) for k, s in enumerate(V3)}
    assert arc_valid_ext(3, v[6], v[1]) and not arc_valid_ext(3, v[6], v[2])
    assert [k for k in v if arc_valid_ext(3, v[7], v[k])] == [1]
    assert sum(arc_valid_ext(3, v[1], v[k]) for k in v) == 7


def test_column_examples():
    assert column_valid_ext(3, [(-1, 0), (-1, 0), (0, 0)])
    assert column_valid_ext(3, [(0, 0), (2, 0), (0, 0)])
    assert not column_valid_ext(3, [(0, 0), (3, 0), (0, 0)])


def test_column_length_checked():
    with pytest.raises(ValueError):
        column_valid_ext(3, [(0, 0)])


@pytest.mark.parametrize("m", [2, 3, 4])
def test_arc_predicate_matches_successor_lists(m):
    d = digraph(m, "ext")
    for a, u in enumerate(d.vertices):
        for b, v in enumerate(d.vertices):
            assert arc_valid_ext(m, u, v) == (b in d.succ[a])


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_first_columns_rooted(m):
    for f in digraph(m, "ext").first:
        assert f[0][0] > 0 and f[0] == f[1]
    assert set(digraph(m, "ext").first) <= set(first_columns(m))


@pytest.mark.parametrize("m", range(2, 6))
def test_colour_words_in_languages(m):
    for col in digraph(m, "ext").vertices:
        fs = factors(col)
        for sg in (1, -1):
            for r in {f[3] for f in fs}:
                word = [abs(f[2]) for f in fs if sign(f[2]) == sg and f[3] == r]
                if sg > 0:
                    word.reverse()  # positive classes are numbered bottom-up
                if word:
                    variant = Variant.P123 if 1 in word else Variant.P12
                    assert satisfies(tuple(word), variant)


@pytest.mark.parametrize("m", [2, 3])
@pytest.mark.parametrize("n", range(2, 8))
def test_roundtrip(m, n):
    d = digraph(m, "ext")
    mats = [encode_hc_ext(h) for h in cached_rooted(m, n)]
    assert all(accepts_ext(d, cols) for cols in mats)
    assert len(set(map(tuple, mats))) == len(mats)


def test_encode_rejects_unrooted():
    from hamcyl.brute_oracle import Kind, classify, enumerate_hamiltonian_cycles, is_rooted
    from hamcyl.grid_core import build_cylinder

    h = next(h for h in enumerate_hamiltonian_cycles(build_cylinder(3, 4))
             if classify(h) is Kind.CONTRACTIBLE and not is_rooted(h))
    with pytest.raises(ValueError):
        encode_hc_ext(h)


@pytest.mark.parametrize("m", [3, 4])
def test_sparse_rule_is_pure_pruning(m):
    # switching the sparse-column ordering filter on only removes dead columns
    base = phi_profile(digraph(m, "ext"), 14)
    for rule in ("deepest", "shallowest"):
        assert phi_profile(build_ext_digraph(m, ExtRules(sparse_rule=rule)), 14) == base
