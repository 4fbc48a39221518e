"""Acceptance criteria: one PASS/FAIL line per criterion.

Every line is printed as the check runs and repeated in the terminal summary.
Gating criteria fail the test when they fail; non-gating ones xfail.
"""

import time

import mpmath
import pytest

from hamcyl.color_words import Variant, count_words, expected_count
from hamcyl.ext_coding import encode_hc_ext
from hamcyl.int_coding import encode_hc_int
from hamcyl.seq_analysis import dominant_root, predict_h, rational_gf, residue_amplitude
from hamcyl.transfer_engine import digraph, h_contractible, phi_profile, series

from conftest import ACCEPTANCE_LINES, cached_oracle, cached_rooted
from helpers import accepts_ext, accepts_int

THETA = {3: "2.53861576354917625747", 4: "3.31910824039947675342", 5: "5.65205864851675849429"}
AMP = {3: "0.31357228606585772287", 4: "0.19324623166497686532", 5: "0.18876590435542745301"}
H5_250 = ("5315308482081368176130135765364458028442269812845829751132"
          "282449366037705916081244966378616480765252334858462630450547142728"
          "707832260337088675894551742436677743236273632760226951744130398000")
H8_100 = ("6505725150955304765274909197134354116977319209669418653015912"
          "096606195064869245906663377660631373746911131674517266864224600")


def verdict(num, ok, detail, gating=True):
    tag = "" if gating else " (non-gating)"
    line = f"{'PASS' if ok else 'FAIL'} criterion {num}:{tag} {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    if not ok:
        if gating:
            pytest.fail(line)
        pytest.xfail(line)


def sizes(m, coding):
    d = digraph(m, coding)
    if coding == "ext":
        return len(d.vertices), len(d.first), d.arc_count, len(d.boundary)
    return len(d.vertices), d.arc_count, len(d.boundary)


def timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


def test_criterion_01_m1():
    def run():
        ns = range(2, 13)
        oracle = [cached_oracle(1, n).h_c for n in ns]
        ext = [h_contractible(1, n, "ext") for n in ns]
        inn = [h_contractible(1, n, "int") for n in ns]
        return oracle == ext == inn == list(ns)
    ok, secs = timed(run)
    verdict(1, ok and secs < 1, f"h_c(1,n) = n for n=2..12 by oracle/ext/int in {secs:.2f}s (< 1s)")


def test_criterion_02_m2():
    def run():
        want = [n * 2 ** (n // 2) // 2 if n % 2 == 0 else 0 for n in range(2, 17)]
        return (series(2, 16, "ext").coefficients() == want == series(2, 16, "int").coefficients(),
                sizes(2, "ext"), sizes(2, "int"))
    (good, se, si), secs = timed(run)
    ok = good and se == (3, 1, 4, 1) and si == (4, 5, 1) and secs < 1
    verdict(2, ok, f"series n=2..16 exact={good}; ext V/F/E/LFS={se} (3,1,4,1); "
                   f"int V/E/FL={si} (4,5,1); {secs:.2f}s (< 1s)")


def test_criterion_03_m3():
    want = [1, 4, 12, 32, 83, 212, 540, 1372, 3485, 8848, 22464]

    def run():
        pe = phi_profile(digraph(3, "ext"), 10)
        pi = phi_profile(digraph(3, "int"), 10)
        gf = rational_gf(phi_profile(digraph(3, "int"), 40))
        return pe, pi, gf
    (pe, pi, gf), secs = timed(run)
    den = [1, -3, 0, 4, -3, 1]  # (1-x)(1-2x-2x^2+2x^3-x^4)
    ok = (pe == want == pi and sizes(3, "ext") == (11, 3, 24, 12) and sizes(3, "int") == (10, 23, 6)
          and list(gf.denominator.coeffs) == den and secs < 5)
    verdict(3, ok, f"phi ext/int exact={pe == want == pi}; ext V/F/E/LFS={sizes(3, 'ext')}; "
                   f"int V/E/FL={sizes(3, 'int')}; denominator={gf.denominator.to_strings()}; {secs:.2f}s (< 5s)")


def test_criterion_04_m4():
    want = [2, 136, 2832, 44288, 621720, 8268432, 106467592]

    def run():
        hs = series(4, 15, "int").coefficients()
        gf = rational_gf(phi_profile(digraph(4, "int"), 80))
        return hs, gf
    (hs, gf), secs = timed(run)
    from hamcyl.seq_analysis import RationalPoly as P
    den = P([1, -1]) * P([1, 1]) * P([1, 0, -3]) ** 2 * P([1, 0, -11, 0, 0, 0, -2])
    odd_zero = all(h == 0 for h in hs[1::2])
    ok = hs[0::2] == want and odd_zero and gf.denominator == den and secs < 30
    verdict(4, ok, f"even-n terms {hs[0::2] == want}, odd-n zeros {odd_zero}; "
                   f"denominator match {gf.denominator == den}; {secs:.2f}s (< 30s)")


def test_criterion_05_m5():
    want = [2, 48, 612, 4520, 35964, 229698, 1575288, 9806292, 62999960, 387822094, 2411860680, 14706401372]
    (hs, se, si), secs = timed(lambda: (series(5, 13, "int").coefficients(), sizes(5, "ext"), sizes(5, "int")))
    ok_series = hs == want and series(5, 13, "ext").coefficients() == want
    ok = ok_series and se == (174, 28, 677, 406) and si == (104, 423, 80) and secs < 300
    verdict(5, ok, f"12 series terms exact={ok_series}; ext V/F/E/LFS={se} want (174,28,677,406); "
                   f"int V/E/FL={si} want (104,423,80); {secs:.2f}s (< 300s)")


def test_criterion_06_m6():
    want = [2, 2032, 263736, 22337664, 1641664580, 113092326312, 7512031798348, 487293888097600]
    (hs, si), secs = timed(lambda: ([h for h in series(6, 16, "int").coefficients() if h], sizes(6, "int")))
    ok = hs == want and si == (318, 1792, 325) and secs < 900
    verdict(6, ok, f"8 nonzero terms exact={hs == want}; int V/E/FL={si} want (318,1792,325); "
                   f"{secs:.2f}s (< 900s)")


def test_criterion_07_stretch():
    want_sizes = {7: (985, 7857, 1413), 8: (3121, 34505, 6083), 9: (9943, 153500, 26583)}
    want_terms = {7: [2, 192, 8192, 127860, 2779014], 8: [2, 29104, 22869384, 10215798448, 3817933082020],
                  9: [2, 768, 112164, 3616880, 222067212]}

    def run():
        got = {}
        for m in (7, 8, 9):
            terms = [h for h in series(m, 11, "int").coefficients() if h][:5]
            got[m] = (sizes(m, "int"), terms)
        return got
    got, secs = timed(run)
    terms_ok = all(got[m][1] == want_terms[m] for m in got)
    sizes_ok = all(got[m][0] == want_sizes[m] for m in got)
    detail = "; ".join(f"m={m} V/E/FL={got[m][0]} want {want_sizes[m]}" for m in got)
    verdict(7, terms_ok and sizes_ok and secs < 7200,
            f"first 5 terms exact={terms_ok}; {detail}; {secs:.1f}s (< 2h)", gating=False)


def test_criterion_08_triple_agreement():
    def run():
        bad = []
        for m in (2, 3, 4):
            for n in range(2, 9):
                trio = (h_contractible(m, n, "ext"), h_contractible(m, n, "int"), cached_oracle(m, n).h_c)
                if len(set(trio)) != 1:
                    bad.append((m, n, trio))
        nc = all(cached_oracle(2, n).h_nc == 2 ** n - 2 for n in range(2, 9))
        return bad, nc
    (bad, nc), secs = timed(run)
    verdict(8, not bad and nc and secs < 600,
            f"{21 - len(bad)}/21 (m,n) agree; h_nc(2,n) = 2^n-2: {nc}; {secs:.1f}s (< 600s)")


def test_criterion_09_roundtrip():
    total = passed = 0
    for m in range(1, 5):
        de, di = digraph(m, "ext"), digraph(m, "int")
        for n in range(2, 9):
            for hc in cached_rooted(m, n):
                total += 1
                passed += accepts_ext(de, encode_hc_ext(hc)) and accepts_int(di, encode_hc_int(hc))
    verdict(9, total > 0 and passed == total, f"{passed}/{total} rooted cycles accepted by both digraphs (m<=4, n<=8)")


def test_criterion_10_color_words():
    def run():
        return all(count_words(k, v) == expected_count(k, v) for k in range(11) for v in Variant)
    ok, secs = timed(run)
    verdict(10, ok and secs < 1, f"C_k / C_(k+1) / C_(k+1)-C_k for k<=10: {ok}; {secs:.2f}s (< 1s)")


def test_criterion_11_analysis():
    lines, ok = [], True
    with mpmath.workdps(60):
        for m, k in ((3, 60), (4, 90), (5, 250)):
            gf = rational_gf(phi_profile(digraph(m, "int"), k))
            theta = dominant_root(gf.denominator, 50)
            amp = residue_amplitude(gf, theta)
            t_ok = abs(theta - mpmath.mpf(THETA[m])) <= mpmath.mpf("1e-20")
            a_ok = abs(amp / mpmath.mpf(AMP[m]) - 1) < mpmath.mpf("1e-10")
            ok &= t_ok and a_ok
            lines.append(f"m={m} theta {t_ok} a {a_ok}")
            if m == 5:
                h = predict_h(gf, 250)
                p_ok = len(str(h)) == 190 and str(h) == H5_250
                approx = mpmath.nstr(amp * 250 * theta ** 250, 55, strip_zeros=False).replace(".", "")
                same = next((i for i, (a, b) in enumerate(zip(approx, str(h))) if a != b), 55)
                ok &= p_ok and same >= 49
                lines.append(f"predict(5,250) {len(str(h))} digits exact={p_ok}; a n theta^n shares {same} digits")
    verdict(11, ok, "; ".join(lines))


def test_criterion_12_scale_substitute():
    # the full m=8,9 generating functions stay out of reach; what is checked
    # here instead is a large exact value from the m=8 digraph
    h, secs = timed(lambda: 100 * phi_profile(digraph(8, "int"), 98, workers=4)[98])
    ok = str(h) == H8_100
    verdict(12, ok, f"full m=8,9 GFs not attempted; h_c(8,100) by direct walk count matches all 124 digits: "
                    f"{ok} ({secs:.1f}s)", gating=False)
