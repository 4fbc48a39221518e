"""Rational generating functions and growth constants from exact series.

The recurrence is found by Berlekamp-Massey over the rationals and must
predict a held-out suffix exactly.  The growth rate theta is the largest
positive root of the reciprocal denominator, isolated with Sturm sequences
on exact rational polynomials and polished in mpmath.  The amplitude a in
h(n) ~ a n theta^n (odd m) or 2 a n theta^n (even m, even n) comes both
from the ratio h(n) / (n theta^n) and from the residue of the pole.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence

import mpmath

PRECISION_DIGITS = 60
_PRIME = (1 << 61) - 1


class InsufficientTerms(ValueError):
    """The supplied prefix is too short to pin down the recurrence."""

    def __init__(self, message: str, needed: int | None = None) -> None:
        super().__init__(message)
        self.needed = needed


class NonConvergent(ArithmeticError):
    """A limit estimate is not settling."""


def _trim(c: Iterable) -> tuple[Fraction, ...]:
    out = [Fraction(x) for x in c]
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


@dataclass(frozen=True)
class RationalPoly:
    """Polynomial with rational coefficients, lowest degree first."""

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()) -> None:
        object.__setattr__(self, "coeffs", _trim(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        k = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self[i] + other[i] for i in range(k))

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        k = max(len(self.coeffs), len(other.coeffs))
        return RationalPoly(self[i] - other[i] for i in range(k))

    def __mul__(self, other: "RationalPoly | Fraction | int") -> "RationalPoly":
        if not isinstance(other, RationalPoly):
            return RationalPoly(c * other for c in self.coeffs)
        if not self or not other:
            return RationalPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return RationalPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "RationalPoly":
        out = RationalPoly([1])
        for _ in range(e):
            out = out * self
        return out

    def divmod(self, other: "RationalPoly") -> tuple["RationalPoly", "RationalPoly"]:
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.coeffs[-1]
        quo = [Fraction(0)] * max(0, len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c:
                quo[k - dq] = c
                for j in range(dq + 1):
                    rem[k - dq + j] -= c * other.coeffs[j]
        return RationalPoly(quo), RationalPoly(rem[:dq])

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_mp(self, x: mpmath.mpf) -> mpmath.mpf:
        acc = mpmath.mpf(0)
        for c in reversed(self.coeffs):
            acc = acc * x + mpmath.mpf(c.numerator) / c.denominator
        return acc

    def derivative(self) -> "RationalPoly":
        return RationalPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def monic(self) -> "RationalPoly":
        return self * (1 / self.coeffs[-1])

    def reciprocal(self) -> "RationalPoly":
        """x^d p(1/x): its roots are the inverses of the roots of p."""
        return RationalPoly(reversed(self.coeffs))

    def gcd(self, other: "RationalPoly") -> "RationalPoly":
        if self and other and _mod_gcd_degree(self, other) == 0:
            return RationalPoly([1])
        a, b = self, other
        while b:
            r = a.divmod(b)[1]
            a, b = b, (r.monic() if r else r)
        return a.monic() if a else a

    def squarefree(self) -> "RationalPoly":
        g = self.gcd(self.derivative())
        return self.divmod(g)[0] if g.degree > 0 else self

    def to_strings(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __repr__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*x^{i}")
        return "RationalPoly(" + (" + ".join(terms) or "0") + ")"


def _mod_poly(p: RationalPoly, prime: int) -> list[int] | None:
    out = []
    for c in p.coeffs:
        if c.denominator % prime == 0:
            return None
        out.append(c.numerator * pow(c.denominator, -1, prime) % prime)
    while out and out[-1] == 0:
        out.pop()
    return out


def _mod_gcd_degree(a: RationalPoly, b: RationalPoly, prime: int = _PRIME) -> int | None:
    """Degree of gcd(a, b) mod a prime; an upper bound on the rational gcd degree
    when neither leading coefficient vanishes mod the prime."""
    x, y = _mod_poly(a, prime), _mod_poly(b, prime)
    if x is None or y is None or len(x) != len(a.coeffs) or len(y) != len(b.coeffs):
        return None
    while y:
        inv = pow(y[-1], -1, prime)
        while len(x) >= len(y):
            c = x[-1] * inv % prime
            off = len(x) - len(y)
            for j, v in enumerate(y):
                x[off + j] = (x[off + j] - c * v) % prime
            while x and x[-1] == 0:
                x.pop()
        x, y = y, x
    return len(x) - 1


def _bm(seq: Sequence, reduce, inverse) -> tuple[list, int]:
    """Berlekamp-Massey over a field given by ``reduce`` and ``inverse``."""
    c, b = [1], [1]
    length, shift, last = 0, 1, 1
    for n, s in enumerate(seq):
        d = s
        for i in range(1, length + 1):
            d = reduce(d + c[i] * seq[n - i])
        if d == 0:
            shift += 1
            continue
        coef = reduce(d * inverse(last))
        new = c + [0] * max(0, len(b) + shift - len(c))
        for i, x in enumerate(b):
            new[i + shift] = reduce(new[i + shift] - coef * x)
        if 2 * length <= n:
            b, last, length, shift = c, d, n + 1 - length, 1
        else:
            shift += 1
        c = new
    return c, length


def berlekamp_massey(seq: Sequence[int | Fraction]) -> tuple[RationalPoly, int]:
    """Connection polynomial C (C(0) = 1) and linear complexity L."""
    c, length = _bm([Fraction(x) for x in seq], lambda x: x, lambda x: Fraction(1) / x)
    return RationalPoly(c), length


def modular_order(seq: Sequence[int], prime: int = _PRIME) -> int:
    """Linear complexity modulo a prime: a cheap order estimate."""
    _, length = _bm([x % prime for x in seq], lambda x: x % prime, lambda x: pow(x, prime - 2, prime))
    return length


@dataclass
class Recurrence:
    denominator: RationalPoly
    order: int
    fitted_terms: int
    heldout_matches: int


def _extend(c: RationalPoly, length: int, prefix: Sequence[Fraction], upto: int) -> list[Fraction]:
    out = list(prefix)
    while len(out) < upto:
        n = len(out)
        out.append(-sum(c[i] * out[n - i] for i in range(1, length + 1)))
    return out


def terms_for_order(order: int) -> int:
    # a quarter held out, at least max(10, order) terms; the rest covers 2 * order
    return 4 * max(10, order)


def minimal_recurrence(seq: Sequence[int], holdout: int | None = None) -> Recurrence:
    """Shortest recurrence fitted on a prefix and confirmed on the rest.

    The last ``holdout`` terms (default: a quarter, at least 10) are
    predicted, not fitted, and at least max(10, order) of them must match.
    """
    total = len(seq)
    h = holdout if holdout is not None else max(10, ceil(total / 4))
    fit = total - h
    if fit <= 0:
        raise InsufficientTerms(f"{total} terms leave nothing to fit", terms_for_order(0))
    c, length = berlekamp_massey(seq[:fit])
    if fit < 2 * length or h < max(10, length):
        raise InsufficientTerms(
            f"order {length} needs {2 * length} fitted and {max(10, length)} held-out terms; "
            f"have {fit} and {h}", terms_for_order(length))
    pred = _extend(c, length, [Fraction(x) for x in seq[:fit]], total)
    for k in range(fit, total):
        if pred[k] != seq[k]:
            raise InsufficientTerms(f"recurrence of order {length} fails at term {k}",
                                    max(2 * total, terms_for_order(length)))
    return Recurrence(c, length, fit, h)


@dataclass
class RationalGF:
    numerator: RationalPoly
    denominator: RationalPoly
    recurrence_order: int
    provenance: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        g = self.numerator.gcd(self.denominator)
        if g.degree > 0:
            self.numerator = self.numerator.divmod(g)[0]
            self.denominator = self.denominator.divmod(g)[0]
        d0 = self.denominator[0]
        if d0 == 0:
            raise ValueError("denominator vanishes at 0")
        self.numerator = self.numerator * (1 / d0)
        self.denominator = self.denominator * (1 / d0)

    def expand(self, terms: int) -> list[Fraction]:
        out: list[Fraction] = []
        q = self.denominator
        for n in range(terms):
            acc = self.numerator[n] - sum(q[i] * out[n - i] for i in range(1, min(n, q.degree) + 1))
            out.append(acc)
        return out

    def coefficient(self, n: int) -> Fraction:
        return predict(self, n)

    def derivative(self) -> "RationalGF":
        p, q = self.numerator, self.denominator
        return RationalGF(p.derivative() * q - p * q.derivative(), q * q, 0, dict(self.provenance))

    def shifted(self, k: int) -> "RationalGF":
        """Multiply by x^k."""
        return RationalGF(RationalPoly([0] * k + list(self.numerator.coeffs)), self.denominator, 0,
                          dict(self.provenance))

    def to_json(self) -> dict:
        return {"numerator": self.numerator.to_strings(),
                "denominator": self.denominator.to_strings(),
                "recurrence_order": self.recurrence_order}


def rational_gf(seq: Sequence[int], holdout: int | None = None) -> RationalGF:
    """Reduced P/Q with Q(0) = 1 whose expansion starts with ``seq``."""
    rec = minimal_recurrence(seq, holdout)
    s = RationalPoly(seq[: rec.fitted_terms])
    prod = (s * rec.denominator).coeffs[: rec.order]
    gf = RationalGF(RationalPoly(prod), rec.denominator, rec.order,
                    {"terms_used": rec.fitted_terms, "heldout_matches": rec.heldout_matches,
                     "linear_complexity": rec.order})
    # order of the recurrence the terms obey once past the numerator's reach
    gf.recurrence_order = gf.denominator.degree
    if gf.expand(len(seq)) != [Fraction(x) for x in seq]:
        raise InsufficientTerms("reduced fraction does not reproduce the series")
    return gf


def _polymulmod(a: list[Fraction], b: list[Fraction], mod: list[Fraction]) -> list[Fraction]:
    d = len(mod) - 1
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    # mod is monic of degree d
    for k in range(len(prod) - 1, d - 1, -1):
        c = prod[k]
        if c:
            for j in range(d + 1):
                prod[k - d + j] -= c * mod[j]
    return (prod[:d] + [Fraction(0)] * d)[:d]


def predict(gf: RationalGF, n: int) -> Fraction:
    """Coefficient of x^n, via x^k mod the characteristic polynomial for large n."""
    if n < 0:
        return Fraction(0)
    q = gf.denominator
    d = q.degree
    start = max(0, gf.numerator.degree - d + 1)
    if d == 0 or n < start + 2 * d + 64:
        return gf.expand(n + 1)[n]
    base = gf.expand(start + d)[start:]
    # characteristic polynomial t^d + q1 t^(d-1) + ... + qd, low degree first
    char = [q[d - j] for j in range(d)] + [Fraction(1)]
    result = [Fraction(1)] + [Fraction(0)] * (d - 1)
    power = [Fraction(0), Fraction(1)] + [Fraction(0)] * (d - 2) if d > 1 else [-char[0]]
    k = n - start
    while k:
        if k & 1:
            result = _polymulmod(result, power, char)
        power = _polymulmod(power, power, char)
        k >>= 1
    return sum(r * b for r, b in zip(result, base))


def h_gf_from_phi(phi_gf: RationalGF) -> RationalGF:
    """sum h(n+1) x^n from sum phi(k) x^k, using h(n) = n phi(n-2)."""
    return phi_gf.shifted(2).derivative()


def predict_h(phi_gf: RationalGF, n: int) -> int:
    val = n * predict(phi_gf, n - 2)
    if val.denominator != 1:
        raise ArithmeticError("non-integral prediction")
    return int(val)


def _sturm(p: RationalPoly) -> list[RationalPoly]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = seq[-2].divmod(seq[-1])[1]
        if not r:
            break
        # positive rescaling keeps the sign pattern and tames coefficient growth
        seq.append(r * (-1 / abs(r.coeffs[-1])))
    return seq


def _sign_changes(seq: list[RationalPoly], x: Fraction) -> int:
    signs = [s for s in (p(x) for p in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def dominant_root(denominator: RationalPoly, digits: int = 40) -> mpmath.mpf:
    """Largest positive real root of the reciprocal of ``denominator``."""
    rec = denominator.reciprocal()
    while rec and rec[0] == 0:
        rec = RationalPoly(rec.coeffs[1:])
    if rec.degree < 1:
        raise ValueError("denominator has no non-zero root")
    sf = rec.squarefree().monic()
    bound = 1 + max(abs(c) for c in sf.coeffs[:-1])
    st = _sturm(sf)
    lo, hi = Fraction(0), Fraction(bound)
    if _sign_changes(st, lo) - _sign_changes(st, hi) == 0:
        raise ValueError("no positive real root")
    # shrink to an interval holding only the largest root
    while True:
        mid = (lo + hi) / 2
        if _sign_changes(st, mid) - _sign_changes(st, hi) > 0:
            lo = mid
        else:
            hi = mid
        if _sign_changes(st, lo) - _sign_changes(st, hi) == 1 and hi - lo < Fraction(1, 10**6):
            break
    with mpmath.workdps(digits + 20):
        a = mpmath.mpf(lo.numerator) / lo.denominator
        b = mpmath.mpf(hi.numerator) / hi.denominator
        root = mpmath.findroot(sf.eval_mp, (a, b), solver="anderson", verify=False)
        # the polished value must still bracket a sign change exactly
        x, eps = _to_fraction(root), Fraction(1, 10 ** (digits + 5))
        if (sf(x - eps) > 0) == (sf(x + eps) > 0) or not lo <= x <= hi:
            raise ArithmeticError("root polish failed the exact bracket check")
        return +root


def _to_fraction(x: mpmath.mpf) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(int(man)) * (Fraction(2) ** int(exp))


@dataclass
class AsymptoticEstimate:
    theta: mpmath.mpf
    amplitude: mpmath.mpf
    parity_mode: str
    gap: mpmath.mpf | None = None
    previous: mpmath.mpf | None = None


def amplitude(seq: Sequence[tuple[int, int]], theta, m_parity: str) -> AsymptoticEstimate:
    """Sequence-limit estimate of a from (n, h(n)) pairs.

    Odd m uses h(n) / (n theta^n); even m uses h(n) / (2 n theta^n) on even n.
    """
    if m_parity not in ("odd_m", "even_m"):
        raise ValueError("m_parity must be 'odd_m' or 'even_m'")
    with mpmath.workdps(PRECISION_DIGITS):
        th = mpmath.mpf(theta)
        ests = []
        for n, h in seq:
            if m_parity == "even_m":
                if n % 2:
                    continue
                ests.append(mpmath.mpf(h) / (2 * n * th**n))
            else:
                ests.append(mpmath.mpf(h) / (n * th**n))
        if len(ests) < 8:
            raise NonConvergent("too few terms for a limit estimate")
        gaps = [abs(b - a) for a, b in zip(ests, ests[1:])]
        q = len(gaps) // 4
        floor = mpmath.mpf(10) ** (15 - PRECISION_DIGITS)
        if max(gaps[-q:]) >= max(gaps[-2 * q:-q]) and max(gaps[-q:]) > floor:
            raise NonConvergent("ratio estimates are not settling")
        return AsymptoticEstimate(th, ests[-1], m_parity, gaps[-1], ests[-2])


def residue_amplitude(phi_gf: RationalGF, theta) -> mpmath.mpf:
    """a from the simple pole of sum phi(k) x^k at 1/theta."""
    with mpmath.workdps(PRECISION_DIGITS):
        th = mpmath.mpf(theta)
        x0 = 1 / th
        p, q = phi_gf.numerator, phi_gf.denominator
        c = -p.eval_mp(x0) / (x0 * q.derivative().eval_mp(x0))
        return c / th**2


def denominator_degrees(phi_gf: RationalGF) -> dict[str, int]:
    return {"phi": phi_gf.denominator.degree, "h": h_gf_from_phi(phi_gf).denominator.degree}


def report(m: int, phi_seq: Sequence[int], method: str, digits: int = 30) -> dict:
    """JSON-ready analysis of one phi series (phi(0), phi(1), ...)."""
    gf = rational_gf(phi_seq)
    theta = dominant_root(gf.denominator, max(digits + 10, PRECISION_DIGITS))
    parity = "odd_m" if m % 2 else "even_m"
    longer = gf.expand(4 * len(phi_seq) + 200)
    est = amplitude([(k + 2, (k + 2) * int(v)) for k, v in enumerate(longer)], theta, parity)
    res = residue_amplitude(gf, theta)
    degs = denominator_degrees(gf)
    return {
        "m": m,
        "recurrence_order": gf.recurrence_order,
        "phi_gf": gf.to_json(),
        "denominator_degree_phi": degs["phi"],
        "denominator_degree_h": degs["h"],
        "theta": mpmath.nstr(theta, digits, strip_zeros=False),
        "amplitude": mpmath.nstr(res, digits, strip_zeros=False),
        "amplitude_sequence_limit": mpmath.nstr(est.amplitude, digits, strip_zeros=False),
        "amplitude_gap": mpmath.nstr(est.gap, 5),
        "provenance": {"method": method, "terms_used": gf.provenance.get("terms_used"),
                       "heldout_matches": gf.provenance.get("heldout_matches"),
                       "series_terms": len(phi_seq)},
    }


def report_json(rep: dict) -> str:
    return json.dumps(rep, indent=2)
