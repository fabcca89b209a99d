"""Index sets at a fixed field degree, and their exceptional structure.

For a degree m and cofactor k, the candidate set collects the n whose
shape (n, k) has an m-th-power candidate q = p^m in the trace window,
and the realizable set keeps those passing the full realizability test.
Degree 2 admits a complete classification of the gap between the two;
degree >= 3 is finite per cofactor and searched within explicit bounds;
every degree is hit for every n by an explicit polynomial identity.
Hard-coded Diophantine fact tables used by the fast paths are re-derived
by bounded scans.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from . import arith
from .realizability import GroupShape, shape_realizable_over

DEFAULT_DEGREE_MAX = 40
DEFAULT_Q_MAX = 10 ** 12
DEFAULT_VERIFY_LIMIT = 2000

FORM_NAMES = ("x^2+1", "x^2+x+1", "x^2-x+1")
_FORM_B = {"x^2+1": 0, "x^2+x+1": 1, "x^2-x+1": -1}


class DegreeTwoTag(enum.Enum):
    PRIME_SQUARE_PLUS_ONE = "prime-square-plus-one"
    PRIME_QUADRATIC = "prime-quadratic"
    PERFECT_SQUARE = "perfect-square"
    NOT_EXCEPTIONAL = "not-exceptional"


@dataclass(frozen=True)
class ExceptionalClass:
    """Degree-2 exception data: k = p^2+1, k = p^2 +/- p + 1, or k = h^2.

    sign is +1 for k = p^2+p+1 and -1 for k = p^2-p+1; unused payload
    fields stay None.
    """

    tag: DegreeTwoTag
    p: int | None = None
    sign: int | None = None
    h: int | None = None


@dataclass(frozen=True)
class HighDegreeWitness:
    """One certifying identity p^m = k n^2 + ell n + 1 with m >= 3."""

    n: int
    p: int
    m: int
    ell: int


@dataclass(frozen=True)
class FixedDegreeWitness:
    """Witness tuple for the identity construction at fixed degree.

    For degree m >= 2: p is prime with p = 1 mod n, d = (p-1)/n,
    ell = m d, and k satisfies p^m = k n^2 + ell n + 1 (k may exceed
    64 bits for large m). For m = 1: p = 1 mod n^2 and d = k = (p-1)/n^2.
    """

    p: int
    d: int
    k: int
    ell: int


def _rect_guard(k, T):
    if k < 1 or T < 1:
        raise ValueError("bounds must be positive")
    vmax = k * T * T + arith.isqrt(4 * k) * T + 1
    if vmax > arith.LIMIT:
        raise OverflowError("candidate bound %d exceeds the supported range" % vmax)
    return vmax


def _solve_n(k, ell, q):
    """The positive integer n with k n^2 + ell n + 1 = q, if one exists."""
    disc = ell * ell + 4 * k * (q - 1)
    if disc < 0:
        return None
    r = arith.isqrt(disc)
    if r * r != disc:
        return None
    num = r - ell
    if num <= 0 or num % (2 * k):
        return None
    return num // (2 * k)


def _scan_degree_one(k, T, require_realizable):
    w = arith.isqrt(4 * k)
    out = []
    for n in range(1, T + 1):
        nn = n * n
        for ell in range(-w, w + 1):
            v = k * nn + ell * n + 1
            if v < 2 or not arith.is_prime(v):
                continue
            if require_realizable:
                if shape_realizable_over(v, GroupShape(n, k), _decomp=(v, 1)) is None:
                    continue
            out.append(n)
            break
    return out


def _scan_higher_degree(m, k, T, require_realizable, vmax):
    w = arith.isqrt(4 * k)
    out = set()
    pmax = arith.iroot(vmax, m)
    for p in arith.primes_in_range(2, max(2, pmax)).tolist():
        q = p ** m
        if q > vmax:
            continue
        for ell in range(-w, w + 1):
            n = _solve_n(k, ell, q)
            if n is None or n > T:
                continue
            if require_realizable:
                if shape_realizable_over(q, GroupShape(n, k), _decomp=(p, m)) is None:
                    continue
            out.add(n)
    return sorted(out)


def candidate_n_set(m, k, T):
    """All n <= T with an exact degree-m prime-power candidate for (n, k)."""
    if m < 1:
        raise ValueError("degree must be positive")
    vmax = _rect_guard(k, T)
    if m == 1:
        return _scan_degree_one(k, T, False)
    return _scan_higher_degree(m, k, T, False, vmax)


def realizable_n_set(m, k, T):
    """All n <= T realized by some field of size p^m; subset of the candidates."""
    if m < 1:
        raise ValueError("degree must be positive")
    vmax = _rect_guard(k, T)
    if m == 1:
        return _scan_degree_one(k, T, True)
    return _scan_higher_degree(m, k, T, True, vmax)


# ---------------------------------------------------------------------------
# degree 2: the exceptional classification
# ---------------------------------------------------------------------------

def degree_two_classify(k):
    """Which degree-2 exception family k belongs to, if any.

    The three families are pairwise exclusive: k = p^2+1 = h^2 would force
    (h-p)(h+p) = 1, and p^2 +/- p + 1 agreeing with either of the others
    collapses the same way.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if k >= 2:
        r = arith.isqrt(k - 1)
        if r * r == k - 1 and r % 4 == 1 and arith.is_prime(r):
            return ExceptionalClass(DegreeTwoTag.PRIME_SQUARE_PLUS_ONE, p=r)
    disc = 4 * k - 3
    r = arith.isqrt(disc)
    if r * r == disc:
        for p, sign in (((r - 1) // 2, 1), ((r + 1) // 2, -1)):
            if p >= 2 and p % 3 == 1 and p * p + sign * p + 1 == k and arith.is_prime(p):
                return ExceptionalClass(DegreeTwoTag.PRIME_QUADRATIC, p=p, sign=sign)
    h = arith.isqrt(k)
    if h * h == k and h > 1:
        return ExceptionalClass(DegreeTwoTag.PERFECT_SQUARE, h=h)
    return ExceptionalClass(DegreeTwoTag.NOT_EXCEPTIONAL)


def degree_two_predicted_gap(k, T):
    """The classification's predicted candidate-minus-realizable set up to T.

    Empty off the exception families, {1} for the two prime families, and
    {n : hn-1 or hn+1 prime} for k = h^2. At n = 1 the square-family rule
    can overpredict (see the k in {4, 9} note in the tests); ground truth
    comes from the definitional sets, not from this prediction.
    """
    if T < 1:
        raise ValueError("T must be positive")
    cls = degree_two_classify(k)
    if cls.tag is DegreeTwoTag.NOT_EXCEPTIONAL:
        return []
    if cls.tag in (DegreeTwoTag.PRIME_SQUARE_PLUS_ONE, DegreeTwoTag.PRIME_QUADRATIC):
        return [1]
    h = cls.h
    return [n for n in range(1, T + 1)
            if arith.is_prime(h * n - 1) or arith.is_prime(h * n + 1)]


# ---------------------------------------------------------------------------
# degree >= 3: bounded exhaustive search
# ---------------------------------------------------------------------------

def high_degree_search(k, m_max=DEFAULT_DEGREE_MAX, q_max=DEFAULT_Q_MAX):
    """Every realizable degree >= 3 witness for cofactor k within the bounds.

    Complete for 3 <= m <= m_max and p^m <= q_max; the searched region is
    part of the result's meaning and callers should report it.
    """
    if k < 2:
        raise ValueError("k must be at least 2")
    if m_max < 3:
        raise ValueError("m_max must be at least 3")
    if q_max < 8:
        raise ValueError("q_max admits no cube")
    if q_max > arith.LIMIT:
        raise OverflowError("q_max exceeds the supported range")
    w = arith.isqrt(4 * k)
    found = []
    for m in range(3, m_max + 1):
        pmax = arith.iroot(q_max, m)
        if pmax < 2:
            break
        for p in arith.primes_in_range(2, pmax).tolist():
            q = p ** m
            if q > q_max:
                continue
            for ell in range(-w, w + 1):
                n = _solve_n(k, ell, q)
                if n is None:
                    continue
                if shape_realizable_over(q, GroupShape(n, k), _decomp=(p, m)) is not None:
                    found.append(HighDegreeWitness(n, p, m, ell))
    found.sort(key=lambda e: (e.n, e.m, e.p, e.ell))
    return found


def high_degree_n_set(k, m_max=DEFAULT_DEGREE_MAX, q_max=DEFAULT_Q_MAX):
    """The distinct n values among the high-degree witnesses."""
    return sorted({e.n for e in high_degree_search(k, m_max, q_max)})


# ---------------------------------------------------------------------------
# every degree is realized for every n
# ---------------------------------------------------------------------------

def fixed_degree_witness(n, m):
    """The identity witness (p, d, k, ell) for index n at degree m.

    Uses X^m = (X^{m-2} + 2 X^{m-3} + ... + (m-1))(X-1)^2 + m(X-1) + 1 at
    X = p for the smallest prime p = 1 mod n not dividing m; for m = 1 the
    smallest odd prime p = 1 mod n^2 gives k = (p-1)/n^2 directly.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    if m == 1:
        step = n * n
        c = step + 1
        while True:
            if c > arith.LIMIT:
                raise OverflowError("witness prime search exceeded the supported range")
            if c % 2 == 1 and arith.is_prime(c):
                break
            c += step
        d = (c - 1) // step
        return FixedDegreeWitness(p=c, d=d, k=d, ell=0)
    c = n + 1
    while True:
        if c > arith.LIMIT:
            raise OverflowError("witness prime search exceeded the supported range")
        if m % c != 0 and arith.is_prime(c):
            break
        c += n
    p = c
    d = (p - 1) // n
    coeff = 0
    for i in range(m - 1):
        coeff = coeff * p + (i + 1)
    k = coeff * d * d
    ell = m * d
    assert p ** m == k * n * n + ell * n + 1
    assert ell * ell <= 4 * k
    assert math.gcd(m * (p - 1), p) == 1
    return FixedDegreeWitness(p=p, d=d, k=k, ell=ell)


# ---------------------------------------------------------------------------
# the k = 1 column
# ---------------------------------------------------------------------------

def balanced_n_set(m, T, verify_limit=DEFAULT_VERIFY_LIMIT):
    """All n <= T whose square group Z_n x Z_n is realized at degree m.

    Fast paths: even m uses n = p^{m/2} +/- 1; degree 3 is the fixed pair
    {18, 19}; odd degrees >= 5 are empty; degree 1 scans n^2+1 and
    n^2 +/- n + 1 for primality. The prefix up to verify_limit is always
    re-derived from the definitional set and must agree.
    """
    if m < 1 or T < 1:
        raise ValueError("degree and bound must be positive")
    _rect_guard(1, T)
    if m == 1:
        fast = [n for n in range(1, T + 1)
                if arith.is_prime(n * n + 1)
                or arith.is_prime(n * n + n + 1)
                or arith.is_prime(n * n - n + 1)]
    elif m == 3:
        fast = [n for n in (18, 19) if n <= T]
    elif m % 2 == 1:
        fast = []
    else:
        r = m // 2
        hits = set()
        for p in arith.primes_in_range(2, max(2, arith.iroot(T + 1, r))).tolist():
            x = p ** r
            if x > T + 1:
                continue
            if 1 <= x - 1 <= T:
                hits.add(x - 1)
            if x + 1 <= T:
                hits.add(x + 1)
        fast = sorted(hits)
    lim = min(T, verify_limit)
    if lim >= 1:
        prefix = [n for n in fast if n <= lim]
        if prefix != realizable_n_set(m, 1, lim):
            raise RuntimeError("fast path disagrees with the definitional scan")
    return fast


def balanced_prime_power_only(T):
    """The n <= T where Z_n x Z_n needs a proper prime power.

    Returns (members, sufficient): members from the definitions, and the
    subset satisfying the explicit sufficient condition (exactly one of
    n -/+ 1 prime, all three quadratics composite).
    """
    if T < 1:
        raise ValueError("T must be positive")
    from .realizability import smallest_prime_power_witness, smallest_prime_witness
    members = []
    sufficient = []
    for n in range(1, T + 1):
        shape = GroupShape(n, 1)
        in_pi = smallest_prime_witness(shape) is not None
        in_Pi = smallest_prime_power_witness(shape) is not None
        if in_Pi and not in_pi:
            members.append(n)
        quad_free = not (arith.is_prime(n * n + 1)
                         or arith.is_prime(n * n + n + 1)
                         or arith.is_prime(n * n - n + 1))
        if quad_free and arith.is_prime(n - 1) != arith.is_prime(n + 1):
            sufficient.append(n)
    assert set(sufficient) <= set(members)
    return members, sufficient


# ---------------------------------------------------------------------------
# Diophantine fact tables, re-derived
# ---------------------------------------------------------------------------

def diophantine_solutions(form, m, x_max):
    """All (x, y) with y^m = form(x), |x| <= x_max, y >= 1.

    For m >= 2 the solutions are enumerated through y with exact root
    tests, which covers the whole x range; m = 1 degenerates to the
    identity scan.
    """
    if form not in _FORM_B:
        raise ValueError("form must be one of %s" % (FORM_NAMES,))
    if m < 1:
        raise ValueError("exponent must be positive")
    if x_max < 0:
        raise ValueError("x_max must be nonnegative")
    b = _FORM_B[form]
    fmax = x_max * x_max + abs(b) * x_max + 1
    if fmax > arith.LIMIT:
        raise OverflowError("scan bound exceeds the supported range")
    if m == 1:
        return [(x, x * x + b * x + 1) for x in range(-x_max, x_max + 1)]
    out = []
    for y in range(1, arith.iroot(fmax, m) + 1):
        t = y ** m
        if b == 0:
            r = arith.isqrt(t - 1)
            if r * r != t - 1:
                continue
            roots = {r, -r}
        else:
            disc = 4 * t - 3
            r = arith.isqrt(disc)
            if r * r != disc:
                continue
            roots = {(-b + r) // 2, (-b - r) // 2}
        for x in roots:
            if abs(x) <= x_max:
                out.append((x, y))
    out.sort()
    return out
