"""Decide whether Z_n x Z_kn occurs as an elliptic curve group over some F_q.

The decision runs in two stages.  Waterhouse's classification says which
Frobenius traces a occur for curves over F_{p^m}: six cases, each a side
condition on (p, m, a).  Rueck's refinement then says which group structures
occur inside an admissible order N = q + 1 - a: writing N = p^e * n1 * n2 with
n1 | n2 and p not dividing n1*n2, the group Z_{p^e} x Z_{n1} x Z_{n2} occurs
iff n1 | q - 1, except in the full-square-trace case where n1 = n2 is forced.

For a target shape (n, k) over F_q this specializes to: q = kn^2 + ln + 1 for
an integer l with l^2 <= 4k (so the trace is a = ln + 2), the p-part of the
group must be cyclic (p cannot divide n; automatic once q = 1 mod n), n1 = n,
and n2 = kn / p^{v_p(k)}.  So n1 = n2 amounts to k being a power of p.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .arith import _check_range, is_prime, isqrt, prime_power_decompose


@dataclass(frozen=True)
class GroupShape:
    """The pair (n, k) standing for the group Z_n x Z_kn."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.k < 1:
            raise ValueError("shape needs n >= 1 and k >= 1")

    @property
    def order(self) -> int:
        return self.k * self.n * self.n

    @property
    def exponent(self) -> int:
        return self.k * self.n


class WaterhouseCase(enum.Enum):
    """The six admissible-trace families over F_{p^m}."""

    OrdinaryCoprime = "OrdinaryCoprime"          # gcd(a, p) = 1
    FullSquareTrace = "FullSquareTrace"          # m even, a = +-2 sqrt(q)
    ThirdSquareTrace = "ThirdSquareTrace"        # m even, p != 1 mod 3, a = +-sqrt(q)
    SmallCharOddTrace = "SmallCharOddTrace"      # m odd, p in {2,3}, a = +-p^((m+1)/2)
    ZeroTraceEven = "ZeroTraceEven"              # m even, p != 1 mod 4, a = 0
    ZeroTraceOdd = "ZeroTraceOdd"                # m odd, a = 0


@dataclass(frozen=True)
class Witness:
    """A certified realization of `shape` over the field with q = p^m elements."""

    shape: GroupShape
    q: int
    p: int
    m: int
    ell: int
    trace: int
    case: WaterhouseCase

    def revalidate(self):
        """Recompute every invariant from scratch; raises on any mismatch."""
        n, k = self.shape.n, self.shape.k
        assert self.p ** self.m == self.q
        assert is_prime(self.p)
        assert self.q == k * n * n + self.ell * n + 1
        assert self.ell * self.ell <= 4 * k
        assert self.trace == self.ell * n + 2 == self.q + 1 - k * n * n
        assert self.trace * self.trace <= 4 * self.q
        assert (self.q - 1) % n == 0
        cases = admissible_cases(self.p, self.m, self.trace)
        assert self.case in cases
        if cases == [WaterhouseCase.FullSquareTrace]:
            e = 0
            kk = k
            while kk % self.p == 0:
                kk //= self.p
                e += 1
            assert k == self.p ** e
        return self


def admissible_cases(p: int, m: int, a: int) -> list[WaterhouseCase]:
    """All Waterhouse cases matching trace a over F_{p^m}, in standard order.

    The six conditions are mutually exclusive for a fixed (p, m, a), so the
    list has at most one element; returning a list keeps the only-route check
    in shape_realizable_over explicit.
    """
    if not is_prime(p):
        raise ValueError("p must be prime")
    q = p ** m
    _check_range(q, "field size p^m")
    if a * a > 4 * q:
        return []
    out = []
    if math.gcd(a, p) == 1:
        out.append(WaterhouseCase.OrdinaryCoprime)
    if m % 2 == 0:
        root = p ** (m // 2)
        if a == 2 * root or a == -2 * root:
            out.append(WaterhouseCase.FullSquareTrace)
        if p % 3 != 1 and (a == root or a == -root):
            out.append(WaterhouseCase.ThirdSquareTrace)
        if p % 4 != 1 and a == 0:
            out.append(WaterhouseCase.ZeroTraceEven)
    else:
        if p in (2, 3):
            t = p ** ((m + 1) // 2)
            if a == t or a == -t:
                out.append(WaterhouseCase.SmallCharOddTrace)
        if a == 0:
            out.append(WaterhouseCase.ZeroTraceOdd)
    return out


def trace_admissible(p: int, m: int, a: int) -> WaterhouseCase | None:
    """First matching admissibility case for trace a over F_{p^m}, if any."""
    cases = admissible_cases(p, m, a)
    return cases[0] if cases else None


def _ell_bound(k: int) -> int:
    # |l| <= 2 sqrt(k) as the exact predicate l^2 <= 4k
    return isqrt(4 * k)


def _candidate_bound_check(shape: GroupShape):
    n, k = shape.n, shape.k
    _check_range(k * n * n + _ell_bound(k) * n + 1, "candidate value")


def candidate_values(shape: GroupShape) -> list[tuple[int, int]]:
    """(l, kn^2 + ln + 1) for every l with l^2 <= 4k and value >= 2, l ascending."""
    _candidate_bound_check(shape)
    n, k = shape.n, shape.k
    base = k * n * n + 1
    L = _ell_bound(k)
    return [(ell, base + ell * n) for ell in range(-L, L + 1) if base + ell * n >= 2]


def candidate_prime_powers(shape: GroupShape) -> list[tuple[int, tuple[int, int]]]:
    """The candidate field sizes for `shape`: prime powers among its values.

    Returns (l, (p, m)) pairs ascending in l; these are the only q over which
    the shape can possibly be realized.
    """
    out = []
    for ell, v in candidate_values(shape):
        d = prime_power_decompose(v)
        if d is not None:
            out.append((ell, d))
    return out


def _k_is_power_of(k: int, p: int) -> bool:
    while k % p == 0:
        k //= p
    return k == 1


def shape_realizable_over(q: int, shape: GroupShape,
                          _decomp: tuple[int, int] | None = None) -> Witness | None:
    """Witness that some curve over F_q has group Z_n x Z_kn, or None.

    _decomp short-circuits the prime-power decomposition of q when the caller
    already knows it (bulk sweeps); the witness re-validates either way.
    """
    d = _decomp if _decomp is not None else prime_power_decompose(q)
    if d is None:
        raise ValueError(f"{q} is not a prime power")
    p, m = d
    n, k = shape.n, shape.k
    if (q - 1) % n != 0:
        return None
    num = q - 1 - k * n * n
    if num % n != 0:  # unreachable given q = 1 mod n; kept as a guard
        return None
    ell = num // n
    if ell * ell > 4 * k:
        return None
    a = ell * n + 2
    cases = admissible_cases(p, m, a)
    if not cases:
        return None
    # p | n would make the p-part of the target group rank 2; it cannot happen
    # here because q = 1 mod n already forces gcd(n, p) = 1.
    non_full_square = [c for c in cases if c is not WaterhouseCase.FullSquareTrace]
    if non_full_square:
        case = cases[0]
    elif _k_is_power_of(k, p):
        case = WaterhouseCase.FullSquareTrace
    else:
        return None  # only route is the full-square case and n1 != n2
    return Witness(shape=shape, q=q, p=p, m=m, ell=ell, trace=a, case=case)


def smallest_prime_witness(shape: GroupShape) -> int | None:
    """Smallest prime among the candidate values (prime-field realizability).

    Over a prime field no structure condition can fail, so a prime candidate
    is already a witness.
    """
    for _, v in candidate_values(shape):
        if is_prime(v):
            return v
    return None


def smallest_prime_power_witness(shape: GroupShape) -> Witness | None:
    """Witness over the smallest q realizing the shape, or None."""
    for _, (p, m) in candidate_prime_powers(shape):
        w = shape_realizable_over(p ** m, shape, _decomp=(p, m))
        if w is not None:
            return w
    return None


def witness_primes(shape: GroupShape) -> list[int]:
    """The full finite set of primes p = kn^2 + ln + 1 with l^2 <= 4k, ascending."""
    return [v for _, v in candidate_values(shape) if is_prime(v)]


def square_witness_primes(shape: GroupShape) -> list[int]:
    """Primes p whose square is a candidate value for `shape`, ascending.

    Equivalently the primes in [n*sqrt(k) - 1, n*sqrt(k) + 1] with
    p^2 = 1 mod n; at most one exists outside two explicit exception families.
    """
    _candidate_bound_check(shape)
    out = []
    for _, v in candidate_values(shape):
        r = isqrt(v)
        if r * r == v and is_prime(r):
            out.append(r)
    return out


def hasse_window(q: int) -> tuple[int, int]:
    """Inclusive range of curve orders over F_q: |q + 1 - N| <= 2 sqrt(q)."""
    w = isqrt(4 * q)
    return q + 1 - w, q + 1 + w
