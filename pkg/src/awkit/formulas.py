"""Closed forms: the window function f(n) for aw([n],3), the prime-decomposition
formula for aw(Z_n,3), and the ceil-log3 bound with its tightness test.

All arithmetic is exact integer arithmetic; no floating point enters any
logarithm or window comparison.  Prime classifications (aw(Z_p,3) for odd p)
are never guessed: they are computed by the exact solver and memoized in the
result store, and primes beyond the configured limit raise rather than guess.
"""

from __future__ import annotations

from typing import Callable

from .model import Factorization, cyclic
from . import solver


class UnclassifiedPrimeError(RuntimeError):
    """aw(Z_p,3) is not available for this prime under the configured limit."""

    def __init__(self, p: int, limit: int):
        super().__init__(f"prime {p} exceeds classification limit {limit}")
        self.p = p
        self.limit = limit


def m_of(n: int) -> int:
    """The window index m with 7*3^(m-2) < n <= 21*3^(m-2).

    Comparisons are done on 9n vs 7*3^m so the m < 2 windows need no
    fractional arithmetic; consecutive windows abut exactly, so m is total
    and unique for every n >= 2.
    """
    if n < 2:
        raise ValueError(f"m_of requires n >= 2, got {n}")
    t = 9 * n
    m = 0
    upper = 21  # 21 * 3^m
    while t > upper:
        m += 1
        upper *= 3
    return m


def is_power_of_3(n: int) -> bool:
    while n % 3 == 0:
        n //= 3
    return n == 1


def f(n: int) -> int:
    """aw([n],3) in closed form: m+2 at powers of three, m+3 otherwise.

    f(1) = 2 and f(2) = 3 by the no-3-AP convention aw(G,k) = |G|+1.
    """
    if n < 1:
        raise ValueError(f"f requires n >= 1, got {n}")
    if n == 1:
        return 2
    m = m_of(n)
    return m + 2 if n == 3 ** m else m + 3


def ceil_log3(n: int) -> int:
    """Smallest j with 3^j >= n, by integer powers only."""
    if n < 1:
        raise ValueError("ceil_log3 requires n >= 1")
    j = 0
    power = 1
    while power < n:
        j += 1
        power *= 3
    return j


def log3_bound(n: int) -> tuple[int, bool]:
    """(ceil(log3 n) + 2, tight?) where tight iff n = 3^j or 2*3^j, j >= 1."""
    if n < 3:
        raise ValueError(f"log3_bound requires n >= 3, got {n}")
    bound = ceil_log3(n) + 2
    tight = (n % 2 == 0 and n >= 6 and is_power_of_3(n // 2)) or (n >= 3 and is_power_of_3(n))
    return bound, tight


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def trial_division(n: int) -> tuple[int, tuple[tuple[int, int], ...]]:
    """(exponent of 2, odd prime factorization) by trial division."""
    if n < 1:
        raise ValueError("trial_division requires n >= 1")
    e0 = 0
    while n % 2 == 0:
        e0 += 1
        n //= 2
    odd = []
    d = 3
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                e += 1
                n //= d
            odd.append((d, e))
        d += 2
    if n > 1:
        odd.append((n, 1))
    return e0, tuple(odd)


DEFAULT_CLASSIFY_LIMIT = 100


def classify_prime(p: int, *, limit: int = DEFAULT_CLASSIFY_LIMIT, store=None,
                   workers: int = 1, timeout: float | None = None) -> int:
    """aw(Z_p,3) for an odd prime p, computed exactly (3 or 4), never guessed."""
    if not is_prime(p) or p == 2:
        raise ValueError(f"classify_prime requires an odd prime, got {p}")
    if p > limit:
        raise UnclassifiedPrimeError(p, limit)
    outcome = solver.aw(cyclic(p), 3, store=store, workers=workers, timeout=timeout)
    return outcome.aw_value


def classified_factorization(
    n: int,
    *,
    limit: int = DEFAULT_CLASSIFY_LIMIT,
    store=None,
    classifier: Callable[[int], int] | None = None,
) -> Factorization:
    """Factorization of n with every odd prime factor classified."""
    e0, odd = trial_division(n)
    if classifier is None:
        classification = {p: classify_prime(p, limit=limit, store=store) for p, _ in odd}
    else:
        classification = {p: classifier(p) for p, _ in odd}
    return Factorization(n=n, exponent_of_2=e0, odd_factors=odd, classification=classification)


def aw_zn3(n: int, *, limit: int = DEFAULT_CLASSIFY_LIMIT, store=None,
           classifier: Callable[[int], int] | None = None) -> int:
    """aw(Z_n,3) via the prime-decomposition formula.

    2 (n odd) or 3 (n even) plus e_j per class-3 odd prime factor and 2*e_j
    per class-4 odd prime factor.
    """
    if n < 2:
        raise ValueError(f"aw_zn3 requires n >= 2, got {n}")
    fact = classified_factorization(n, limit=limit, store=store, classifier=classifier)
    total = 2 if n % 2 == 1 else 3
    for p, e in fact.odd_factors:
        total += e if fact.classification[p] == 3 else 2 * e
    return total
