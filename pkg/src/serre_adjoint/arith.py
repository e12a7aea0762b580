"""Divisor functions and Bernoulli numbers."""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from math import comb


class _SieveCache:
    """Arithmetic function tables that grow on demand.

    Readers get a prefix of a list that is only ever replaced, never
    mutated, so concurrent reads see a consistent table.
    """

    def __init__(self, build):
        self._build = build
        self._table: list[int] = [0]
        self._lock = threading.Lock()

    def get(self, n_max: int) -> list[int]:
        table = self._table
        if len(table) > n_max:
            return table
        with self._lock:
            if len(self._table) <= n_max:
                size = max(n_max + 1, 2 * len(self._table))
                self._table = self._build(size)
            return self._table


def _sigma_sieve(r: int):
    def build(size: int) -> list[int]:
        out = [0] * size
        for d in range(1, size):
            dr = d**r
            for mult in range(d, size, d):
                out[mult] += dr
        return out

    return build


_sigma_caches: dict[int, _SieveCache] = {}
_sigma_lock = threading.Lock()


def sigma_table(r: int, n_max: int) -> list[int]:
    """List whose n-th entry is ``sigma_r(n)`` for ``1 <= n <= n_max`` (entry 0 is 0)."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    with _sigma_lock:
        cache = _sigma_caches.setdefault(r, _SieveCache(_sigma_sieve(r)))
    return cache.get(n_max)


def divisor_count_table(n_max: int) -> list[int]:
    return sigma_table(0, n_max)


def sigma_power(r: int, n: int) -> int:
    """Sum of ``d**r`` over the positive divisors ``d`` of ``n``."""
    if n < 1:
        raise ValueError(f"sigma_r(n) needs n >= 1, got {n}")
    if n < 200_000:
        return sigma_table(r, n)[n]
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**r
            e = n // d
            if e != d:
                total += e**r
        d += 1
    return total


def divisor_count(n: int) -> int:
    return sigma_power(0, n)


@lru_cache(maxsize=None)
def _bernoulli_list(k_max: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{k} C(k+1, j) B_j = 0 with B_0 = 1 (so B_1 = -1/2)
    bs = [Fraction(1)]
    for k in range(1, k_max + 1):
        acc = sum(comb(k + 1, j) * bs[j] for j in range(k))
        bs.append(-acc / (k + 1))
    return tuple(bs)


def bernoulli(k: int) -> Fraction:
    """Exact Bernoulli number ``B_k`` for even ``k >= 2``."""
    if k < 2 or k % 2:
        raise ValueError(f"only even k >= 2 are supported, got {k}")
    size = max(32, k)
    return _bernoulli_list(size)[k]


def divisor_bound_constant(delta: Fraction) -> float:
    """Smallest ``c`` with ``d(n) <= c * n**delta`` for every ``n >= 1``.

    ``d(n)/n**delta`` is multiplicative, so the supremum is the product over
    primes of ``max_a (a+1)/p**(a*delta)``; primes ``p >= 2**(1/delta)``
    contribute 1.
    """
    delta = float(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    limit = 2 ** (1 / delta)
    if limit > 1e6:
        raise ValueError("delta too small for an explicit divisor bound")
    c = 1.0
    for p in _primes_below(int(limit) + 1):
        # log((a+1)/p^(a*delta)) is concave in a: stop at the first decrease
        best, a = 1.0, 1
        while True:
            v = (a + 1) / p ** (a * delta)
            if v <= best:
                break
            best = v
            a += 1
        c *= best
    # float rounding guard; the bound is used as a majorant
    return c * (1 + 1e-12)


def _primes_below(n: int) -> list[int]:
    if n < 3:
        return []
    sieve = bytearray([1]) * n
    sieve[0] = sieve[1] = 0
    for p in range(2, int(n**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n, p)))
    return [i for i in range(n) if sieve[i]]
