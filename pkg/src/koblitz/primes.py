"""Integer primitives: sieves, primality, factorization, Kronecker symbol.

Everything here is pure and deterministic; the heavier callers (censuses,
Euler products) lean on the numpy-backed sieve and on `kronecker_table`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError

# Largest sieve we are willing to allocate (one byte per integer).
MAX_SIEVE_LIMIT = 1 << 30

# Strong-pseudoprime witnesses covering every n < 3.3 * 10^24, hence all of
# 64-bit range (Sorenson-Webster).
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Trial-division stage of factorize() uses primes up to this bound.
_TRIAL_LIMIT = 10**6


@dataclass(frozen=True)
class PrimeTable:
    """Primality flags for 0..limit plus the ascending prime list."""

    limit: int
    flags: np.ndarray
    primes: np.ndarray

    def is_prime_member(self, n: int) -> bool:
        if not 0 <= n <= self.limit:
            raise DomainError(f"{n} outside table range 0..{self.limit}")
        return bool(self.flags[n])

    def primes_in(self, lo: int, hi: int) -> np.ndarray:
        """Primes p with lo < p <= hi."""
        if hi > self.limit:
            raise DomainError(f"window end {hi} exceeds table limit {self.limit}")
        p = self.primes
        return p[np.searchsorted(p, lo, side="right"):np.searchsorted(p, hi, side="right")]


def sieve(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes up to and including `limit`."""
    if limit < 2:
        raise DomainError("sieve limit must be >= 2")
    if limit > MAX_SIEVE_LIMIT:
        raise CapacityError(f"sieve limit {limit} exceeds budget {MAX_SIEVE_LIMIT}")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    primes = np.flatnonzero(flags)
    return PrimeTable(limit=limit, flags=flags, primes=primes)


def sieve_window(x: int, y: int) -> np.ndarray:
    """Primality flags for the window (x, x+y]: entry i marks x+1+i.

    Segmented sieve; only primes up to sqrt(x+y) are materialized.
    """
    if y < 1 or x < 0:
        raise DomainError("window requires x >= 0, y >= 1")
    hi = x + y
    if y > MAX_SIEVE_LIMIT:
        raise CapacityError(f"window length {y} exceeds budget {MAX_SIEVE_LIMIT}")
    flags = np.ones(y, dtype=bool)
    if x == 0:
        flags[0] = False  # the integer 1
    base = sieve(max(2, math.isqrt(hi)))
    for p in base.primes:
        p = int(p)
        start = max(p * p, ((x + 1 + p - 1) // p) * p)
        if start > hi:
            continue
        flags[start - x - 1:: p] = False
    return flags


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all 64-bit inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    s = (d & -d).bit_length() - 1
    d >>= s
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), full extension to all integer a, n."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    res = 1
    if n < 0:
        n = -n
        if a < 0:
            res = -1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        e = (n & -n).bit_length() - 1
        n >>= e
        if e % 2 == 1 and a % 8 in (3, 5):
            res = -res
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                res = -res
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            res = -res
        a %= n
    return res if n == 1 else 0


def kronecker_table(n: int, length: int) -> np.ndarray:
    """Vector of kronecker(a, n) for a = 0..length-1 (n >= 1), dtype int8."""
    if n < 1:
        raise DomainError("kronecker_table requires n >= 1")
    a = np.arange(length, dtype=np.int64)
    out = np.ones(length, dtype=np.int8)
    for p, e in factorize(n).pairs:
        if p == 2:
            # (a|2): 0 for even a, +1 for a = +-1 mod 8, -1 for a = +-3 mod 8
            m8 = a & 7
            col = np.zeros(length, dtype=np.int8)
            col[(m8 == 1) | (m8 == 7)] = 1
            col[(m8 == 3) | (m8 == 5)] = -1
        else:
            leg = np.full(p, -1, dtype=np.int8)
            leg[0] = 0
            sq = np.arange(1, p, dtype=np.int64)
            leg[(sq * sq) % p] = 1
            col = leg[a % p]
        if e % 2 == 1:
            out *= col
        else:
            out *= np.abs(col)
    return out


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as ascending (prime, exponent) pairs."""

    pairs: tuple[tuple[int, int], ...]
    n: int = field(default=0)

    def __post_init__(self):
        if self.n == 0:
            prod = 1
            for p, e in self.pairs:
                prod *= p**e
            object.__setattr__(self, "n", prod)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def odd_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs if p != 2)


_trial_primes: list[int] | None = None


def _get_trial_primes() -> list[int]:
    global _trial_primes
    if _trial_primes is None:
        _trial_primes = [int(p) for p in sieve(_TRIAL_LIMIT).primes]
    return _trial_primes


def _pollard_brent(n: int) -> int:
    """Deterministic Brent-cycle Pollard rho; returns a nontrivial factor."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r <<= 1
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise RuntimeError(f"factorization failed for {n}")  # pragma: no cover


def factorize(n: int) -> Factorization:
    """Exact factorization for 1 <= n < 2^63."""
    if n < 1:
        raise DomainError("factorize requires n >= 1")
    pairs: dict[int, int] = {}
    for p in _get_trial_primes():
        if p * p > n:
            break
        while n % p == 0:
            pairs[p] = pairs.get(p, 0) + 1
            n //= p
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            pairs[m] = pairs.get(m, 0) + 1
            continue
        d = _pollard_brent(m)
        stack.append(d)
        stack.append(m // d)
    return Factorization(pairs=tuple(sorted(pairs.items())))


def phi(n: int) -> int:
    """Euler totient."""
    if n < 1:
        raise DomainError("phi requires n >= 1")
    out = 1
    for p, e in factorize(n).pairs:
        out *= p ** (e - 1) * (p - 1)
    return out


def moebius(n: int) -> int:
    if n < 1:
        raise DomainError("moebius requires n >= 1")
    fac = factorize(n)
    if any(e > 1 for _, e in fac.pairs):
        return 0
    return -1 if len(fac.pairs) % 2 else 1


def omega(n: int) -> int:
    """Number of distinct prime factors."""
    if n < 1:
        raise DomainError("omega requires n >= 1")
    return len(factorize(n).pairs)


def smallest_factor_sieve(limit: int) -> np.ndarray:
    """spf[n] = smallest prime factor of n, for bulk factorization."""
    if limit > MAX_SIEVE_LIMIT // 8:
        raise CapacityError(f"spf sieve limit {limit} exceeds budget")
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            seg = spf[p * p:: p]
            seg[seg == 0] = p
    idx = np.flatnonzero(spf[2:] == 0) + 2
    spf[idx] = idx
    return spf
