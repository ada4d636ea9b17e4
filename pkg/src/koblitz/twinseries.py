"""Twin-prime singular series, residue densities, and the BDH statistic.

The singular series S(r) is the Hardy-Littlewood density for prime pairs at
distance r; S(r,q,a) restricts to an arithmetic progression.  psi/error_E are
the log-weighted empirical counterparts over a window, and bdh_statistic is
the mean-square dispersion over all (r, q, a).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CapacityError, DomainError
from .primes import factorize, phi, sieve, MAX_SIEVE_LIMIT

DEFAULT_TRUNCATION = 10**6


@dataclass(frozen=True)
class SingularSeriesValue:
    value: float
    truncation_limit: int
    error_bound: float


@functools.lru_cache(maxsize=8)
def _twin_constant(limit: int) -> tuple[float, float]:
    """(2*C2, tail bound) with 2*C2 = 2 prod_{odd ell <= limit} ell(ell-2)/(ell-1)^2."""
    ell = sieve(limit).primes[1:].astype(np.float64)
    log_sum = np.log1p(-1.0 / (ell - 1.0) ** 2).sum()
    tail = 4.0 / (limit * math.log(limit))
    return 2.0 * math.exp(log_sum), tail


def _odd_prime_correction(r: int) -> float:
    out = 1.0
    for p in factorize(abs(r)).odd_primes():
        out *= (p - 1.0) / (p - 2.0)
    return out


def singular_series(r: int, limit: int = DEFAULT_TRUNCATION) -> SingularSeriesValue:
    """S(r): 0 for odd r; 2*C2 * prod_{odd p | r} (p-1)/(p-2) for even r."""
    if r == 0:
        raise DomainError("singular series undefined at r = 0")
    if r % 2 != 0:
        return SingularSeriesValue(value=0.0, truncation_limit=limit, error_bound=0.0)
    base, tail = _twin_constant(limit)
    return SingularSeriesValue(
        value=base * _odd_prime_correction(r),
        truncation_limit=limit,
        error_bound=tail,
    )


def rho(r: int, q: int) -> int:
    """#{a mod q : (a,q) = (a-r,q) = 1} via the closed multiplicative formula."""
    if q < 1:
        raise DomainError("q must be >= 1")
    out = 1
    for p, e in factorize(q).pairs:
        pe = p**e
        if r % p == 0:
            out *= pe - pe // p
        else:
            out *= pe - 2 * (pe // p)
    return out


def singular_series_mod(
    r: int, q: int, a: int, limit: int = DEFAULT_TRUNCATION
) -> SingularSeriesValue:
    """S(r,q,a) = S(rq)/phi(q) when 2 | r and (a,q) = (a-r,q) = 1, else 0.

    Computed by both defining routes (S(rq)/phi(q) and S(r)/rho(r,q)); they
    must agree to 1e-10 relative, and the first is returned.
    """
    if r == 0:
        raise DomainError("singular series undefined at r = 0")
    if q < 1:
        raise DomainError("q must be >= 1")
    if r % 2 != 0 or math.gcd(a, q) != 1 or math.gcd(a - r, q) != 1:
        return SingularSeriesValue(value=0.0, truncation_limit=limit, error_bound=0.0)
    product_route = singular_series(r * q, limit)
    via_product = product_route.value / phi(q)
    via_rho = singular_series(r, limit).value / rho(r, q)
    if abs(via_product - via_rho) > 1e-10 * abs(via_product):
        raise AssertionError(
            f"singular series routes disagree at (r,q,a)=({r},{q},{a})"
        )
    return SingularSeriesValue(
        value=via_product,
        truncation_limit=limit,
        error_bound=product_route.error_bound / phi(q),
    )


# ---------------------------------------------------------------------------
# the multiplicative exponential sum F(s; r; q, a)
# ---------------------------------------------------------------------------


def F_local(p: int, r: int, q: int, a: int) -> int:
    """Local factor of F at a prime p.

    Equals the exponential double sum over units b, c mod p with
    gcd(q, p) | c - a.  For invertible residues a mod q this reduces to the
    familiar four-case table; when p divides both q and a the c-sum is empty
    and the factor is 0.
    """
    from .primes import is_prime

    if not is_prime(p):
        raise DomainError(f"{p} is not prime")
    if q % p == 0:
        if a % p == 0:
            return 0
        return p - 1 if (a - r) % p == 0 else -1
    return -p + 1 if r % p == 0 else 1


def F_mult(s: int, r: int, q: int, a: int) -> int:
    """F(s;r;q,a) for squarefree s, as the product of local factors."""
    if s < 1:
        raise DomainError("s must be >= 1")
    fac = factorize(s)
    if any(e > 1 for _, e in fac.pairs):
        raise DomainError(f"s={s} is not squarefree")
    out = 1
    for p in fac.primes:
        out *= F_local(p, r, q, a)
    return out


# ---------------------------------------------------------------------------
# empirical window sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwinWindow:
    """Prime window (X, X+Y]."""

    X: int
    Y: int

    def __post_init__(self):
        if self.Y < 1 or self.X < 0:
            raise DomainError("window requires X >= 0, Y >= 1")


def _window_flags(limit: int) -> np.ndarray:
    if limit > MAX_SIEVE_LIMIT:
        raise CapacityError(f"sieve limit {limit} exceeds budget")
    return sieve(limit).flags


def psi(window: TwinWindow, r: int, q: int, a: int, flags: np.ndarray | None = None) -> float:
    """Log-weighted count of prime pairs (p, p-r) with X < p <= X+Y, p = a mod q."""
    hi = window.X + window.Y
    need = hi + abs(r)
    if flags is None or len(flags) <= need:
        flags = _window_flags(max(need, 2))
    idx = np.flatnonzero(flags[: hi + 1])
    p = idx[idx > window.X]
    keep = p % q == a % q
    p = p[keep]
    pp = p - r
    keep = (pp >= 2) & flags[np.clip(pp, 0, len(flags) - 1)] & (pp <= need)
    p = p[keep]
    pp = pp[keep]
    return float(np.sum(np.log(p.astype(np.float64)) * np.log(pp.astype(np.float64))))


def error_E(
    window: TwinWindow,
    r: int,
    q: int,
    a: int,
    flags: np.ndarray | None = None,
    limit: int = DEFAULT_TRUNCATION,
) -> float:
    """E = psi(window; r, q, a) - S(r,q,a) * Y."""
    expected = singular_series_mod(r, q, a, limit).value * window.Y
    return psi(window, r, q, a, flags) - expected


@dataclass(frozen=True)
class BdhResult:
    x: int
    R: int
    Q: int
    window: TwinWindow
    S: float
    normalized: float
    per_q: dict[int, float] = field(repr=False)
    rows: list[tuple[int, int, int, float, float, float]] | None = field(
        default=None, repr=False
    )


def bdh_statistic(
    x: int,
    R: int,
    Q: int,
    window: TwinWindow,
    limit: int = DEFAULT_TRUNCATION,
    collect_rows: bool = False,
) -> BdhResult:
    """S = sum over 0<|r|<=R, q<=Q, a mod q of E(window;r,q,a)^2.

    One pass over the sieved window; psi values are bucketed by residue class
    with bincount, never rescanned per (r, q, a).
    """
    if window.X + window.Y > x:
        raise DomainError("window must satisfy X + Y <= x")
    if R > x or R < 1 or Q < 1:
        raise DomainError("require 1 <= R <= x and Q >= 1")
    hi = window.X + window.Y
    need = hi + R
    flags = _window_flags(need)
    idx = np.flatnonzero(flags[: hi + 1])
    p = idx[idx > window.X].astype(np.int64)
    logp = np.log(p.astype(np.float64))
    logs_all = np.zeros(need + 1, dtype=np.float64)
    prime_idx = np.flatnonzero(flags)
    logs_all[prime_idx] = np.log(prime_idx.astype(np.float64))
    residues = [None] + [p % q for q in range(1, Q + 1)]

    # expected densities: S(r,q,a) is constant over admissible a for fixed r, q
    @functools.lru_cache(maxsize=None)
    def series_val(r: int, q: int, a: int) -> float:
        return singular_series_mod(r, q, a, limit).value

    total = 0.0
    per_q = {q: 0.0 for q in range(1, Q + 1)}
    rows = [] if collect_rows else None
    r_values = [r for r in range(-R, R + 1) if r != 0]
    for r in r_values:
        pp = p - r
        mask = (pp >= 2) & flags[np.clip(pp, 0, need)]
        w = logp[mask] * logs_all[pp[mask]]
        for q in range(1, Q + 1):
            psi_by_a = np.bincount(residues[q][mask], weights=w, minlength=q)
            for a in range(q):
                expected = series_val(r, q, a) * window.Y
                err = float(psi_by_a[a]) - expected
                total += err * err
                per_q[q] += err * err
                if rows is not None:
                    rows.append((r, q, a, float(psi_by_a[a]), expected, err))
    return BdhResult(
        x=x,
        R=R,
        Q=Q,
        window=window,
        S=total,
        normalized=total / (R * float(x) ** 2),
        per_q=per_q,
        rows=rows,
    )
