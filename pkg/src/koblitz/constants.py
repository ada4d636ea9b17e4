"""Euler-product constants: GL2 local factors, the average constant, and C_r.

Infinite products over primes are evaluated in log-space up to a truncation
limit L and then completed with an estimated tail (prime-density integral of
the omitted log-factors).  The applied tail correction is recorded on the
returned value as `tail_bound`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .errors import CapacityError, DomainError
from .primes import (
    factorize,
    kronecker_table,
    phi,
    sieve,
)
from .twinseries import DEFAULT_TRUNCATION, singular_series_mod

MAX_GL2_PRIME = 50


# ---------------------------------------------------------------------------
# GL2 counting
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LocalFactorLedger:
    prime: int
    omega_prime_count: int
    gl2_order: int
    factor: Fraction


def gl2_count(ell: int) -> LocalFactorLedger:
    """Count invertible 2x2 matrices g mod ell with det(g)+1-tr(g) = 0.

    Exhaustive enumeration over all ell^4 matrices; the exact rational
    identity (1 - |Omega'|/|GL2|)/(1 - 1/ell) = 1 - (l^2-l-1)/((l-1)^3(l+1))
    is verified before returning.
    """
    from .primes import is_prime

    if not is_prime(ell) or ell == 2:
        raise DomainError(f"{ell} must be an odd prime")
    if ell > MAX_GL2_PRIME:
        raise CapacityError(f"ell={ell} exceeds enumeration budget {MAX_GL2_PRIME}")
    v = np.arange(ell, dtype=np.int64)
    a, b, c, d = np.meshgrid(v, v, v, v, indexing="ij", sparse=True)
    det = (a * d - b * c) % ell
    tr = (a + d) % ell
    invertible = det != 0
    gl2 = int(invertible.sum())
    omega = int((invertible & ((det + 1 - tr) % ell == 0)).sum())
    assert gl2 == (ell * ell - 1) * (ell * ell - ell)
    lhs = (1 - Fraction(omega, gl2)) / (1 - Fraction(1, ell))
    factor = 1 - Fraction(ell * ell - ell - 1, (ell - 1) ** 3 * (ell + 1))
    if lhs != factor:
        raise AssertionError(f"GL2 local factor identity fails at ell={ell}")
    return LocalFactorLedger(
        prime=ell, omega_prime_count=omega, gl2_order=gl2, factor=factor
    )


# ---------------------------------------------------------------------------
# the average constant
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantValue:
    value: float
    truncation_limit: int
    tail_bound: float


def _log_tail(neg_log_factor, limit: int) -> float:
    """Estimated sum over primes > limit of -log(factor), via prime density.

    Integrates -log(factor(t))/log(t) dt with t = e^u; the omitted factors
    behave like 1 - O(1/t^2) so the integral converges fast.
    """
    # substitute s = 1/t: the integrand becomes bounded and smooth on (0, 1/L]
    f = lambda s: neg_log_factor(1.0 / s) / (-math.log(s)) / (s * s)
    val, _ = integrate.quad(f, 0.0, 1.0 / limit, limit=200)
    return val


def _frak_c_neg_log_factor(t: float) -> float:
    # grouped to keep intermediates finite for very large t
    g = (t * t - t - 1) / (t - 1) ** 3 / (t + 1)
    return -math.log1p(-g)


@functools.lru_cache(maxsize=8)
def _frak_c_parts(limit: int) -> tuple[float, float, float]:
    """(form1, form2, tail) for the average constant at truncation `limit`.

    form1 = (2/3) prod_{odd l} (l^4-2l^3-l^2+3l)/((l-1)^3 (l+1));
    form2 = prod_l (1 - (l^2-l-1)/((l-1)^3 (l+1))).  Both raw (no tail).
    """
    ell = sieve(limit).primes.astype(np.float64)
    odd = ell[1:]
    num = odd**4 - 2 * odd**3 - odd**2 + 3 * odd
    den = (odd - 1) ** 3 * (odd + 1)
    form1 = (2.0 / 3.0) * math.exp(np.sum(np.log(num) - np.log(den)))
    g = (ell * ell - ell - 1) / ((ell - 1) ** 3 * (ell + 1))
    form2 = math.exp(np.sum(np.log1p(-g)))
    tail = _log_tail(_frak_c_neg_log_factor, limit)
    return form1, form2, tail


def average_constant_forms(limit: int) -> tuple[float, float]:
    """The two displayed product forms of the average constant, raw at L."""
    if limit < 10**3:
        raise DomainError("truncation limit must be >= 1000")
    form1, form2, _ = _frak_c_parts(limit)
    return form1, form2


def average_constant(limit: int = DEFAULT_TRUNCATION) -> ConstantValue:
    """The average density constant, tail-completed at truncation `limit`."""
    if limit < 10**3:
        raise DomainError("truncation limit must be >= 1000")
    _, form2, tail = _frak_c_parts(limit)
    return ConstantValue(
        value=form2 * math.exp(-tail), truncation_limit=limit, tail_bound=tail
    )


# ---------------------------------------------------------------------------
# character-sum coefficients c_f^r(n)
# ---------------------------------------------------------------------------


def _check_cfr_args(f: int, r: int) -> None:
    if f < 1 or f % 2 == 0:
        raise DomainError("f must be a positive odd integer")
    if r % 2 == 0 or r == 1:
        raise DomainError("r must be odd and != 1")


def c_f_r(n: int, f: int, r: int) -> int:
    """Closed form of the restricted character sum, by multiplicativity."""
    _check_cfr_args(f, r)
    if n < 1:
        raise DomainError("n must be >= 1")
    if math.gcd(r, f) != 1 or math.gcd(r - 2, f) != 1:
        return 0
    out = 1
    for ell, alpha in factorize(n).pairs:
        lead = ell ** (alpha - 1)
        if ell == 2:
            out *= lead * (-1 if alpha % 2 else 1)
        elif f % ell == 0:
            out *= 0 if alpha % 2 else lead * (ell - 1)
        elif (r * (r - 1) * (r - 2)) % ell == 0:
            out *= lead * (-1 if alpha % 2 else ell - 2)
        else:
            out *= lead * (-2 if alpha % 2 else ell - 3)
    return out


def c_f_r_bruteforce(n: int, f: int, r: int) -> int:
    """Direct evaluation: sum of (a|n) over invertible a mod 4n with
    (r^2 - a f^2, 4 n f^2) = 4 and ((r-2)^2 - a f^2, 4 n f^2) = 4."""
    _check_cfr_args(f, r)
    if n < 1:
        raise DomainError("n must be >= 1")
    m = 4 * n
    mod = 4 * n * f * f
    a = np.arange(m, dtype=np.int64)
    invertible = np.gcd(a, m) == 1
    cond1 = np.gcd((r * r - a * f * f) % mod, mod) == 4
    cond2 = np.gcd(((r - 2) ** 2 - a * f * f) % mod, mod) == 4
    kron = kronecker_table(n, m).astype(np.int64)
    return int(kron[invertible & cond1 & cond2].sum())


# ---------------------------------------------------------------------------
# local sums A, B, C
# ---------------------------------------------------------------------------


def a_series_term(ell: int, alpha: int) -> Fraction:
    if alpha == 0:
        return Fraction(1)
    if alpha % 2:
        return Fraction(0)
    return Fraction(ell - 1, ell ** (alpha + 1))


def b_series_term(ell: int, alpha: int, r: int) -> Fraction:
    if alpha == 0:
        return Fraction(1)
    if ell == 2:
        return Fraction((-1) ** alpha, 2**alpha)
    la = ell**alpha
    if (r - 1) % ell == 0:
        return Fraction(-1, la * (ell - 1)) if alpha % 2 else Fraction(ell - 2, la * (ell - 1))
    if (r * (r - 2)) % ell == 0:
        return Fraction(-1, la * (ell - 2)) if alpha % 2 else Fraction(1, la)
    return Fraction(-2, la * (ell - 2)) if alpha % 2 else Fraction(ell - 3, la * (ell - 2))


def c_series_term(ell: int, alpha: int, r: int) -> Fraction:
    if (2 * r * (r - 2)) % ell == 0:
        raise DomainError("c-series requires ell coprime to 2r(r-2)")
    if alpha == 0:
        return Fraction(1)
    ratio = A_closed(ell) / (
        B2_closed(ell) if (r - 1) % ell == 0 else B1_closed(ell)
    )
    unit = ell - 1 if (r - 1) % ell == 0 else ell - 2
    return Fraction(1, ell ** (3 * alpha - 1) * unit) * ratio


def A_closed(ell: int) -> Fraction:
    return Fraction(ell * ell + ell + 1, ell * (ell + 1))


def B1_closed(ell: int) -> Fraction:
    return Fraction(ell**3 - 2 * ell**2 - 2 * ell - 1, (ell - 2) * (ell * ell - 1))


def B2_closed(ell: int) -> Fraction:
    return Fraction(ell**3 - ell**2 - ell - 1, (ell - 1) ** 2 * (ell + 1))


def B3_closed(ell: int) -> Fraction:
    return Fraction(ell * (ell * ell - 2 * ell - 1), (ell - 2) * (ell * ell - 1))


def C1_closed(ell: int) -> Fraction:
    return Fraction(ell**3 - 2 * ell**2 - 2 * ell, ell**3 - 2 * ell**2 - 2 * ell - 1)


def C2_closed(ell: int) -> Fraction:
    return Fraction(ell * (ell * ell - ell - 1), ell**3 - ell**2 - ell - 1)


B_AT_TWO = Fraction(2, 3)


@dataclass(frozen=True)
class LocalSums:
    ell: int
    r: int
    a_sum: Fraction
    b_sum: Fraction
    c_sum: Fraction | None  # defined only when ell does not divide 2r(r-2)


def local_sums(ell: int, r: int) -> LocalSums:
    """Closed-form values of the three local geometric sums at (ell, r)."""
    from .primes import is_prime

    if ell == 2 or not is_prime(ell):
        raise DomainError("ell must be an odd prime")
    if r % 2 == 0 or r == 1:
        raise DomainError("r must be odd and != 1")
    if (r - 1) % ell == 0:
        b_sum, c_sum = B2_closed(ell), C2_closed(ell)
    elif (r * (r - 2)) % ell == 0:
        b_sum, c_sum = B3_closed(ell), None
    else:
        b_sum, c_sum = B1_closed(ell), C1_closed(ell)
    return LocalSums(ell=ell, r=r, a_sum=A_closed(ell), b_sum=b_sum, c_sum=c_sum)


# ---------------------------------------------------------------------------
# the per-r constants C_r and their Gallagher-style average
# ---------------------------------------------------------------------------


def _c_r_base_neg_log_factor(t: float) -> float:
    # grouped to keep intermediates finite for very large t
    factor = (t * t / (t - 1) ** 3) * ((t * t - 2 * t - 2) / (t + 1))
    return -math.log(factor)


@functools.lru_cache(maxsize=8)
def _c_r_base(limit: int) -> tuple[float, float]:
    """(base product, applied tail) of (4/3) prod_{odd l} l^2(l^2-2l-2)/((l-1)^3(l+1))."""
    ell = sieve(limit).primes[1:].astype(np.float64)
    log_sum = np.sum(
        2 * np.log(ell)
        + np.log(ell * ell - 2 * ell - 2)
        - 3 * np.log(ell - 1)
        - np.log(ell + 1)
    )
    tail = _log_tail(_c_r_base_neg_log_factor, limit)
    return (4.0 / 3.0) * math.exp(log_sum - tail), tail


def C_r(r: int, limit: int = DEFAULT_TRUNCATION) -> ConstantValue:
    """The positive constant attached to an odd shift r != 1.

    Base infinite product memoized per truncation; finite corrections from
    the odd primes dividing r-1 and r(r-2).
    """
    if r % 2 == 0 or r == 1:
        raise DomainError("r must be odd and != 1")
    if limit < 10**3:
        raise DomainError("truncation limit must be >= 1000")
    base, tail = _c_r_base(limit)
    val = base
    for p in factorize(abs(r - 1)).odd_primes():
        val *= 1.0 + (p + 1.0) / (p * p - 2.0 * p - 2.0)
    for p in set(factorize(abs(r)).odd_primes()) | set(factorize(abs(r - 2)).odd_primes()):
        val *= 1.0 + 1.0 / (p * p - 2.0 * p - 2.0)
    return ConstantValue(value=val, truncation_limit=limit, tail_bound=tail)


MAX_ORACLE_U = 10**4
MAX_ORACLE_V = 50


def C_r_oracle(r: int, U: int, V: int, limit: int = DEFAULT_TRUNCATION) -> float:
    """Truncated triple sum converging to C_r, error O(1/V^2 + 1/sqrt(U)).

    sum over odd f <= V, n <= U of (1/nf) sum_{a mod 4n} (a|n) S(r-1, nf^2, b)
    with b = (r^2 - a f^2)/4 where integral.  Kept independent of the closed
    form: the inner character sum is evaluated directly, never via c_f_r.
    """
    if U > MAX_ORACLE_U or V > MAX_ORACLE_V:
        raise CapacityError(f"oracle budget exceeded (U<={MAX_ORACLE_U}, V<={MAX_ORACLE_V})")
    if U < 1 or V < 1:
        raise DomainError("U and V must be >= 1")
    total = 0.0
    for f in range(1, V + 1, 2):
        f2 = f * f
        for n in range(1, U + 1):
            q = n * f2
            a = np.arange(4 * n, dtype=np.int64)
            ok = np.gcd(a, 4 * n) == 1
            x = r * r - a * f2
            ok &= x % 4 == 0
            if not ok.any():
                continue
            b = (x // 4) % q if q > 1 else np.zeros_like(x)
            ok &= np.gcd(b, q) == 1
            ok &= np.gcd((b - (r - 1)) % q if q > 1 else b, q) == 1
            if not ok.any():
                continue
            kron_sum = int(kronecker_table(n, 4 * n)[ok].astype(np.int64).sum())
            if kron_sum == 0:
                continue
            # S(r-1, q, b) is the same for every admissible b
            b0 = int((x[ok][0] // 4))
            dens = singular_series_mod(r - 1, q, b0, limit).value
            total += dens * kron_sum / (n * f)
    return total


@dataclass(frozen=True)
class GallagherAverage:
    R: int
    truncation_limit: int
    sum_positive: float  # over odd 1 < r <= R
    sum_two_sided: float  # over odd |r| <= R, r != 1
    frak_c: float
    ratio: float  # sum_positive / (frak_c * R); converges to 1
    ratio_two_sided: float  # sum_two_sided / (frak_c * R); converges to 2


def gallagher_sum(R: int, limit: int = DEFAULT_TRUNCATION) -> GallagherAverage:
    """Closed-form sums of C_r over odd shifts up to R.

    The one-sided sum over 1 < r <= R averages to frak_c * R; the two-sided
    sum over |r| <= R is exactly twice that in the limit (about R odd shifts
    on each side).  Both are returned, with ratios against frak_c * R.
    """
    if R < 100:
        raise DomainError("R must be >= 100")
    frak_c = average_constant(limit).value
    sum_pos = 0.0
    sum_neg = 0.0
    start = -R if R % 2 else -R + 1
    for r in range(start, R + 1, 2):
        if r == 1:
            continue
        v = C_r(r, limit).value
        if r > 1:
            sum_pos += v
        else:
            sum_neg += v
    two_sided = sum_pos + sum_neg
    return GallagherAverage(
        R=R,
        truncation_limit=limit,
        sum_positive=sum_pos,
        sum_two_sided=two_sided,
        frak_c=frak_c,
        ratio=sum_pos / (frak_c * R),
        ratio_two_sided=two_sided / (frak_c * R),
    )
