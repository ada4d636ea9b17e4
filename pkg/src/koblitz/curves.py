"""Elliptic curves y^2 = x^3 + ax + b over F_p: traces and exhaustive censuses.

The census for a single p computes the full p x p trace matrix T[a, b] with
one BLAS matmul: T = N @ K where N[a, v] counts x with x^3 + ax = v and
K[v, b] is the quadratic-character table chi(v + b).  All entries stay below
2^24, so float32 accumulation is exact and the results are integers.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass

import numpy as np

from .classnumbers import kronecker_H
from .errors import DomainError
from .primes import is_prime, kronecker, sieve

CACHE_DIR_ENV = "KOBLITZ_CACHE_DIR"


@dataclass(frozen=True)
class CurveModP:
    """Nonsingular short Weierstrass curve over F_p, p > 3."""

    p: int
    a: int
    b: int

    def __post_init__(self):
        if self.p <= 3 or not is_prime(self.p):
            raise DomainError(f"p={self.p} must be a prime > 3")
        object.__setattr__(self, "a", self.a % self.p)
        object.__setattr__(self, "b", self.b % self.p)
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise DomainError(f"singular curve (a,b)=({self.a},{self.b}) mod {self.p}")


@dataclass(frozen=True)
class CensusRecord:
    p: int
    r: int
    count: int


def legendre_table(p: int) -> np.ndarray:
    """chi(t) for t = 0..p-1 as int8, chi the quadratic character mod p."""
    k = np.full(p, -1, dtype=np.int8)
    k[0] = 0
    x = np.arange(1, p, dtype=np.int64)
    k[(x * x) % p] = 1
    return k


def trace(curve: CurveModP) -> int:
    """Trace of Frobenius a_p = -sum_x chi(x^3 + ax + b)."""
    p, a, b = curve.p, curve.a, curve.b
    k = legendre_table(p)
    x = np.arange(p, dtype=np.int64)
    vals = (x * x % p * x + a * x + b) % p
    return -int(k[vals].sum())


def trace_matrix(p: int) -> tuple[np.ndarray, np.ndarray]:
    """(T, nonsingular) over the full residue grid: T[a, b] = a_p(E(a, b)).

    T is int32; entries at singular pairs are meaningless and masked off by
    the boolean `nonsingular` array.
    """
    if p <= 3 or not is_prime(p):
        raise DomainError(f"p={p} must be a prime > 3")
    if p >= 1 << 24:
        raise DomainError("float32 exactness bound exceeded")
    x = np.arange(p, dtype=np.int64)
    x3 = x * x % p * x % p
    # N[a, v] = #{x : x^3 + ax = v}
    vals = (x3[None, :] + x[:, None] * x[None, :]) % p
    n_mat = np.empty((p, p), dtype=np.float32)
    for a in range(p):
        n_mat[a] = np.bincount(vals[a], minlength=p)
    del vals
    k = legendre_table(p)
    k_mat = k[(x[:, None] + x[None, :]) % p].astype(np.float32)  # K[v, b]
    t = -(n_mat @ k_mat)
    t_int = np.rint(t).astype(np.int32)
    a4 = 4 * (x * x % p * x) % p
    b27 = 27 * (x * x) % p
    nonsingular = (a4[:, None] + b27[None, :]) % p != 0
    return t_int, nonsingular


@functools.lru_cache(maxsize=None)
def census(p: int) -> tuple[CensusRecord, ...]:
    """All (r, N_r(p)) with N_r(p) > 0, ascending in r."""
    t, ns = trace_matrix(p)
    traces = t[ns]
    off = math.isqrt(4 * p)
    hist = np.bincount(traces + off, minlength=2 * off + 1)
    total = int(hist.sum())
    if total != p * p - p:
        raise AssertionError(f"census total {total} != p^2 - p for p={p}")
    return tuple(
        CensusRecord(p=p, r=int(r - off), count=int(c))
        for r, c in enumerate(hist)
        if c > 0
    )


def singular_pair_count(p: int) -> int:
    """#{(a,b) mod p : 4a^3 + 27b^2 = 0}, by direct enumeration."""
    x = np.arange(p, dtype=np.int64)
    a4 = 4 * (x * x % p * x) % p
    b27 = 27 * (x * x) % p
    return int(((a4[:, None] + b27[None, :]) % p == 0).sum())


@dataclass(frozen=True)
class DeuringRow:
    r: int
    census_count: int
    expected_count: int
    matches: bool


@dataclass(frozen=True)
class DeuringReport:
    p: int
    ordinary_all_match: bool
    ordinary_mismatches: tuple[DeuringRow, ...]
    supersingular: DeuringRow | None

    @property
    def all_match(self) -> bool:
        return self.ordinary_all_match and (
            self.supersingular is None or self.supersingular.matches
        )


def deuring_check(p: int) -> DeuringReport:
    """Compare census counts N_r(p) to (p-1)*H(r^2-4p), exactly.

    Ordinary traces (p does not divide r) are the asserted case; the r = 0
    row is evaluated and reported separately.
    """
    counts = {rec.r: rec.count for rec in census(p)}
    rmax = math.isqrt(4 * p - 1)
    mismatches = []
    ordinary_ok = True
    supersingular = None
    for r in range(-rmax, rmax + 1):
        twelve = kronecker_H(r * r - 4 * p).twelve_h
        expected12 = (p - 1) * twelve
        if expected12 % 12 != 0:
            raise AssertionError(f"(p-1)*12H not divisible by 12 at p={p}, r={r}")
        expected = expected12 // 12
        got = counts.get(r, 0)
        row = DeuringRow(r=r, census_count=got, expected_count=expected, matches=got == expected)
        if r == 0:
            supersingular = row
        elif not row.matches:
            ordinary_ok = False
            mismatches.append(row)
    return DeuringReport(
        p=p,
        ordinary_all_match=ordinary_ok,
        ordinary_mismatches=tuple(mismatches),
        supersingular=supersingular,
    )


def pi_star(p: int) -> int:
    """#{curves over F_p with a prime number of points}."""
    return sum(rec.count for rec in census(p) if is_prime(p + 1 - rec.r))


def pi_twin(a: int, b: int, x: int) -> int:
    """#{3 < p <= x of good reduction : p + 1 - a_p(E) is prime}."""
    disc = 4 * a**3 + 27 * b**2
    if disc == 0:
        raise DomainError("curve is singular over Q")
    if x < 5:
        raise DomainError("x must be >= 5")
    count = 0
    for p in sieve(x).primes[2:]:
        p = int(p)
        if disc % p == 0:
            continue
        r = trace(CurveModP(p=p, a=a, b=b))
        if is_prime(p + 1 - r):
            count += 1
    return count


def _residue_multiplicities(bound: int, p: int) -> np.ndarray:
    """How many integers in [-bound, bound] fall in each residue class mod p."""
    n = 2 * bound + 1
    counts = np.full(p, n // p, dtype=np.int64)
    rem = np.arange(-bound, -bound + (n % p), dtype=np.int64) % p
    np.add.at(counts, rem, 1)
    return counts


def box_trace_histogram(p: int, box_a: int, box_b: int) -> np.ndarray:
    """hist[r + isqrt(4p)] = #{|a| <= A, |b| <= B : a_p(E(a,b)) = r}.

    Pairs singular mod p are skipped.
    """
    t, ns = trace_matrix(p)
    wa = _residue_multiplicities(box_a, p).astype(np.float64)
    wb = _residue_multiplicities(box_b, p).astype(np.float64)
    w = np.outer(wa, wb)
    off = math.isqrt(4 * p)
    hist = np.bincount(
        (t[ns] + off).ravel(), weights=w[ns].ravel(), minlength=2 * off + 1
    )
    return np.rint(hist).astype(np.int64)


def box_count(p: int, box_a: int, box_b: int, r: int) -> int:
    """Exact N_{A,B,r}(p) over the (2A+1)(2B+1) integer box."""
    if p <= 3 or not is_prime(p):
        raise DomainError(f"p={p} must be a prime > 3")
    if box_a < 1 or box_b < 1:
        raise DomainError("box radii must be >= 1")
    off = math.isqrt(4 * p)
    if abs(r) > off:
        return 0
    hist = box_trace_histogram(p, box_a, box_b)
    return int(hist[r + off])


# ---------------------------------------------------------------------------
# census persistence: `p,r,count` lines, sorted by (p, r), '#' comments
# ---------------------------------------------------------------------------


def default_cache_dir() -> str | None:
    return os.environ.get(CACHE_DIR_ENV)


def write_census_file(path: str, records: list[CensusRecord]) -> None:
    records = sorted(records, key=lambda rec: (rec.p, rec.r))
    with open(path, "w", encoding="ascii") as fh:
        fh.write("# census records: p,r,count\n")
        for rec in records:
            fh.write(f"{rec.p},{rec.r},{rec.count}\n")


def read_census_file(path: str) -> list[CensusRecord]:
    out = []
    with open(path, "r", encoding="ascii") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            p, r, count = (int(tok) for tok in line.split(","))
            out.append(CensusRecord(p=p, r=r, count=count))
    return out


def census_many(
    primes: list[int], cache_dir: str | None = None, workers: int = 1
) -> dict[int, tuple[CensusRecord, ...]]:
    """Censuses for many primes, optionally cached on disk and threaded.

    Results are merged in ascending p regardless of completion order.
    """
    primes = sorted(set(int(p) for p in primes))
    results: dict[int, tuple[CensusRecord, ...]] = {}
    cache_path = None
    if cache_dir is not None:
        os.makedirs(cache_dir, exist_ok=True)
        cache_path = os.path.join(cache_dir, "census_cache.txt")
        if os.path.exists(cache_path):
            by_p: dict[int, list[CensusRecord]] = {}
            for rec in read_census_file(cache_path):
                by_p.setdefault(rec.p, []).append(rec)
            for p, recs in by_p.items():
                results[p] = tuple(sorted(recs, key=lambda rec: rec.r))
    todo = [p for p in primes if p not in results]
    if workers > 1 and len(todo) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            for p, recs in zip(todo, pool.map(census, todo)):
                results[p] = recs
    else:
        for p in todo:
            results[p] = census(p)
    if cache_path is not None and todo:
        flat = [rec for p in sorted(results) for rec in results[p]]
        write_census_file(cache_path, flat)
    return {p: results[p] for p in primes}
