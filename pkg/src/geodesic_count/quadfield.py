"""Exact arithmetic in Z[sqrt 2] and the ideal counting function.

The number of ideals of norm n is the divisor sum of the Kronecker
character mod 8.  The production path is a sieve over that divisor sum;
an independent brute-force count of generators in a fundamental window
serves as the oracle.
"""

from __future__ import annotations

import math
import struct
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numba import njit

from .errors import CacheFormatError, ResourceError, SieveRangeError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, slots=True)
class QuadInt:
    """The element x + y*sqrt(2)."""

    x: int
    y: int = 0

    def __mul__(self, other: QuadInt) -> QuadInt:
        return qi_mul(self, other)

    def __add__(self, other: QuadInt) -> QuadInt:
        return QuadInt(self.x + other.x, self.y + other.y)

    def __sub__(self, other: QuadInt) -> QuadInt:
        return QuadInt(self.x - other.x, self.y - other.y)

    def __neg__(self) -> QuadInt:
        return QuadInt(-self.x, -self.y)

    def __float__(self) -> float:
        return self.x + self.y * SQRT2

    def conj(self) -> QuadInt:
        return QuadInt(self.x, -self.y)

    def norm(self) -> int:
        return qi_norm(self)

    def sign(self) -> int:
        return qi_sign(self)

    def scale(self, k: int) -> QuadInt:
        return QuadInt(k * self.x, k * self.y)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


def qi_mul(a: QuadInt, b: QuadInt) -> QuadInt:
    # Python integers are unbounded, so no overflow check is needed here.
    return QuadInt(a.x * b.x + 2 * a.y * b.y, a.x * b.y + a.y * b.x)


def qi_norm(a: QuadInt) -> int:
    return a.x * a.x - 2 * a.y * a.y


def qi_sign(a: QuadInt) -> int:
    """Exact sign of x + y*sqrt(2) under the embedding sqrt(2) > 0."""
    x, y = a.x, a.y
    if x >= 0 and y >= 0:
        return 0 if x == 0 and y == 0 else 1
    if x <= 0 and y <= 0:
        return -1
    # mixed signs: whichever of |x| and |y|*sqrt(2) is larger wins
    if x * x > 2 * y * y:
        return 1 if x > 0 else -1
    return 1 if y > 0 else -1


EPS = QuadInt(1, 1)
EPS_INV = QuadInt(-1, 1)
EPS2 = QuadInt(3, 2)
EPS2_INV = QuadInt(3, -2)
EPS4 = QuadInt(17, 12)
LOG_EPS = math.log1p(SQRT2)


def unit_power(k: int) -> QuadInt:
    """eps**k for the fundamental unit eps = 1 + sqrt(2), by binary powering."""
    base = EPS if k >= 0 else EPS_INV
    k = abs(k)
    result = QuadInt(1, 0)
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def chi8(d: int) -> int:
    r = d % 8
    if r in (1, 7):
        return 1
    if r in (3, 5):
        return -1
    return 0


def ideal_count(n: int) -> int:
    """Number of ideals of norm n, via the divisor sum of chi8."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += chi8(d)
            e = n // d
            if e != d:
                total += chi8(e)
        d += 1
    return total


def ideal_generators(n: int) -> list[QuadInt]:
    """Totally positive generators g of norm n with sqrt(n) <= g < eps^2 sqrt(n).

    The totally positive units are the even powers of eps, so this window
    holds exactly one generator per ideal of norm n.
    """
    if n < 1:
        raise ValueError("n must be positive")
    gens = []
    # g >= sqrt(n) >= conj(g) > 0 means y >= 0; the upper end bounds y
    y_max = int(float(EPS2) * math.sqrt(n) / (2 * SQRT2)) + 2
    for y in range(y_max + 1):
        x2 = n + 2 * y * y
        x = math.isqrt(x2)
        if x * x != x2:
            continue
        g = QuadInt(x, y)
        # upper window edge: g < eps^4 * conj(g), equivalent to g < eps^2 sqrt(n)
        if qi_sign(EPS4 * g.conj() - g) > 0:
            gens.append(g)
    return gens


def ideal_count_bruteforce(n: int) -> int:
    return len(ideal_generators(n))


@njit(cache=True, nogil=True)
def _sieve_range(lo, hi, out):
    # out[k] accumulates the count for n = lo + k; signed, since partial sums dip below 0
    for d in range(1, hi):
        r = d % 8
        if r == 1 or r == 7:
            c = 1
        elif r == 3 or r == 5:
            c = -1
        else:
            continue
        start = ((lo + d - 1) // d) * d
        for m in range(start, hi, d):
            out[m - lo] += c


@dataclass(frozen=True)
class IdealCountTable:
    """Values of the ideal counting function for 1 <= n <= limit.

    ``counts`` has length limit + 1 with a dummy zero at index 0 so that
    ``counts[n]`` is the count for n.
    """

    limit: int
    counts: np.ndarray

    def __post_init__(self):
        self.counts.setflags(write=False)

    def __getitem__(self, n):
        return self.counts[n]

    def require(self, n: int) -> None:
        if n > self.limit:
            raise SieveRangeError(f"table covers n <= {self.limit}, need {n}")


def ideal_count_sieve(limit: int, workers: int = 1) -> IdealCountTable:
    if limit < 1:
        raise ValueError("limit must be positive")
    try:
        acc = np.zeros(limit + 1, dtype=np.int16)
    except MemoryError as exc:
        raise ResourceError(f"cannot allocate a sieve of size {limit}") from exc
    blocks = max(1, int(workers))
    edges = np.linspace(1, limit + 1, blocks + 1).astype(np.int64)
    spans = [(int(a), int(b)) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    if len(spans) == 1:
        _sieve_range(1, limit + 1, acc[1:])
    else:
        # disjoint output ranges, so the blocks never write the same cell
        with ThreadPoolExecutor(max_workers=len(spans)) as pool:
            list(pool.map(lambda ab: _sieve_range(ab[0], ab[1], acc[ab[0]:ab[1]]), spans))
    return IdealCountTable(limit, acc.view(np.uint16))


CACHE_MAGIC = b"N2SIEVE1"
CACHE_VERSION = 1
_HEADER = struct.Struct("<8sIQ")


def write_sieve_cache(path, table: IdealCountTable) -> None:
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, table.limit))
        fh.write(np.ascontiguousarray(table.counts[1:], dtype="<u2").tobytes())


def read_sieve_cache(path) -> IdealCountTable:
    path = Path(path)
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise CacheFormatError(f"{path}: truncated header")
        magic, version, limit = _HEADER.unpack(head)
        if magic != CACHE_MAGIC:
            raise CacheFormatError(f"{path}: bad magic {magic!r}")
        if version != CACHE_VERSION:
            raise CacheFormatError(f"{path}: unsupported version {version}")
        payload = np.fromfile(fh, dtype="<u2", count=limit)
    if payload.size != limit:
        raise CacheFormatError(f"{path}: expected {limit} counts, found {payload.size}")
    counts = np.zeros(limit + 1, dtype=np.uint16)
    counts[1:] = payload
    return IdealCountTable(int(limit), counts)


def load_or_sieve(limit: int, cache=None, workers: int = 1) -> IdealCountTable:
    """Reuse a cache file if it covers ``limit``, otherwise sieve (and refresh it)."""
    if cache is not None and Path(cache).exists():
        table = read_sieve_cache(cache)
        if table.limit >= limit:
            return table
    table = ideal_count_sieve(limit, workers=workers)
    if cache is not None:
        write_sieve_cache(cache, table)
    return table
