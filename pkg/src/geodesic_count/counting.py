"""Ideal correlation sums, their main terms, and error-term statistics.

For a prime p the sum S^{+-}(X) = sum_{n <= X} N(n) N(pn +- 1) counts pairs
of ideals with N(A) - p N(B) = +-1, and each such pair carries exactly four
double cosets with |B(gamma)| = 2pn +- 1.  The main term is
(4p/c_p)(log eps/pi)^2 X.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CrossCheckError, DegenerateFitError
from .group import enumerate_double_cosets
from .quadfield import LOG_EPS, IdealCountTable, qi_sign

# primes for which the exceptional spectrum is known to be empty, so the
# correlation sum has no intermediate X^{s_j} terms
VERIFIED_PRIMES = frozenset(
    [q for q in range(2, 70) if all(q % d for d in range(2, int(q ** 0.5) + 1))] + [83, 101, 107, 109]
)


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def c_p(p: int) -> int:
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        return 2
    return p - 1 if p % 8 in (3, 5) else p + 1


def main_coefficient(p: int) -> float:
    return 4.0 * p / c_p(p) * (LOG_EPS / math.pi) ** 2


def geodesic_length() -> float:
    """Length of the closed geodesic: twice the log of the eigenvalue eps^2."""
    return 4.0 * LOG_EPS


def coset_count_coefficient(p: int) -> float:
    """Leading coefficient 2 len^2/(pi Vol) of the count of classes with |B| <= X, Vol = 2 pi c_p."""
    vol = 2.0 * math.pi * c_p(p)
    return 2.0 * geodesic_length() ** 2 / (math.pi * vol)


# ---------------------------------------------------------------------------
# correlation sums


def correlation_terms(table: IdealCountTable, p: int, branch: int, n_max: int) -> np.ndarray:
    """int64 array whose entry n is N(n) N(pn + branch), with entry 0 equal to 0."""
    n_max = int(n_max)
    if branch not in (1, -1):
        raise ValueError("branch must be +1 or -1")
    out = np.zeros(n_max + 1, dtype=np.int64)
    if n_max < 1:
        return out
    table.require(p * n_max + branch)
    n = np.arange(1, n_max + 1, dtype=np.int64)
    counts = table.counts
    out[1:] = counts[1 : n_max + 1].astype(np.int64) * counts[p * n + branch].astype(np.int64)
    return out


def correlation_sum(table: IdealCountTable, p: int, branch: int, X: float) -> int:
    n_max = int(math.floor(X))
    if n_max < 1:
        return 0
    return int(correlation_terms(table, p, branch, n_max).sum())


def correlation_partial_sums(table: IdealCountTable, p: int, branch: int, n_max: int) -> np.ndarray:
    """S(n) for n = 0..n_max."""
    return np.cumsum(correlation_terms(table, p, branch, n_max))


def pair_counts(table: IdealCountTable, p: int, X: float) -> tuple[int, int]:
    """Ideal pairs with |B| = 2pm +- 1 <= X on each branch."""
    plus = correlation_sum(table, p, 1, (X - 1) / (2 * p))
    minus = correlation_sum(table, p, -1, (X + 1) / (2 * p))
    return plus, minus


# ---------------------------------------------------------------------------
# counting the double cosets


@dataclass(frozen=True)
class CountReport:
    p: int
    X: float
    N1: int
    N2: int
    N3: int
    N4: int
    Nmumu: dict = field(hash=False)
    pair_counts: tuple[int, int]

    def as_dict(self) -> dict:
        return {
            "p": self.p,
            "X": self.X,
            "N1": self.N1,
            "N2": self.N2,
            "N3": self.N3,
            "N4": self.N4,
            "Nmumu": {f"{m:+d},{mp:+d}": v for (m, mp), v in sorted(self.Nmumu.items())},
            "pairs_plus": self.pair_counts[0],
            "pairs_minus": self.pair_counts[1],
        }


def count_report(p: int, X: float, table: IdealCountTable) -> CountReport:
    """N_1..N_4 from the enumerated classes, cross-checked against the pair counts.

    The identity class has zero orientation signs; it is counted in N_1 and
    N_4 but left out of the four (mu, mu') cells.
    """
    classes = enumerate_double_cosets(p, X)
    n1 = len(classes)
    n2 = sum(c.mu for c in classes)
    n3 = sum(c.mu_prime for c in classes)
    n4 = sum(1 if c.rep.norm_a > 0 else -1 for c in classes)
    cells = {(m, mp): 0 for m in (1, -1) for mp in (1, -1)}
    for c in classes:
        if c.rep.is_identity():
            continue
        cells[(c.mu, c.mu_prime)] += 1
    plus, minus = pair_counts(table, p, X)
    ident = 1 if X >= 1 else 0
    expected = (4 * (plus + minus) + ident, 0, 0, 4 * (plus - minus) + ident)
    if (n1, n2, n3, n4) != expected:
        raise CrossCheckError(f"p={p} X={X}: classes give {(n1, n2, n3, n4)}, pair counts give {expected}")
    for (m, mp), v in cells.items():
        # over non-identity classes, sign(ad) = sign(ab) sign(ac)
        formula = (n1 - ident) + m * n2 + mp * n3 + m * mp * (n4 - ident)
        if 4 * v != formula:
            raise CrossCheckError(f"cell {(m, mp)} holds {v}, sign identity gives {formula}/4")
    return CountReport(p, X, n1, n2, n3, n4, cells, (plus, minus))


# ---------------------------------------------------------------------------
# error terms


@dataclass(frozen=True)
class ErrorSeries:
    p: int
    branch: int
    xs: np.ndarray
    S: np.ndarray
    M: np.ndarray
    E: np.ndarray
    jumps: np.ndarray


def error_series(table: IdealCountTable, p: int, branch: int, xs) -> ErrorSeries:
    """E(x) = S(x) - main_coefficient(p) x sampled at the points xs."""
    xs = np.asarray(xs, dtype=float)
    if xs.size and np.any(np.diff(xs) <= 0):
        raise ValueError("sample points must be increasing")
    n_max = int(math.floor(xs[-1])) if xs.size else 0
    terms = correlation_terms(table, p, branch, max(n_max, 0))
    partial = np.cumsum(terms)
    idx = np.floor(np.clip(xs, 0, None)).astype(np.int64)
    S = partial[idx]
    M = main_coefficient(p) * xs
    return ErrorSeries(p, branch, xs, S, M, S - M, np.nonzero(terms)[0])


def piecewise_square_integral(edges, levels, slope: float) -> float:
    """int (level_k - slope x)^2 dx over [edges[k], edges[k+1]], summed over k.

    Each piece is a quadratic in x, so Simpson-type closed form is exact:
    (b - a)(E_a^2 + E_a E_b + E_b^2)/3 with E linear on the piece.
    """
    edges = np.asarray(edges, dtype=float)
    levels = np.asarray(levels, dtype=float)
    lo, hi = edges[:-1], edges[1:]
    ea = levels - slope * lo
    eb = levels - slope * hi
    return float(np.sum((hi - lo) * (ea * ea + ea * eb + eb * eb) / 3.0))


def mean_square_from_partials(partial: np.ndarray, coeff: float, X: int) -> float:
    """(1/X) int_X^{2X} (S(floor x) - coeff x)^2 dx for integer X, given S(0..2X)."""
    X = int(X)
    edges = np.arange(X, 2 * X + 1, dtype=float)
    return piecewise_square_integral(edges, partial[X : 2 * X], coeff) / X


def mean_square_error(table: IdealCountTable, p: int, branch: int, X: int) -> float:
    partial = correlation_partial_sums(table, p, branch, 2 * int(X))
    return mean_square_from_partials(partial, main_coefficient(p), X)


@dataclass(frozen=True)
class FitResult:
    slope: float
    stderr: float
    intercept: float
    samples: int
    window: tuple[float, float]

    def as_dict(self) -> dict:
        return {
            "slope": self.slope,
            "stderr": self.stderr,
            "intercept": self.intercept,
            "samples": self.samples,
            "window": list(self.window),
        }


def exponent_fit(xs, ys) -> FitResult:
    """Least-squares slope of log|y| against log x; zero samples are dropped."""
    xs = np.asarray(xs, dtype=float)
    ys = np.abs(np.asarray(ys, dtype=float))
    keep = (ys > 0) & (xs > 0)
    xs, ys = xs[keep], ys[keep]
    if xs.size < 10:
        raise DegenerateFitError(f"need at least 10 positive samples, have {xs.size}")
    lx, ly = np.log(xs), np.log(ys)
    lx_mean = lx.mean()
    sxx = float(np.sum((lx - lx_mean) ** 2))
    if sxx == 0.0:
        raise DegenerateFitError("all sample points coincide")
    slope = float(np.sum((lx - lx_mean) * (ly - ly.mean())) / sxx)
    intercept = float(ly.mean() - slope * lx_mean)
    resid = ly - (intercept + slope * lx)
    dof = xs.size - 2
    stderr = math.sqrt(float(np.sum(resid ** 2)) / dof / sxx) if dof > 0 else math.nan
    return FitResult(slope, stderr, intercept, int(xs.size), (float(xs[0]), float(xs[-1])))


def rms_window_series(table: IdealCountTable, p: int, branch: int, x_lo: float, x_hi: float, count: int = 24):
    """Window starts X on a geometric grid with [X, 2X] inside [x_lo, x_hi], and RMS of E over each window."""
    starts = np.unique(np.round(np.geomspace(x_lo, x_hi / 2.0, count)).astype(np.int64))
    partial = correlation_partial_sums(table, p, branch, 2 * int(starts[-1]))
    coeff = main_coefficient(p)
    rms = np.array([math.sqrt(mean_square_from_partials(partial, coeff, int(X))) for X in starts])
    return starts.astype(float), rms


def rms_exponent_fit(table: IdealCountTable, p: int, branch: int, x_lo: float, x_hi: float, count: int = 24) -> FitResult:
    starts, rms = rms_window_series(table, p, branch, x_lo, x_hi, count)
    return exponent_fit(starts, rms)
