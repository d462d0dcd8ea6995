"""The arithmetic group of unit-determinant matrices

    ( a        b )      a = u + v*sqrt2,  b = s + t*sqrt2,
    ( p*b'     a')      ' = Galois conjugation,

its double cosets modulo the diagonal subgroup generated by
h = diag(eps^2, eps^-2), and the dictionary between non-identity
double cosets and pairs of ideals with |N(A) - p N(B)| = 1.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np

from .errors import DeterminantError, HeightTooSmall
from .quadfield import (
    EPS,
    EPS2,
    LOG_EPS,
    SQRT2,
    QuadInt,
    ideal_generators,
    qi_sign,
    unit_power,
)


def embed(x: int, y: int) -> float:
    """Float value of x + y*sqrt(2) without cancellation when x and y have opposite signs."""
    if x * y >= 0:
        return x + y * SQRT2
    return (x * x - 2 * y * y) / (x - y * SQRT2)


def _lex_positive(u: int, v: int, s: int, t: int) -> bool:
    for c in (u, v, s, t):
        if c:
            return c > 0
    return False


@dataclass(frozen=True, order=True)
class GroupElement:
    """A PSL representative stored with (u, v, s, t) lexicographically positive."""

    p: int
    u: int
    v: int
    s: int
    t: int

    @property
    def a(self) -> QuadInt:
        return QuadInt(self.u, self.v)

    @property
    def b(self) -> QuadInt:
        return QuadInt(self.s, self.t)

    @property
    def c(self) -> QuadInt:
        return QuadInt(self.p * self.s, -self.p * self.t)

    @property
    def d(self) -> QuadInt:
        return QuadInt(self.u, -self.v)

    @property
    def norm_a(self) -> int:
        return self.u * self.u - 2 * self.v * self.v

    @property
    def norm_b(self) -> int:
        return self.s * self.s - 2 * self.t * self.t

    @property
    def B(self) -> int:
        """ad + bc; equals 2 N(a) - 1 on the group."""
        return self.norm_a + self.p * self.norm_b

    def entries(self) -> tuple[float, float, float, float]:
        """Real embedding (a, b, c, d) with sqrt(2) -> +1.414..."""
        a = embed(self.u, self.v)
        b = embed(self.s, self.t)
        c = self.p * embed(self.s, -self.t)
        d = embed(self.u, -self.v)
        return a, b, c, d

    def inverse(self) -> GroupElement:
        return make_element(self.p, self.u, -self.v, -self.s, -self.t)

    def __matmul__(self, other: GroupElement) -> GroupElement:
        if other.p != self.p:
            raise ValueError("elements belong to different groups")
        a1, b1, c1 = self.a, self.b, self.c
        a2, b2, d2 = other.a, other.b, other.d
        c2 = other.c
        a = a1 * a2 + b1 * c2
        b = a1 * b2 + b1 * d2
        return make_element(self.p, a.x, a.y, b.x, b.y)

    def is_identity(self) -> bool:
        return (self.u, self.v, self.s, self.t) == (1, 0, 0, 0)


def make_element(p: int, u: int, v: int, s: int, t: int) -> GroupElement:
    det = (u * u - 2 * v * v) - p * (s * s - 2 * t * t)
    if det != 1:
        raise DeterminantError(f"determinant {det} != 1 for p={p}, (u,v,s,t)=({u},{v},{s},{t})")
    if not _lex_positive(u, v, s, t):
        u, v, s, t = -u, -v, -s, -t
    return GroupElement(p, u, v, s, t)


def element_from_entries(p: int, a: QuadInt, b: QuadInt) -> GroupElement:
    return make_element(p, a.x, a.y, b.x, b.y)


def h_power(p: int, k: int) -> GroupElement:
    """h^k with h = diag(eps^2, eps^-2), the generator of the diagonal subgroup."""
    e = unit_power(2 * k)
    return make_element(p, e.x, e.y, 0, 0)


def sign_class(g: GroupElement) -> tuple[int, int]:
    """(sign(ab), sign(ac)) computed exactly."""
    sa = qi_sign(g.a)
    return sa * qi_sign(g.b), sa * qi_sign(g.c)


# ---------------------------------------------------------------------------
# canonical double-coset representatives

def _window_exponent(q: QuadInt) -> int:
    """The k with eps^(2k) <= |q| / sqrt|N(q)| < eps^(2k+2), decided exactly.

    Since |N(q)| = |q||q'|, the condition reads eps^(4k) |q'| <= |q|.
    """
    qc = q.conj()
    big, small = (q, qc) if abs(float(q)) >= abs(float(qc)) else (qc, q)
    # float(big) is free of cancellation; |small| = |N| / |big|
    log_ratio = 2.0 * math.log(abs(float(big))) - math.log(abs(q.norm()))
    if big is qc:
        log_ratio = -log_ratio
    k = math.floor(log_ratio / (4.0 * LOG_EPS))
    q_abs = q if qi_sign(q) > 0 else -q
    qc_abs = qc if qi_sign(qc) > 0 else -qc

    def below(j: int) -> bool:
        # eps^(4j) |q'| <= |q|
        return qi_sign(q_abs - unit_power(4 * j) * qc_abs) >= 0

    while not below(k):
        k -= 1
    while below(k + 1):
        k += 1
    return k


@dataclass(frozen=True)
class DoubleCosetClass:
    rep: GroupElement
    b_value: int
    mu: int
    mu_prime: int
    ideal_pair: tuple[int, int, int]  # (N(A), N(B), branch)
    fiber_index: int

    def sort_key(self):
        r = self.rep
        return (abs(self.b_value), r.u, r.v, r.s, r.t)


def identity_class(p: int) -> DoubleCosetClass:
    return DoubleCosetClass(make_element(p, 1, 0, 0, 0), 1, 0, 0, (1, 0, 1), 0)


def canonical_double_coset(g: GroupElement) -> DoubleCosetClass:
    """Canonical representative of the class of g in <h> \\ Gamma / <h>.

    Left and right multiplication by powers of h send (a, b) to
    (eps^(2 alpha) a, eps^(2 beta) b) with alpha = beta (mod 2).  In the
    frame a > 0 the representative has 1 <= |b|/sqrt|N(b)| < eps^2 and
    1 <= a/sqrt|N(a)| < eps^4.
    """
    p = g.p
    a, b = g.a, g.b
    if b.is_zero():
        # a is then a totally positive unit up to sign, i.e. a power of h
        return identity_class(p)
    if qi_sign(a) < 0:
        a, b = -a, -b
    beta = -_window_exponent(b)
    ka = _window_exponent(a)
    alpha = -ka
    if (alpha - beta) % 2:
        alpha += 1
    a = a * unit_power(2 * alpha)
    b = b * unit_power(2 * beta)
    rep = element_from_entries(p, a, b)
    mu, mu_prime = sign_class(rep)
    na = a.norm()
    branch = 1 if na > 0 else -1
    fiber_index = (1 if qi_sign(b) < 0 else 0) + 2 * (ka + alpha)
    return DoubleCosetClass(rep, rep.B, mu, mu_prime, (abs(na), abs(b.norm()), branch), fiber_index)


@lru_cache(maxsize=None)
def _generators(n: int) -> tuple[QuadInt, ...]:
    return tuple(ideal_generators(n))


def fiber(p: int, a: QuadInt, b: QuadInt) -> list[DoubleCosetClass]:
    """The four classes over the ideal pair ((a), (b)): (a, +-b) and (eps^2 a, +-b)."""
    a2 = a * EPS2
    out = [canonical_double_coset(element_from_entries(p, x, y)) for x in (a, a2) for y in (b, -b)]
    return out


def enumerate_double_cosets(p: int, X: float) -> list[DoubleCosetClass]:
    """All classes with |B| <= X, built from pairs of ideal generators."""
    classes = [identity_class(p)] if X >= 1 else []
    m = 1
    while 2 * p * m - 1 <= X:
        for branch in (1, -1):
            if 2 * p * m + branch > X:
                continue
            na = p * m + branch
            for b0 in _generators(m):
                for a0 in _generators(na):
                    a, b = a0, b0
                    if branch < 0:
                        # norms must be -(pm-1) and -m so that N(a) - p N(b) = 1
                        a, b = a * EPS, b * EPS
                    four = fiber(p, a, b)
                    if len({c.rep for c in four}) != 4:
                        raise AssertionError("fiber does not have four distinct classes")
                    for c in four:
                        if c.rep.u == 0 and c.rep.v == 0:
                            raise AssertionError("diagonal-zero element encountered")
                    classes.extend(four)
        m += 1
    classes.sort(key=DoubleCosetClass.sort_key)
    return classes


def certified_height(X: float) -> int:
    """Coordinate bound that every class with |B| <= X provably attains.

    Moving a and b independently by eps^4 gives a representative with
    |a|, |a'| <= eps^2 sqrt|N(a)| and likewise for b, and
    |N(a)|, p|N(b)| <= (X + 1)/2.
    """
    return int(math.floor(float(EPS2) * math.sqrt((X + 1) / 2.0)))


def lattice_scan_oracle(p: int, X: float, height: int | None = None) -> list[DoubleCosetClass]:
    """Independent enumeration by scanning a box of integer coordinates."""
    need = certified_height(X)
    if height is None:
        height = max(need, int(math.ceil(float(EPS2) * math.sqrt(2 * p * X))))
    if height < need:
        raise HeightTooSmall(f"height {height} < certified bound {need} for X={X}")
    r = np.arange(-height, height + 1, dtype=np.int64)
    U, V = np.meshgrid(r, r, indexing="ij")
    U, V = U.ravel(), V.ravel()
    N = U * U - 2 * V * V
    lim = (X + 1) / 2.0
    big = float(EPS2) * (1 + 1e-9)

    def centred(n):
        # keep elements with |q|, |q'| <= eps^2 sqrt|N|; a float prefilter with slack
        root = np.sqrt(np.abs(n).astype(float))
        q = np.abs(U + V * SQRT2)
        qc = np.abs(U - V * SQRT2)
        return (q <= big * root) & (qc <= big * root)

    a_mask = (N != 0) & (np.abs(N) <= lim) & centred(N)
    b_mask = (N != 0) & (p * np.abs(N) <= lim) & centred(N)
    b_by_norm: dict[int, list[tuple[int, int]]] = {}
    for s, t, n in zip(U[b_mask].tolist(), V[b_mask].tolist(), N[b_mask].tolist()):
        b_by_norm.setdefault(n, []).append((s, t))
    seen: dict[GroupElement, DoubleCosetClass] = {}
    if X >= 1:
        ident = identity_class(p)
        seen[ident.rep] = ident
    for u, v, n in zip(U[a_mask].tolist(), V[a_mask].tolist(), N[a_mask].tolist()):
        if (n - 1) % p:
            continue
        if abs(2 * n - 1) > X:
            continue
        for s, t in b_by_norm.get((n - 1) // p, ()):
            cls = canonical_double_coset(make_element(p, u, v, s, t))
            seen.setdefault(cls.rep, cls)
    return sorted(seen.values(), key=DoubleCosetClass.sort_key)


CSV_COLUMNS = ["p", "u", "v", "s", "t", "B", "mu", "mu_prime", "Na", "Nb", "branch", "fiber_index"]


def class_rows(classes: Iterable[DoubleCosetClass]) -> list[list[int]]:
    rows = []
    for c in classes:
        r = c.rep
        na, nb, br = c.ideal_pair
        rows.append([r.p, r.u, r.v, r.s, r.t, c.b_value, c.mu, c.mu_prime, na, nb, br, c.fiber_index])
    return rows


def write_classes_csv(stream, classes: Iterable[DoubleCosetClass]) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(class_rows(classes))
