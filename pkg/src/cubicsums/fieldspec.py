"""Cubic number fields and the splitting of rational primes.

A field K is described by a monic integer cubic

    f(x) = x^3 + c2 x^2 + c1 x + c0.

For a prime p that does not divide the index [O_K : Z[theta]] the shape of
p O_K = prod P_i^{e_i} is read off the factorization of f mod p: each
irreducible factor of degree f_i with multiplicity e_i gives one prime ideal
P_i of norm p^{f_i}, and sum e_i f_i = 3.  Everything downstream (ideal
counts, zeta coefficients) only needs these shapes.

We restrict to the monogenic case.  Primes that do divide the index cannot
be factored through f mod p (Dedekind), so they must be declared explicitly
via ``index_divisor_overrides``; the constructor runs Dedekind's p-maximality
criterion at every candidate prime and refuses to build a field whose index
divisors are not covered.

The degenerate ``rationals`` field (degree 1, one prime of norm p above
every p) is included as a test hook: on it every ideal-level operation must
collapse to its classical integer counterpart.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field as dataclass_field
from functools import lru_cache

import numpy as np

__all__ = [
    "FieldSpec",
    "SplittingType",
    "FieldConfigError",
    "discriminant_monic_cubic",
    "squarefree_decompose",
    "parse_field_spec",
    "get_preset",
    "load_field",
    "preset_names",
    "splitting_type",
    "splitting_codes",
    "local_aK",
    "local_ideal_counts",
    "dedekind_p_maximal",
    "primes_upto",
    "T_SPLIT",
    "T_PARTIAL",
    "T_INERT",
    "T_RAM_112",
    "T_RAM_13",
    "T_RATIONAL",
]


class FieldConfigError(ValueError):
    """Raised for invalid field configurations (reducible poly, zero disc,
    missing index-divisor override, malformed config text)."""


# ----------------------------------------------------------------------------
# splitting-shape codes shared with the sieves
# ----------------------------------------------------------------------------

T_SPLIT = 0      # p = P1 P1' P1''          f-shape (1,1,1)
T_PARTIAL = 1    # p = P1 P2                f-shape (1,2)
T_INERT = 2      # p = P3                   f-shape (3,)
T_RAM_112 = 3    # p = P1^2 P1'             f-shape (1,1)
T_RAM_13 = 4     # p = P1^3                 f-shape (1,)
T_RATIONAL = 5   # degree-1 hook: p = (p)   f-shape (1,)

F_SHAPES = {
    T_SPLIT: (1, 1, 1),
    T_PARTIAL: (1, 2),
    T_INERT: (3,),
    T_RAM_112: (1, 1),
    T_RAM_13: (1,),
    T_RATIONAL: (1,),
}

_COMPONENTS = {
    T_SPLIT: ((1, 1), (1, 1), (1, 1)),
    T_PARTIAL: ((1, 1), (2, 1)),
    T_INERT: ((3, 1),),
    T_RAM_112: ((1, 1), (1, 2)),
    T_RAM_13: ((1, 3),),
    T_RATIONAL: ((1, 1),),
}


@dataclass(frozen=True)
class SplittingType:
    """Multiset of (residue degree f, ramification exponent e) above a prime."""

    components: tuple  # tuple of (f, e), sorted

    def __post_init__(self):
        comps = tuple(sorted(tuple(c) for c in self.components))
        object.__setattr__(self, "components", comps)
        if not (1 <= len(comps) <= 3):
            raise FieldConfigError("splitting type needs 1..3 components")
        for f, e in comps:
            if f < 1 or e < 1:
                raise FieldConfigError("residue degrees and ramification exponents are >= 1")

    @property
    def degree(self) -> int:
        return sum(f * e for f, e in self.components)

    @property
    def f_shape(self) -> tuple:
        return tuple(sorted(f for f, _ in self.components))

    @property
    def ramified(self) -> bool:
        return any(e > 1 for _, e in self.components)

    def n_degree_one(self) -> int:
        """Number of components with residue degree 1 (= distinct roots mod p)."""
        return sum(1 for f, _ in self.components if f == 1)

    @property
    def pattern(self) -> str:
        parts = []
        seen = {}
        for f, e in self.components:
            ticks = "'" * seen.get(f, 0)
            seen[f] = seen.get(f, 0) + 1
            parts.append(f"P{f}{ticks}" + (f"^{e}" if e > 1 else ""))
        return "*".join(parts)

    def __str__(self):
        return self.pattern


def _splitting_from_code(code: int) -> SplittingType:
    return SplittingType(_COMPONENTS[code])


def _code_from_splitting(st: SplittingType) -> int:
    for code, comps in _COMPONENTS.items():
        if code != T_RATIONAL and st.components == tuple(sorted(comps)):
            return code
    raise FieldConfigError(f"splitting type {st} is not a cubic shape")


# ----------------------------------------------------------------------------
# exact integer polynomial helpers
# ----------------------------------------------------------------------------

def _bareiss_det(m):
    """Fraction-free determinant of a small integer matrix (list of lists)."""
    a = [row[:] for row in m]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def discriminant_monic_cubic(c0: int, c1: int, c2: int) -> int:
    """disc(x^3 + c2 x^2 + c1 x + c0) = -Res(f, f'), via a Sylvester determinant."""
    syl = [
        [1, c2, c1, c0, 0],
        [0, 1, c2, c1, c0],
        [3, 2 * c2, c1, 0, 0],
        [0, 3, 2 * c2, c1, 0],
        [0, 0, 3, 2 * c2, c1],
    ]
    return -_bareiss_det(syl)


def squarefree_decompose(D: int) -> tuple:
    """Write D = d * f^2 with d squarefree; returns (d, f), f > 0."""
    if D == 0:
        raise ValueError("zero has no squarefree decomposition")
    sign = 1 if D > 0 else -1
    n = abs(D)
    d, f = 1, 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            k = 0
            while n % p == 0:
                n //= p
                k += 1
            f *= p ** (k // 2)
            if k % 2:
                d *= p
        p += 1 if p == 2 else 2
    d *= n
    return sign * d, f


def _integer_roots(c0: int, c1: int, c2: int):
    """Integer roots of the monic cubic (enough to decide irreducibility)."""
    if c0 == 0:
        return [0]
    roots = []
    a = abs(c0)
    for r in range(1, math.isqrt(a) + 1):
        if a % r:
            continue
        for cand in {r, -r, a // r, -(a // r)}:
            if ((cand + c2) * cand + c1) * cand + c0 == 0:
                roots.append(cand)
    return sorted(set(roots))


# ----------------------------------------------------------------------------
# roots of the cubic mod p: scalar and bulk-vectorized paths
# ----------------------------------------------------------------------------

def primes_upto(n: int) -> np.ndarray:
    """All primes <= n as an int64 array (simple numpy Eratosthenes)."""
    if n < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def roots_mod_p(c0: int, c1: int, c2: int, p: int):
    """All roots of the cubic mod p by exhaustive scan.  Oracle-grade; O(p)."""
    xs = np.arange(p, dtype=np.int64)
    vals = (xs * xs % p * xs + c2 % p * (xs * xs % p) + c1 % p * xs + c0) % p
    return [int(r) for r in np.nonzero(vals == 0)[0]]


def _count_roots_py(c0: int, c1: int, c2: int, p: int) -> int:
    """Distinct roots of the cubic mod p via deg gcd(x^p - x, f), python ints."""
    r2, r1, r0 = (-c2) % p, (-c1) % p, (-c0) % p
    t2, t1, t0 = (r2 * r2 + r1) % p, (r2 * r1 + r0) % p, (r2 * r0) % p
    a, b, c = 0, 1, 0  # state = x
    for bit in bin(p)[3:]:
        s4, s3 = a * a % p, 2 * a * b % p
        s2, s1, s0 = (2 * a * c + b * b) % p, 2 * b * c % p, c * c % p
        a = (s2 + s3 * r2 + s4 * t2) % p
        b = (s1 + s3 * r1 + s4 * t1) % p
        c = (s0 + s3 * r0 + s4 * t0) % p
        if bit == "1":
            a, b, c = (b + a * r2) % p, (c + a * r1) % p, a * r0 % p
    b = (b - 1) % p  # x^p - x reduced mod f
    return _euclid_root_count(a, b, c, c0, c1, c2, p)


def _euclid_root_count(a, b, c, c0, c1, c2, p):
    # deg gcd(f, g) for g = a x^2 + b x + c, all arithmetic mod p.
    if a == 0 and b == 0:
        return 3 if c == 0 else 0
    if a == 0:
        # linear g: one shared root iff b^3 f(-c/b) = 0
        cc = (-c) % p
        e = (cc * cc % p * cc + c2 * cc % p * cc % p * b + c1 * cc % p * b % p * b + c0 * b % p * b % p * b) % p
        return 1 if e == 0 else 0
    # quadratic g: pseudo-remainder of f, then one more step
    d2 = (a * c2 - b) % p
    d1 = (a * c1 - c) % p
    d0 = a * c0 % p
    r1_ = (a * d1 - d2 * b) % p
    r0_ = (a * d0 - d2 * c) % p
    if r1_ == 0 and r0_ == 0:
        return 2
    if r1_ == 0:
        return 0
    q = (a * r0_ % p * r0_ - b * r0_ % p * r1_ + c * r1_ % p * r1_) % p
    return 1 if q == 0 else 0


def _count_roots_vector(c0: int, c1: int, c2: int, ps: np.ndarray) -> np.ndarray:
    """Distinct root counts of the cubic mod every prime in ps (int64, < 2^31).

    Square-and-multiply ladder for x^p mod (f, p), vectorized over primes of
    equal bit length, followed by a branch-free Euclid tail.  All intermediate
    products stay below 2^63 because operands are reduced mod p < 2^31 first.
    """
    ps = np.asarray(ps, dtype=np.int64)
    counts = np.full(ps.shape, -1, dtype=np.int8)
    for nbits in range(2, 32):
        grp = (ps >> (nbits - 1)) == 1
        if not grp.any():
            continue
        p = ps[grp]
        r2, r1, r0 = (-c2) % p, (-c1) % p, (-c0) % p
        t2, t1, t0 = (r2 * r2 + r1) % p, (r2 * r1 + r0) % p, (r2 * r0) % p
        a = np.zeros_like(p)
        b = np.ones_like(p)
        c = np.zeros_like(p)
        for i in range(nbits - 2, -1, -1):
            s4 = a * a % p
            s3 = 2 * (a * b % p) % p
            s2 = (2 * (a * c % p) + b * b % p) % p
            s1 = 2 * (b * c % p) % p
            s0 = c * c % p
            a = (s2 + s3 * r2 % p + s4 * t2 % p) % p
            b = (s1 + s3 * r1 % p + s4 * t1 % p) % p
            c = (s0 + s3 * r0 % p + s4 * t0 % p) % p
            bit = (ps[grp] >> i) & 1
            na = (b + a * r2) % p
            nb = (c + a * r1) % p
            nc = a * r0 % p
            a = np.where(bit == 1, na, a)
            b = np.where(bit == 1, nb, b)
            c = np.where(bit == 1, nc, c)
        b = (b - 1) % p  # g = x^p - x  (reduced)
        cnt = np.full(p.shape, -1, dtype=np.int8)
        is0 = (a == 0) & (b == 0)
        cnt[is0 & (c == 0)] = 3
        cnt[is0 & (c != 0)] = 0
        lin = (a == 0) & (b != 0)
        if lin.any():
            bl, cl, pl = b[lin], c[lin], p[lin]
            cc = (-cl) % pl
            e = (
                cc * cc % pl * cc % pl
                + (c2 % pl) * cc % pl * cc % pl * bl % pl
                + (c1 % pl) * cc % pl * bl % pl * bl % pl
                + (c0 % pl) * bl % pl * bl % pl * bl % pl
            ) % pl
            cnt[lin] = np.where(e == 0, 1, 0).astype(np.int8)
        quad = a != 0
        if quad.any():
            aq, bq, cq, pq = a[quad], b[quad], c[quad], p[quad]
            d2 = (aq * ((c2) % pq) % pq - bq) % pq
            d1 = (aq * ((c1) % pq) % pq - cq) % pq
            d0 = aq * ((c0) % pq) % pq
            rr1 = (aq * d1 % pq - d2 * bq % pq) % pq
            rr0 = (aq * d0 % pq - d2 * cq % pq) % pq
            qv = (aq * rr0 % pq * rr0 % pq - bq * rr0 % pq * rr1 % pq + cq * rr1 % pq * rr1 % pq) % pq
            sub = np.where(
                (rr1 == 0) & (rr0 == 0), 2, np.where(rr1 == 0, 0, np.where(qv == 0, 1, 0))
            ).astype(np.int8)
            cnt[quad] = sub
        counts[grp] = cnt
    if (counts < 0).any():
        raise AssertionError("root-count ladder left primes unresolved")
    return counts


# ----------------------------------------------------------------------------
# Dedekind's p-maximality criterion (monic cubic, small p)
# ----------------------------------------------------------------------------

def _poly_mod_factor_cubic(c0, c1, c2, p):
    """Factor the cubic mod p into (root, multiplicity) pairs plus the
    degree of the irreducible non-linear cofactor (0, 2 or 3).  Scan-based."""
    roots = roots_mod_p(c0, c1, c2, p)
    # multiplicity via synthetic division
    coeffs = [1, c2 % p, c1 % p, c0 % p]
    out = []
    for r in roots:
        mult = 0
        cur = coeffs
        while len(cur) > 1:
            # divide by (x - r)
            quot = []
            acc = 0
            for cf in cur[:-1]:
                acc = (acc * r + cf) % p
                quot.append(acc)
            rem = (acc * r + cur[-1]) % p
            if rem != 0:
                break
            mult += 1
            cur = quot
        out.append((r, mult))
    deg_linear = sum(m for _, m in out)
    return out, 3 - deg_linear


def _poly_strip(u, p):
    u = [x % p for x in u]
    while u and u[0] == 0:
        u.pop(0)
    return u


def _poly_rem_mod(u, v, p):
    """Remainder of u by v over F_p (coefficient lists, highest degree first)."""
    u = _poly_strip(u, p)
    v = _poly_strip(v, p)
    if not v:
        raise ZeroDivisionError("division by zero polynomial")
    inv = pow(v[0], p - 2, p)
    while u and len(u) >= len(v):
        coef = u[0] * inv % p
        for i in range(len(v)):
            u[i] = (u[i] - coef * v[i]) % p
        while u and u[0] == 0:
            u.pop(0)
    return u


def _poly_gcd_mod(u, v, p):
    u = _poly_strip(u, p)
    v = _poly_strip(v, p)
    while v:
        u, v = v, _poly_rem_mod(u, v, p)
    return u


def _poly_mul(u, v):
    w = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            w[i + j] += a * b
    return w


def dedekind_p_maximal(c0: int, c1: int, c2: int, p: int) -> bool:
    """True iff p does not divide the index of Z[theta] in the maximal order.

    Dedekind's criterion: with f = prod g_i^{e_i} mod p, g* = prod g_i,
    h* = f / g*, and T = (g* h* - f)/p, the order is p-maximal iff
    gcd(T, g*, h*) = 1 mod p.  Root-scan based, so p <= 10^5.
    """
    if p > 100000:
        raise FieldConfigError(
            f"p-maximality test at p={p} is out of the scan budget; supply an explicit override"
        )
    pairs, codeg = _poly_mod_factor_cubic(c0, c1, c2, p)
    if all(m == 1 for _, m in pairs):
        return True  # squarefree mod p, always p-maximal
    gstar = [1]
    hstar = [1]
    for r, m in pairs:
        gstar = _poly_mul(gstar, [1, -r])
        for _ in range(m - 1):
            hstar = _poly_mul(hstar, [1, -r])
    if codeg:
        # irreducible cofactor (multiplicity 1 inside a cubic) joins g*
        cur = [x % p for x in (1, c2, c1, c0)]
        for r, m in pairs:
            for _ in range(m):
                quot = []
                acc = 0
                for cf in cur[:-1]:
                    acc = (acc * r + cf) % p
                    quot.append(acc)
                cur = quot
        gstar = _poly_mul(gstar, cur)
    gh = _poly_mul(gstar, hstar)
    gh = [0] * (4 - len(gh)) + gh
    full = [1, c2, c1, c0]
    diffs = [u - v for u, v in zip(gh, full)]
    if any(x % p for x in diffs):
        raise AssertionError("Dedekind lift mismatch")
    tbar = [(x // p) % p for x in diffs]
    g = _poly_gcd_mod(_poly_gcd_mod(tbar, gstar, p), hstar, p)
    return len(g) <= 1


# ----------------------------------------------------------------------------
# FieldSpec
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class FieldSpec:
    """Immutable description of a cubic field (or the degree-1 test hook)."""

    name: str
    poly: tuple | None          # (c0, c1, c2) of x^3 + c2 x^2 + c1 x + c0; None for "rationals"
    disc: int                   # discriminant used for d, f, normality
    disc_sqfree_part: int       # d with disc = d * conductor_f^2, d squarefree
    conductor_f: int
    normal: bool
    degree: int = 3
    poly_disc: int = 0          # discriminant of the defining polynomial
    index_divisor_overrides: dict = dataclass_field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "index_divisor_overrides", dict(self.index_divisor_overrides))

    def __hash__(self):
        return hash((self.name, self.poly, self.disc, self.degree))

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and (self.name, self.poly, self.disc, self.degree) == (other.name, other.poly, other.disc, other.degree)
        )

    @property
    def is_rational_hook(self) -> bool:
        return self.degree == 1

    @property
    def complex_places(self) -> int:
        """r2 in the signature (r1, r2); a cubic has one complex place iff
        its discriminant is negative."""
        if self.degree == 1:
            return 0
        return 1 if self.disc < 0 else 0


def _build_cubic(name, c0, c1, c2, disc=None, overrides=None) -> FieldSpec:
    overrides = overrides or {}
    roots = _integer_roots(c0, c1, c2)
    if roots:
        raise FieldConfigError(f"polynomial x^3+{c2}x^2+{c1}x+{c0} is reducible (root {roots[0]})")
    pdisc = discriminant_monic_cubic(c0, c1, c2)
    if pdisc == 0:
        raise FieldConfigError("polynomial has zero discriminant")
    D = pdisc if disc is None else disc
    if disc is not None:
        if disc == 0 or pdisc % disc != 0:
            raise FieldConfigError(f"supplied disc {disc} does not divide the polynomial discriminant {pdisc}")
        q = pdisc // disc
        r = math.isqrt(abs(q))
        if q < 0 or r * r != q:
            raise FieldConfigError(
                f"poly disc / field disc = {q} is not a square; disc {disc} cannot be the field discriminant"
            )
    # validate overrides before the Dedekind sweep so they can silence it
    ov = {}
    for p, st in overrides.items():
        st = st if isinstance(st, SplittingType) else SplittingType(tuple(st))
        if st.degree != 3:
            raise FieldConfigError(f"override at p={p} has total degree {st.degree}, want 3")
        ov[int(p)] = st
    # any index divisor p satisfies p^2 | poly_disc
    n = abs(pdisc)
    cand = set()
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            if k >= 2:
                cand.add(p)
        p += 1 if p == 2 else 2
    for p in sorted(cand):
        if p in ov:
            continue
        if not dedekind_p_maximal(c0, c1, c2, p):
            raise FieldConfigError(
                f"prime {p} divides the index of the generated order; "
                f"an index_divisor_override for p={p} is required"
            )
    d, f = squarefree_decompose(D)
    return FieldSpec(
        name=name,
        poly=(c0, c1, c2),
        disc=D,
        disc_sqfree_part=d,
        conductor_f=f,
        normal=(d == 1),
        degree=3,
        poly_disc=pdisc,
        index_divisor_overrides=ov,
    )


def _build_rationals() -> FieldSpec:
    return FieldSpec(
        name="rationals",
        poly=None,
        disc=1,
        disc_sqfree_part=1,
        conductor_f=1,
        normal=True,
        degree=1,
        poly_disc=1,
    )


@lru_cache(maxsize=None)
def get_preset(name: str) -> FieldSpec:
    if name == "cubic-nonnormal-2":
        return _build_cubic("cubic-nonnormal-2", -2, 0, 0)
    if name == "cubic-cyclic-7":
        return _build_cubic("cubic-cyclic-7", -1, -2, 1)
    if name == "rationals":
        return _build_rationals()
    raise FieldConfigError(f"unknown preset {name!r}; known: {', '.join(preset_names())}")


def preset_names():
    return ("cubic-nonnormal-2", "cubic-cyclic-7", "rationals")


_OVERRIDE_RE = re.compile(r"^override\.(\d+)$")


def parse_field_spec(text: str) -> FieldSpec:
    """Parse a plain key=value field document.

    Keys: name, poly (three ints c0,c1,c2), optional disc, optional
    override.P entries with components written 'f:e' joined by '+'
    (e.g. ``override.2 = 1:1+1:1+1:1`` for a totally split prime).
    """
    kv = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise FieldConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        k, v = line.split("=", 1)
        kv[k.strip()] = v.strip()
    name = kv.pop("name", "unnamed-field")
    if name == "rationals" and "poly" not in kv:
        return _build_rationals()
    if "poly" not in kv:
        raise FieldConfigError("missing poly = c0, c1, c2")
    try:
        coeffs = [int(t) for t in re.split(r"[,\s]+", kv.pop("poly")) if t]
    except ValueError as exc:
        raise FieldConfigError(f"poly coefficients must be integers: {exc}") from None
    if len(coeffs) != 3:
        raise FieldConfigError("poly needs exactly three integers c0, c1, c2")
    disc = None
    if "disc" in kv:
        disc = int(kv.pop("disc"))
    overrides = {}
    for k in list(kv):
        m = _OVERRIDE_RE.match(k)
        if not m:
            raise FieldConfigError(f"unknown key {k!r}")
        p = int(m.group(1))
        comps = []
        for tok in kv.pop(k).split("+"):
            fe = tok.strip().split(":")
            if len(fe) != 2:
                raise FieldConfigError(f"override component {tok!r} is not f:e")
            comps.append((int(fe[0]), int(fe[1])))
        overrides[p] = SplittingType(tuple(comps))
    return _build_cubic(name, coeffs[0], coeffs[1], coeffs[2], disc=disc, overrides=overrides)


def load_field(spec: str) -> FieldSpec:
    """Resolve a preset name, a config file path, or inline config text."""
    if spec in preset_names():
        return get_preset(spec)
    import os

    if os.path.exists(spec):
        with open(spec, "r", encoding="utf-8") as fh:
            return parse_field_spec(fh.read())
    if "=" in spec:
        return parse_field_spec(spec)
    raise FieldConfigError(f"--field {spec!r} is neither a preset, a file, nor config text")


# ----------------------------------------------------------------------------
# splitting queries
# ----------------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):  # deterministic for n < 3.3e24
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def splitting_type(field: FieldSpec, p: int) -> SplittingType:
    """Decomposition shape of the prime p in the field (exact, single prime)."""
    if not _is_prime(p):
        raise FieldConfigError(f"{p} is not prime")
    if field.is_rational_hook:
        return _splitting_from_code(T_RATIONAL)
    if p in field.index_divisor_overrides:
        return field.index_divisor_overrides[p]
    c0, c1, c2 = field.poly
    if p < 2**31:
        nroots = int(_count_roots_vector(c0, c1, c2, np.array([p], dtype=np.int64))[0])
    else:
        nroots = _count_roots_py(c0, c1, c2, p)
    ramified = field.poly_disc % p == 0
    return _splitting_from_code(_code_for(nroots, ramified, p, field))


def _code_for(nroots: int, ramified: bool, p, field) -> int:
    if not ramified:
        if nroots == 3:
            return T_SPLIT
        if nroots == 1:
            return T_PARTIAL
        if nroots == 0:
            return T_INERT
        raise AssertionError(f"unramified prime {p} of {field.name} reports {nroots} roots")
    if nroots == 1:
        return T_RAM_13
    if nroots == 2:
        return T_RAM_112
    raise AssertionError(f"ramified prime {p} of {field.name} reports {nroots} roots")


def splitting_codes(field: FieldSpec, N: int):
    """Splitting-shape codes for every prime p <= N.

    Returns (primes, codes) as aligned int64/int8 arrays.  This is the bulk
    path the sieves use; for a single prime use splitting_type.
    """
    ps = primes_upto(N)
    if field.is_rational_hook:
        return ps, np.full(len(ps), T_RATIONAL, dtype=np.int8)
    c0, c1, c2 = field.poly
    counts = _count_roots_vector(c0, c1, c2, ps) if len(ps) else np.empty(0, np.int8)
    codes = np.empty(len(ps), dtype=np.int8)
    overridden = np.zeros(len(ps), dtype=bool)
    for p, st in field.index_divisor_overrides.items():
        if p <= N:
            idx = int(np.searchsorted(ps, p))
            codes[idx] = _code_from_splitting(st)
            overridden[idx] = True
    ram = np.zeros(len(ps), dtype=bool)
    for q in _prime_factors(abs(field.poly_disc)):
        idx = np.searchsorted(ps, q)
        if idx < len(ps) and ps[idx] == q:
            ram[idx] = True
    un = ~ram & ~overridden
    ram &= ~overridden
    codes[un & (counts == 3)] = T_SPLIT
    codes[un & (counts == 1)] = T_PARTIAL
    codes[un & (counts == 0)] = T_INERT
    codes[ram & (counts == 1)] = T_RAM_13
    codes[ram & (counts == 2)] = T_RAM_112
    bad = (un & (counts == 2)) | (ram & ((counts == 0) | (counts == 3)))
    if bad.any():
        raise AssertionError(f"inconsistent factorization at p={ps[bad][0]} for {field.name}")
    return ps, codes


def _prime_factors(n: int):
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out.append(m)
    return out


# ----------------------------------------------------------------------------
# local ideal counts
# ----------------------------------------------------------------------------

def local_ideal_counts(f_shape, kmax: int):
    """Number of ideals of norm p^k above p, k = 0..kmax: the number of
    nonnegative solutions of sum f_i x_i = k for the residue degrees f_i."""
    out = [0] * (kmax + 1)
    out[0] = 1
    for f in f_shape:
        for k in range(f, kmax + 1):
            out[k] += out[k - f]
    return out


def local_aK(field: FieldSpec, p: int, kmax: int):
    """a_K(p^k) for k = 0..kmax, from the splitting of p."""
    if kmax < 0:
        raise ValueError("kmax must be >= 0")
    st = splitting_type(field, p)
    return local_ideal_counts(st.f_shape, kmax)
