"""Sieved arithmetic functions attached to a cubic field.

For a field K the tables hold, for 1 <= n <= N,

    a_K(n)   number of integral ideals of O_K of norm n
             (Dirichlet coefficients of the Dedekind zeta function),
    mu_K(n)  coefficients of 1/zeta_K  (Dirichlet inverse of a_K),
    b(n)     coefficients of zeta_K/zeta, so a_K = 1 * b  (Dirichlet product),

together with prefix sums A_K(x) = sum_{n<=x} a_K(n) and
M_K(x) = sum_{n<=x} mu_K(n).  All three functions are multiplicative and
their values at prime powers depend only on the splitting shape of p, so a
single pass over primes fills all tables:

    a_K(p^k) = #{x_i >= 0 : sum f_i x_i = k},
    mu_K(p^k) = [t^k] prod_i (1 - t^{f_i}),
    b(p^k)   = a_K(p^k) - a_K(p^{k-1}).

A_K(x) = rho_K x + P_K(x) with rho_K the residue of zeta_K at s = 1; the
residue is estimated numerically two independent ways (Cesaro-averaged
partial sums of sum b(m)/m, and a regression of A_K on x) which must agree
within 3 combined standard errors.

Everything here is exact integer arithmetic except the rho estimates;
overflow of the 64-bit prefix sums is detected up front and aborts.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .fieldspec import (
    F_SHAPES,
    FieldSpec,
    local_ideal_counts,
    primes_upto,
    splitting_codes,
)

__all__ = [
    "ArithTables",
    "RhoEstimate",
    "ArithError",
    "RhoDisagreement",
    "build_tables",
    "partial_A",
    "partial_M",
    "error_P",
    "estimate_rho",
    "classical_ramanujan",
    "mobius",
    "factorize",
    "mobius_sieve",
    "tau_power_sum",
    "tau_table",
    "tau4_cuberoot_pair_sum",
    "write_tables",
    "read_tables",
    "export_csv",
    "convolution_identity_failure",
    "b_sum_identity_failure",
    "b_growth_statistic",
    "cubic_character",
    "b_from_cubic_character",
    "L1_cubic_character",
]

N_BUDGET = 10**8  # ~2.4 GB for the three value tables alone; prefixes double it

SEGMENT = 1 << 22


class ArithError(RuntimeError):
    pass


class RhoDisagreement(ArithError):
    """The two rho_K estimators moved apart by more than 3 combined stderr."""


# ----------------------------------------------------------------------------
# multiplicative sieve engine
# ----------------------------------------------------------------------------

def _local_tables(codes_present, kmax):
    """Per splitting shape: a_K, mu_K and b at p^0..p^kmax."""
    out = {}
    for code in codes_present:
        shape = F_SHAPES[code]
        a = local_ideal_counts(shape, kmax)
        mu = [0] * (kmax + 1)
        mu[0] = 1
        for f in shape:
            for k in range(kmax, f - 1, -1):
                mu[k] -= mu[k - f]
        b = [1] + [a[k] - a[k - 1] for k in range(1, kmax + 1)]
        out[code] = (a, mu, b)
    return out


def _fill_block(arrays, scalars_k1, small, lo, hi):
    """Multiply local values into arrays over the index window [lo, hi).

    arrays: list of int64 numpy arrays of length N+1 prefilled with ones.
    scalars_k1: per-array list of per-prime k=1 local values (python lists),
        aligned with the prime list; used for primes with p^2 > N.
    small: list of (p, k, pk, per-array scalars) for prime powers p^k with
        p^2 <= N, where exact-power masking is required.
    """
    ps_list, vals_lists = scalars_k1
    for i, p in enumerate(ps_list):
        start = p * max(1, -(-lo // p))
        if start >= hi:
            continue
        sl = slice(start, hi, p)
        for arr, vals in zip(arrays, vals_lists):
            v = vals[i]
            if v != 1:
                arr[sl] *= v
    for p, k, pk, vs in small:
        start = pk * max(1, -(-lo // pk))
        if start >= hi:
            continue
        idx = np.arange(start, hi, pk, dtype=np.int64)
        keep = (idx // pk) % p != 0
        if not keep.all():
            idx = idx[keep]
        for arr, v in zip(arrays, vs):
            if v != 1:
                arr[idx] *= v


def _sieve_multiplicative(N, ps, codes, locals_by_code, n_funcs, threads=1):
    """Fill n_funcs multiplicative tables of length N+1 (index 0 zeroed)."""
    arrays = [np.ones(N + 1, dtype=np.int64) for _ in range(n_funcs)]
    sq = math.isqrt(N)
    ps_list = ps.tolist()
    codes_list = codes.tolist()
    split_at = int(np.searchsorted(ps, sq + 1))
    # large primes: only k=1 matters and every multiple is an exact power
    big_ps = ps_list[split_at:]
    big_vals = [
        [locals_by_code[c][j][1] for c in codes_list[split_at:]] for j in range(n_funcs)
    ]
    small = []
    for i in range(split_at):
        p = ps_list[i]
        c = codes_list[i]
        pk = p
        k = 1
        while pk <= N:
            small.append((p, k, pk, [locals_by_code[c][j][k] for j in range(n_funcs)]))
            pk *= p
            k += 1
    blocks = [(lo, min(lo + SEGMENT, N + 1)) for lo in range(1, N + 1, SEGMENT)]
    if threads > 1 and len(blocks) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(
                pool.map(
                    lambda blk: _fill_block(arrays, (big_ps, big_vals), small, blk[0], blk[1]),
                    blocks,
                )
            )
    else:
        for lo, hi in blocks:
            _fill_block(arrays, (big_ps, big_vals), small, lo, hi)
    for arr in arrays:
        arr[0] = 0
    return arrays


# ----------------------------------------------------------------------------
# tables
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class ArithTables:
    """Frozen value tables for one field; arrays are read-only views."""

    field_name: str
    N: int
    aK: np.ndarray
    muK: np.ndarray
    b: np.ndarray
    A_prefix: np.ndarray
    M_prefix: np.ndarray


def _freeze(arr):
    arr.setflags(write=False)
    return arr


def _guard_prefix_overflow(aK, muK):
    # detect before wrapping: float estimates of the extreme prefix values
    a_est = float(np.sum(aK, dtype=np.float64))
    m_est = float(np.sum(np.abs(muK), dtype=np.float64))
    if a_est > 2.0**62 or m_est > 2.0**62:
        raise ArithError(
            f"prefix sums would overflow int64 (estimates {a_est:.3g}, {m_est:.3g}); "
            "aborting instead of wrapping"
        )


def build_tables(field: FieldSpec, N: int, threads: int = 1) -> ArithTables:
    """Sieve a_K, mu_K, b up to N and attach prefix sums."""
    if not 1 <= N <= N_BUDGET:
        raise ArithError(f"N={N} outside the supported range 1..{N_BUDGET}")
    ps, codes = splitting_codes(field, N)
    kmax = max(1, N.bit_length())
    locs = _local_tables(set(codes.tolist()), kmax)
    aK, muK, b = _sieve_multiplicative(N, ps, codes, locs, 3, threads=threads)
    _guard_prefix_overflow(aK, muK)
    A_prefix = np.cumsum(aK)
    M_prefix = np.cumsum(muK)
    if A_prefix[-1] < 0 or (N >= 1 and int(A_prefix[0]) != 0):
        raise ArithError("prefix sum overflow detected")
    return ArithTables(
        field_name=field.name,
        N=N,
        aK=_freeze(aK),
        muK=_freeze(muK),
        b=_freeze(b),
        A_prefix=_freeze(A_prefix),
        M_prefix=_freeze(M_prefix),
    )


def partial_A(tables: ArithTables, x) -> int:
    """A_K(x) = sum_{n <= x} a_K(n)."""
    if x < 0 or x > tables.N:
        raise ArithError(f"x={x} outside table range 0..{tables.N}")
    return int(tables.A_prefix[int(x)])


def partial_M(tables: ArithTables, x) -> int:
    """M_K(x) = sum_{n <= x} mu_K(n)."""
    if x < 0 or x > tables.N:
        raise ArithError(f"x={x} outside table range 0..{tables.N}")
    return int(tables.M_prefix[int(x)])


def error_P(tables: ArithTables, rho: "RhoEstimate", x) -> float:
    """P_K(x) = A_K(x) - rho_K x, the ideal-count error term."""
    return partial_A(tables, x) - rho.value * x


# ----------------------------------------------------------------------------
# rho_K estimation
# ----------------------------------------------------------------------------

@dataclass(frozen=True)
class RhoEstimate:
    value: float
    stderr: float
    method: str
    B: int

    def __post_init__(self):
        if self.value <= 0:
            raise ArithError(f"rho estimate {self.value} is not positive")
        if self.stderr < 0:
            raise ArithError("stderr must be >= 0")


def _rho_series(tables: ArithTables, B: int) -> RhoEstimate:
    # partial sums of sum b(m)/m tend to the residue; average over [B/2, B]
    m = np.arange(1, B + 1, dtype=np.float64)
    s = np.cumsum(tables.b[1 : B + 1] / m)
    window = s[B // 2 - 1 :]
    value = float(np.mean(window))
    stderr = float(np.std(window, ddof=1)) if len(window) > 1 else 0.0
    return RhoEstimate(value=value, stderr=stderr, method="series_b_over_m", B=B)


def _rho_regression(tables: ArithTables, B: int) -> RhoEstimate:
    xs = np.unique(np.geomspace(max(8, B // 8), B, 33).astype(np.int64))
    a = tables.A_prefix[xs].astype(np.float64)
    x = xs.astype(np.float64)
    sxx = float(np.dot(x, x))
    value = float(np.dot(x, a) / sxx)
    resid = a - value * x
    dof = max(1, len(xs) - 1)
    stderr = float(math.sqrt(np.dot(resid, resid) / dof / sxx))
    return RhoEstimate(value=value, stderr=stderr, method="regression_on_A", B=B)


def estimate_rho(field: FieldSpec, tables: ArithTables, B: int, method: str = "series_b_over_m") -> RhoEstimate:
    """Estimate rho_K from the tables; both methods are run and cross-checked.

    Raises RhoDisagreement when the series and regression values differ by
    more than 3 combined standard errors (never silently averaged).
    """
    if B < 10**3:
        raise ArithError(f"B={B} too small; need B >= 1000")
    if B > tables.N:
        raise ArithError(f"B={B} exceeds table length {tables.N}")
    ser = _rho_series(tables, B)
    reg = _rho_regression(tables, B)
    tol = 3.0 * math.hypot(ser.stderr, reg.stderr)
    if abs(ser.value - reg.value) > max(tol, 1e-12):
        raise RhoDisagreement(
            f"rho estimators disagree: series {ser.value:.8f} (+-{ser.stderr:.2g}) vs "
            f"regression {reg.value:.8f} (+-{reg.stderr:.2g}), tolerance {tol:.2g}"
        )
    if method == "series_b_over_m":
        return ser
    if method == "regression_on_A":
        return reg
    raise ArithError(f"unknown rho method {method!r}")


# ----------------------------------------------------------------------------
# classical (rational) arithmetic helpers
# ----------------------------------------------------------------------------

def factorize(n: int) -> dict:
    """Prime factorization by trial division; fine for the desk-scale inputs."""
    if n < 1:
        raise ValueError("factorize needs n >= 1")
    out = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            out[p] = out.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int):
    ds = [1]
    for p, e in factorize(n).items():
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return sorted(ds)


def classical_ramanujan(m: int, n: int) -> int:
    """c_m(n) = sum_{d | gcd(m,n)} d mu(m/d), exact."""
    if m < 1 or n < 1:
        raise ValueError("classical_ramanujan needs m, n >= 1")
    g = math.gcd(m, n)
    return sum(d * mobius(m // d) for d in divisors(g))


def mobius_sieve(n: int) -> np.ndarray:
    mu = np.ones(n + 1, dtype=np.int64)
    for p in primes_upto(n).tolist():
        mu[p::p] *= -1
        pp = p * p
        if pp <= n:
            mu[pp::pp] = 0
    mu[0] = 0
    return mu


# ----------------------------------------------------------------------------
# divisor-power sums
# ----------------------------------------------------------------------------

TAU_BUDGET = 10**8


@lru_cache(maxsize=8)
def tau_table(l: int, n: int) -> np.ndarray:
    """tau_l(1..n) as an int64 array (tau_l = number of ordered l-factorizations)."""
    if l < 2:
        raise ValueError("tau_l needs l >= 2")
    if not 1 <= n <= TAU_BUDGET:
        raise ArithError(f"tau table length {n} outside 1..{TAU_BUDGET}")
    ps = primes_upto(n)
    codes = np.zeros(len(ps), dtype=np.int8)
    kmax = max(1, n.bit_length())
    loc = {0: (local_ideal_counts((1,) * l, kmax),)}
    (t,) = _sieve_multiplicative(n, ps, codes, loc, 1)
    return _freeze(t)


def tau_power_sum(l: int, q: int, x: int) -> int:
    """Exact sum_{n <= x} tau_l(n)^q."""
    if l < 2 or q < 1:
        raise ValueError("need l >= 2 and q >= 1")
    t = tau_table(l, int(x))
    vals = t[1 : int(x) + 1]
    mx = int(vals.max()) if len(vals) else 0
    if mx**q * len(vals) < 2**63 - 1:
        return int(np.sum(vals**q, dtype=np.int64))
    return sum(int(v) ** q for v in vals.tolist())  # exact fallback, rare


def _pair_partials_numpy(g, c, out):
    T = len(g) - 1
    block = max(1, (1 << 22) // max(1, T))
    for n0 in range(2, T + 1, block):
        n1 = min(n0 + block, T + 1)
        for n in range(n0, n1):
            out[n] = g[n] * float(np.dot(g[1:n], 1.0 / (c[n] - c[1:n])))


@lru_cache(maxsize=1)
def _numba_pair_kernel():
    try:
        import numba
    except ImportError:
        return None

    @numba.njit(parallel=True, cache=False)
    def kernel(g, c, out):  # pragma: no cover - compiled
        T = len(g) - 1
        for n in numba.prange(2, T + 1):
            cn = c[n]
            s = 0.0
            for m in range(1, n):
                s += g[m] / (cn - c[m])
            out[n] = g[n] * s

    return kernel


def tau4_cuberoot_pair_sum(T: int) -> float:
    """sum over m != n <= T of tau_4(m)^2 tau_4(n)^2 / ((mn)^{2/3} |m^{1/3} - n^{1/3}|).

    The off-diagonal pair sum that controls interference between cube-root
    oscillation frequencies.  Full O(T^2) pair enumeration; the values feed a
    growth-exponent fit (expected well below T^{1/3+eps} slopes).
    """
    if not 2 <= T <= 10**5:
        raise ArithError(f"T={T} outside the supported range 2..1e5")
    t4 = tau_table(4, T)[: T + 1].astype(np.float64)
    k = np.arange(T + 1, dtype=np.float64)
    c = np.cbrt(k)
    g = np.zeros(T + 1, dtype=np.float64)
    g[1:] = t4[1:] ** 2 / k[1:] ** (2.0 / 3.0)
    out = np.zeros(T + 1, dtype=np.float64)
    kernel = _numba_pair_kernel()
    if kernel is not None and T > 2000:
        kernel(g, c, out)
    else:
        _pair_partials_numpy(g, c, out)
    return 2.0 * math.fsum(out.tolist())


# ----------------------------------------------------------------------------
# identity checks (shared by the verify suite and the tests)
# ----------------------------------------------------------------------------

def convolution_identity_failure(tables: ArithTables, nmax: int):
    """First n <= nmax with (a_K * mu_K)(n) != [n == 1], or None."""
    nmax = min(nmax, tables.N)
    conv = np.zeros(nmax + 1, dtype=np.int64)
    aK = tables.aK
    muK = tables.muK
    for d in range(1, nmax + 1):
        ad = aK[d]
        if ad:
            conv[d::d] += ad * muK[1 : nmax // d + 1]
    if conv[1] != 1:
        return 1
    bad = np.nonzero(conv[2:])[0]
    return int(bad[0]) + 2 if len(bad) else None


def b_sum_identity_failure(tables: ArithTables, nmax: int):
    """First n <= nmax with sum_{m|n} b(m) != a_K(n), or None."""
    nmax = min(nmax, tables.N)
    acc = np.zeros(nmax + 1, dtype=np.int64)
    b = tables.b
    for m in range(1, nmax + 1):
        bm = b[m]
        if bm:
            acc[m::m] += bm
    bad = np.nonzero(acc[1:] != tables.aK[1 : nmax + 1])[0]
    return int(bad[0]) + 1 if len(bad) else None


def b_growth_statistic(tables: ArithTables, exponent: float = 0.1) -> float:
    """max |b(m)| / m^exponent over the table (reported, not asserted)."""
    m = np.arange(1, tables.N + 1, dtype=np.float64)
    return float(np.max(np.abs(tables.b[1:]) / m**exponent))


# ----------------------------------------------------------------------------
# cubic Dirichlet character (prime conductor), exact in Z[omega]
# ----------------------------------------------------------------------------

def _eis_mul(a, b):
    # (u1 + v1 w)(u2 + v2 w) with w^2 = -1 - w
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0] - a[1] * b[1])


def _eis_conj(a):
    return (a[0] - a[1], -a[1])


@lru_cache(maxsize=4)
def cubic_character(f: int):
    """The cubic residue character mod a prime conductor f = 1 (mod 3).

    Returns a tuple of f Eisenstein pairs (u, v) meaning chi(r) = u + v*omega,
    omega = e^{2 pi i/3}; chi(r) = omega^{ind_g(r) mod 3} for a generator g.
    Conjugating the character (the other choice of omega) gives the same
    two-character product b = chi * conj(chi).
    """
    if f < 3 or any(f % q == 0 for q in range(2, math.isqrt(f) + 1)) or f % 3 != 1:
        raise ArithError(f"conductor {f} is not a prime = 1 mod 3")
    # find a generator of (Z/f)*
    order_facs = factorize(f - 1)
    g = None
    for cand in range(2, f):
        if all(pow(cand, (f - 1) // q, f) != 1 for q in order_facs):
            g = cand
            break
    assert g is not None
    omega_pow = [(1, 0), (0, 1), (-1, -1)]
    vals = [(0, 0)] * f
    acc = 1
    for j in range(f - 1):
        vals[acc] = omega_pow[j % 3]
        acc = acc * g % f
    return tuple(vals)


def b_from_cubic_character(f: int, nmax: int) -> np.ndarray:
    """b(n) = sum_{xy = n} chi(x) conj(chi)(y), exact in Z[omega]; must be real."""
    chi = cubic_character(f)
    U = np.zeros(nmax + 1, dtype=np.int64)
    V = np.zeros(nmax + 1, dtype=np.int64)
    for x in range(1, nmax + 1):
        cx = chi[x % f]
        if cx == (0, 0):
            continue
        for n in range(x, nmax + 1, x):
            cy = _eis_conj(chi[(n // x) % f])
            u, v = _eis_mul(cx, cy)
            U[n] += u
            V[n] += v
    if np.any(V[1:]):
        raise ArithError("character convolution produced a non-real value")
    return U


def L1_cubic_character(f: int, terms: int = 10**6) -> complex:
    """L(1, chi) by direct series over a whole number of periods."""
    chi = cubic_character(f)
    omega = complex(-0.5, math.sqrt(3) / 2)
    cvals = np.array([u + v * omega for (u, v) in chi], dtype=np.complex128)
    terms -= terms % f  # complete periods keep the tail O(f/terms)
    n = np.arange(1, terms + 1)
    return complex(np.sum(cvals[n % f] / n))


# ----------------------------------------------------------------------------
# table file I/O
# ----------------------------------------------------------------------------

_MAGIC = b"CBSM"
_VERSION = 1


def write_tables(tables: ArithTables, path) -> None:
    """Flat binary dump: header (magic, version, field name, N) then the
    little-endian int64 arrays a_K, mu_K, b for n = 1..N."""
    name = tables.field_name.encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<II", _VERSION, len(name)))
        fh.write(name)
        fh.write(struct.pack("<Q", tables.N))
        for arr in (tables.aK, tables.muK, tables.b):
            fh.write(arr[1:].astype("<i8").tobytes())


def read_tables(path) -> ArithTables:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise ArithError(f"{path}: not a table file (bad magic)")
        version, namelen = struct.unpack("<II", fh.read(8))
        if version != _VERSION:
            raise ArithError(f"{path}: unsupported table version {version}")
        name = fh.read(namelen).decode("utf-8")
        (N,) = struct.unpack("<Q", fh.read(8))
        payload = fh.read()
    want = 3 * 8 * N
    if len(payload) != want:
        raise ArithError(f"{path}: truncated table file ({len(payload)} != {want} bytes)")
    arrs = []
    for j in range(3):
        flat = np.frombuffer(payload, dtype="<i8", count=N, offset=j * 8 * N).astype(np.int64)
        arr = np.zeros(N + 1, dtype=np.int64)
        arr[1:] = flat
        arrs.append(arr)
    aK, muK, b = arrs
    _guard_prefix_overflow(aK, muK)
    return ArithTables(
        field_name=name,
        N=int(N),
        aK=_freeze(aK),
        muK=_freeze(muK),
        b=_freeze(b),
        A_prefix=_freeze(np.cumsum(aK)),
        M_prefix=_freeze(np.cumsum(muK)),
    )


def export_csv(tables: ArithTables, path, nmax: int = 10**4) -> None:
    nmax = min(nmax, tables.N)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("n,aK,muK,b,A,M\n")
        for n in range(1, nmax + 1):
            fh.write(
                f"{n},{tables.aK[n]},{tables.muK[n]},{tables.b[n]},"
                f"{tables.A_prefix[n]},{tables.M_prefix[n]}\n"
            )
