"""Exact ideal arithmetic in the factored representation.

An integral ideal is stored as its factorization over labeled prime ideals;
that is all the Ramanujan-sum machinery ever needs: norms are multiplicative
over the factorization, divisibility / gcd / lcm are componentwise on
exponents, and the ideal Moebius function is

    mu(I) = 0          if some P^2 | I,
    mu(I) = (-1)^r     if I is a product of r distinct prime ideals.

The field Ramanujan sum is

    c_J(I) = sum_{M | I, M | J} N(M) mu(J/M)

and its sum over all I of norm <= Y collapses through the divisor structure:

    sum_{N(I)<=Y} c_J(I) = sum_{M | J} N(M) mu(J/M) A_K(Y / N(M)),

which ties the ideal level to the sieved prefix sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .arith import ArithTables, partial_A
from .fieldspec import FieldSpec, splitting_codes, splitting_type

__all__ = [
    "PrimeIdealLabel",
    "FactoredIdeal",
    "IdealError",
    "labels_above",
    "enumerate_ideals",
    "ideal_norm",
    "ideal_gcd",
    "ideal_mul",
    "ideal_divide",
    "ideal_mobius",
    "ramanujan_ideal",
    "sum_cJ_over_I",
    "random_factored_ideal",
    "ideals_to_csv",
]

_NORM_LIMIT = 2**63 - 1


class IdealError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class PrimeIdealLabel:
    """One prime ideal above p, identified positionally.

    index is 0-based among the primes above p, ordered by residue degree f,
    then ramification exponent e (a fixed arbitrary tie-break), so labels are
    stable across runs.
    """

    p: int
    index: int
    f: int
    e: int

    @property
    def norm(self) -> int:
        return self.p**self.f

    def __str__(self):
        return f"P({self.p},{self.index};f={self.f},e={self.e})"


@lru_cache(maxsize=None)
def labels_above(field: FieldSpec, p: int) -> tuple:
    st = splitting_type(field, p)
    return _labels_from_components(p, st.components)


def _labels_from_components(p: int, comps) -> tuple:
    comps = sorted(comps)  # (f, e) ascending fixes the index assignment
    return tuple(PrimeIdealLabel(p=p, index=i, f=f, e=e) for i, (f, e) in enumerate(comps))


@lru_cache(maxsize=8)
def _labels_upto(field: FieldSpec, B: int) -> tuple:
    """Labels of all prime ideals of norm <= B via the bulk splitting path."""
    from .fieldspec import _COMPONENTS  # shared shape table

    ps, codes = splitting_codes(field, B)
    out = []
    for p, c in zip(ps.tolist(), codes.tolist()):
        for lab in _labels_from_components(int(p), _COMPONENTS[c]):
            if lab.norm <= B:
                out.append(lab)
    return tuple(out)


@dataclass(frozen=True)
class FactoredIdeal:
    """Integral ideal as a sorted tuple of (PrimeIdealLabel, exponent >= 1)."""

    factors: tuple = ()

    def __post_init__(self):
        facs = tuple(sorted((lab, int(e)) for lab, e in self.factors))
        labs = [lab for lab, _ in facs]
        if len(set(labs)) != len(labs):
            raise IdealError("repeated prime ideal label in factorization")
        if any(e < 1 for _, e in facs):
            raise IdealError("exponents must be >= 1")
        object.__setattr__(self, "factors", facs)
        n = 1
        for lab, e in facs:
            n *= lab.norm**e
            if n > _NORM_LIMIT:
                raise IdealError("ideal norm exceeds 64 bits")
        object.__setattr__(self, "_norm", n)

    @property
    def norm(self) -> int:
        return self._norm

    @property
    def is_unit(self) -> bool:
        return not self.factors

    def exponent(self, lab: PrimeIdealLabel) -> int:
        for l2, e in self.factors:
            if l2 == lab:
                return e
        return 0

    def __str__(self):
        return self.label_string()

    def label_string(self) -> str:
        """Deterministic factorization string "p^e(f)*..." used by CSV export."""
        if not self.factors:
            return "(1)"
        parts = []
        for lab, e in self.factors:
            tick = "'" * lab.index
            parts.append(f"{lab.p}{tick}^{e}(f{lab.f})")
        return "*".join(parts)


UNIT_IDEAL = FactoredIdeal()


def ideal_norm(I: FactoredIdeal) -> int:
    return I.norm


def ideal_gcd(I: FactoredIdeal, J: FactoredIdeal) -> FactoredIdeal:
    ej = dict(J.factors)
    out = []
    for lab, e in I.factors:
        if lab in ej:
            out.append((lab, min(e, ej[lab])))
    return FactoredIdeal(tuple(out))


def ideal_mul(I: FactoredIdeal, J: FactoredIdeal) -> FactoredIdeal:
    acc = dict(I.factors)
    for lab, e in J.factors:
        acc[lab] = acc.get(lab, 0) + e
    return FactoredIdeal(tuple(acc.items()))


def ideal_divide(J: FactoredIdeal, M: FactoredIdeal) -> FactoredIdeal:
    """J / M for M | J (componentwise); raises if M does not divide J."""
    acc = dict(J.factors)
    for lab, e in M.factors:
        have = acc.get(lab, 0)
        if have < e:
            raise IdealError(f"{M} does not divide {J} at {lab}")
        if have == e:
            del acc[lab]
        else:
            acc[lab] = have - e
    return FactoredIdeal(tuple(acc.items()))


def ideal_mobius(I: FactoredIdeal) -> int:
    if any(e >= 2 for _, e in I.factors):
        return 0
    return -1 if len(I.factors) % 2 else 1


def _divisors(I: FactoredIdeal):
    """All divisors of I (factored), deterministic order."""
    divs = [()]
    for lab, e in I.factors:
        divs = [d + ((lab, k),) if k else d for d in divs for k in range(e + 1)]
    return [FactoredIdeal(d) for d in divs]


def ramanujan_ideal(field: FieldSpec, J: FactoredIdeal, I: FactoredIdeal) -> int:
    """c_J(I) = sum over M | gcd(I, J) of N(M) mu(J/M), exact."""
    _check_field(field, J)
    _check_field(field, I)
    g = ideal_gcd(I, J)
    total = 0
    for M in _divisors(g):
        total += M.norm * ideal_mobius(ideal_divide(J, M))
    return total


def sum_cJ_over_I(field: FieldSpec, tables: ArithTables, J: FactoredIdeal, Y) -> int:
    """sum_{N(I) <= Y} c_J(I) via the divisor collapse to A_K.

    Requires tables long enough for every A_K(Y / N(M)), M | J.
    """
    _check_field(field, J)
    if Y < 1:
        return 0
    total = 0
    for M in _divisors(J):
        t = int(Y // M.norm) if isinstance(Y, int) else math.floor(Y / M.norm)
        if t > tables.N:
            raise IdealError(f"tables too short: need A_K({t}) but N={tables.N}")
        total += M.norm * ideal_mobius(ideal_divide(J, M)) * partial_A(tables, t)
    return total


def _check_field(field: FieldSpec, I: FactoredIdeal) -> None:
    for lab, _ in I.factors:
        if lab not in labels_above(field, lab.p):
            raise IdealError(f"label {lab} does not belong to field {field.name}")


# ----------------------------------------------------------------------------
# enumeration
# ----------------------------------------------------------------------------

ENUM_BUDGET = 10**6


def enumerate_ideals(field: FieldSpec, B: int):
    """All integral ideals of norm <= B, each exactly once, sorted by
    (norm, factorization string).  The histogram by norm must reproduce the
    sieved a_K table entrywise; that equivalence is the module's master test.
    """
    if not 1 <= B <= ENUM_BUDGET:
        raise IdealError(f"B={B} outside 1..{ENUM_BUDGET}")
    all_labels = _labels_upto(field, B)
    out = []

    def extend(i, current, norm):
        out.append(FactoredIdeal(tuple(current)))
        for j in range(i, len(all_labels)):
            lab = all_labels[j]
            if lab.p * norm > B:
                break  # labels ascend in p, so nothing later fits either
            q = lab.norm
            if norm * q > B:
                continue  # a degree-2 label may fail while later p^1 labels fit
            e = 1
            n2 = norm * q
            while n2 <= B:
                current.append((lab, e))
                extend(j + 1, current, n2)
                current.pop()
                e += 1
                n2 *= q
    extend(0, [], 1)
    out.sort(key=lambda I: (I.norm, I.label_string()))
    return out


def histogram_by_norm(ideals, B: int) -> np.ndarray:
    h = np.zeros(B + 1, dtype=np.int64)
    for I in ideals:
        if I.norm <= B:
            h[I.norm] += 1
    return h


def ideals_to_csv(ideals, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("norm,factorization\n")
        for I in ideals:
            fh.write(f"{I.norm},{I.label_string()}\n")


def random_factored_ideal(field: FieldSpec, rng, norm_bound: int) -> FactoredIdeal:
    """Seeded random ideal with norm <= norm_bound (for property checks)."""
    if norm_bound < 1:
        raise IdealError("norm_bound must be >= 1")
    pool = _labels_upto(field, norm_bound)
    current = {}
    norm = 1
    for _ in range(rng.randrange(0, 6)):
        lab = pool[rng.randrange(len(pool))]
        if norm * lab.norm > norm_bound:
            continue
        norm *= lab.norm
        current[lab] = current.get(lab, 0) + 1
    return FactoredIdeal(tuple(current.items()))
