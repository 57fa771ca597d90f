"""Arithmetic-function coefficients, divisor sums, and weighted divisor
convolutions.

A coefficient family a(n) is either a named builtin (mobius, liouville,
von_mangoldt, unit, delta) or an explicit finite table.  Batch values are
computed by sieves that visit each (divisor, multiple) pair once; single
values by factorization.  Rational-valued kinds are kept in exact
``Fraction`` arithmetic so the expansion identity can be tested exactly;
von_mangoldt is float-valued.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import CapacityError, ConvergenceMetadataError, DivergenceWarning, DomainError

__all__ = [
    "ArithmeticCoefficients",
    "ConvolutionTable",
    "DirichletSeriesView",
    "DirichletValue",
    "coeff",
    "coefficient_values",
    "divisor_sum_table",
    "fk_table",
    "dirichlet_value",
    "load_table",
]

BUILTIN_KINDS = ("mobius", "liouville", "von_mangoldt", "unit", "delta")

# sieve budgets: float arrays are cheap, Fraction lists are not
MAX_FLOAT_M = 50_000_000
MAX_EXACT_M = 400_000


@dataclass(frozen=True)
class ArithmeticCoefficients:
    """A coefficient family a(n).

    ``table`` is only set for kind="table"; ``support_bound`` is the
    largest n with a(n) != 0 when the support is finite, else None;
    ``abscissa_hint`` is a Re(s) beyond which sum a(n) n^-s converges
    absolutely, when known.
    """

    kind: str
    table: Mapping[int, Fraction] | None = None
    support_bound: int | None = None
    abscissa_hint: float | None = None

    def __post_init__(self):
        if self.kind == "table":
            if not self.table:
                raise DomainError("table kind requires at least one entry")
            entries = {}
            for n, v in self.table.items():
                n = int(n)
                if n < 1:
                    raise DomainError(f"table index {n} must be >= 1")
                if n in entries:
                    raise DomainError(f"duplicate table index {n}")
                entries[n] = v if isinstance(v, Fraction) else Fraction(v)
            support = max((n for n, v in entries.items() if v != 0), default=1)
            object.__setattr__(self, "table", dict(entries))
            object.__setattr__(self, "support_bound", support)
            object.__setattr__(self, "abscissa_hint", 0.0)
        elif self.kind == "delta":
            object.__setattr__(self, "support_bound", 1)
            object.__setattr__(self, "abscissa_hint", 0.0)
        elif self.kind in BUILTIN_KINDS:
            object.__setattr__(self, "abscissa_hint", 1.0)
        else:
            raise DomainError(f"unknown coefficient kind {self.kind!r}")

    @classmethod
    def builtin(cls, kind: str) -> "ArithmeticCoefficients":
        if kind not in BUILTIN_KINDS:
            raise DomainError(f"unknown builtin kind {kind!r}")
        return cls(kind=kind)

    @classmethod
    def from_table(cls, entries: Mapping[int, Fraction]) -> "ArithmeticCoefficients":
        return cls(kind="table", table=dict(entries))

    @property
    def finitely_supported(self) -> bool:
        return self.support_bound is not None

    @property
    def is_rational(self) -> bool:
        """Rational-valued kinds support exact Fraction tables."""
        return self.kind != "von_mangoldt"


def load_table(path) -> ArithmeticCoefficients:
    """Read a coefficient table from plain text.

    One entry per line as ``n<TAB>value`` where value is a decimal or a
    ``p/q`` rational; lines starting with '#' are ignored.
    """
    entries: dict[int, Fraction] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t") if "\t" in line else line.split()
        if len(parts) != 2:
            raise DomainError(f"{path}:{lineno}: expected 'n<TAB>value', got {raw!r}")
        try:
            n = int(parts[0])
            value = Fraction(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"{path}:{lineno}: {exc}") from exc
        if n < 1:
            raise DomainError(f"{path}:{lineno}: index must be >= 1")
        if n in entries:
            raise DomainError(f"{path}:{lineno}: duplicate index {n}")
        entries[n] = value
    return ArithmeticCoefficients.from_table(entries)


# ---------------------------------------------------------------------------
# single values by factorization
# ---------------------------------------------------------------------------

def _factorize(n: int) -> list[tuple[int, int]]:
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    return out


def coeff(a: ArithmeticCoefficients, n: int):
    """a(n) for a single index; Fraction for rational kinds, float for
    von_mangoldt."""
    if n < 1:
        raise DomainError(f"coefficient index must be >= 1, got {n}")
    if a.kind == "table":
        return a.table.get(n, Fraction(0))
    if a.kind == "unit":
        return Fraction(1)
    if a.kind == "delta":
        return Fraction(1 if n == 1 else 0)
    if n == 1:
        return 0.0 if a.kind == "von_mangoldt" else Fraction(1)
    fac = _factorize(n)
    if a.kind == "mobius":
        if any(e > 1 for _, e in fac):
            return Fraction(0)
        return Fraction(-1 if len(fac) % 2 else 1)
    if a.kind == "liouville":
        big_omega = sum(e for _, e in fac)
        return Fraction(-1 if big_omega % 2 else 1)
    # von_mangoldt: log p on prime powers, 0 elsewhere
    if len(fac) == 1:
        return math.log(fac[0][0])
    return 0.0


# ---------------------------------------------------------------------------
# batch sieves
# ---------------------------------------------------------------------------

def _prime_flags(m: int) -> np.ndarray:
    flags = np.ones(m + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, int(m**0.5) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    return flags


def _mobius_sieve(m: int) -> np.ndarray:
    mu = np.ones(m + 1, dtype=np.int64)
    mu[0] = 0
    primes = np.nonzero(_prime_flags(m))[0]
    for p in primes:
        mu[p::p] *= -1
        sq = p * p
        if sq <= m:
            mu[sq::sq] = 0
    return mu


def _liouville_sieve(m: int) -> np.ndarray:
    omega = np.zeros(m + 1, dtype=np.int64)
    primes = np.nonzero(_prime_flags(m))[0]
    for p in primes:
        pk = p
        while pk <= m:
            omega[pk::pk] += 1
            pk *= p
    lam = np.where(omega % 2 == 0, 1, -1).astype(np.int64)
    lam[0] = 0
    return lam


def _von_mangoldt_sieve(m: int) -> np.ndarray:
    lam = np.zeros(m + 1, dtype=np.float64)
    primes = np.nonzero(_prime_flags(m))[0]
    for p in primes:
        logp = math.log(float(p))
        pk = p
        while pk <= m:
            lam[pk] = logp
            pk *= p
    return lam


def _check_budget(m: int, exact: bool):
    if m < 1:
        raise DomainError("sieve bound must be >= 1")
    cap = MAX_EXACT_M if exact else MAX_FLOAT_M
    if m > cap:
        raise CapacityError(f"bound {m} exceeds the {'exact' if exact else 'float'} budget {cap}")


def coefficient_values(a: ArithmeticCoefficients, m: int, *, exact: bool | None = None):
    """a(1..m) as a batch.

    Returns a list of Fractions (index n, entry 0 unused) in exact mode,
    else a float64 array of length m+1.  Exact mode defaults to the
    kind's rationality.
    """
    if exact is None:
        exact = a.is_rational
    if exact and not a.is_rational:
        raise DomainError(f"kind {a.kind!r} is not rational-valued")
    _check_budget(m, exact)

    if a.kind == "von_mangoldt":
        return _von_mangoldt_sieve(m)

    if a.kind == "table":
        if exact:
            out = [Fraction(0)] * (m + 1)
            for n, v in a.table.items():
                if n <= m:
                    out[n] = v
            return out
        arr = np.zeros(m + 1, dtype=np.float64)
        for n, v in a.table.items():
            if n <= m:
                arr[n] = float(v)
        return arr

    if a.kind == "unit":
        ints = np.ones(m + 1, dtype=np.int64)
        ints[0] = 0
    elif a.kind == "delta":
        ints = np.zeros(m + 1, dtype=np.int64)
        ints[1] = 1
    elif a.kind == "mobius":
        ints = _mobius_sieve(m)
    else:
        ints = _liouville_sieve(m)
    if exact:
        return [Fraction(int(v)) for v in ints]
    return ints.astype(np.float64)


def divisor_sum_table(a: ArithmeticCoefficients, m: int, *, exact: bool | None = None):
    """A(n) = sum_{d | n} a(d) for n = 1..m.

    Sieve visits each (d, multiple) pair once, O(m log m) additions.
    Entry 0 is unused.
    """
    if exact is None:
        exact = a.is_rational
    vals = coefficient_values(a, m, exact=exact)
    if exact:
        out = [Fraction(0)] * (m + 1)
        for d in range(1, m + 1):
            v = vals[d]
            if v:
                for n in range(d, m + 1, d):
                    out[n] += v
        return out
    out = np.zeros(m + 1, dtype=np.float64)
    for d in range(1, m + 1):
        v = vals[d]
        if v:
            out[d::d] += v
    return out


@dataclass(frozen=True)
class ConvolutionTable:
    """Precomputed A(n) and F_k(n) = sum_{d|n} d^-k a(n/d) for n <= M.

    The k = 0 column is the divisor sum A itself (shared, so the identity
    F_0 = A holds by construction); other columns are built by the same
    (d, multiple) sieve with weight d^-k.
    """

    M: int
    k_list: tuple[int, ...]
    A: Sequence
    F: Mapping[int, Sequence]
    exact: bool = True

    def fk(self, k: int, n: int):
        if k not in self.F:
            raise DomainError(f"k = {k} not in this table")
        if not (1 <= n <= self.M):
            raise DomainError(f"n = {n} outside 1..{self.M}")
        return self.F[k][n]

    def divisor_sum(self, n: int):
        if not (1 <= n <= self.M):
            raise DomainError(f"n = {n} outside 1..{self.M}")
        return self.A[n]


def fk_table(a: ArithmeticCoefficients, m: int, k_list: Sequence[int],
             *, exact: bool | None = None) -> ConvolutionTable:
    """Build the weighted-convolution table for all k in ``k_list``."""
    ks = sorted(set(int(k) for k in k_list))
    if any(k < 0 for k in ks):
        raise DomainError("convolution weights require k >= 0")
    if exact is None:
        exact = a.is_rational
    vals = coefficient_values(a, m, exact=exact)
    A = _divisor_sum_from_values(vals, m, exact)

    F: dict[int, Sequence] = {}
    for k in ks:
        if k == 0:
            F[0] = list(A) if exact else A.copy()
            continue
        if exact:
            col = [Fraction(0)] * (m + 1)
            for d in range(1, m + 1):
                w = Fraction(1, d**k)
                base = vals
                for mm in range(1, m // d + 1):
                    v = base[mm]
                    if v:
                        col[d * mm] += w * v
            F[k] = col
        else:
            col = np.zeros(m + 1, dtype=np.float64)
            for d in range(1, m + 1):
                cnt = m // d
                col[d:: d] += float(d) ** (-k) * vals[1: cnt + 1]
            F[k] = col
    return ConvolutionTable(M=m, k_list=tuple(ks), A=A, F=F, exact=exact)


def _divisor_sum_from_values(vals, m: int, exact: bool):
    if exact:
        out = [Fraction(0)] * (m + 1)
        for d in range(1, m + 1):
            v = vals[d]
            if v:
                for n in range(d, m + 1, d):
                    out[n] += v
        return out
    out = np.zeros(m + 1, dtype=np.float64)
    for d in range(1, m + 1):
        v = vals[d]
        if v:
            out[d::d] += v
    return out


# ---------------------------------------------------------------------------
# Dirichlet-series view
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletSeriesView:
    """sum a(n) n^-s seen as a series with a declared convergence abscissa."""

    coefficients: ArithmeticCoefficients
    abscissa_hint: float | None = None

    def __post_init__(self):
        if self.abscissa_hint is None:
            object.__setattr__(self, "abscissa_hint", self.coefficients.abscissa_hint)


@dataclass(frozen=True)
class DirichletValue:
    """Partial sum with its tail-bound estimate."""

    value: complex
    tail_bound: float
    exact: bool
    terms: int


def dirichlet_value(view: DirichletSeriesView, s, m: int) -> DirichletValue:
    """Partial sum sum_{n<=m} a(n) n^-s with a tail-bound estimate.

    Exact (no truncation, zero tail) when the coefficients are finitely
    supported.  Emits DivergenceWarning when Re(s) is at or below the
    declared abscissa and the support is infinite.
    """
    a = view.coefficients
    s = complex(s)
    if a.finitely_supported:
        total = 0.0 + 0.0j
        bound = a.support_bound
        for n in range(1, bound + 1):
            v = coeff(a, n)
            if v:
                total += complex(float(v)) * n ** (-s)
        return DirichletValue(value=total, tail_bound=0.0, exact=True,
                              terms=bound)

    hint = view.abscissa_hint
    if hint is None:
        raise ConvergenceMetadataError(
            "infinite support with no declared convergence abscissa")
    if s.real <= hint:
        warnings.warn(
            f"Re(s) = {s.real} is not beyond the absolute-convergence "
            f"abscissa {hint}; the partial sum may not converge",
            DivergenceWarning, stacklevel=2)
    vals = coefficient_values(a, m, exact=False)
    n = np.arange(1, m + 1, dtype=float)
    total = complex(np.sum(vals[1:] * np.exp(-s * np.log(n))))
    sigma = s.real
    if sigma > 1.0:
        if a.kind == "von_mangoldt":
            # |Lambda(n)| <= log n: integral bound of log(x) x^-sigma
            tail = (m ** (1.0 - sigma)) * (math.log(m) / (sigma - 1.0)
                                           + 1.0 / (sigma - 1.0) ** 2)
        else:
            tail = m ** (1.0 - sigma) / (sigma - 1.0)
    else:
        tail = math.inf
    return DirichletValue(value=total, tail_bound=tail, exact=False, terms=m)
