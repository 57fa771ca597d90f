"""Scalar special-function kernels for the series and transform verifiers.

Fractional part, exact Bernoulli numbers/polynomials, Gamma, rising
factorials, Riemann zeta on the vertical strips the verifiers live on, and
an Euler-Maclaurin Hurwitz zeta evaluator.  Everything is a pure function
of its inputs; the only shared state is a pair of memo tables guarded by a
lock (safe for concurrent readers).

These are working-precision (double) evaluators tuned for the region the
identity checks need, not arbitrary-precision implementations.
"""

from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np
import scipy.special

from .errors import CapacityError, DomainError, PoleError

__all__ = [
    "frac",
    "bernoulli_number",
    "bernoulli_poly",
    "bernoulli_poly_coefficients",
    "gamma",
    "pochhammer",
    "riemann_zeta",
    "zeta_neg_int",
    "hurwitz_zeta",
    "DEFAULT_BERNOULLI_BOUND",
]

DEFAULT_BERNOULLI_BOUND = 64

_LN2 = math.log(2.0)
_LNPI = math.log(math.pi)


def frac(x: float) -> float:
    """Fractional part of ``x`` in [0, 1) with the floor convention.

    frac(2.75) = 0.75, frac(3.0) = 0.0, frac(-0.25) = 0.75.
    """
    if not math.isfinite(x):
        raise DomainError(f"frac requires a finite argument, got {x!r}")
    r = x - math.floor(x)
    # x just below an integer can round the difference up to exactly 1.0
    return 0.0 if r >= 1.0 else r


def frac_array(x) -> np.ndarray:
    """Vectorized :func:`frac` for float arrays."""
    r = np.mod(np.asarray(x, dtype=float), 1.0)
    return np.where(r >= 1.0, 0.0, r)


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials (exact rationals, B_1 = -1/2)
# ---------------------------------------------------------------------------

_bernoulli_cache: list[Fraction] = [Fraction(1)]
_bernoulli_lock = threading.Lock()


def bernoulli_number(n: int, *, bound: int = DEFAULT_BERNOULLI_BOUND) -> Fraction:
    """Exact Bernoulli number B_n with the convention B_1 = -1/2.

    Computed from sum_{j=0}^{n} C(n+1, j) B_j = 0.  ``bound`` caps the
    index (CapacityError beyond it); the default matches the largest
    order any evaluator here requests.
    """
    if n < 0:
        raise DomainError("Bernoulli index must be nonnegative")
    if n > bound:
        raise CapacityError(f"Bernoulli index {n} exceeds configured bound {bound}")
    if n >= len(_bernoulli_cache):
        with _bernoulli_lock:
            for m in range(len(_bernoulli_cache), n + 1):
                acc = sum(comb(m + 1, j) * _bernoulli_cache[j] for j in range(m))
                _bernoulli_cache.append(Fraction(-acc, m + 1))
    return _bernoulli_cache[n]


@lru_cache(maxsize=256)
def bernoulli_poly_coefficients(n: int) -> tuple[Fraction, ...]:
    """Coefficients of B_n(y) = sum_j C(n,j) B_j y^(n-j), highest power first."""
    return tuple(comb(n, j) * bernoulli_number(j, bound=max(DEFAULT_BERNOULLI_BOUND, n))
                 for j in range(n + 1))


def bernoulli_poly(n: int, y, *, bound: int = DEFAULT_BERNOULLI_BOUND):
    """Evaluate the Bernoulli polynomial B_n(y) for y in [0, 1].

    Accepts a scalar or ndarray ``y``; Horner evaluation of the exact
    coefficient form.
    """
    if n < 0:
        raise DomainError("Bernoulli order must be nonnegative")
    if n > bound:
        raise CapacityError(f"Bernoulli order {n} exceeds configured bound {bound}")
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("bernoulli_poly is defined here for y in [0, 1]")
    acc = np.zeros_like(arr)
    for c in bernoulli_poly_coefficients(n):
        acc = acc * arr + float(c)
    return float(acc) if arr.ndim == 0 else acc


# ---------------------------------------------------------------------------
# Gamma and the rising factorial
# ---------------------------------------------------------------------------

def gamma(s) -> complex:
    """Gamma function for complex arguments.

    Raises PoleError at the nonpositive integers, carrying the location.
    """
    s = complex(s)
    if s.imag == 0.0 and s.real <= 0.0 and s.real == int(s.real):
        loc = int(s.real)
        raise PoleError(f"Gamma has a pole at {loc}", location=loc)
    return complex(scipy.special.gamma(s))


def pochhammer(s, k: int) -> complex:
    """Rising factorial (s)_k = s (s+1) ... (s+k-1), as a finite product.

    (s)_0 = 1; no poles are involved, so any complex s is fine.
    """
    if k < 0:
        raise DomainError("pochhammer order must be nonnegative")
    s = complex(s)
    out = complex(1.0)
    for j in range(k):
        out *= s + j
    return out


# ---------------------------------------------------------------------------
# Riemann zeta: alternating-series acceleration on Re(s) >= 0, reflection
# through the functional equation on Re(s) < 0
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _alternating_weights(n: int) -> tuple[float, ...]:
    # Chebyshev-derived weights e_k = (d_k - d_n)/d_n, computed exactly in
    # integers and rounded once; e_k lies in [-1, 0].
    d = []
    for k in range(n + 1):
        acc = 0
        for i in range(k + 1):
            acc += factorial(n + i - 1) * 4**i // (factorial(n - i) * factorial(2 * i))
        d.append(n * acc)
    dn = d[n]
    return tuple(float(Fraction(dk - dn, dn)) for dk in d[:n])


def _cexpm1(z: complex) -> complex:
    if abs(z) < 1e-5:
        return z * (1.0 + z / 2.0 * (1.0 + z / 3.0 * (1.0 + z / 4.0)))
    return cmath.exp(z) - 1.0


def _zeta_alternating(s: complex) -> complex:
    # Accelerated eta series; term count grows with |Im s| to keep ~1e-15
    # headroom after the exp(pi |t| / 2) loss factor.
    t = abs(s.imag)
    n = int((17.0 * math.log(10.0) + math.pi * t / 2.0 + math.log(3.0 + 2.0 * t)) / 1.7627) + 12
    n = max(n, 36)
    e = np.array(_alternating_weights(n))
    k = np.arange(1, n + 1, dtype=float)
    signs = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    eta = -np.sum(signs * e * np.exp(-s * np.log(k)))
    denom = -_cexpm1((1.0 - s) * _LN2)
    if abs(denom) < 1e-6:
        # eta denominator zero at s = 1 + 2 pi i k / ln 2; use the
        # Euler-Maclaurin evaluator there instead
        return complex(hurwitz_zeta(s, 1.0, tol=1e-13))
    return eta / denom


def riemann_zeta(s) -> complex:
    """Riemann zeta on the region the verifiers use.

    Relative accuracy ~1e-12 for |Im s| <= 50, -20 <= Re s <= 20.  Exact
    nonpositive-integer inputs return the exact rational continuation
    values (so the trivial zeros are exact).  Raises PoleError at s = 1.
    """
    s = complex(s)
    if s == 1.0:
        raise PoleError("zeta has its pole at s = 1", location=1)
    if s.imag == 0.0 and s.real <= 0.0 and s.real == int(s.real):
        return complex(float(zeta_neg_int(int(-s.real))))
    if s.real >= 0.0:
        return _zeta_alternating(s)
    w = 1.0 - s
    pref = cmath.exp(s * _LN2 + (s - 1.0) * _LNPI)
    return pref * cmath.sin(cmath.pi * s / 2.0) * gamma(w) * _zeta_alternating(w)


def zeta_neg_int(k: int) -> Fraction:
    """Exact zeta(-k): -1/2 at k = 0, else -B_{k+1}/(k+1).

    Vanishes for even k >= 2 (the trivial zeros), exactly.
    """
    if k < 0:
        raise DomainError("zeta_neg_int wants k >= 0")
    if k == 0:
        return Fraction(-1, 2)
    b = bernoulli_number(k + 1, bound=max(DEFAULT_BERNOULLI_BOUND, k + 1))
    return -b / (k + 1)


# ---------------------------------------------------------------------------
# Hurwitz zeta by Euler-Maclaurin with adaptive cutoff and correction order
# ---------------------------------------------------------------------------

_HURWITZ_RE_RANGE = (-5.0, 40.0)
_HURWITZ_MAX_ORDER = 24


@lru_cache(maxsize=64)
def _em_coefficient(j: int) -> float:
    # B_{2j} / (2j)!
    return float(bernoulli_number(2 * j) / factorial(2 * j))


def _em_error_estimate(s: complex, q: float, order: int) -> float:
    # magnitude of the first omitted correction term
    j = order + 1
    if 2 * j > DEFAULT_BERNOULLI_BOUND:
        return math.inf
    p = abs(pochhammer(s, 2 * j - 1))
    exponent = -(s.real + 2 * j - 1)
    return abs(_em_coefficient(j)) * p * q**exponent


def hurwitz_zeta(s, y, *, tol: float = 1e-12):
    """Hurwitz zeta(s, y) for y > 0 by Euler-Maclaurin summation.

    head + tail integral + half term + Bernoulli corrections, with the
    cutoff Q and the correction order chosen adaptively to push the first
    omitted term below ``tol``.  ``y`` may be a scalar or a 1-D array
    (same s for all entries).  Re(s) is restricted to the window the
    verifiers need; s = 1 raises PoleError.
    """
    s = complex(s)
    if s == 1.0:
        raise PoleError("Hurwitz zeta has its pole at s = 1", location=1)
    if not (_HURWITZ_RE_RANGE[0] <= s.real <= _HURWITZ_RE_RANGE[1]):
        raise DomainError(
            f"Re(s) = {s.real} outside the supported window {_HURWITZ_RE_RANGE}")
    arr = np.asarray(y, dtype=float)
    if np.any(arr <= 0.0):
        raise DomainError("hurwitz_zeta requires y > 0")
    scalar = arr.ndim == 0
    ys = np.atleast_1d(arr)
    ymin = float(ys.min())

    q_cut = 16
    order = None
    while True:
        base_min = q_cut + ymin
        for j in range(1, _HURWITZ_MAX_ORDER + 1):
            if _em_error_estimate(s, base_min, j) < tol:
                order = j
                break
        if order is not None or q_cut >= 4096:
            break
        q_cut *= 2
    if order is None:
        order = _HURWITZ_MAX_ORDER

    n = np.arange(q_cut, dtype=float)[:, None]
    head = np.sum(np.power(n + ys[None, :], -s), axis=0)
    base = q_cut + ys
    result = head + np.power(base, 1.0 - s) / (s - 1.0) + 0.5 * np.power(base, -s)
    poch = complex(s)
    for j in range(1, order + 1):
        # running pochhammer(s, 2j-1)
        if j > 1:
            poch *= (s + 2 * j - 3) * (s + 2 * j - 2)
        result = result + _em_coefficient(j) * poch * np.power(base, -(s + 2 * j - 1))
    return complex(result[0]) if scalar else result
