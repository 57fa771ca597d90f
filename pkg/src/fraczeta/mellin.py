"""Numerical verification of the Mellin transform of {y}^N on its strip.

The identity under test equates the integral of {y}^N y^(-s-1) over
(0, inf), for 0 < Re(s) < N, with a finite zeta/Pochhammer sum.  The left
side is evaluated by periodwise Gauss quadrature plus an exact tail (an
absolutely convergent Hurwitz-zeta integral); the right side by direct
summation, with removable singularities at interior integer s handled by
circle averaging.  The related Hurwitz-zeta moment integral gets the same
treatment.

Reports are plain records with CSV/JSON emitters; grid points can be
verified in parallel and are always reduced in grid order.
"""

from __future__ import annotations

import cmath
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

import numpy as np

from .errors import (
    DomainError,
    PoleError,
    RemovableSingularityError,
    TailToleranceError,
)
from .special import hurwitz_zeta, pochhammer, riemann_zeta

__all__ = [
    "StripPoint",
    "QuadratureConfig",
    "VerificationReport",
    "mellin_rhs",
    "mellin_rhs_near_pole",
    "mellin_lhs_quadrature",
    "QuadratureResult",
    "hurwitz_moment_check",
    "verify_mellin_identity",
    "all_passed",
    "reports_to_csv",
    "reports_to_json",
    "reports_from_json",
    "write_reports",
]

#: direct evaluation of the closed form is refused inside this distance of
#: an integer in {0..N}; interior integers go through circle averaging
NEAR_POLE_GUARD = 1e-6

#: default circle radius for removable-singularity evaluation
DEFAULT_CIRCLE_RADIUS = 1e-3


@dataclass(frozen=True)
class StripPoint:
    """An evaluation point constrained to the open strip 0 < Re(s) < N.

    ``pole_distance`` is the distance from s to the nearest of the
    integers 0..N (the points where individual closed-form terms are
    singular), recorded at construction.
    """

    s: complex
    N: int
    pole_distance: float = field(init=False)

    def __post_init__(self):
        s = complex(self.s)
        if self.N < 1:
            raise DomainError("N must be a positive integer")
        if not (0.0 < s.real < self.N):
            raise DomainError(
                f"s = {s} outside the open strip 0 < Re(s) < {self.N}")
        object.__setattr__(self, "s", s)
        dist = min(abs(s - m) for m in range(self.N + 1))
        object.__setattr__(self, "pole_distance", dist)


@dataclass(frozen=True)
class QuadratureConfig:
    """Periodwise quadrature settings for the transform's left side.

    ``tail_mode="hurwitz"`` (default) evaluates the remainder past the
    last explicit period exactly as a Hurwitz-zeta integral;
    ``tail_mode="bound"`` only reports the analytic bound
    P^(-Re s)/Re s and fails when it exceeds ``tail_tol``.
    """

    periods: int = 10_000
    points_per_period: int = 64
    tail_tol: float = 1e-9
    tail_mode: str = "hurwitz"
    method: str = "gauss-legendre"

    def __post_init__(self):
        if self.periods < 1:
            raise DomainError("periods must be >= 1")
        if self.points_per_period < 2:
            raise DomainError("points_per_period must be >= 2")
        if self.tail_tol <= 0.0:
            raise DomainError("tail_tol must be positive")
        if self.tail_mode not in ("hurwitz", "bound"):
            raise DomainError("tail_mode must be 'hurwitz' or 'bound'")


@dataclass
class VerificationReport:
    """Two-sided comparison with pass/fail at a tolerance.

    passed is (abs_err <= tol) or (rel_err <= tol).
    """

    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    tol: float
    passed: bool
    metadata: dict

    @classmethod
    def compare(cls, lhs: complex, rhs: complex, tol: float,
                metadata: dict | None = None) -> "VerificationReport":
        lhs = complex(lhs)
        rhs = complex(rhs)
        abs_err = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
        rel_err = abs_err / scale if scale > 0.0 else 0.0
        return cls(lhs=lhs, rhs=rhs, abs_err=abs_err, rel_err=rel_err,
                   tol=tol, passed=(abs_err <= tol or rel_err <= tol),
                   metadata=metadata or {})

    def to_dict(self) -> dict:
        return {
            "lhs": [self.lhs.real, self.lhs.imag],
            "rhs": [self.rhs.real, self.rhs.imag],
            "abs_err": self.abs_err,
            "rel_err": self.rel_err,
            "tol": self.tol,
            "pass": self.passed,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        return cls(lhs=complex(*d["lhs"]), rhs=complex(*d["rhs"]),
                   abs_err=d["abs_err"], rel_err=d["rel_err"], tol=d["tol"],
                   passed=d["pass"], metadata=dict(d["metadata"]))


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)


# ---------------------------------------------------------------------------
# closed-form side
# ---------------------------------------------------------------------------

def _nearest_integer_distance(s: complex, n_max: int) -> tuple[int, float]:
    best_m, best_d = 0, abs(s)
    for m in range(1, n_max + 1):
        d = abs(s - m)
        if d < best_d:
            best_m, best_d = m, d
    return best_m, best_d


def mellin_rhs(N: int, s) -> complex:
    """Closed-form side: N! sum_k (-1)^k zeta(s-k) / ((N-k)! (-s)_{k+1}).

    The Pochhammer factors are finite products.  Individual terms are
    singular at integer s in {0..N} although the sum is analytic at the
    interior integers; within NEAR_POLE_GUARD of any of them this raises
    RemovableSingularityError and the caller should use
    :func:`mellin_rhs_near_pole`.
    """
    point = StripPoint(s=s, N=N)
    s = point.s
    m, dist = _nearest_integer_distance(s, N)
    if dist < NEAR_POLE_GUARD:
        raise RemovableSingularityError(
            f"s = {s} is within {NEAR_POLE_GUARD} of the integer {m}; "
            "use mellin_rhs_near_pole")
    total = 0.0 + 0.0j
    for k in range(N):
        term = riemann_zeta(s - k) / (factorial(N - k) * pochhammer(-s, k + 1))
        total += term if k % 2 == 0 else -term
    return factorial(N) * total


def mellin_rhs_near_pole(N: int, s, radius: float = DEFAULT_CIRCLE_RADIUS) -> complex:
    """Closed-form side near an interior integer, by circle averaging.

    The individual zeta poles cancel against Pochhammer zeros, so the sum
    is analytic there; its value equals its average over 8 points on a
    circle of the given radius around s.  The radius must stay below half
    the distance to the next singular integer.
    """
    s = complex(s)
    if N < 1:
        raise DomainError("N must be a positive integer")
    if N == 1:
        raise DomainError("N = 1 has no interior integers; the closed form "
                          "is regular on the whole strip")
    m, dist = _nearest_integer_distance(s, N)
    if not (1 <= m <= N - 1):
        raise DomainError(f"nearest integer {m} to s = {s} is a strip "
                          "boundary, a genuine singularity")
    if dist >= radius:
        raise DomainError(f"|s - {m}| = {dist:.3g} is not inside the "
                          f"averaging radius {radius}")
    if radius >= 0.5:
        raise DomainError(f"radius {radius} reaches halfway to the next "
                          "singular integer (distance 1); use radius < 0.5")
    return _circle_average(lambda z: mellin_rhs(N, z), s, radius)


def _circle_average(f, center: complex, radius: float, points: int = 8) -> complex:
    vals = []
    for j in range(points):
        z = center + radius * cmath.exp(2j * cmath.pi * j / points)
        vals.append(f(z))
    return sum(vals) / points


# ---------------------------------------------------------------------------
# quadrature side
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _unit_gauss(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


_log_grid_cache: dict[tuple[int, int], np.ndarray] = {}


def _period_log_grid(periods: int, points: int) -> np.ndarray:
    key = (periods, points)
    grid = _log_grid_cache.get(key)
    if grid is None:
        y, _ = _unit_gauss(points)
        k = np.arange(1, periods + 1, dtype=float)[:, None]
        grid = np.log(y[None, :] + k)
        _log_grid_cache.clear()  # keep at most one grid resident
        _log_grid_cache[key] = grid
    return grid


@dataclass(frozen=True)
class QuadratureResult:
    """Left-side value with its tail accounting."""

    value: complex
    tail_bound: float
    tail_correction: complex
    periods: int
    points_per_period: int
    tail_mode: str


def mellin_lhs_quadrature(N: int, s, cfg: QuadratureConfig | None = None) -> QuadratureResult:
    """Integral of {y}^N y^(-s-1) over (0, inf) by periodwise quadrature.

    The (0,1) piece is the exact 1/(N-s); each unit interval [k, k+1) up
    to cfg.periods contributes a Gauss panel of y^N (y+k)^(-s-1); the
    remainder is sum_{k>P} of the same integrals, equal to the integral
    of y^N zeta(s+1, y+P+1) over (0,1), which the default tail mode
    evaluates directly (Re(s+1) > 1 on the strip, so that zeta value is
    an absolutely convergent sum).  The analytic bound P^(-Re s)/Re s on
    the uncorrected remainder is always reported; in tail_mode="bound" it
    must pass cfg.tail_tol or TailToleranceError is raised.
    """
    cfg = cfg or QuadratureConfig()
    point = StripPoint(s=s, N=N)
    s = point.s
    y, w = _unit_gauss(cfg.points_per_period)
    y_pow = y**N
    log_grid = _period_log_grid(cfg.periods, cfg.points_per_period)
    panels = np.exp(-(s + 1.0) * log_grid)
    body = complex(np.sum(panels @ (w * y_pow)))
    head = 1.0 / (N - s)

    sigma = s.real
    cut = cfg.periods + 1  # explicit panels cover [1, P+1)
    raw_tail_bound = cut ** (-sigma) / sigma

    if cfg.tail_mode == "bound":
        if raw_tail_bound > cfg.tail_tol:
            raise TailToleranceError(
                f"analytic tail bound {raw_tail_bound:.3g} exceeds tail_tol "
                f"{cfg.tail_tol:.3g}; increase periods or use tail_mode='hurwitz'")
        return QuadratureResult(value=head + body, tail_bound=raw_tail_bound,
                                tail_correction=0.0, periods=cfg.periods,
                                points_per_period=cfg.points_per_period,
                                tail_mode=cfg.tail_mode)

    hz = hurwitz_zeta(s + 1.0, y + cut, tol=1e-13)
    tail = complex(np.sum(w * y_pow * hz))
    residual = 1e-12 * (1.0 + abs(tail))
    if residual > cfg.tail_tol:
        raise TailToleranceError(
            f"tail evaluation residual {residual:.3g} exceeds tail_tol "
            f"{cfg.tail_tol:.3g}")
    return QuadratureResult(value=head + body + tail, tail_bound=raw_tail_bound,
                            tail_correction=tail, periods=cfg.periods,
                            points_per_period=cfg.points_per_period,
                            tail_mode=cfg.tail_mode)


# ---------------------------------------------------------------------------
# identity verification
# ---------------------------------------------------------------------------

def _rhs_with_routing(N: int, s: complex) -> tuple[complex, str]:
    m, dist = _nearest_integer_distance(s, N)
    if dist < NEAR_POLE_GUARD:
        if 1 <= m <= N - 1:
            return mellin_rhs_near_pole(N, s), "circle_average"
        raise DomainError(f"s = {s} is within {NEAR_POLE_GUARD} of the strip "
                          f"boundary integer {m}, a genuine singularity")
    return mellin_rhs(N, s), "direct"


def verify_mellin_identity(N: int, s_grid, tol: float = 1e-7,
                           cfg: QuadratureConfig | None = None,
                           threads: int = 1) -> list[VerificationReport]:
    """Compare quadrature LHS and closed-form RHS at every grid point.

    Near-integer points route through circle averaging.  One report per
    point, in grid order regardless of ``threads``.
    """
    cfg = cfg or QuadratureConfig()
    points = [StripPoint(s=s, N=N) for s in s_grid]

    def one(point: StripPoint) -> VerificationReport:
        lhs = mellin_lhs_quadrature(N, point.s, cfg)
        rhs, route = _rhs_with_routing(N, point.s)
        meta = {
            "N": N,
            "re_s": point.s.real,
            "im_s": point.s.imag,
            "pole_distance": point.pole_distance,
            "route": route,
            "periods": lhs.periods,
            "points_per_period": lhs.points_per_period,
            "tail_mode": lhs.tail_mode,
            "raw_tail_bound": lhs.tail_bound,
        }
        return VerificationReport.compare(lhs.value, rhs, tol, meta)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one, points))
    return [one(p) for p in points]


def hurwitz_moment_check(N: int, s, tol: float = 1e-8) -> VerificationReport:
    """Check the Hurwitz-zeta moment integral against its closed form.

    Quadrature side: integral over (0,1) of y^N zeta(s, y+1) plus the
    exact 1/(N-s+1) from splitting off the y^-s singularity.  Closed
    form: N! sum_k (-1)^k zeta(s-k-1) / ((N-k)! (1-s)_{k+1}).  Points
    within NEAR_POLE_GUARD of {2..N} (removable) or of N+1 (a simple
    pole shared by both sides with residue -1) are evaluated as 8-point
    circle averages of both sides, which yields the common finite part.
    """
    s = complex(s)
    if N < 1:
        raise DomainError("N must be a positive integer")
    if s.real <= 1.0:
        raise DomainError("the moment quadrature needs Re(s) > 1")
    if abs(s - 1.0) < NEAR_POLE_GUARD:
        raise PoleError("the moment integral has a pole at s = 1", location=1)

    singular = range(2, N + 2)
    dist = min(abs(s - m) for m in singular)
    if dist < NEAR_POLE_GUARD:
        route = "circle_average"
        lhs = _circle_average(lambda z: _moment_quadrature(N, z), s,
                              DEFAULT_CIRCLE_RADIUS)
        rhs = _circle_average(lambda z: _moment_closed_form(N, z), s,
                              DEFAULT_CIRCLE_RADIUS)
    else:
        route = "direct"
        lhs = _moment_quadrature(N, s)
        rhs = _moment_closed_form(N, s)
    meta = {"N": N, "re_s": s.real, "im_s": s.imag, "route": route,
            "check": "hurwitz_moment"}
    return VerificationReport.compare(lhs, rhs, tol, meta)


def _moment_quadrature(N: int, s: complex, points: int = 64) -> complex:
    y, w = _unit_gauss(points)
    hz = hurwitz_zeta(s, y + 1.0, tol=1e-13)
    return complex(np.sum(w * y**N * hz)) + 1.0 / (N - s + 1.0)


def _moment_closed_form(N: int, s: complex) -> complex:
    total = 0.0 + 0.0j
    for k in range(N):
        term = riemann_zeta(s - k - 1.0) / (factorial(N - k) * pochhammer(1.0 - s, k + 1))
        total += term if k % 2 == 0 else -term
    return factorial(N) * total


# ---------------------------------------------------------------------------
# report emission
# ---------------------------------------------------------------------------

_CSV_HEADER = "N,re_s,im_s,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,rel_err,pass"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def reports_to_csv(reports) -> str:
    """Fixed-schema CSV; 17 significant digits, '\\n' line endings."""
    lines = [_CSV_HEADER]
    for r in reports:
        lines.append(",".join([
            str(r.metadata.get("N", "")),
            _fmt(r.metadata.get("re_s", math.nan)),
            _fmt(r.metadata.get("im_s", math.nan)),
            _fmt(r.lhs.real), _fmt(r.lhs.imag),
            _fmt(r.rhs.real), _fmt(r.rhs.imag),
            _fmt(r.abs_err), _fmt(r.rel_err),
            "true" if r.passed else "false",
        ]))
    return "\n".join(lines) + "\n"


def reports_to_json(reports) -> str:
    return json.dumps([r.to_dict() for r in reports], sort_keys=True,
                      separators=(",", ":")) + "\n"


def reports_from_json(text: str) -> list[VerificationReport]:
    return [VerificationReport.from_dict(d) for d in json.loads(text)]


def write_reports(reports, path, fmt: str = "csv"):
    text = reports_to_csv(reports) if fmt == "csv" else reports_to_json(reports)
    with open(path, "w", newline="") as fh:
        fh.write(text)
