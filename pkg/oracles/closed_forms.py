"""
Closed forms of the gap integrals over [a, a+1]^2 and their quadrature oracles

    int int_{|s^ - s| > x} |s^ - s|^{-1}  = 2 log(1/x) - 2(1 - x)
    int int_{|s^ - s| > x} |s^ - s|^{-hd} = 2 x^{1-hd}/(hd-1) + 2 x^{2-hd}/(2-hd) + 2/((1-hd)(2-hd))
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, List
import logging
import math

import numpy as np

from core.exceptions import DomainError, RemovableSingularityError
from core.export import write_csv
from .quadrature import DEFAULT_TOLERANCE, GapBand, QuadResult, RadialIntegrand, quad_region

logger = logging.getLogger(__name__)

SINGULAR_HD_TOLERANCE = 1e-9
DEFAULT_XS = (0.01, 0.05, 0.1, 0.25, 0.5, 0.9)
DEFAULT_HDS = (1.2, 1.5, 1.8, 2.5, 3.0)


def _check_gap(x: float) -> None:
    if not (0.0 < x < 1.0):
        raise DomainError(f"Gap threshold must lie in (0, 1), got {x}")


def closed_form_log(x: float) -> float:
    _check_gap(x)
    return 2.0 * math.log(1.0 / x) - 2.0 * (1.0 - x)


def closed_form_power(x: float, hd: float) -> float:
    _check_gap(x)
    if not hd > 1:
        raise DomainError(f"The power integral needs hd > 1, got {hd}")
    if abs(hd - 2.0) <= SINGULAR_HD_TOLERANCE:
        raise RemovableSingularityError(
            f"hd={hd!r} is within {SINGULAR_HD_TOLERANCE} of 2 where the closed form degenerates; "
            f"use power_integral_quadrature"
        )
    return (
        2.0 / (hd - 1.0) * x ** (-(hd - 1.0))
        + 2.0 / (2.0 - hd) * x ** (-(hd - 2.0))
        + 2.0 / ((1.0 - hd) * (2.0 - hd))
    )


def power_limit_at_two(x: float) -> float:
    """Value of the power integral at hd = 2: 2/x - 2 + 2 log x"""
    _check_gap(x)
    return 2.0 / x - 2.0 + 2.0 * math.log(x)


def envelope_point(hd: float, x_max: float = 1e-4) -> float:
    """Threshold where the constant term is at most 1% of the leading x^{1-hd} term"""
    return min(x_max, 10.0 ** (-2.0 / (hd - 1.0)))


def envelope_ratio(x: float, hd: float) -> float:
    """Power integral times x^{hd-1}, over its small-x limit 2/(hd-1)"""
    if abs(hd - 2.0) <= SINGULAR_HD_TOLERANCE:
        value = power_limit_at_two(x)
    else:
        value = closed_form_power(x, hd)
    return value * x ** (hd - 1.0) * (hd - 1.0) / 2.0


def power_integral_quadrature(x: float, hd: float, tol: float = DEFAULT_TOLERANCE) -> QuadResult:
    """Quadrature of |s^ - s|^{-hd} over |s^ - s| > x; authoritative near hd = 2"""
    _check_gap(x)
    return quad_region(RadialIntegrand(lambda u: u ** (-hd)), GapBand.above(x), tol)


def log_integral_quadrature(x: float, tol: float = DEFAULT_TOLERANCE) -> QuadResult:
    _check_gap(x)
    return quad_region(RadialIntegrand(lambda u: 1.0 / u), GapBand.above(x), tol)


def l_integrand(hurst: float, k: int, r: float):
    """
    (s, s^) -> exp(-|y^|^2 / 16k) / |s^ - s| with |y^| = r / |s^ - s|^H,
    the integrand of the far-pair time integrals for two atoms r apart.
    """
    if not (0 < hurst < 1) or k < 1 or not r > 0:
        raise DomainError(f"Invalid L integrand parameters H={hurst}, k={k}, r={r}")

    def integrand(s, s_hat):
        gap = np.abs(np.asarray(s_hat, dtype=float) - np.asarray(s, dtype=float))
        with np.errstate(divide='ignore', over='ignore', invalid='ignore'):
            y = r / gap ** hurst
            values = np.exp(-(y ** 2) / (16.0 * k)) / gap
        return np.where(gap > 0, values, 0.0)

    return integrand


def l_part(hurst: float, k: int, r: float, tol: float = DEFAULT_TOLERANCE, a: float = 0.0,
           radial: bool = True) -> QuadResult:
    """
    The L integrand over the near band |s^ - s| < r^{1/H}.

    With ``radial`` the gap-only dependence is used to reduce to one
    dimension; otherwise the 2-D adaptive rule integrates it as given.
    """
    band = GapBand.below(r ** (1.0 / hurst))
    if not radial:
        return quad_region(l_integrand(hurst, k, r), band, tol, a=a)
    if not (0 < hurst < 1) or k < 1 or not r > 0:
        raise DomainError(f"Invalid L integrand parameters H={hurst}, k={k}, r={r}")

    def g(u):
        return math.exp(-((r / u ** hurst) ** 2) / (16.0 * k)) / u

    return quad_region(RadialIntegrand(g), band, tol)


def l_bound(hurst: float, k: int) -> float:
    """
    2 sup_y y^{1/H} exp(-y^2 / 16k) = 2 (8k/H)^{1/(2H)} e^{-1/(2H)}: on the near
    band the integrand is r^{-1/H} y^{1/H} exp(-y^2/16k) and the band has area
    below 2 r^{1/H}.
    """
    power = 1.0 / hurst
    return 2.0 * (8.0 * k * power) ** (0.5 * power) * math.exp(-0.5 * power)


def m_integral(hurst: float, r: float, tol: float = DEFAULT_TOLERANCE) -> QuadResult:
    """Quadrature of |s^ - s|^{-1} over |s^ - s| >= r^{1/H}"""
    if not (0 < r < 1):
        raise DomainError(f"Atom distance must lie in (0, 1), got {r}")
    return quad_region(RadialIntegrand(lambda u: 1.0 / u), GapBand.above(r ** (1.0 / hurst)), tol)


def m_bound(hurst: float, r: float) -> float:
    """(2/H) log(1/r)"""
    if not (0 < r < 1):
        raise DomainError(f"Atom distance must lie in (0, 1), got {r}")
    return 2.0 / hurst * math.log(1.0 / r)


VERIFICATION_COLUMNS = ['x', 'hd', 'closed_form', 'quadrature', 'rel_err']


@dataclass(frozen=True)
class VerificationRow:
    x: float
    hd: float
    closed_form: float
    quadrature: QuadResult

    @property
    def rel_err(self) -> float:
        return abs(self.quadrature.value - self.closed_form) / max(abs(self.closed_form), 1e-300)

    def row(self) -> List:
        return [self.x, self.hd, self.closed_form, self.quadrature.value, self.rel_err]


def verification_table(xs: Iterable[float] = DEFAULT_XS, hds: Iterable[float] = DEFAULT_HDS,
                       tol: float = DEFAULT_TOLERANCE) -> List[VerificationRow]:
    """
    One row per (x, hd) plus one log row per x, reported with hd = 1.
    At hd = 2 the closed-form column holds the limit 2/x - 2 + 2 log x.
    """
    xs = list(xs)
    rows = [VerificationRow(x, 1.0, closed_form_log(x), log_integral_quadrature(x, tol)) for x in xs]
    for hd in hds:
        for x in xs:
            if abs(hd - 2.0) <= SINGULAR_HD_TOLERANCE:
                exact = power_limit_at_two(x)
            else:
                exact = closed_form_power(x, hd)
            rows.append(VerificationRow(x, hd, exact, power_integral_quadrature(x, hd, tol)))
    worst = max(rows, key=lambda row: row.rel_err)
    logger.info(f"Verified {len(rows)} gap integrals; worst relative error {worst.rel_err:.3e} "
                f"at x={worst.x}, hd={worst.hd}")
    return rows


def write_verification_csv(rows: Iterable[VerificationRow], destination: Path) -> Path:
    return write_csv(destination, VERIFICATION_COLUMNS, (row.row() for row in rows))
