"""
Quadrature over [a, a+1]^2 restricted to a band of gaps lower < |s^ - s| < upper.

Integrands that depend on the gap u = |s^ - s| only (``RadialIntegrand``)
are reduced exactly to 2 int (1 - u) g(u) du and handed to
``scipy.integrate.quad``. Anything else goes through adaptive subdivision
of the band into triangles: each triangle is integrated once with a
degree-5 rule and once as the sum over its four midpoint children, the
difference being its error estimate, and the worst triangle is split next.
"""
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple
import heapq
import logging
import math

import numpy as np
from scipy import integrate

from core.exceptions import DomainError

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-10
DEFAULT_REL_TOLERANCE = 1e-12
MAX_EVALUATIONS = 2_000_000
QUAD_LIMIT = 500

# Degree-5 seven-point rule on the reference triangle (barycentric nodes, weights sum to 1)
_A = (6.0 - math.sqrt(15.0)) / 21.0
_B = (6.0 + math.sqrt(15.0)) / 21.0
_W_A = (155.0 - math.sqrt(15.0)) / 1200.0
_W_B = (155.0 + math.sqrt(15.0)) / 1200.0
RULE_NODES = np.array([
    [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0],
    [_A, _A, 1.0 - 2.0 * _A],
    [_A, 1.0 - 2.0 * _A, _A],
    [1.0 - 2.0 * _A, _A, _A],
    [_B, _B, 1.0 - 2.0 * _B],
    [_B, 1.0 - 2.0 * _B, _B],
    [1.0 - 2.0 * _B, _B, _B],
])
RULE_WEIGHTS = np.array([9.0 / 40.0, _W_A, _W_A, _W_A, _W_B, _W_B, _W_B])


@dataclass(frozen=True)
class QuadResult:
    value: float
    est_error: float
    evaluations: int
    converged: bool = True

    def __post_init__(self):
        if not self.est_error >= 0:
            raise DomainError(f"Error estimate must be nonnegative, got {self.est_error}")


@dataclass(frozen=True)
class GapBand:
    """The constraint lower < |s^ - s| < upper"""
    lower: float = 0.0
    upper: float = math.inf

    def __post_init__(self):
        if self.lower < 0 or not self.upper > self.lower:
            raise DomainError(f"Gap band needs 0 <= lower < upper, got ({self.lower}, {self.upper})")

    @classmethod
    def above(cls, x: float) -> 'GapBand':
        return cls(lower=x)

    @classmethod
    def below(cls, x: float) -> 'GapBand':
        return cls(upper=x)


@dataclass(frozen=True)
class RadialIntegrand:
    """f(s, s^) = g(|s^ - s|)"""
    g: Callable[[float], float]

    def __call__(self, s, s_hat):
        return np.vectorize(self.g, otypes=[float])(np.abs(np.asarray(s_hat) - np.asarray(s)))


Triangle = Tuple[Tuple[float, float], Tuple[float, float], Tuple[float, float]]


def band_triangles(band: GapBand, a: float) -> List[Triangle]:
    """Triangles tiling {(s, s^) in [a, a+1]^2 : lower < |s^ - s| < upper}"""
    lo = min(band.lower, 1.0)
    hi = min(band.upper, 1.0)
    # Above the diagonal the band is the quadrilateral p1 p2 p3 p4
    p1 = (a, a + lo)
    p2 = (a, a + hi)
    p3 = (a + 1.0 - hi, a + 1.0)
    p4 = (a + 1.0 - lo, a + 1.0)
    upper = [(p1, p2, p3), (p1, p3, p4)]
    lower = [tuple((y, x) for x, y in triangle) for triangle in upper]
    return [triangle for triangle in upper + lower if triangle_area(triangle) > 0]


def triangle_area(triangle: Triangle) -> float:
    (x0, y0), (x1, y1), (x2, y2) = triangle
    return 0.5 * abs((x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0))


def _children(triangle: Triangle) -> List[Triangle]:
    p0, p1, p2 = triangle

    def mid(p, q):
        return (0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]))

    m01, m12, m02 = mid(p0, p1), mid(p1, p2), mid(p0, p2)
    return [(p0, m01, m02), (m01, p1, m12), (m02, m12, p2), (m01, m12, m02)]


class _TriangleRule:
    """Degree-5 rule applied to a triangle and to its four children in one vectorised call"""

    def __init__(self, f: Callable):
        self.f = f
        self.evaluations = 0

    def estimate(self, triangle: Triangle) -> Tuple[float, float]:
        cells = [triangle] + _children(triangle)
        vertices = np.array(cells)
        points = np.einsum('nk,ckd->cnd', RULE_NODES, vertices)
        values = np.broadcast_to(np.asarray(self.f(points[..., 0], points[..., 1]), dtype=float), points.shape[:2])
        self.evaluations += values.size
        areas = np.array([triangle_area(cell) for cell in cells])
        integrals = areas * (values @ RULE_WEIGHTS)
        refined = float(math.fsum(integrals[1:]))
        return refined, abs(refined - float(integrals[0]))


def _adaptive_2d(f: Callable, band: GapBand, a: float, tol: float, rel_tol: float,
                 max_evaluations: int) -> QuadResult:
    rule = _TriangleRule(f)
    heap = []
    counter = 0
    for triangle in band_triangles(band, a):
        value, error = rule.estimate(triangle)
        heap.append((-error, counter, triangle, value))
        counter += 1
    heapq.heapify(heap)

    def totals():
        return math.fsum(item[3] for item in heap), math.fsum(-item[0] for item in heap)

    value, error = totals()
    while heap and error > max(tol, rel_tol * abs(value)):
        if rule.evaluations >= max_evaluations:
            logger.warning(
                f"2-D quadrature budget of {max_evaluations} evaluations exhausted "
                f"with error estimate {error:.3e} (target {tol:.3e})"
            )
            return QuadResult(value=value, est_error=error, evaluations=rule.evaluations, converged=False)
        negative_error, _, triangle, parent_value = heapq.heappop(heap)
        value -= parent_value
        error += negative_error
        for child in _children(triangle):
            child_value, child_error = rule.estimate(child)
            heapq.heappush(heap, (-child_error, counter, child, child_value))
            counter += 1
            value += child_value
            error += child_error
    value, error = totals()
    return QuadResult(value=value, est_error=error, evaluations=rule.evaluations, converged=True)


def _radial(integrand: RadialIntegrand, band: GapBand, tol: float, rel_tol: float) -> QuadResult:
    lo = min(band.lower, 1.0)
    hi = min(band.upper, 1.0)
    if hi <= lo:
        return QuadResult(value=0.0, est_error=0.0, evaluations=0)

    def reduced(u):
        return 2.0 * (1.0 - u) * integrand.g(u)

    result = integrate.quad(reduced, lo, hi, epsabs=tol, epsrel=rel_tol, limit=QUAD_LIMIT, full_output=1)
    value, error, info = result[0], result[1], result[2]
    converged = len(result) == 3 and error <= max(tol, rel_tol * abs(value))
    if not converged:
        message = result[3] if len(result) > 3 else 'error target missed'
        logger.warning(f"1-D reduced quadrature did not converge: {message}")
    return QuadResult(value=float(value), est_error=float(error), evaluations=int(info['neval']),
                      converged=converged)


def quad_region(f: Callable, constraint: Optional[GapBand] = None, tol: float = DEFAULT_TOLERANCE,
                a: float = 0.0, rel_tol: float = DEFAULT_REL_TOLERANCE,
                max_evaluations: int = MAX_EVALUATIONS) -> QuadResult:
    """
    Integral of f(s, s^) over the part of [a, a+1]^2 allowed by ``constraint``.

    ``converged`` is False when the error target max(tol, rel_tol * |value|)
    was not reached; the value is then the best estimate available.
    """
    if not tol > 0:
        raise DomainError(f"Tolerance must be positive, got {tol}")
    band = constraint or GapBand()
    if isinstance(f, RadialIntegrand):
        return _radial(f, band, tol, rel_tol)
    return _adaptive_2d(f, band, a, tol, rel_tol, max_evaluations)
