"""
Capacity kernels phi(s): the log kernel (log_+(1/s))^k used at Hd = 1 and
the Riesz kernel s^{-k(d - 1/H)} used at Hd > 1.
"""
from dataclasses import dataclass
import math

import numpy as np

from core.exceptions import DomainError
from fbm.process import FbmParams

LOG_PLUS_POW = 'log_plus_pow'
RIESZ = 'riesz'
KINDS = (LOG_PLUS_POW, RIESZ)


@dataclass(frozen=True)
class Kernel:
    kind: str
    k: int
    exponent: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"Unknown kernel kind {self.kind!r}; use one of {KINDS}")
        if self.k < 1:
            raise DomainError(f"Kernel multiplicity must be positive, got {self.k}")
        if self.kind == RIESZ and not self.exponent > 0:
            raise DomainError(f"Riesz exponent must be positive, got {self.exponent}")

    @classmethod
    def log_plus(cls, k: int) -> 'Kernel':
        return cls(kind=LOG_PLUS_POW, k=k)

    @classmethod
    def riesz_for(cls, params: FbmParams, k: int) -> 'Kernel':
        """Riesz kernel with exponent k(d - 1/H); requires Hd > 1"""
        exponent = k * (params.dim - 1.0 / params.hurst)
        if not exponent > 0:
            raise DomainError(
                f"Riesz kernel needs Hd > 1, got H={params.hurst}, d={params.dim}"
            )
        return cls(kind=RIESZ, k=k, exponent=exponent)

    def to_dict(self):
        return {'kind': self.kind, 'k': self.k, 'exponent': self.exponent}


def kernel_values(kernel: Kernel, distances: np.ndarray) -> np.ndarray:
    """Vectorised phi; +inf at distance 0"""
    s = np.asarray(distances, dtype=float)
    if (s < 0).any():
        raise DomainError("Kernel distances must be nonnegative")
    with np.errstate(divide='ignore'):
        if kernel.kind == LOG_PLUS_POW:
            return np.maximum(-np.log(s), 0.0) ** kernel.k
        return s ** (-kernel.exponent)


def kernel_eval(kernel: Kernel, s: float) -> float:
    if s < 0:
        raise DomainError(f"Kernel argument must be nonnegative, got {s}")
    if s == 0:
        return math.inf
    if kernel.kind == LOG_PLUS_POW:
        return max(math.log(1.0 / s), 0.0) ** kernel.k
    return s ** (-kernel.exponent)
