"""Record values: extraction from streams and direct simulation.

The n-th strict upper record of an i.i.d. Pseudo-Lindley sequence is
distributed as ``Q(exp(-G_n))`` where ``G_n`` is a sum of n unit
exponentials and Q is the upper quantile: records of any continuous law
are the law's quantile transform of exponential record times.  This gives
an O(n) simulator that never scans the (exponentially long) stream.
Standardized as ``(X_n - gamma*n) / (gamma*sqrt(n))`` the record is
asymptotically standard normal, with a slowly decaying ``log(n)/sqrt(n)``
centering offset at finite n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import record_scan
from .distribution import Params
from .errors import DomainError
from .quantile import quantile_from_log_tail, quantile_tail_expansion
from .sampling import SeedSpec

__all__ = [
    "RecordSequence",
    "extract_records",
    "simulate_record",
    "standardized_record",
    "UNDERFLOW_LOG_TAIL",
]

# beyond this, exp(-G) is far under the double underflow threshold and the
# record is evaluated through the tail expansion instead of the root solve
UNDERFLOW_LOG_TAIL = 700.0


@dataclass(frozen=True, slots=True)
class RecordSequence:
    """Strict upper records with their 1-based positions in the stream.

    ``indices`` is None for records that were simulated directly rather
    than extracted from a realized stream.
    """

    values: np.ndarray
    indices: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1:
            raise DomainError("record values must form a 1-d array")
        if np.any(np.diff(values) <= 0.0):
            raise DomainError("record values must be strictly increasing")
        object.__setattr__(self, "values", values)
        if self.indices is not None:
            idx = np.asarray(self.indices, dtype=np.int64)
            if idx.shape != values.shape or np.any(np.diff(idx) <= 0):
                raise DomainError("record indices must match values and increase")
            if idx.size and idx[0] < 1:
                raise DomainError("record indices are 1-based")
            object.__setattr__(self, "indices", idx)


def extract_records(stream) -> RecordSequence:
    """Scan a stream for strict upper records (first element included)."""
    arr = np.asarray(stream, dtype=np.float64)
    if arr.ndim != 1 or arr.size == 0:
        raise DomainError("stream must be a non-empty 1-d array")
    if not np.isfinite(arr).all():
        raise DomainError("stream values must all be finite")
    values, indices = record_scan(arr)
    return RecordSequence(values=values, indices=indices)


def simulate_record(n: int, p: Params, seed: SeedSpec) -> float:
    """Draw the n-th record directly via the exponential-sum representation.

    G_n is accumulated from n inverse-transform exponentials on the seed's
    stream; the record is the quantile at log tail mass G_n, evaluated by
    the root solve, or by the tail expansion once exp(-G_n) would
    underflow (G_n > 700).
    """
    if n < 1:
        raise DomainError(f"record index must be >= 1, got {n}")
    rng = seed.rng()
    g = float(np.sum(-np.log1p(-rng.random(n))))
    return record_value_from_log_tail(g, p)


def record_value_from_log_tail(g: float, p: Params) -> float:
    """Quantile at log tail mass g with the deep-tail expansion fallback."""
    if not (g > 0.0 and math.isfinite(g)):
        raise DomainError(f"log tail mass must be finite and > 0, got {g!r}")
    if g > UNDERFLOW_LOG_TAIL:
        return quantile_tail_expansion(None, p, log_inv_u=g)
    return quantile_from_log_tail(g, p).value


def standardized_record(x_n: float, n: int, p: Params) -> float:
    """Center at gamma*n and scale by gamma*sqrt(n)."""
    if n < 1:
        raise DomainError(f"record index must be >= 1, got {n}")
    gamma = p.gamma
    return (x_n - gamma * n) / (gamma * math.sqrt(n))
