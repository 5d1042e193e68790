"""Uniform breakpoint spacing under an absolute error budget.

Linear interpolation between breakpoints ``delta`` apart has error at most
``delta**2 / 8 * max|f''|``; inverting that gives the widest admissible
spacing, and the entry count follows from covering the interval.

Covering ``[lo, hi]`` with ``ceil((hi - lo) / delta) + 1`` breakpoints puts
the last one up to ``delta`` past ``hi``, and the last interpolation step
spans that overshoot.  The curvature bound is therefore taken over the whole
covered span ``[lo, lo + (kappa - 1) * delta]`` (clipped to the domain),
re-solving until the span no longer raises it.  For functions whose
``|f''|`` does not grow past ``hi`` this is the plain interval maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .catalog import FunctionSpec, check_interval, max_abs_second_derivative_many
from .errors import ArgumentError

__all__ = [
    "SpacingResult",
    "segment_error_bound",
    "spacing_from_curvature",
    "entry_count",
    "uniform_spacing",
    "spacing_many",
    "footprint_reduction",
]


@dataclass(frozen=True)
class SpacingResult:
    delta: float
    kappa: int
    max_f2: float

    @property
    def intervals(self) -> int:
        return self.kappa - 1


def segment_error_bound(delta: float, max_f2: float) -> float:
    if not delta > 0:
        raise ArgumentError(f"spacing must be positive, got {delta!r}")
    if max_f2 < 0:
        raise ArgumentError(f"curvature bound must be non-negative, got {max_f2!r}")
    return delta * delta * max_f2 / 8.0


def spacing_from_curvature(max_f2: float, ea: float, length: float) -> float:
    if max_f2 <= 0:
        return length
    return min(math.sqrt(8.0 * ea / max_f2), length)


def entry_count(delta: float, length: float) -> int:
    """Breakpoints needed to cover ``length`` at spacing ``delta``: ceil(a/d) + 1."""
    return math.ceil(length / delta) + 1


def uniform_spacing(fn: FunctionSpec, ea: float, lo: float, hi: float) -> SpacingResult:
    if not ea > 0:
        raise ArgumentError(f"error bound must be positive, got {ea!r}")
    check_interval(fn, float(lo), float(hi))
    delta, kappa, m = _solve(fn, ea, np.array([lo], dtype=float), np.array([hi], dtype=float))
    return SpacingResult(float(delta[0]), int(kappa[0]), float(m[0]))


def spacing_many(fn: FunctionSpec, ea: float, lo, hi):
    """Vectorised spacing: returns ``(delta, kappa)`` arrays for many intervals.

    Bit-identical to :func:`uniform_spacing` element by element.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    delta, kappa, _ = _solve(fn, ea, lo.ravel(), hi.ravel())
    return delta.reshape(lo.shape), kappa.reshape(lo.shape)


def _step(m, ea, length):
    with np.errstate(divide="ignore"):
        raw = np.sqrt(8.0 * ea / m)
    delta = np.where(m > 0, np.minimum(raw, length), length)
    kappa = np.ceil(length / delta).astype(np.int64) + 1
    return delta, kappa


def _solve(fn, ea, lo, hi, max_rounds: int = 64):
    length = hi - lo
    m = max_abs_second_derivative_many(fn, lo, hi)
    delta, kappa = _step(m, ea, length)
    top = fn.domain.top
    for _ in range(max_rounds):
        end = np.minimum(lo + (kappa - 1) * delta, top)
        grow = end > hi
        if not np.any(grow):
            break
        m_span = m.copy()
        m_span[grow] = max_abs_second_derivative_many(fn, lo[grow], end[grow])
        grow &= m_span > m
        if not np.any(grow):
            break
        m = np.where(grow, m_span, m)
        d2, k2 = _step(m, ea, length)
        delta = np.where(grow, d2, delta)
        kappa = np.where(grow, k2, kappa)
    return delta, kappa, m


def footprint_reduction(mf_ref: int, mf_part: int) -> float:
    """Percentage of entries saved relative to the reference table."""
    if mf_ref <= 0:
        raise ArgumentError(f"reference footprint must be positive, got {mf_ref!r}")
    return (mf_ref - mf_part) / mf_ref * 100.0
