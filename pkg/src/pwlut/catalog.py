"""Benchmark functions with analytic second derivatives.

Every entry carries the interior critical points of ``|f''|`` so that the
maximum of ``|f''|`` over a closed interval can be taken from a handful of
exact evaluations instead of a search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import expit

from .errors import ArgumentError, DomainError

__all__ = [
    "Domain",
    "FunctionSpec",
    "CATALOG",
    "get_function",
    "affine",
    "evaluate",
    "max_abs_second_derivative",
    "max_abs_second_derivative_many",
]

SAMPLE_POINTS = 4097


@dataclass(frozen=True)
class Domain:
    lo: float = -math.inf
    hi: float = math.inf
    lo_open: bool = True
    hi_open: bool = True

    def mask(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        above = x > self.lo if self.lo_open else x >= self.lo
        below = x < self.hi if self.hi_open else x <= self.hi
        return above & below & np.isfinite(x)

    @property
    def top(self) -> float:
        """Largest representable point of the domain."""
        return math.nextafter(self.hi, -math.inf) if self.hi_open else self.hi

    def contains(self, x) -> bool:
        return bool(np.all(self.mask(x)))

    def __str__(self):
        left = "(" if self.lo_open else "["
        right = ")" if self.hi_open else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


@dataclass(frozen=True)
class FunctionSpec:
    """A real function of one variable together with its second derivative.

    ``f`` and ``f2`` must accept numpy arrays. ``f2_extrema_hint`` lists every
    interior local maximum of ``|f2|``; leave it as ``None`` for functions
    where that is unknown, which switches the curvature bound to sampling.
    """

    id: str
    f: Callable = field(repr=False)
    f2: Callable = field(repr=False)
    domain: Domain = Domain()
    f2_extrema_hint: Optional[tuple] = None
    label: str = ""

    def __call__(self, x):
        return evaluate(self, x)


def _tan_f2(x):
    t = np.tan(x)
    return 2.0 * t * (1.0 + t * t)


def _tanh_f2(x):
    t = np.tanh(x)
    return -2.0 * t * (1.0 - t * t)


def _gauss(x):
    return np.exp(-0.5 * np.square(x))


def _gauss_f2(x):
    return (np.square(x) - 1.0) * np.exp(-0.5 * np.square(x))


def _logistic(x):
    return expit(x)


def _logistic_f2(x):
    s = _logistic(x)
    return s * (1.0 - s) * (1.0 - 2.0 * s)


def _logistic_rev(x):
    return _logistic(-np.asarray(x, dtype=float))


def _logistic_rev_f2(x):
    return _logistic_f2(-np.asarray(x, dtype=float))


_TANH_PEAK = math.atanh(1.0 / math.sqrt(3.0))
_LOGISTIC_PEAK = math.log(2.0 + math.sqrt(3.0))

CATALOG = {
    spec.id: spec
    for spec in (
        FunctionSpec(
            "tan", np.tan, _tan_f2,
            Domain(-math.pi / 2, math.pi / 2), (), "tan(x)",
        ),
        FunctionSpec(
            "log", np.log, lambda x: -1.0 / np.square(x),
            Domain(0.0, math.inf), (), "log(x)",
        ),
        FunctionSpec("exp", np.exp, np.exp, Domain(), (), "exp(x)"),
        FunctionSpec(
            "tanh", np.tanh, _tanh_f2, Domain(),
            (-_TANH_PEAK, _TANH_PEAK), "tanh(x)",
        ),
        FunctionSpec(
            "gauss", _gauss, _gauss_f2, Domain(),
            (-math.sqrt(3.0), 0.0, math.sqrt(3.0)), "exp(-x^2/2)",
        ),
        FunctionSpec(
            "logistic", _logistic, _logistic_f2, Domain(),
            (-_LOGISTIC_PEAK, _LOGISTIC_PEAK), "1/(1+exp(-x))",
        ),
        FunctionSpec(
            "logistic_rev", _logistic_rev, _logistic_rev_f2, Domain(),
            (-_LOGISTIC_PEAK, _LOGISTIC_PEAK), "1/(1+exp(x))",
        ),
    )
}


def get_function(name: str) -> FunctionSpec:
    try:
        return CATALOG[name]
    except KeyError:
        known = ", ".join(sorted(CATALOG))
        raise ArgumentError(f"unknown function id {name!r} (known: {known})") from None


def affine(slope: float = 1.0, intercept: float = 0.0, id: str | None = None) -> FunctionSpec:
    """Straight line ``slope*x + intercept``; its tables are exact."""
    return FunctionSpec(
        id or f"affine({slope:g},{intercept:g})",
        lambda x: slope * np.asarray(x, dtype=float) + intercept,
        lambda x: np.zeros_like(np.asarray(x, dtype=float)),
        Domain(),
        (),
        f"{slope:g}*x+{intercept:g}",
    )


def evaluate(fn: FunctionSpec, x):
    if not fn.domain.contains(x):
        raise DomainError(f"{fn.id}: x={x!r} outside domain {fn.domain}")
    y = fn.f(x)
    return float(y) if np.ndim(y) == 0 else np.asarray(y, dtype=float)


def check_interval(fn: FunctionSpec, lo: float, hi: float):
    if not lo < hi:
        raise ArgumentError(f"empty interval [{lo!r}, {hi!r}]")
    if not fn.domain.contains([lo, hi]):
        raise DomainError(f"{fn.id}: [{lo!r}, {hi!r}] not inside domain {fn.domain}")


def _sampled_max(fn: FunctionSpec, lo: float, hi: float, points: int) -> float:
    xs = np.linspace(lo, hi, points)
    vals = np.abs(np.asarray(fn.f2(xs), dtype=float))
    k = int(np.argmax(vals))
    best = float(vals[k])
    if 0 < k < points - 1:
        bracket = (xs[k - 1], xs[k], xs[k + 1])
        try:
            res = minimize_scalar(
                lambda t: -abs(float(fn.f2(t))), bracket=bracket,
                method="golden", tol=1e-12,
            )
            if lo <= res.x <= hi:
                best = max(best, -float(res.fun))
        except ValueError:
            # flat neighbourhood, the grid value already is the maximum
            pass
    return best


def max_abs_second_derivative(fn: FunctionSpec, lo: float, hi: float,
                              points: int = SAMPLE_POINTS) -> float:
    """Upper bound of ``|f''|`` on the closed interval ``[lo, hi]``.

    Exact (up to rounding) for hinted functions; otherwise a dense grid of
    ``points`` samples refined by golden-section search around the grid
    maximum.
    """
    lo = float(lo)
    hi = float(hi)
    check_interval(fn, lo, hi)
    if fn.f2_extrema_hint is None:
        return _sampled_max(fn, lo, hi, points)
    # same code path as the sweeps so both agree to the last bit
    return float(max_abs_second_derivative_many(fn, [lo], [hi])[0])


def max_abs_second_derivative_many(fn: FunctionSpec, lo, hi) -> np.ndarray:
    """Vectorised :func:`max_abs_second_derivative` over arrays of intervals.

    Callers are trusted to pass in-domain, non-empty intervals; this is the
    inner loop of the sweep algorithms.
    """
    lo, hi = np.broadcast_arrays(np.asarray(lo, dtype=float), np.asarray(hi, dtype=float))
    if fn.f2_extrema_hint is None:
        return np.array([_sampled_max(fn, a, b, SAMPLE_POINTS) for a, b in zip(lo.ravel(), hi.ravel())]).reshape(lo.shape)
    out = np.maximum(np.abs(fn.f2(lo)), np.abs(fn.f2(hi)))
    for h in fn.f2_extrema_hint:
        inside = (lo <= h) & (h <= hi)
        if np.any(inside):
            out = np.where(inside, np.maximum(out, abs(float(fn.f2(h)))), out)
    return np.asarray(out, dtype=float)

