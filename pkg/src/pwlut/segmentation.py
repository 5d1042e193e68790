"""Interval splitting: binary, hierarchical and sequential segmentation.

All three algorithms decide whether to split ``[p, q)`` at a point ``s`` by
comparing the footprint of the two halves against the footprint of the
whole.  The comparison is controlled by two switches on :class:`SplitConfig`:

``predicate``
    ``"prose"`` (default) accepts when the split saves at least a fraction
    ``omega`` of the parent: ``left + right < (1 - omega) * parent``.
    ``"pseudocode"`` accepts when ``left + right < omega * parent``.

``cost``
    ``"intervals"`` (default) measures a sub-interval by its number of
    spacing steps ``ceil(length / delta)``; ``"entries"`` uses the stored
    entry count, one more than that.

Plans built from the accepted partition always count stored entries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .catalog import FunctionSpec, check_interval
from .errors import ArgumentError
from .spacing import SpacingResult, spacing_many, uniform_spacing

__all__ = [
    "Partition",
    "SegmentPlan",
    "SplitConfig",
    "SplitStep",
    "accept_split",
    "binary_split",
    "hierarchical_split",
    "sequential_split",
    "reference_partition",
    "split",
    "plan",
    "ALGORITHMS",
]

PREDICATES = ("prose", "pseudocode")
COSTS = ("intervals", "entries")


@dataclass(frozen=True)
class Partition:
    boundaries: tuple

    def __post_init__(self):
        b = tuple(float(p) for p in self.boundaries)
        if len(b) < 2:
            raise ArgumentError("a partition needs at least two boundaries")
        if any(not q > p for p, q in zip(b, b[1:])):
            raise ArgumentError(f"boundaries must be strictly increasing: {b}")
        object.__setattr__(self, "boundaries", b)

    def __len__(self):
        return len(self.boundaries)

    def __iter__(self):
        return iter(self.boundaries)

    @property
    def segments(self):
        return list(zip(self.boundaries, self.boundaries[1:]))

    @property
    def n_segments(self) -> int:
        return len(self.boundaries) - 1


@dataclass(frozen=True)
class SegmentPlan:
    partition: Partition
    ea: float
    spacings: tuple
    counts: tuple
    max_f2: tuple = field(repr=False, default=())

    @property
    def total_footprint(self) -> int:
        return int(sum(self.counts))

    @property
    def n_segments(self) -> int:
        return len(self.counts)


@dataclass(frozen=True)
class SplitConfig:
    omega: float
    ea: float
    epsilon: Optional[float] = None
    predicate: str = "prose"
    cost: str = "intervals"

    def __post_init__(self):
        if not 0.0 < self.omega <= 1.0:
            raise ArgumentError(f"omega must lie in (0, 1], got {self.omega!r}")
        if not self.ea > 0:
            raise ArgumentError(f"Ea must be positive, got {self.ea!r}")
        if self.epsilon is not None and not self.epsilon > 0:
            raise ArgumentError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.predicate not in PREDICATES:
            raise ArgumentError(f"predicate must be one of {PREDICATES}, got {self.predicate!r}")
        if self.cost not in COSTS:
            raise ArgumentError(f"cost must be one of {COSTS}, got {self.cost!r}")

    def sweep_step(self, lo: float, hi: float) -> float:
        eps = self.epsilon if self.epsilon is not None else (hi - lo) / 1000.0
        if not eps < hi - lo:
            raise ArgumentError(f"epsilon {eps!r} must be smaller than the interval length {hi - lo!r}")
        return eps


@dataclass(frozen=True)
class SplitStep:
    """One evaluated split decision, collected when a ``trace`` list is passed."""

    lo: float
    hi: float
    point: float
    left: int
    right: int
    parent: int
    accepted: bool


def accept_split(left: int, right: int, parent: int, cfg: SplitConfig) -> bool:
    if cfg.predicate == "prose":
        return left + right < (1.0 - cfg.omega) * parent
    return left + right < cfg.omega * parent


def _cost(kappa, cfg: SplitConfig):
    return kappa - 1 if cfg.cost == "intervals" else kappa


def _cost_one(fn, cfg, lo, hi):
    res = uniform_spacing(fn, cfg.ea, lo, hi)
    return res, _cost(res.kappa, cfg)


def _too_narrow(lo: float, hi: float) -> bool:
    return hi - lo <= 4.0 * math.ulp(max(abs(lo), abs(hi)))


def binary_split(fn: FunctionSpec, cfg: SplitConfig, lo: float, hi: float,
                 trace: Optional[list] = None) -> Partition:
    """Recursive midpoint splitting."""
    lo, hi = float(lo), float(hi)
    check_interval(fn, lo, hi)
    out = set()

    def rec(p, q):
        out.update((p, q))
        if _too_narrow(p, q):
            return
        parent, kp = _cost_one(fn, cfg, p, q)
        bp = p + (q - p) / 2
        left, k1 = _cost_one(fn, cfg, p, bp)
        right, k2 = _cost_one(fn, cfg, bp, q)
        if left.delta == right.delta:
            return
        ok = accept_split(k1, k2, kp, cfg)
        if trace is not None:
            trace.append(SplitStep(p, q, bp, k1, k2, kp, ok))
        if ok:
            rec(p, bp)
            rec(bp, q)

    rec(lo, hi)
    return Partition(sorted(out))


def candidate_grid(lo: float, hi: float, eps: float) -> np.ndarray:
    """Split candidates for the hierarchical sweep, endpoints included.

    ``floor((hi - lo) / eps)`` evenly spaced points spanning ``[lo, hi]``;
    recursion levels reuse the points that fall inside their sub-interval.
    """
    n = max(int(math.floor((hi - lo) / eps)), 2)
    grid = np.linspace(lo, hi, n)
    grid[0], grid[-1] = lo, hi
    return grid


def hierarchical_split(fn: FunctionSpec, cfg: SplitConfig, lo: float, hi: float,
                       trace: Optional[list] = None) -> Partition:
    """Recursive splitting at the footprint-minimising sweep candidate."""
    lo, hi = float(lo), float(hi)
    check_interval(fn, lo, hi)
    grid = candidate_grid(lo, hi, cfg.sweep_step(lo, hi))
    keep = {0, len(grid) - 1}

    def rec(a, b):
        if b - a < 2:
            return
        p, q = grid[a], grid[b]
        cands = grid[a + 1:b]
        _, kl = spacing_many(fn, cfg.ea, p, cands)
        _, kr = spacing_many(fn, cfg.ea, cands, q)
        total = _cost(kl, cfg) + _cost(kr, cfg)
        j = int(np.argmin(total))
        _, kp = _cost_one(fn, cfg, p, q)
        k1, k2 = int(_cost(kl[j], cfg)), int(_cost(kr[j], cfg))
        ok = accept_split(k1, k2, kp, cfg)
        if trace is not None:
            trace.append(SplitStep(float(p), float(q), float(cands[j]), k1, k2, kp, ok))
        if ok:
            s = a + 1 + j
            keep.add(s)
            rec(a, s)
            rec(s, b)

    rec(0, len(grid) - 1)
    return Partition([float(grid[i]) for i in sorted(keep)])


def sequential_split(fn: FunctionSpec, cfg: SplitConfig, lo: float, hi: float,
                     trace: Optional[list] = None) -> Partition:
    """Single left-to-right sweep over ``lo + i*eps``.

    Equivalent to testing every candidate in order; the candidates after the
    last accepted boundary are scored in one vectorised pass and the sweep
    jumps to the first one that passes.
    """
    lo, hi = float(lo), float(hi)
    check_interval(fn, lo, hi)
    eps = cfg.sweep_step(lo, hi)
    i_max = int(math.floor((hi - lo) / eps))
    cands = lo + np.arange(1, i_max + 1) * eps
    cands = cands[cands < hi]

    bounds = [lo]
    xp = lo
    _, kp = _cost_one(fn, cfg, xp, hi)
    start = 0
    while start < len(cands):
        rest = cands[start:]
        _, kl = spacing_many(fn, cfg.ea, xp, rest)
        _, kr = spacing_many(fn, cfg.ea, rest, hi)
        k1, k2 = _cost(kl, cfg), _cost(kr, cfg)
        hits = np.flatnonzero(accept_split(k1, k2, kp, cfg))
        if hits.size == 0:
            break
        h = int(hits[0])
        sp = float(rest[h])
        if trace is not None:
            trace.append(SplitStep(xp, hi, sp, int(k1[h]), int(k2[h]), kp, True))
        bounds.append(sp)
        xp = sp
        _, kp = _cost_one(fn, cfg, xp, hi)
        start += h + 1
    bounds.append(hi)
    return Partition(bounds)


def reference_partition(fn: FunctionSpec, cfg: SplitConfig, lo: float, hi: float,
                        trace: Optional[list] = None) -> Partition:
    check_interval(fn, float(lo), float(hi))
    return Partition([lo, hi])


ALGORITHMS = {
    "none": reference_partition,
    "binary": binary_split,
    "hierarchical": hierarchical_split,
    "sequential": sequential_split,
}


def split(algorithm: str, fn: FunctionSpec, cfg: SplitConfig, lo: float, hi: float,
          trace: Optional[list] = None) -> Partition:
    try:
        algo = ALGORITHMS[algorithm]
    except KeyError:
        raise ArgumentError(f"unknown algorithm {algorithm!r} (choose from {', '.join(ALGORITHMS)})") from None
    return algo(fn, cfg, lo, hi, trace=trace)


def plan(fn: FunctionSpec, ea: float, partition: Partition) -> SegmentPlan:
    parts: list[SpacingResult] = [uniform_spacing(fn, ea, p, q) for p, q in partition.segments]
    return SegmentPlan(
        partition,
        float(ea),
        tuple(r.delta for r in parts),
        tuple(r.kappa for r in parts),
        tuple(r.max_f2 for r in parts),
    )
