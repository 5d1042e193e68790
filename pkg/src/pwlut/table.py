"""Segmented lookup tables and their evaluation datapaths.

A table stores, per segment ``j``, the function values at
``x_start_j + m * delta_j`` for ``m = 0 .. count_j - 1`` in one flat array;
segment ``j`` starts at global address ``base_address_j``.  Evaluation picks
the segment with a balanced comparator tree, finds the breakpoint index and
interpolates linearly between the two neighbouring entries.

Two datapaths are modelled:

* :func:`evaluate_real` works on the full-precision master values.
* :func:`evaluate_fixed` is bit-accurate on integer words.  The only
  rounding steps are the quantised breakpoint positions, the quantised
  reciprocal spacing and one round-to-nearest-even at the output.
  Intermediate products are kept exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .catalog import FunctionSpec
from .errors import ArgumentError, RangeError
from .fixedpoint import FixedPointFormat, round_shift
from .segmentation import SegmentPlan

__all__ = [
    "Segment",
    "SelectorTree",
    "SegmentedTable",
    "build_table",
    "select_segment",
    "breakpoint_index",
    "evaluate_real",
    "evaluate_real_many",
    "evaluate_fixed",
    "evaluate_fixed_detail",
    "max_observed_error",
]


@dataclass(frozen=True)
class Segment:
    x_start: float
    x_end: float
    delta: float
    inv_delta: float
    count: int
    base_address: int

    def breakpoint(self, m: int) -> float:
        return self.x_start + m * self.delta

    @property
    def last_address(self) -> int:
        return self.base_address + self.count - 1


class SelectorTree:
    """Complete binary comparator tree over the inner partition boundaries.

    Stored in heap order: node ``k`` has children ``2k+1`` (below the
    threshold) and ``2k+2`` (at or above it).  Every lookup walks exactly
    ``depth = ceil(log2(n))`` comparators; padding nodes carry an infinite
    threshold and are never taken to the right.
    """

    def __init__(self, boundaries):
        b = [float(p) for p in boundaries]
        self.n_segments = len(b) - 1
        self.depth = (self.n_segments - 1).bit_length()
        leaves = 1 << self.depth
        self.thresholds = [math.inf] * (leaves - 1)

        def fill(node, a, c):
            if c - a < 2:
                return
            m = (a + c) // 2
            self.thresholds[node] = b[m] if m < self.n_segments else math.inf
            fill(2 * node + 1, a, m)
            fill(2 * node + 2, m, c)

        fill(0, 0, leaves)
        self._thr = np.array(self.thresholds, dtype=float)

    def lookup(self, x: float) -> tuple[int, int]:
        """Return ``(segment index, comparators used)``."""
        node = 0
        for _ in range(self.depth):
            node = 2 * node + 1 + (x >= self.thresholds[node])
        return node - ((1 << self.depth) - 1), self.depth

    def lookup_many(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        node = np.zeros(xs.shape, dtype=np.int64)
        for _ in range(self.depth):
            node = 2 * node + 1 + (xs >= self._thr[node])
        return node - ((1 << self.depth) - 1)

    def preorder(self) -> list:
        out = []

        def walk(node):
            if node >= len(self.thresholds):
                return
            out.append(self.thresholds[node])
            walk(2 * node + 1)
            walk(2 * node + 2)

        walk(0)
        return out


@dataclass
class SegmentedTable:
    fn_id: str
    ea: float
    boundaries: tuple
    segments: tuple
    values: np.ndarray = field(repr=False)
    words: tuple = field(repr=False)
    in_fmt: FixedPointFormat
    out_fmt: FixedPointFormat
    inv_frac: int = 0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        self.values.setflags(write=False)
        self.selector = SelectorTree(self.boundaries)
        self._inv_words = [int(round(math.ldexp(s.inv_delta, self.inv_frac))) for s in self.segments]
        self._sel_words = [None if math.isinf(t) else self.in_fmt.ceil_word(t)
                           for t in self.selector.thresholds]
        self._lo_word = self.in_fmt.ceil_word(self.x0)
        self._hi_word = self.in_fmt.floor_word(self.x_end)
        self._starts = np.array([s.x_start for s in self.segments])
        self._deltas = np.array([s.delta for s in self.segments])
        self._bases = np.array([s.base_address for s in self.segments], dtype=np.int64)
        self._counts = np.array([s.count for s in self.segments], dtype=np.int64)

    @property
    def x0(self) -> float:
        return self.boundaries[0]

    @property
    def x_end(self) -> float:
        return self.boundaries[-1]

    @property
    def footprint(self) -> int:
        return len(self.words)

    @property
    def n_segments(self) -> int:
        return len(self.segments)

    @property
    def inv_fmt(self) -> FixedPointFormat:
        return FixedPointFormat(False, 2 * self.in_fmt.width, self.inv_frac)

    def fixed_error_budget(self) -> float:
        """Bound on ``|evaluate_fixed - evaluate_real|`` for in-range inputs.

        ``Ea`` plus one output LSB plus the weight error caused by the
        quantised breakpoint positions and reciprocal spacing.
        """
        lsb_in = self.in_fmt.lsb
        lsb_inv = math.ldexp(1.0, -self.inv_frac)
        worst = 0.0
        for s in self.segments:
            v = self.values[s.base_address:s.base_address + s.count]
            dy = float(np.max(np.abs(np.diff(v)))) if s.count > 1 else 0.0
            w_err = 1.5 * lsb_in / s.delta + (s.delta + lsb_in) * lsb_inv / 2
            worst = max(worst, dy * w_err)
        return self.ea + self.out_fmt.lsb + worst


def _inv_frac_bits(segments, in_fmt: FixedPointFormat) -> int:
    int_bits = max(int(s.inv_delta).bit_length() for s in segments)
    frac = 2 * in_fmt.width - max(int_bits, 1)
    if frac < 0:
        raise RangeError(f"reciprocal spacing needs {int_bits} integer bits, "
                         f"more than {2 * in_fmt.width} available")
    return frac


def _clamp_to_domain(fn: FunctionSpec, xs: np.ndarray) -> np.ndarray:
    return np.minimum(xs, fn.domain.top)


def build_table(fn: FunctionSpec, plan: SegmentPlan, in_fmt: FixedPointFormat | None = None,
                out_fmt: FixedPointFormat | None = None) -> SegmentedTable:
    """Sample ``fn`` at every breakpoint of ``plan`` and quantise the results.

    The last breakpoint of a segment may lie past the segment end (the entry
    count is rounded up); it is sampled there, pulled back to the domain
    edge if necessary.  Missing formats are sized to the data as signed
    32-bit words with as many fraction bits as fit.
    """
    segments = []
    values = []
    base = 0
    bounds = plan.partition.boundaries
    for j, (delta, count) in enumerate(zip(plan.spacings, plan.counts)):
        seg = Segment(bounds[j], bounds[j + 1], float(delta), 1.0 / float(delta), int(count), base)
        xs = _clamp_to_domain(fn, seg.x_start + np.arange(seg.count) * seg.delta)
        ys = np.asarray(fn.f(xs), dtype=float)
        bad = np.flatnonzero(~np.isfinite(ys))
        if bad.size:
            m = int(bad[0])
            raise RangeError(f"{fn.id}: non-finite value at breakpoint {m} of segment {j} (x={xs[m]!r})")
        values.append(ys)
        segments.append(seg)
        base += seg.count
    values = np.concatenate(values)
    if in_fmt is None:
        in_fmt = FixedPointFormat.fitting(max(abs(bounds[0]), abs(bounds[-1])))
    if out_fmt is None:
        out_fmt = FixedPointFormat.fitting(float(np.max(np.abs(values))))
    words = []
    for addr, y in enumerate(values):
        w = out_fmt.round_word(float(y))
        if not out_fmt.fits(w):
            j = next(k for k, s in enumerate(segments) if addr <= s.last_address)
            m = addr - segments[j].base_address
            raise RangeError(
                f"{fn.id}: breakpoint {m} of segment {j} (x={segments[j].breakpoint(m)!r}, "
                f"y={y!r}) overflows output format {out_fmt}")
        words.append(w)
    return SegmentedTable(
        fn.id, plan.ea, tuple(bounds), tuple(segments), values, tuple(words),
        in_fmt, out_fmt, _inv_frac_bits(segments, in_fmt),
    )


def _check_range(table: SegmentedTable, x):
    if not (table.x0 <= x <= table.x_end):
        raise RangeError(f"x={x!r} outside table interval [{table.x0!r}, {table.x_end!r}]")


def select_segment(table: SegmentedTable, x: float) -> int:
    _check_range(table, x)
    return table.selector.lookup(x)[0]


def breakpoint_index(segment: Segment, x: float) -> int:
    i = math.floor((x - segment.x_start) / segment.delta)
    return min(max(i, 0), segment.count - 2)


def evaluate_real_many(table: SegmentedTable, xs) -> np.ndarray:
    xs = np.asarray(xs, dtype=float)
    if xs.size and (xs.min() < table.x0 or xs.max() > table.x_end):
        raise RangeError(f"inputs outside table interval [{table.x0!r}, {table.x_end!r}]")
    j = table.selector.lookup_many(xs)
    start = table._starts[j]
    delta = table._deltas[j]
    top = table._counts[j] - 2
    i = np.clip(np.floor((xs - start) / delta).astype(np.int64), 0, top)
    # snap to the breakpoint grid so exact hits return the stored value
    up = (i < top) & (xs >= start + (i + 1) * delta)
    i = i + up
    down = (i > 0) & (xs < start + i * delta)
    i = i - down
    xi = start + i * delta
    addr = table._bases[j] + i
    y0 = table.values[addr]
    y1 = table.values[addr + 1]
    t = (xs - xi) / delta
    y = y0 + t * (y1 - y0)
    return np.where(xs == start + (i + 1) * delta, y1, y)


def evaluate_real(table: SegmentedTable, x: float) -> float:
    _check_range(table, x)
    return float(evaluate_real_many(table, np.array([x], dtype=float))[0])


def _fixed(table: SegmentedTable, xi: int) -> tuple[int, bool]:
    fmt = table.in_fmt
    if not (fmt.fits(xi) and table._lo_word <= xi <= table._hi_word):
        raise RangeError(f"input word {xi} outside table interval "
                         f"[{table.x0!r}, {table.x_end!r}] in format {fmt}")
    node = 0
    sel = table._sel_words
    for _ in range(table.selector.depth):
        thr = sel[node]
        node = 2 * node + 1 + (thr is not None and xi >= thr)
    j = node - ((1 << table.selector.depth) - 1)
    seg = table.segments[j]
    inv = table._inv_words[j]
    shift = fmt.frac + table.inv_frac

    def pos(m):
        return fmt.quantize(seg.x_start + m * seg.delta)

    top = seg.count - 2
    i = ((xi - pos(0)) * inv) >> shift
    i = min(max(i, 0), top)
    if i < top and xi >= pos(i + 1):
        i += 1
    elif i > 0 and xi < pos(i):
        i -= 1
    words = table.words
    y0 = words[seg.base_address + i]
    y1 = words[seg.base_address + i + 1]
    if xi == pos(i + 1):
        return y1, False
    r = xi - pos(i)
    acc = (y0 << shift) + r * inv * (y1 - y0)
    out = round_shift(acc, shift)
    sat = table.out_fmt.saturate(out)
    return sat, sat != out


def evaluate_fixed(table: SegmentedTable, xi: int) -> int:
    """Bit-accurate evaluation of input word ``xi`` (``in_fmt``) to an ``out_fmt`` word."""
    return _fixed(table, int(xi))[0]


def evaluate_fixed_detail(table: SegmentedTable, xi: int) -> tuple[int, bool]:
    """Like :func:`evaluate_fixed` but also reports whether the output saturated."""
    return _fixed(table, int(xi))


def max_observed_error(table: SegmentedTable, fn: FunctionSpec, samples: int) -> float:
    """Largest ``|f(x) - table(x)|`` over ``samples`` evenly spaced points."""
    if samples < 2:
        raise ArgumentError("need at least two samples")
    xs = np.linspace(table.x0, table.x_end, samples)
    err = np.abs(np.asarray(fn.f(xs), dtype=float) - evaluate_real_many(table, xs))
    return float(err.max())
