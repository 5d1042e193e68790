"""Footprint-reduction studies over random intervals and two-sample t-tests."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats as sps

from .catalog import get_function
from .errors import ArgumentError
from .segmentation import SplitConfig, plan, split
from .spacing import footprint_reduction, uniform_spacing

__all__ = [
    "StudyConfig",
    "SampleGroup",
    "StudyResult",
    "TTestResult",
    "omega_grid",
    "pairwise_tests",
    "random_intervals",
    "mean_reduction_study",
    "t_test_two_sample",
    "outperforms",
    "study_csv",
    "ttest_csv",
]

STUDY_ALGORITHMS = ("binary", "hierarchical", "sequential")
TAILS = ("two", "right", "left")


def omega_grid(start: float = 0.01, stop: float = 0.30, step: float = 0.01) -> tuple:
    n = int(round((stop - start) / step)) + 1
    return tuple(round(start + k * step, 10) for k in range(n))


@dataclass(frozen=True)
class StudyConfig:
    fn_id: str
    lo: float
    hi: float
    seed: int
    population_size: int = 100
    omegas: tuple = field(default_factory=omega_grid)
    ea: float = 9.5367e-7
    epsilon_fraction: float = 1e-3
    min_length_fraction: float = 0.01
    predicate: str = "prose"
    cost: str = "intervals"

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ArgumentError(f"empty base interval [{self.lo!r}, {self.hi!r}]")
        if self.population_size < 2:
            raise ArgumentError("population needs at least two intervals")
        if not self.omegas or any(not 0 < w <= 1 for w in self.omegas):
            raise ArgumentError(f"every omega must lie in (0, 1]: {self.omegas}")
        if not self.ea > 0:
            raise ArgumentError("Ea must be positive")


@dataclass(frozen=True)
class SampleGroup:
    algorithm: str
    omegas: tuple
    samples: tuple
    mean_segments: tuple = ()

    def __len__(self):
        return len(self.samples)


@dataclass(frozen=True)
class StudyResult:
    config: StudyConfig
    intervals: tuple
    groups: dict

    def __getitem__(self, algorithm: str) -> SampleGroup:
        return self.groups[algorithm]


def random_intervals(lo: float, hi: float, n: int, rng: np.random.Generator,
                     min_length: float, domain=None, max_tries: int = 1000) -> list:
    """Uniform endpoint pairs inside ``[lo, hi)``, redrawn while shorter than ``min_length``."""
    out = []
    for _ in range(n):
        for _ in range(max_tries):
            a, b = np.sort(rng.uniform(lo, hi, 2))
            a, b = float(a), float(b)
            if b - a >= min_length and (domain is None or domain.contains([a, b])):
                out.append((a, b))
                break
        else:
            raise ArgumentError(f"could not draw an interval of length >= {min_length!r} "
                                f"in [{lo!r}, {hi!r}) after {max_tries} tries")
    return out


def mean_reduction_study(cfg: StudyConfig, algorithms: Sequence[str] = STUDY_ALGORITHMS,
                         fn=None) -> StudyResult:
    """Mean footprint reduction per omega and algorithm over a seeded population.

    ``fn`` overrides the catalog lookup of ``cfg.fn_id`` for user functions.
    """
    fn = fn or get_function(cfg.fn_id)
    rng = np.random.default_rng(cfg.seed)
    intervals = random_intervals(cfg.lo, cfg.hi, cfg.population_size, rng,
                                 cfg.min_length_fraction * (cfg.hi - cfg.lo), fn.domain)
    refs = [uniform_spacing(fn, cfg.ea, a, b).kappa for a, b in intervals]
    groups = {}
    for alg in algorithms:
        means, segs = [], []
        for omega in cfg.omegas:
            red = np.empty(len(intervals))
            nseg = np.empty(len(intervals))
            for k, (a, b) in enumerate(intervals):
                sc = SplitConfig(omega, cfg.ea, (b - a) * cfg.epsilon_fraction, cfg.predicate, cfg.cost)
                part = split(alg, fn, sc, a, b)
                total = plan(fn, cfg.ea, part).total_footprint
                red[k] = footprint_reduction(refs[k], total)
                nseg[k] = part.n_segments
            means.append(float(red.mean()))
            segs.append(float(nseg.mean()))
        groups[alg] = SampleGroup(alg, tuple(cfg.omegas), tuple(means), tuple(segs))
    return StudyResult(cfg, tuple(intervals), groups)


@dataclass(frozen=True)
class TTestResult:
    tail: str
    t_statistic: float
    degrees_of_freedom: float
    critical_value: float
    p_value: float
    alpha: float
    reject_h0: bool
    degenerate: bool = False


def _samples(g) -> np.ndarray:
    return np.asarray(g.samples if isinstance(g, SampleGroup) else g, dtype=float)


def t_test_two_sample(g1, g2, tail: str = "two", alpha: float = 0.05) -> TTestResult:
    """Pooled-variance Student t-test of ``mean(g1)`` against ``mean(g2)``.

    ``right`` tests H0: mu1 <= mu2, ``left`` tests H0: mu1 >= mu2.
    """
    if tail not in TAILS:
        raise ArgumentError(f"tail must be one of {TAILS}, got {tail!r}")
    if not 0 < alpha <= 0.5:
        raise ArgumentError(f"alpha must lie in (0, 0.5], got {alpha!r}")
    x, y = _samples(g1), _samples(g2)
    n1, n2 = len(x), len(y)
    if n1 < 1 or n2 < 1 or n1 + n2 < 3:
        raise ArgumentError("need at least three samples in total and one per group")
    df = n1 + n2 - 2
    diff = x.mean() - y.mean()
    ss = ((x - x.mean()) ** 2).sum() + ((y - y.mean()) ** 2).sum()
    pooled = ss / df
    crit = float(sps.t.ppf(1 - alpha / 2 if tail == "two" else 1 - alpha, df))
    degenerate = pooled == 0
    if degenerate:
        t = 0.0 if diff == 0 else math.copysign(math.inf, diff)
    else:
        t = float(diff / math.sqrt(pooled * (1.0 / n1 + 1.0 / n2)))
    if tail == "two":
        p = float(2 * sps.t.sf(abs(t), df))
        reject = abs(t) > crit
    elif tail == "right":
        p = float(sps.t.sf(t, df))
        reject = t > crit
    else:
        p = float(sps.t.cdf(t, df))
        reject = t < -crit
    return TTestResult(tail, t, float(df), crit, p, alpha, bool(reject), degenerate)


def outperforms(g1, g2, alpha: float = 0.05) -> tuple[bool, TTestResult, TTestResult]:
    """Whether ``g2`` has a significantly larger mean than ``g1``.

    True when the right-tailed test keeps H0 and the left-tailed test
    rejects it (the 0/1 pattern).
    """
    right = t_test_two_sample(g1, g2, "right", alpha)
    left = t_test_two_sample(g1, g2, "left", alpha)
    return (not right.reject_h0) and left.reject_h0, right, left


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def study_csv(result: StudyResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["omega", "algorithm", "mean_reduction_pct", "mean_segments"])
    for alg, g in result.groups.items():
        for omega, red, seg in zip(g.omegas, g.samples, g.mean_segments):
            w.writerow([_fmt(omega), alg, _fmt(red), _fmt(seg)])
    return buf.getvalue()


def pairwise_tests(result: StudyResult, alpha: float = 0.05) -> list:
    algs = list(result.groups)
    rows = []
    for a in range(len(algs)):
        for b in range(a + 1, len(algs)):
            g1, g2 = result.groups[algs[a]], result.groups[algs[b]]
            flag, right, left = outperforms(g1, g2, alpha)
            rows.append((algs[a], algs[b], right, left, flag))
    return rows


def ttest_csv(result: StudyResult, alpha: float = 0.05) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["g1", "g2", "variance", "alpha", "df", "t_statistic",
                "right_reject", "left_reject", "g2_outperforms_g1"])
    for a, b, right, left, flag in pairwise_tests(result, alpha):
        w.writerow([a, b, "pooled", _fmt(alpha), _fmt(right.degrees_of_freedom),
                    _fmt(right.t_statistic), int(right.reject_h0), int(left.reject_h0), int(flag)])
    return buf.getvalue()
