"""Statistical significance of IMFs against a white-noise null.

Each component is summarized by its mean period (two zero crossings per
oscillation) and mean energy density. The 5th/95th percentile confidence
band is built by Monte Carlo: decompose seeded unit-variance white-noise
realizations, pool the (period, energy) pairs of their components and
take empirical percentiles per octave of log period. Components whose
energy falls inside the band are indistinguishable from white noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import Decomposition, PeriodUndefinedError, SampledSignal, Variant
from .emd import SiftConfig, emd, zero_crossing_count
from .epemd import epemd
from .gsom import orthogonal_variants

#: Width of a log-period pooling bin, in octaves.
OCTAVES_PER_BIN = 1.0


@dataclass(frozen=True)
class SignificancePoint:
    mean_period: float  # seconds
    energy_density: float  # per-sample mean of imf^2
    inside_bounds: Optional[bool]  # None when the period is undefined


@dataclass(frozen=True)
class ConfidenceBand:
    period_grid: np.ndarray  # seconds, ascending
    lower_5th: np.ndarray
    upper_95th: np.ndarray
    ensemble_size: int
    noise_length: int


def imf_statistics(imf: SampledSignal) -> SignificancePoint:
    """Mean period and mean energy density of one component."""
    if imf.n < 8:
        raise ValueError("component too short for period statistics")
    zc = zero_crossing_count(imf)
    if zc == 0:
        raise PeriodUndefinedError("no zero crossings: component is a trend")
    mean_period = 2.0 * imf.duration / zc
    energy_density = float(np.mean(imf.samples**2))
    return SignificancePoint(mean_period, energy_density, None)


def _decompose_variant(x: SampledSignal, decomposer: Variant, cfg: SiftConfig) -> Decomposition:
    if decomposer is Variant.EMD:
        return emd(x, cfg)
    if decomposer is Variant.EPEMD:
        return epemd(x, cfg)
    if decomposer in (Variant.ROIMF, Variant.ROUIMF, Variant.FOIMF, Variant.FOUIMF,
                      Variant.OIMF):
        return orthogonal_variants(emd(x, cfg), decomposer)
    raise ValueError(f"unsupported decomposer {decomposer}")


def white_noise_band(
    length: int,
    decomposer: Variant = Variant.EMD,
    trials: int = 100,
    seed: int = 0,
    sample_rate: float = 1.0,
    cfg: SiftConfig = SiftConfig(),
) -> ConfidenceBand:
    """Monte-Carlo 5th/95th percentile band for components of white noise.

    Deterministic given ``seed``; trial streams are derived from
    (seed, trial index) so evaluation order does not matter.
    """
    if trials < 50:
        raise ValueError("need at least 50 trials")
    periods: list[float] = []
    energies: list[float] = []
    for trial in range(trials):
        rng = np.random.default_rng([seed, trial])
        x = SampledSignal(rng.standard_normal(length), sample_rate)
        d = _decompose_variant(x, decomposer, cfg)
        for imf in d.imfs:
            try:
                pt = imf_statistics(imf)
            except PeriodUndefinedError:
                continue
            periods.append(pt.mean_period)
            energies.append(pt.energy_density)

    log_p = np.log2(periods)
    e = np.array(energies)
    lo_edge = np.floor(log_p.min())
    n_bins = int(np.ceil((log_p.max() - lo_edge) / OCTAVES_PER_BIN)) + 1
    grid, lower, upper = [], [], []
    for b in range(n_bins):
        mask = (log_p >= lo_edge + b * OCTAVES_PER_BIN) & (
            log_p < lo_edge + (b + 1) * OCTAVES_PER_BIN
        )
        if np.count_nonzero(mask) < 5:
            continue
        # Anchor the grid at the mean log-period of the bin's points, not
        # the bin center: component periods cluster dyadically, and a
        # grid aligned with the clusters keeps the interpolated band
        # honest where the points actually fall.
        grid.append(2.0 ** float(np.mean(log_p[mask])))
        lower.append(float(np.percentile(e[mask], 5)))
        upper.append(float(np.percentile(e[mask], 95)))
    return ConfidenceBand(
        np.array(grid), np.array(lower), np.array(upper), trials, length
    )


def significance_test(d: Decomposition, band: ConfidenceBand) -> list[SignificancePoint]:
    """Mark each IMF of ``d`` inside/outside the band.

    The input variance is normalized to one before testing so the
    decision is invariant under uniform scaling; the band's percentile
    curves are interpolated in log-log space and held at the ends.
    """
    var = float(np.var(d.reconstruct().samples))
    scale = var if var > 0 else 1.0
    log_grid = np.log2(band.period_grid)
    log_lo = np.log2(np.maximum(band.lower_5th, 1e-300))
    log_hi = np.log2(np.maximum(band.upper_95th, 1e-300))

    points: list[SignificancePoint] = []
    for imf in d.imfs:
        try:
            pt = imf_statistics(imf)
        except PeriodUndefinedError:
            points.append(SignificancePoint(float("nan"), float(np.mean(imf.samples**2)), None))
            continue
        e_norm = pt.energy_density / scale
        lp = np.log2(pt.mean_period)
        lo = 2.0 ** float(np.interp(lp, log_grid, log_lo))
        hi = 2.0 ** float(np.interp(lp, log_grid, log_hi))
        points.append(SignificancePoint(pt.mean_period, pt.energy_density,
                                        lo <= e_norm <= hi))
    return points
