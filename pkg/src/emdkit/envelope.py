"""Local extrema detection and natural cubic-spline envelopes for sifting.

End effects are handled by mirror extension: the two extrema nearest each
end of the record are reflected about the record boundary before spline
fitting, so both envelopes are defined over the full record.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded

from .core import (
    InsufficientDataError,
    InvalidKnotsError,
    NoEnvelopeError,
    SampledSignal,
)


@dataclass(frozen=True)
class ExtremaSet:
    """Interior strict extrema as (index, value) pairs, plateau-collapsed."""

    maxima: tuple[tuple[int, float], ...]
    minima: tuple[tuple[int, float], ...]

    @property
    def n_extrema(self) -> int:
        return len(self.maxima) + len(self.minima)


@dataclass(frozen=True)
class EnvelopePair:
    upper: SampledSignal
    lower: SampledSignal
    mean: SampledSignal


def detect_extrema(x: SampledSignal) -> ExtremaSet:
    """Find all strict interior extrema of ``x``.

    A plateau of equal consecutive values counts as a single extremum at
    its center sample. Record endpoints are never extrema.
    """
    v = x.samples
    n = v.size
    if n < 3:
        raise InsufficientDataError("extrema detection needs at least 3 samples")

    # Collapse runs of equal values to one representative per run.
    change = np.flatnonzero(np.diff(v) != 0)
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change, [n - 1]))
    rv = v[starts]
    if rv.size < 3:
        return ExtremaSet((), ())

    left, mid, right = rv[:-2], rv[1:-1], rv[2:]
    centers = (starts[1:-1] + ends[1:-1]) // 2
    is_max = (mid > left) & (mid > right)
    is_min = (mid < left) & (mid < right)
    maxima = tuple((int(i), float(val)) for i, val in zip(centers[is_max], mid[is_max]))
    minima = tuple((int(i), float(val)) for i, val in zip(centers[is_min], mid[is_min]))
    return ExtremaSet(maxima, minima)


def cubic_spline(knots_t, knots_v, query_t) -> np.ndarray:
    """Natural cubic spline through the knots, evaluated at ``query_t``.

    Second derivative is zero at both end knots; with two knots the
    spline degenerates to the straight line through them.
    """
    t = np.asarray(knots_t, dtype=float)
    y = np.asarray(knots_v, dtype=float)
    q = np.asarray(query_t, dtype=float)
    if t.size < 2 or t.size != y.size:
        raise InvalidKnotsError("need at least 2 knots with matching values")
    h = np.diff(t)
    if np.any(h <= 0):
        raise InvalidKnotsError("knot abscissae must be strictly increasing")

    m = _natural_second_derivatives(t, y)
    # Clip so queries beyond the knot range use the end polynomial pieces.
    idx = np.clip(np.searchsorted(t, q, side="right") - 1, 0, t.size - 2)
    hi = h[idx]
    a = (t[idx + 1] - q) / hi
    b = (q - t[idx]) / hi
    return (
        a * y[idx]
        + b * y[idx + 1]
        + ((a**3 - a) * m[idx] + (b**3 - b) * m[idx + 1]) * hi**2 / 6.0
    )


def _natural_second_derivatives(t: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Second derivatives at the knots for a natural cubic spline."""
    n = t.size
    m = np.zeros(n)
    if n == 2:
        return m
    h = np.diff(t)
    # Tridiagonal system for the interior second derivatives.
    diag = 2.0 * (h[:-1] + h[1:])
    rhs = 6.0 * (np.diff(y[1:]) / h[1:] - np.diff(y[:-1]) / h[:-1])
    ab = np.zeros((3, n - 2))
    ab[0, 1:] = h[1:-1]
    ab[1, :] = diag
    ab[2, :-1] = h[1:-1]
    m[1:-1] = solve_banded((1, 1), ab, rhs)
    return m


def _mirror_extend(idx: np.ndarray, val: np.ndarray, n: int):
    """Reflect the two extrema nearest each end about the record boundary."""
    k = min(2, idx.size)
    left_i = -idx[:k][::-1]
    left_v = val[:k][::-1]
    right_i = 2 * (n - 1) - idx[-k:][::-1]
    right_v = val[-k:][::-1]
    return (
        np.concatenate((left_i, idx, right_i)),
        np.concatenate((left_v, val, right_v)),
    )


def _reflect_before(sym: float, idx: np.ndarray, val: np.ndarray, nbsym: int = 2):
    """Knots mirrored about ``sym`` to the left of the record start."""
    k = min(nbsym, idx.size)
    return (2.0 * sym - idx[:k])[::-1], val[:k][::-1]


def _reflect_after(sym: float, idx: np.ndarray, val: np.ndarray, nbsym: int = 2):
    """Knots mirrored about ``sym`` to the right of the record end."""
    k = min(nbsym, idx.size)
    return (2.0 * sym - idx[-k:])[::-1], val[-k:][::-1]


def _boundary_knots(max_i, max_v, min_i, min_v, x0: float, xe: float, n: int):
    """Extend both extrema sets past the record ends.

    Extrema are mirrored about the end extremum; when the record
    endpoint itself pokes outside the would-be envelopes it is anchored
    as an extra extremum and the reflection pivots on the endpoint
    instead, which keeps the end swing of the envelopes bounded.
    """
    # Left end.
    if max_i[0] < min_i[0]:
        if x0 > min_v[0]:
            sym = max_i[0]
            lm = _reflect_before(sym, max_i[1:], max_v[1:])
            ln = _reflect_before(sym, min_i, min_v)
        else:
            lm = _reflect_before(0.0, max_i, max_v)
            ln = _reflect_before(0.0, np.concatenate(([0.0], min_i[:1])),
                                 np.concatenate(([x0], min_v[:1])))
    else:
        if x0 < max_v[0]:
            sym = min_i[0]
            lm = _reflect_before(sym, max_i, max_v)
            ln = _reflect_before(sym, min_i[1:], min_v[1:])
        else:
            lm = _reflect_before(0.0, np.concatenate(([0.0], max_i[:1])),
                                 np.concatenate(([x0], max_v[:1])))
            ln = _reflect_before(0.0, min_i, min_v)

    # Right end.
    e = float(n - 1)
    if max_i[-1] > min_i[-1]:
        if xe > min_v[-1]:
            sym = max_i[-1]
            rm = _reflect_after(sym, max_i[:-1], max_v[:-1])
            rn = _reflect_after(sym, min_i, min_v)
        else:
            rm = _reflect_after(e, max_i, max_v)
            rn = _reflect_after(e, np.concatenate((min_i[-1:], [e])),
                                np.concatenate((min_v[-1:], [xe])))
    else:
        if xe < max_v[-1]:
            sym = min_i[-1]
            rm = _reflect_after(sym, max_i, max_v)
            rn = _reflect_after(sym, min_i[:-1], min_v[:-1])
        else:
            rm = _reflect_after(e, np.concatenate((max_i[-1:], [e])),
                                np.concatenate((max_v[-1:], [xe])))
            rn = _reflect_after(e, min_i, min_v)

    def _assemble(left, mid_i, mid_v, right):
        li, lv = left
        ri, rv = right
        ti = np.concatenate((li, mid_i, ri))
        tv = np.concatenate((lv, mid_v, rv))
        # Reflection can produce coincident knots (pivot on an extremum);
        # keep the first of any duplicate pair.
        keep = np.concatenate(([True], np.diff(ti) > 0))
        return ti[keep], tv[keep]

    # Anchor the endpoint whenever reflection failed to span the record.
    def _cover(ti, tv, value_left, value_right):
        if ti[0] > 0:
            ti = np.concatenate(([0.0], ti))
            tv = np.concatenate(([value_left], tv))
        if ti[-1] < e:
            ti = np.concatenate((ti, [e]))
            tv = np.concatenate((tv, [value_right]))
        return ti, tv

    ui, uv = _assemble(lm, max_i, max_v, rm)
    li, lv = _assemble(ln, min_i, min_v, rn)
    ui, uv = _cover(ui, uv, max(x0, max_v[0]), max(xe, max_v[-1]))
    li, lv = _cover(li, lv, min(x0, min_v[0]), min(xe, min_v[-1]))
    return (ui, uv), (li, lv)


def build_envelopes(x: SampledSignal) -> EnvelopePair:
    """Upper/lower natural-spline envelopes and their mean.

    Raises NoEnvelopeError when there are fewer than two maxima or two
    minima; the caller then treats ``x`` as the final residue. The
    envelopes may cross locally (real EMD behavior), which is not an
    error.
    """
    ext = detect_extrema(x)
    if len(ext.maxima) < 2 or len(ext.minima) < 2:
        raise NoEnvelopeError(
            f"need >= 2 maxima and >= 2 minima, got {len(ext.maxima)}/{len(ext.minima)}"
        )
    query = np.arange(x.n, dtype=float)

    max_i = np.array([i for i, _ in ext.maxima], dtype=float)
    max_v = np.array([v for _, v in ext.maxima])
    min_i = np.array([i for i, _ in ext.minima], dtype=float)
    min_v = np.array([v for _, v in ext.minima])

    (ui, uv), (li, lv) = _boundary_knots(
        max_i, max_v, min_i, min_v, float(x.samples[0]), float(x.samples[-1]), x.n
    )
    upper = cubic_spline(ui, uv, query)
    lower = cubic_spline(li, lv, query)
    return EnvelopePair(
        upper=x.with_samples(upper),
        lower=x.with_samples(lower),
        mean=x.with_samples((upper + lower) / 2.0),
    )
