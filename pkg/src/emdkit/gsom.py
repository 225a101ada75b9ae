"""Gram-Schmidt orthogonalization with configurable component ordering.

One sweep of modified Gram-Schmidt with a second reorthogonalization
pass; all projection coefficients are accumulated in a lower
unitriangular matrix whose column sums rescale the orthogonal basis so
that the component sum is preserved exactly.

Orderings (components of an EMD-style decomposition):
  OIMF    IMFs only, highest frequency first; residue left untouched.
  FOIMF   IMFs then residue, highest frequency first.
  ROIMF   residue first, then IMFs lowest to highest frequency.
  FOUIMF / ROUIMF   the same orders after removing each component's
  mean; the summed means are returned as a dc constant.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Decomposition,
    RankDeficiencyError,
    SampledSignal,
    Variant,
    remove_mean,
)
from .emd import is_imf

#: Relative energy below which a swept signal counts as linearly dependent.
DEPENDENCE_THRESHOLD = 1e-12


@dataclass(frozen=True)
class GsomResult:
    orthogonal_components: tuple[SampledSignal, ...]  # p_i, sum to the input sum
    coefficient_matrix: np.ndarray  # lower unitriangular
    column_sums: np.ndarray
    dc_constant: float = 0.0


def gram_schmidt(inputs) -> GsomResult:
    """Orthogonalize ``inputs`` in the given order.

    Returns components p_i = c_i * s_i where s_i is the orthogonal basis
    and c_i the i-th column sum of the coefficient matrix, so that
    sum(p_i) equals sum(inputs) elementwise up to roundoff.
    """
    inputs = list(inputs)
    if not inputs:
        raise ValueError("need at least one input signal")
    ref = inputs[0]
    for sig in inputs[1:]:
        ref._check_compatible(sig)

    m = len(inputs)
    y = np.array([sig.samples for sig in inputs])
    s = np.zeros_like(y)
    coeff = np.eye(m)
    for k in range(m):
        v = y[k].copy()
        # Two projection passes keep orthogonality at roundoff level even
        # for ill-conditioned component sets; coefficients accumulate so
        # the unitriangular representation stays exact.
        for _ in range(2):
            for i in range(k):
                c = np.dot(v, s[i]) / np.dot(s[i], s[i])
                v -= c * s[i]
                coeff[k, i] += c
        if np.dot(v, v) <= DEPENDENCE_THRESHOLD * np.dot(y[k], y[k]):
            raise RankDeficiencyError(k)
        s[k] = v

    col_sums = coeff.sum(axis=0)
    components = tuple(ref.with_samples(col_sums[i] * s[i]) for i in range(m))
    return GsomResult(components, coeff, col_sums)


def _variant_ordering(d: Decomposition, variant: Variant):
    """Input list in orthogonalization order plus an inverse permutation
    mapping output positions back to (imf index..., residue)."""
    n = len(d.imfs)
    if variant is Variant.OIMF:
        order = list(range(n))  # IMFs only
    elif variant in (Variant.FOIMF, Variant.FOUIMF):
        order = list(range(n)) + [n]  # IMFs then residue
    elif variant in (Variant.ROIMF, Variant.ROUIMF):
        order = [n] + list(range(n - 1, -1, -1))  # residue, then low to high
    else:
        raise ValueError(f"{variant} is not a Gram-Schmidt variant")
    return order


def orthogonal_variants(d: Decomposition, variant: Variant) -> Decomposition:
    """Apply Gram-Schmidt to ``d`` under the ordering implied by
    ``variant`` and relabel the output back into IMF-first order."""
    comps = list(d.components)
    dc = d.dc_constant
    if variant in (Variant.FOUIMF, Variant.ROUIMF):
        means = []
        centered = []
        for sig in comps:
            zm, mean = remove_mean(sig)
            centered.append(zm)
            means.append(mean)
        comps = centered
        dc += float(sum(means))

    order = _variant_ordering(d, variant)
    # A (near-)zero component carries no direction to orthogonalize
    # against -- a constant residue centered by the uncorrelated variants
    # is the common case -- so it passes through unchanged.
    e_total = sum(float(np.dot(c.samples, c.samples)) for c in comps)
    def _is_zero(i):
        return float(np.dot(comps[i].samples, comps[i].samples)) <= 1e-24 * e_total
    active = [i for i in order if not _is_zero(i)]
    result = gram_schmidt([comps[i] for i in active])

    # Scatter the outputs back: position -> original component slot.
    n = len(d.imfs)
    out: list[SampledSignal | None] = [None] * (n + 1)
    for i in order:
        if _is_zero(i):
            out[i] = comps[i]
    for pos, src in enumerate(active):
        out[src] = result.orthogonal_components[pos]
    if variant is Variant.OIMF:
        out[n] = comps[n]  # residue appended unorthogonalized

    return Decomposition(
        imfs=tuple(out[:n]),
        residue=out[n],
        variant=variant,
        dc_constant=dc,
    )


def imf_property_report(components) -> list[bool]:
    """Run the IMF test on each component; used to compare orderings
    empirically."""
    return [is_imf(c) for c in components]
