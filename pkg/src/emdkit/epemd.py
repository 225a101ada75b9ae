"""Energy-preserving EMD: per-stage orthogonalization of each extracted
IMF against its residue.

Each stage splits the working signal exactly into an orthogonal pair
(imf - alpha*residue, (1 + alpha)*residue); recursing on the second
member yields a component chain in which every component is orthogonal
to the sum of all later ones, so the component energies sum to the
signal energy although the components are not pairwise orthogonal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    Decomposition,
    DimensionMismatchError,
    SampledSignal,
    Variant,
    energy,
    inner_product,
)
from .emd import SiftConfig, sift_one_imf
from .envelope import NoEnvelopeError

#: Residue energy below this fraction of the stage input energy triggers
#: the pass-through branch (no orthogonalization against ~zero).
ZERO_RESIDUE_THRESHOLD = 1e-14


@dataclass(frozen=True)
class LinoepStage:
    alpha: float
    epimf: SampledSignal
    residue_out: SampledSignal


def orthogonalize_stage(imf: SampledSignal, residue: SampledSignal) -> LinoepStage:
    """Project ``imf`` onto ``residue`` and split their sum into an
    orthogonal pair; epimf + residue_out equals imf + residue exactly."""
    e_res = energy(residue)
    e_in = energy(imf) + e_res
    if e_res <= ZERO_RESIDUE_THRESHOLD * e_in:
        return LinoepStage(0.0, imf, residue)
    alpha = inner_product(imf, residue) / e_res
    shift = alpha * residue.samples
    # Adding/subtracting the same float array keeps the sum exact.
    epimf = imf.with_samples(imf.samples - shift)
    residue_out = residue.with_samples(residue.samples + shift)
    return LinoepStage(alpha, epimf, residue_out)


def epemd(x: SampledSignal, cfg: SiftConfig = SiftConfig()) -> Decomposition:
    """Energy-preserving EMD of ``x``.

    At each stage one EMD extraction runs on the working signal, the IMF
    is orthogonalized against the residue, and the procedure recurses on
    the adjusted residue. Per-stage alphas are kept in ``diagnostics``.
    """
    components: list[SampledSignal] = []
    alphas: list[float] = []
    work = x
    while not (cfg.max_imfs and len(components) >= cfg.max_imfs):
        try:
            imf, residue = sift_one_imf(work, cfg)
        except NoEnvelopeError:
            break
        stage = orthogonalize_stage(imf, residue)
        components.append(stage.epimf)
        alphas.append(stage.alpha)
        work = stage.residue_out
    return Decomposition(
        tuple(components), work, Variant.EPEMD, diagnostics={"alphas": alphas}
    )


def verify_linoep(components) -> bool:
    """True iff the components satisfy the chain condition (each one
    orthogonal to the sum of all later ones) and the resulting energy
    identity, both within 1e-9 of the total energy."""
    components = list(components)
    if len(components) < 2:
        raise ValueError("need at least 2 components")
    ref = components[0]
    for sig in components[1:]:
        ref._check_compatible(sig)

    stack = np.array([c.samples for c in components])
    dt = ref.dt
    e_total = float((stack * stack).sum()) * dt
    if e_total == 0.0:
        return True
    tail = np.cumsum(stack[::-1], axis=0)[::-1]  # tail[i] = sum of rows i..end
    for i in range(len(components) - 1):
        if abs(float(np.dot(stack[i], tail[i + 1])) * dt) > 1e-9 * e_total:
            return False
    e_sum = float(np.dot(tail[0], tail[0])) * dt
    return abs(e_total - e_sum) <= 1e-9 * e_total


def epmemd(x, K: int = 64, cfg: SiftConfig = SiftConfig()):
    """Energy-preserving multivariate EMD: per-stage MEMD extraction
    followed by channel-wise orthogonalization against the residue."""
    from .memd import (
        NEGLIGIBLE_RESIDUE_THRESHOLD,
        MultivariateDecomposition,
        MultivariateSignal,
        _extract_one_multivariate_imf,
        hammersley_directions,
    )

    if len(x.channels) == 1:
        d = epemd(x.channels[0], cfg)
        return MultivariateDecomposition(
            tuple(MultivariateSignal((imf,)) for imf in d.imfs),
            MultivariateSignal((d.residue,)),
        )

    dirs = hammersley_directions(len(x.channels), K)
    imfs: list[MultivariateSignal] = []
    work = x
    floor = NEGLIGIBLE_RESIDUE_THRESHOLD * float(np.max(np.abs(x.as_array())))
    while not (cfg.max_imfs and len(imfs) >= cfg.max_imfs):
        if float(np.max(np.abs(work.as_array()))) <= floor:
            break
        extracted = _extract_one_multivariate_imf(work, dirs, cfg)
        if extracted is None:
            break
        mode, residue = extracted
        stages = [
            orthogonalize_stage(m, r)
            for m, r in zip(mode.channels, residue.channels)
        ]
        imfs.append(MultivariateSignal(tuple(st.epimf for st in stages)))
        work = MultivariateSignal(tuple(st.residue_out for st in stages))
    return MultivariateDecomposition(tuple(imfs), work)
