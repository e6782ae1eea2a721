"""Positive-capacity witnesses and the composite region classification.

Two witnesses: the coherent information over two-level diagonal inputs
p|0><0| + (1-p)|1><1| (positive values certify positive quantum capacity), and
the partial-transpose minimum eigenvalue of a simple entangled two-qubit state
sent through the channel (negative values certify distillability, hence
positive two-way capacity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .antideg import (
    CriterionOutcome,
    Verdict,
    a_matrix_min_eig,
    qubit_antideg,
    thm1_verdict,
)
from .fock import (
    TOL_PSD,
    GramFrame,
    HermitianOperator,
    binary_entropy,
    gram_spectrum,
    partial_transpose,
)

IC_POSITIVE_TOL = 1e-6


def coherent_info_two_level(lam: float, gamma: float, p: float) -> float:
    """Coherent information of the input p|0><0| + (1-p)|1><1|, in bits.

    The direct output is diagonal with spectrum {p + (1-p)(1-lam), (1-p) lam};
    the environment output is supported on three frame vectors with a single
    nontrivial overlap e^{-gamma/2}, so its entropy comes from the weighted
    Gram spectrum.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"input weight must lie in [0, 1], got {p}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {lam}")
    if gamma < 0:
        raise ValueError(f"dephasing parameter must be >= 0, got {gamma}")
    s_out = binary_entropy((1.0 - p) * lam)

    labels = ((0, 0), (0, 1), (1, 1))
    gram = np.eye(3)
    gram[0, 1] = gram[1, 0] = math.exp(-gamma / 2.0)
    frame = GramFrame(labels, gram, gamma)
    weights = np.array([p, (1.0 - p) * lam, (1.0 - p) * (1.0 - lam)])
    env_spec = np.clip(gram_spectrum(weights, frame).eigenvalues, 0.0, 1.0)
    nz = env_spec[env_spec > 0]
    s_env = float(-np.sum(nz * np.log2(nz)))
    return s_out - s_env


def max_coherent_info_p(lam: float, gamma: float, tol: float = 1e-6) -> tuple[float, float]:
    """Maximize the two-level coherent information over the input weight p.

    A 21-point grid seeds a golden-section refinement around the best cell.
    Returns (p_star, ic_star).
    """
    grid = np.linspace(0.0, 1.0, 21)
    values = [coherent_info_two_level(lam, gamma, p) for p in grid]
    i_best = int(np.argmax(values))
    lo = grid[max(i_best - 1, 0)]
    hi = grid[min(i_best + 1, len(grid) - 1)]

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc = coherent_info_two_level(lam, gamma, c)
    fd = coherent_info_two_level(lam, gamma, d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = coherent_info_two_level(lam, gamma, c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = coherent_info_two_level(lam, gamma, d)
    p_star = 0.5 * (a + b)
    ic_star = coherent_info_two_level(lam, gamma, p_star)
    if values[i_best] > ic_star:
        p_star, ic_star = float(grid[i_best]), float(values[i_best])
    return float(p_star), float(ic_star)


def ppt_state(lam: float, gamma: float, n_s: float) -> HermitianOperator:
    """Two-qubit state obtained by sending half of a weighted Bell pair."""
    b = (1.0 - lam) * n_s
    c = math.sqrt((1.0 - n_s) * n_s * math.exp(-gamma) * lam)
    data = np.array(
        [
            [1.0 - n_s, 0, 0, c],
            [0, 0, 0, 0],
            [0, 0, b, 0],
            [c, 0, 0, lam * n_s],
        ]
    )
    return HermitianOperator(data, (2, 2))


def ppt_min_eigenvalue(lam: float, gamma: float, n_s: float = 0.5) -> float:
    """Min eigenvalue of the partial transpose; closed form with dense check.

    Closed form (b - sqrt(b^2 + 4 c^2))/2 with b = (1-lam) n_s and
    c = sqrt((1-n_s) n_s e^{-gamma} lam); strictly negative whenever lam > 0,
    which certifies distillability and positive two-way capacity.
    """
    if not 0.0 < n_s < 1.0:
        raise ValueError(f"mean-photon weight must lie in (0, 1), got {n_s}")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {lam}")
    if gamma < 0:
        raise ValueError(f"dephasing parameter must be >= 0, got {gamma}")
    b = (1.0 - lam) * n_s
    c = math.sqrt((1.0 - n_s) * n_s * math.exp(-gamma) * lam)
    closed = (b - math.sqrt(b * b + 4.0 * c * c)) / 2.0
    dense = float(
        np.linalg.eigvalsh(partial_transpose(ppt_state(lam, gamma, n_s), 1).data)[0]
    )
    if abs(closed - dense) > 1e-12:
        raise AssertionError(
            f"PPT closed form {closed!r} disagrees with eigensolve {dense!r}"
        )
    return closed


@dataclass(frozen=True)
class RegionVerdict:
    """Composite classification of one (lam, gamma) point.

    Individual flags record which criteria fired; ``label`` collapses them with
    priority Red > CrossedRed > Green > CrossedGreen.
    """

    lam: float
    gamma: float
    red: bool
    crossed_red: bool
    green: bool
    crossed_green: bool
    thm1: CriterionOutcome
    qubit: CriterionOutcome
    a_min_eig: float | None
    ic_star: float
    p_star: float

    @property
    def label(self) -> str:
        if self.red:
            return "Red"
        if self.crossed_red:
            return "CrossedRed"
        if self.green:
            return "Green"
        if self.crossed_green:
            return "CrossedGreen"
        return "Unclassified"


def classify_point(lam: float, gamma: float, d: int = 30) -> RegionVerdict:
    """Classify a parameter point by all criteria; raises on contradictions."""
    thm1 = thm1_verdict(lam, gamma)
    qubit = qubit_antideg(lam, gamma)
    red = thm1.verdict is Verdict.ANTI_DEGRADABLE
    green = qubit.verdict is Verdict.NOT_ANTI_DEGRADABLE
    a_min = a_matrix_min_eig(lam, gamma, d) if 0.5 < lam < 1.0 and gamma > 0 else None
    crossed_red = red if a_min is None else (a_min >= -TOL_PSD or red)
    p_star, ic_star = max_coherent_info_p(lam, gamma)
    crossed_green = ic_star > IC_POSITIVE_TOL

    if (red or crossed_red) and green:
        raise AssertionError(
            f"contradictory classification at lam={lam}, gamma={gamma}: "
            "anti-degradable and not anti-degradable"
        )
    if red and crossed_green:
        raise AssertionError(
            f"contradictory classification at lam={lam}, gamma={gamma}: "
            "anti-degradable with positive coherent information"
        )
    return RegionVerdict(
        lam, gamma, red, crossed_red, green, crossed_green, thm1, qubit,
        a_min, ic_star, p_star,
    )
