"""Fock-basis action of the loss, dephasing, and loss-dephasing channels.

The pure-loss channel acts on matrix units as

    E_l(|m><n|) = sum_k sqrt(C(m,k) C(n,k)) (1-l)^k l^{(n+m)/2-k} |m-k><n-k|

and the dephasing channel damps off-diagonals by e^{-g (m-n)^2 / 2}. Both are
photon-number non-increasing, so truncation is exact on supported inputs. The
complementary channel outputs live in the span of the non-orthogonal vectors
|l> (x) |sqrt(g) n> and are represented over that frame (see
:class:`FrameOperator`); a dense Fock embedding exists only as a test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import (
    GramFrame,
    HermitianOperator,
    binom_weight,
    coherent_state_vector,
)


@dataclass(frozen=True)
class ChannelParams:
    """Transmissivity, dephasing strength, and Fock truncation dimension."""

    lam: float
    gamma: float
    cutoff: int

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"transmissivity must lie in [0, 1], got {self.lam}")
        if self.gamma < 0:
            raise ValueError(f"dephasing parameter must be >= 0, got {self.gamma}")
        if self.cutoff < 2:
            raise ValueError(f"cutoff must be >= 2, got {self.cutoff}")


def _loss_coeff(m: int, n: int, k: int, lam: float) -> float:
    # sqrt(C(m,k) C(n,k)) (1-lam)^k lam^{(m+n)/2 - k}, via the identity
    # with sqrt(B_k(m, 1-lam) B_k(n, 1-lam)); handles lam in {0, 1} cleanly.
    return math.sqrt(binom_weight(m, k, 1.0 - lam) * binom_weight(n, k, 1.0 - lam))


def pure_loss_apply(M: HermitianOperator, lam: float, cutoff: int | None = None) -> HermitianOperator:
    """Apply the pure-loss channel of transmissivity ``lam`` entrywise."""
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {lam}")
    if len(M.dims) != 1:
        raise ValueError("pure_loss_apply expects a single-mode operator")
    d = M.side if cutoff is None else cutoff
    if M.side > d:
        raise ValueError("input support exceeds the requested cutoff")
    out = np.zeros((d, d), dtype=complex)
    data = M.data
    for m in range(M.side):
        for n in range(M.side):
            x = data[m, n]
            if x == 0:
                continue
            for k in range(min(m, n) + 1):
                out[m - k, n - k] += _loss_coeff(m, n, k, lam) * x
    return HermitianOperator(out, (d,))


def dephasing_apply(M: HermitianOperator, gamma: float) -> HermitianOperator:
    """Damp Fock off-diagonals by e^{-gamma (m-n)^2 / 2}; diagonal unchanged."""
    if gamma < 0:
        raise ValueError(f"dephasing parameter must be >= 0, got {gamma}")
    if len(M.dims) != 1:
        raise ValueError("dephasing_apply expects a single-mode operator")
    idx = np.arange(M.side)
    damp = np.exp(-gamma * (idx[:, None] - idx[None, :]) ** 2 / 2.0)
    return HermitianOperator(M.data * damp, M.dims)


def loss_dephasing_apply(M: HermitianOperator, params: ChannelParams) -> HermitianOperator:
    """Composed loss-dephasing channel (order irrelevant, the two commute)."""
    return dephasing_apply(pure_loss_apply(M, params.lam, params.cutoff), params.gamma)


@dataclass(frozen=True)
class FrameOperator:
    """Operator over the environment frame: coefficient matrix + Gram frame."""

    frame: GramFrame
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))
        if self.coeffs.shape != (self.frame.size,) * 2:
            raise ValueError("coefficient matrix shape does not match frame size")

    def trace(self) -> complex:
        # Tr sum c_ab |v_a><v_b| = sum_ab c_ab G[b, a]
        return complex(np.sum(self.coeffs * self.frame.gram.T))

    def embed_dense(self, fock_cutoff: int) -> HermitianOperator:
        """Test oracle: embed into Fock (x) Fock truncated at ``fock_cutoff``."""
        vecs = []
        for l, n in self.frame.labels:
            fock = np.zeros(fock_cutoff)
            fock[l] = 1.0
            coh = coherent_state_vector(math.sqrt(self.frame.gamma) * n, fock_cutoff)
            vecs.append(np.kron(fock, coh))
        vecs = np.array(vecs)
        data = vecs.T @ self.coeffs @ vecs.conj()
        return HermitianOperator(data, (fock_cutoff, fock_cutoff))


def complementary_apply(M: HermitianOperator, params: ChannelParams) -> FrameOperator:
    """Complementary channel output over the environment frame.

    The frame pair ((l1, m), (l2, n)) accumulates
    (-1)^{m-n} [E_{1-lam}(|m><n|)]_{l1 l2} M_{mn}, where the loss factor is
    nonzero only when m - l1 = n - l2.
    """
    if len(M.dims) != 1:
        raise ValueError("complementary_apply expects a single-mode operator")
    if M.side > params.cutoff:
        raise ValueError("input support exceeds the channel cutoff")
    frame = GramFrame.loss_dephasing(params.gamma, params.cutoff)
    lam = params.lam
    coeffs = np.zeros((frame.size, frame.size), dtype=complex)
    index = {label: i for i, label in enumerate(frame.labels)}
    for m in range(M.side):
        for n in range(M.side):
            x = M.data[m, n]
            if x == 0:
                continue
            sign = -1.0 if (m - n) % 2 else 1.0
            for j in range(min(m, n) + 1):
                w = math.sqrt(binom_weight(m, j, lam) * binom_weight(n, j, lam))
                a = index[(m - j, m)]
                b = index[(n - j, n)]
                coeffs[a, b] += sign * w * x
    return FrameOperator(frame, coeffs)


def beam_splitter_fock(n: int, lam: float) -> list[tuple[int, float]]:
    """Amplitudes of U_lam |n>_S |0>_E over |n-l>_S |l>_E.

    amplitude(l) = (-1)^l sqrt(C(n,l)) lam^{(n-l)/2} (1-lam)^{l/2}; the signed
    convention matters for witness verification.
    """
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"transmissivity must lie in [0, 1], got {lam}")
    out = []
    for l in range(n + 1):
        amp = math.sqrt(binom_weight(n, l, 1.0 - lam))
        if l % 2:
            amp = -amp
        out.append((l, amp))
    return out


def qudit_choi(params: ChannelParams, d: int) -> HermitianOperator:
    """Choi state (1/d) sum_{m,n<d} |m><n| (x) N(|m><n|) of the qudit restriction."""
    if d < 2:
        raise ValueError(f"qudit dimension must be >= 2, got {d}")
    if d > params.cutoff:
        raise ValueError("qudit dimension exceeds the channel cutoff")
    choi = np.zeros((d * d, d * d), dtype=complex)
    for m in range(d):
        for n in range(d):
            unit = np.zeros((d, d), dtype=complex)
            unit[m, n] = 1.0
            out = loss_dephasing_apply(
                HermitianOperator(unit, (d,)), ChannelParams(params.lam, params.gamma, d)
            )
            choi[m * d : (m + 1) * d, n * d : (n + 1) * d] = out.data / d
    op = HermitianOperator(choi, (d, d))
    spectrum = np.linalg.eigvalsh(op.data)
    if spectrum[0] < -1e-10:
        raise AssertionError(f"Choi state not PSD: min eigenvalue {spectrum[0]:.3e}")
    if abs(np.trace(choi).real - 1.0) > 1e-12:
        raise AssertionError("Choi state trace deviates from 1")
    marginal = np.einsum("abcb->ac", choi.reshape(d, d, d, d))
    if np.max(np.abs(marginal - np.eye(d) / d)) > 1e-12:
        raise AssertionError("Choi marginal on the input side is not I/d")
    return op


def generalized_choi(params: ChannelParams, r: float) -> tuple[HermitianOperator, float]:
    """Choi state over a two-mode squeezed vacuum of squeezing ``r``.

    Returns the truncated state and the deviation of its trace from 1 (the
    truncation tail mass).
    """
    if r <= 0:
        raise ValueError(f"squeezing must be > 0, got {r}")
    d = params.cutoff
    lam, gamma = params.lam, params.gamma
    t = math.tanh(r)
    norm = 1.0 / math.cosh(r) ** 2
    data = np.zeros((d * d, d * d))
    for m in range(d):
        for n in range(d):
            pref = norm * t ** (m + n) * math.exp(-gamma * (m - n) ** 2 / 2.0)
            for l in range(min(m, n) + 1):
                w = math.sqrt(
                    binom_weight(m, l, 1.0 - lam) * binom_weight(n, l, 1.0 - lam)
                )
                data[m * d + (m - l), n * d + (n - l)] += pref * w
    op = HermitianOperator(data, (d, d))
    return op, abs(float(np.trace(data)) - 1.0)


def qubit_choi(lam: float, gamma: float) -> HermitianOperator:
    """4x4 Choi matrix of the qubit restriction (basis |00>,|01>,|10>,|11>)."""
    s = math.sqrt(math.exp(-gamma) * lam)
    data = 0.5 * np.array(
        [
            [1, 0, 0, s],
            [0, 0, 0, 0],
            [0, 0, 1 - lam, 0],
            [s, 0, 0, lam],
        ]
    )
    return HermitianOperator(data, (2, 2))
