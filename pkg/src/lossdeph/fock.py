"""Dense Hermitian linear algebra on truncated Fock spaces.

Operators carry an explicit list of subsystem dimensions (leftmost subsystem is
the slowest-varying index). Partial traces, partial transposes, spectra and
entropies all work against that convention. The module also provides the
Gram-frame machinery used to take spectra of operators expressed over a
non-orthogonal family of vectors without embedding them in a large Fock space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TOL_PSD = 1e-9


@dataclass(frozen=True)
class HermitianOperator:
    """Dense complex square matrix with subsystem dimensions.

    :param data: complex matrix of size D x D (row-major).
    :param dims: subsystem dimensions whose product equals D.
    """

    data: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        data = np.asarray(self.data, dtype=complex)
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError("operator data must be a square matrix")
        if math.prod(self.dims) != data.shape[0]:
            raise ValueError(
                f"product of dims {self.dims} does not match side {data.shape[0]}"
            )

    @property
    def side(self) -> int:
        return self.data.shape[0]

    def hermiticity_deviation(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def trace(self) -> complex:
        return complex(np.trace(self.data))


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted ascending."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        object.__setattr__(
            self, "eigenvalues", np.sort(np.asarray(self.eigenvalues, dtype=float))
        )

    @property
    def min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def sum(self) -> float:
        return float(np.sum(self.eigenvalues))


def binom_weight(n: int, ell: int, q: float) -> float:
    """Binomial probability C(n, ell) * q**ell * (1-q)**(n-ell).

    Evaluated in log space so it stays finite and accurate for n up to a few
    hundred. Endpoint conventions 0**0 = 1 apply at q = 0 and q = 1.
    """
    if ell > n or ell < 0 or n < 0:
        raise ValueError(f"require 0 <= ell <= n, got n={n}, ell={ell}")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"weight parameter must lie in [0, 1], got {q}")
    if q == 0.0:
        return 1.0 if ell == 0 else 0.0
    if q == 1.0:
        return 1.0 if ell == n else 0.0
    log_c = math.lgamma(n + 1) - math.lgamma(ell + 1) - math.lgamma(n - ell + 1)
    return math.exp(log_c + ell * math.log(q) + (n - ell) * math.log1p(-q))


def tensor(*ops: HermitianOperator) -> HermitianOperator:
    data = ops[0].data
    dims: tuple[int, ...] = ops[0].dims
    for op in ops[1:]:
        data = np.kron(data, op.data)
        dims = dims + op.dims
    return HermitianOperator(data, dims)


def partial_trace(M: HermitianOperator, keep: list[int] | tuple[int, ...]) -> HermitianOperator:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems stay in their original order; the result's trace equals
    the input's trace.
    """
    keep = sorted(set(int(k) for k in keep))
    n_sys = len(M.dims)
    for k in keep:
        if k < 0 or k >= n_sys:
            raise IndexError(f"subsystem index {k} out of range for dims {M.dims}")
    traced = [i for i in range(n_sys) if i not in keep]
    tensor_form = M.data.reshape(M.dims + M.dims)
    for count, i in enumerate(traced):
        # each contraction removes one row axis and one column axis
        row_ax = i - count
        col_ax = row_ax + (n_sys - count)
        tensor_form = np.trace(tensor_form, axis1=row_ax, axis2=col_ax)
    kept_dims = tuple(M.dims[i] for i in keep)
    side = math.prod(kept_dims) if kept_dims else 1
    return HermitianOperator(tensor_form.reshape(side, side), kept_dims or (1,))


def partial_transpose(M: HermitianOperator, subsystem: int) -> HermitianOperator:
    """Transpose a single subsystem in place; involutive by construction."""
    n_sys = len(M.dims)
    if subsystem < 0 or subsystem >= n_sys:
        raise IndexError(f"subsystem index {subsystem} out of range for dims {M.dims}")
    tensor_form = M.data.reshape(M.dims + M.dims)
    tensor_form = np.swapaxes(tensor_form, subsystem, subsystem + n_sys)
    return HermitianOperator(tensor_form.reshape(M.side, M.side), M.dims)


def _check_hermitian(M: HermitianOperator) -> None:
    scale = max(float(np.max(np.abs(M.data))), 1.0)
    if M.hermiticity_deviation() > 1e-10 * scale:
        raise ValueError(
            f"matrix is not Hermitian within tolerance "
            f"(deviation {M.hermiticity_deviation():.3e})"
        )


def hermitian_spectrum(M: HermitianOperator) -> Spectrum:
    _check_hermitian(M)
    return Spectrum(np.linalg.eigvalsh(M.data))


def hermitian_eigensystem(M: HermitianOperator) -> tuple[Spectrum, np.ndarray]:
    """Spectrum plus eigenvector matrix V with columns ordered ascending."""
    _check_hermitian(M)
    vals, vecs = np.linalg.eigh(M.data)
    return Spectrum(vals), vecs


def von_neumann_entropy(rho: HermitianOperator, tol: float = TOL_PSD) -> float:
    """Entropy in bits, -sum(p log2 p), with eigenvalues clipped to [0, 1]."""
    spec = hermitian_spectrum(rho)
    if spec.min < -tol:
        raise ValueError(f"negative eigenvalue {spec.min:.3e} below -{tol:.1e}")
    if abs(spec.sum - 1.0) > 10 * max(tol, 1e-12):
        raise ValueError(f"trace {spec.sum} is not 1 within tolerance")
    p = np.clip(spec.eigenvalues, 0.0, 1.0)
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1 - p) * math.log2(1 - p))


@dataclass(frozen=True)
class GramFrame:
    """Non-orthogonal frame {|l> (x) |sqrt(gamma) n>} with l <= n.

    :param labels: (l, n) pairs indexing the frame vectors.
    :param gram: overlap matrix G[(l,n),(l',n')] = delta_{ll'} e^{-gamma (n-n')^2 / 2}.
    :param gamma: dephasing parameter generating the coherent overlaps.
    """

    labels: tuple[tuple[int, int], ...]
    gram: np.ndarray
    gamma: float

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple((int(l), int(n)) for l, n in self.labels))
        object.__setattr__(self, "gram", np.asarray(self.gram, dtype=float))
        for l, n in self.labels:
            if l > n:
                raise ValueError(f"frame label ({l}, {n}) violates l <= n")
        if self.gram.shape != (len(self.labels),) * 2:
            raise ValueError("gram matrix shape does not match label count")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: tuple[int, int]) -> int:
        return self.labels.index(label)

    def coherent_overlap(self, n: int, n_prime: int) -> float:
        """<sqrt(gamma) n'|sqrt(gamma) n>, irrespective of the Fock index."""
        return math.exp(-self.gamma * (n - n_prime) ** 2 / 2.0)

    @classmethod
    def loss_dephasing(cls, gamma: float, cutoff: int) -> "GramFrame":
        """Frame for the environment of the loss-dephasing channel at a cutoff."""
        if gamma < 0:
            raise ValueError("gamma must be >= 0")
        labels = [(l, n) for n in range(cutoff) for l in range(n + 1)]
        size = len(labels)
        gram = np.zeros((size, size))
        for a, (la, na) in enumerate(labels):
            for b, (lb, nb) in enumerate(labels):
                if la == lb:
                    gram[a, b] = math.exp(-gamma * (na - nb) ** 2 / 2.0)
        return cls(tuple(labels), gram, gamma)


def gram_spectrum(weights: np.ndarray | list[float], frame: GramFrame) -> Spectrum:
    """Spectrum of sum_i w_i |v_i><v_i| for frame vectors with Gram matrix G.

    Computed as the spectrum of W^{1/2} G W^{1/2}; the nonzero part equals the
    spectrum of the embedded operator and the eigenvalue sum equals sum(w).
    """
    w = np.asarray(weights, dtype=float)
    if w.shape != (frame.size,):
        raise ValueError("weights length must equal frame size")
    if np.any(w < 0):
        raise ValueError("weights must be non-negative")
    sqrt_w = np.sqrt(w)
    core = sqrt_w[:, None] * frame.gram * sqrt_w[None, :]
    return Spectrum(np.linalg.eigvalsh(core))


def coherent_state_vector(alpha: float, cutoff: int) -> np.ndarray:
    """Truncated coherent state amplitudes e^{-a^2/2} a^k / sqrt(k!), real a."""
    if alpha == 0:
        vec = np.zeros(cutoff)
        vec[0] = 1.0
        return vec
    ks = np.arange(cutoff)
    log_amp = -alpha**2 / 2.0 + ks * math.log(alpha)
    log_amp = log_amp - 0.5 * np.array([math.lgamma(k + 1) for k in ks])
    return np.exp(log_amp)
