"""Complete sets of local orthogonal observables (LOOs).

For a ``d``-level system the basis holds ``d**2`` Hermitian matrices,
orthonormal under the Hilbert-Schmidt product ``tr(A_k A_l) = delta_kl``:

* ``(|m><n| + |n><m|)/sqrt(2)`` for ``m < n``
* ``(-i|m><n| + i|n><m|)/sqrt(2)`` for ``m < n``
* ``|m><m|``

Each block is ordered lexicographically in ``(m, n)``.  Because the set is
complete, ``sum_kl <A_k (x) B_l>^2 == tr(rho^2)`` and
``sum_l <B_l>^2 == tr(rho_B^2)``, which is what makes the purity comparison
a correlation bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

import numpy as np

from .qmat import DensityMatrix, Wing, as_matrix, partial_trace

__all__ = [
    "LooBasis",
    "build_loo",
    "expectation",
    "correlation_matrix",
    "correlation_sum",
    "marginal_sum",
    "reconstruct",
]

# Imaginary part of tr(rho O) above this signals a non-Hermitian input.
IMAG_TOLERANCE = 1e-8


@dataclass(frozen=True)
class LooBasis:
    dim: int
    observables: tuple[np.ndarray, ...]

    def __len__(self) -> int:
        return len(self.observables)

    def __iter__(self):
        return iter(self.observables)

    def __getitem__(self, k):
        return self.observables[k]

    def stack(self) -> np.ndarray:
        """Observables as one ``(d**2, d, d)`` array."""
        return np.stack(self.observables)

    def gram(self) -> np.ndarray:
        s = self.stack()
        return np.einsum("kij,lji->kl", s, s)


@lru_cache(maxsize=None)
def _build(d: int) -> LooBasis:
    pairs = list(combinations(range(d), 2))
    r2 = np.sqrt(2.0)
    obs = []
    for m, n in pairs:
        a = np.zeros((d, d), dtype=np.complex128)
        a[m, n] = a[n, m] = 1 / r2
        obs.append(a)
    for m, n in pairs:
        a = np.zeros((d, d), dtype=np.complex128)
        a[m, n] = -1j / r2
        a[n, m] = 1j / r2
        obs.append(a)
    for m in range(d):
        a = np.zeros((d, d), dtype=np.complex128)
        a[m, m] = 1.0
        obs.append(a)
    for a in obs:
        a.setflags(write=False)
    return LooBasis(dim=d, observables=tuple(obs))


def build_loo(d: int) -> LooBasis:
    """LOO basis for dimension ``d`` (``d >= 2``)."""
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise ValueError(f"LOO basis needs an integer dimension >= 2, got {d!r}")
    return _build(int(d))


def expectation(rho, obs) -> float:
    """``tr(rho @ obs)`` as a real number.

    Raises
    ------
    ValueError
        On incompatible shapes, or if the imaginary part exceeds 1e-8.
    """
    if isinstance(rho, DensityMatrix):
        rho = rho.matrix
    rho = as_matrix(rho)
    obs = as_matrix(obs)
    if rho.shape[0] != rho.shape[1] or rho.shape != obs.shape:
        raise ValueError(f"incompatible shapes {rho.shape} and {obs.shape}")
    val = complex(np.einsum("ij,ji->", rho, obs))
    if abs(val.imag) > IMAG_TOLERANCE:
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}; inputs not Hermitian")
    return val.real


def correlation_matrix(rho: DensityMatrix, basis_a: LooBasis | None = None,
                       basis_b: LooBasis | None = None) -> np.ndarray:
    """Matrix of correlations ``C[k, l] = <A_k (x) B_l>``.

    Evaluated as one tensor contraction, equivalent to taking
    ``tr(rho @ kron(A_k, B_l))`` term by term.
    """
    basis_a = basis_a or build_loo(rho.dim_a)
    basis_b = basis_b or build_loo(rho.dim_b)
    t = rho.matrix.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    c = np.einsum("abcd,kca,ldb->kl", t, basis_a.stack(), basis_b.stack())
    imag = float(np.max(np.abs(c.imag)))
    if imag > IMAG_TOLERANCE:
        raise ValueError(f"correlations have imaginary part {imag:.3e}")
    return c.real


def correlation_sum(rho: DensityMatrix, basis_a: LooBasis | None = None,
                    basis_b: LooBasis | None = None) -> float:
    """``sum_kl <A_k (x) B_l>^2``; equals ``purity(rho)`` for complete bases."""
    c = correlation_matrix(rho, basis_a, basis_b)
    # numpy's pairwise summation over a fixed shape keeps the result deterministic.
    return float(np.sum(c * c))


def marginal_sum(rho: DensityMatrix, wing: Wing | str, basis: LooBasis | None = None) -> float:
    """``sum_l <B_l>^2`` over the reduced state of ``wing``."""
    wing = Wing(wing)
    red = partial_trace(rho, wing.other)
    basis = basis or build_loo(red.dim)
    vals = np.array([expectation(red.matrix, o) for o in basis])
    return float(np.sum(vals * vals))


def reconstruct(rho: DensityMatrix) -> np.ndarray:
    """Rebuild ``rho`` as ``sum_kl <A_k (x) B_l> A_k (x) B_l``."""
    ba, bb = build_loo(rho.dim_a), build_loo(rho.dim_b)
    c = correlation_matrix(rho, ba, bb)
    n = rho.dim
    out = np.zeros((n, n), dtype=np.complex128)
    for k, a in enumerate(ba):
        for l, b in enumerate(bb):
            out += c[k, l] * np.kron(a, b)
    return out
