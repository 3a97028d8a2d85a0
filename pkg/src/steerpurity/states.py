"""State families and random-state generators.

Every constructor returns a validated :class:`~steerpurity.qmat.DensityMatrix`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

import numpy as np

from .qmat import DensityMatrix, validate

__all__ = [
    "Family",
    "FamilySpec",
    "PAULI",
    "bell_state",
    "werner",
    "bell_diagonal",
    "bell_diagonal_eigenvalues",
    "asymmetric_noisy_singlet",
    "isotropic",
    "free_entangled",
    "random_density",
    "random_pure",
    "product_state",
]

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)
for _s in PAULI:
    _s.setflags(write=False)


def _ket(*digits: int, d: int = 2) -> np.ndarray:
    v = np.zeros(d ** len(digits), dtype=np.complex128)
    idx = 0
    for x in digits:
        idx = idx * d + x
    v[idx] = 1.0
    return v


def _proj(v: np.ndarray) -> np.ndarray:
    return np.outer(v, v.conj())


def _check_p(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"mixing parameter p must lie in [0, 1], got {p}")
    return p


def bell_state(kind: str = "phi+") -> np.ndarray:
    """Two-qubit Bell vector: ``phi+``, ``phi-``, ``psi+`` or ``psi-``."""
    s = 1 / np.sqrt(2)
    vecs = {
        "phi+": s * (_ket(0, 0) + _ket(1, 1)),
        "phi-": s * (_ket(0, 0) - _ket(1, 1)),
        "psi+": s * (_ket(0, 1) + _ket(1, 0)),
        "psi-": s * (_ket(0, 1) - _ket(1, 0)),
    }
    return vecs[kind]


def werner(p: float) -> DensityMatrix:
    """``p |Phi><Phi| + (1-p) I/4`` with ``|Phi> = (|00> + |11>)/sqrt(2)``."""
    p = _check_p(p)
    m = p * _proj(bell_state("phi+")) + (1 - p) * np.eye(4) / 4
    return validate(m, 2, 2)


def bell_diagonal_eigenvalues(c1: float, c2: float, c3: float) -> np.ndarray:
    """Closed-form spectrum of the Bell-diagonal state with correlations ``c``."""
    return np.array([
        1 - c1 - c2 - c3,
        1 - c1 + c2 + c3,
        1 + c1 - c2 + c3,
        1 + c1 + c2 - c3,
    ]) / 4


def _bell_diagonal_matrix(c1, c2, c3) -> np.ndarray:
    m = np.eye(4, dtype=np.complex128)
    for c, s in zip((c1, c2, c3), PAULI):
        m = m + c * np.kron(s, s)
    return m / 4


def bell_diagonal(c1: float, c2: float, c3: float) -> DensityMatrix:
    """``(I + sum_j c_j sigma_j (x) sigma_j) / 4``.

    Raises
    ------
    ValueError
        If some ``|c_j| > 1``.
    InvalidDensityMatrix
        If the triple lies outside the physical tetrahedron.
    """
    cs = tuple(float(c) for c in (c1, c2, c3))
    for j, c in enumerate(cs, 1):
        if abs(c) > 1:
            raise ValueError(f"c{j} = {c} outside [-1, 1]")
    return validate(_bell_diagonal_matrix(*cs), 2, 2)


def asymmetric_noisy_singlet(p: float) -> DensityMatrix:
    """Singlet mixed with the asymmetric noise ``2/3|00><00| + 1/3|01><01|``."""
    p = _check_p(p)
    noise = 2 / 3 * _proj(_ket(0, 0)) + 1 / 3 * _proj(_ket(0, 1))
    m = p * _proj(bell_state("psi-")) + (1 - p) * noise
    return validate(m, 2, 2)


def isotropic(p: float, d: int) -> DensityMatrix:
    """``p |phi_d><phi_d| + (1-p) I/d**2`` on a ``d x d`` system.

    The noise term is the normalized maximally mixed joint state.
    """
    p = _check_p(p)
    if isinstance(d, bool) or int(d) != d or d < 2:
        raise ValueError(f"local dimension d must be an integer >= 2, got {d!r}")
    d = int(d)
    phi = sum(_ket(i, i, d=d) for i in range(d)) / np.sqrt(d)
    m = p * _proj(phi) + (1 - p) * np.eye(d * d) / d**2
    return validate(m, d, d)


def free_entangled(p: float) -> DensityMatrix:
    """Two-qutrit state ``p |phi+><phi+| + (1-p) sigma+``.

    ``sigma+ = (|01><01| + |12><12| + |20><20|) / 3``.
    """
    p = _check_p(p)
    phi = sum(_ket(i, i, d=3) for i in range(3)) / np.sqrt(3)
    sigma = sum(_proj(_ket(a, b, d=3)) for a, b in ((0, 1), (1, 2), (2, 0))) / 3
    m = p * _proj(phi) + (1 - p) * sigma
    return validate(m, 3, 3)


def _check_dims(d_a, d_b):
    for d in (d_a, d_b):
        if isinstance(d, bool) or int(d) != d or d < 2:
            raise ValueError(f"dimensions must be integers >= 2, got ({d_a}, {d_b})")


def _complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_density(d_a: int, d_b: int, seed=None) -> DensityMatrix:
    """Ginibre-ensemble mixed state ``G G^H / tr(G G^H)``.

    ``seed`` may be an int or a ``numpy.random.Generator``; equal integer
    seeds yield bit-identical matrices.
    """
    _check_dims(d_a, d_b)
    rng = np.random.default_rng(seed)
    n = d_a * d_b
    g = _complex_normal(rng, (n, n))
    m = g @ g.conj().T
    m /= np.trace(m).real
    return validate(m, d_a, d_b)


def _random_vector(rng, n):
    v = _complex_normal(rng, n)
    return v / np.linalg.norm(v)


def random_pure(d_a: int, d_b: int, seed=None, product: bool = False) -> DensityMatrix:
    """Random pure state; with ``product=True`` each wing is drawn separately."""
    _check_dims(d_a, d_b)
    rng = np.random.default_rng(seed)
    if product:
        v = np.kron(_random_vector(rng, d_a), _random_vector(rng, d_b))
    else:
        v = _random_vector(rng, d_a * d_b)
    return validate(_proj(v), d_a, d_b)


def product_state(rho_a, rho_b) -> DensityMatrix:
    rho_a = np.asarray(rho_a, dtype=np.complex128)
    rho_b = np.asarray(rho_b, dtype=np.complex128)
    return validate(np.kron(rho_a, rho_b), rho_a.shape[0], rho_b.shape[0])


# -- parameterized families ---------------------------------------------------


class Family(enum.Enum):
    WERNER = "werner"
    BELL_DIAGONAL = "bell-diagonal"
    ASYMMETRIC = "asymmetric"
    ISOTROPIC = "isotropic"
    FREE_ENTANGLED = "free-entangled"


@dataclass(frozen=True)
class FamilySpec:
    """One state family with all parameters but (possibly) ``p`` fixed.

    ``p`` is ignored by the Bell-diagonal family, ``c`` is used only by it,
    and ``d`` only by the isotropic family.
    """

    family: Family
    p: float = 0.0
    c: tuple[float, float, float] = field(default=(0.0, 0.0, 0.0))
    d: int = 2

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        object.__setattr__(self, "c", tuple(float(x) for x in self.c))
        if len(self.c) != 3:
            raise ValueError("c must be a triple")
        if self.family is not Family.BELL_DIAGONAL:
            _check_p(self.p)
        if self.family is Family.ISOTROPIC and (int(self.d) != self.d or self.d < 2):
            raise ValueError(f"isotropic dimension must be >= 2, got {self.d}")

    @property
    def dims(self) -> tuple[int, int]:
        if self.family is Family.ISOTROPIC:
            return (self.d, self.d)
        if self.family is Family.FREE_ENTANGLED:
            return (3, 3)
        return (2, 2)

    def with_p(self, p: float) -> "FamilySpec":
        return replace(self, p=p)

    def build(self) -> DensityMatrix:
        f = self.family
        if f is Family.WERNER:
            return werner(self.p)
        if f is Family.BELL_DIAGONAL:
            return bell_diagonal(*self.c)
        if f is Family.ASYMMETRIC:
            return asymmetric_noisy_singlet(self.p)
        if f is Family.ISOTROPIC:
            return isotropic(self.p, self.d)
        return free_entangled(self.p)

    def label(self) -> str:
        if self.family is Family.ISOTROPIC:
            return f"isotropic(d={self.d})"
        if self.family is Family.BELL_DIAGONAL:
            return "bell-diagonal(c={:g},{:g},{:g})".format(*self.c)
        return self.family.value
