"""Dense complex matrices for bipartite states.

Matrices are plain ``numpy.ndarray`` objects of dtype ``complex128``.
:class:`DensityMatrix` wraps one together with its bipartition
``(dim_a, dim_b)``; the bipartition is always stored, never inferred from
the matrix size.  The computational basis is A-major:
``|00>, |01>, ..., |0(d_B-1)>, |10>, ...``.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import IO, Any

import numpy as np

from . import _config

__all__ = [
    "MAX_DIM",
    "Wing",
    "DensityMatrix",
    "ReducedState",
    "Violation",
    "InvalidDensityMatrix",
    "ParseError",
    "as_matrix",
    "kron",
    "partial_trace",
    "purity",
    "hermitian_eigenvalues",
    "find_violations",
    "validate",
    "to_json_dict",
    "from_json_dict",
    "dumps",
    "loads",
    "load",
]

# Largest row count accepted for a dense product (4096 x 4096 complex ~ 256 MiB).
MAX_DIM = 4096


class Wing(enum.Enum):
    """One side of the bipartition."""

    A = "A"
    B = "B"

    @property
    def other(self) -> "Wing":
        return Wing.B if self is Wing.A else Wing.A


class InvalidDensityMatrix(ValueError):
    """Raised when a matrix breaks one or more density-matrix invariants.

    ``violations`` lists every failed invariant, not only the first one.
    """

    def __init__(self, violations: list["Violation"]):
        self.violations = list(violations)
        msg = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid density matrix: {msg}")


class ParseError(ValueError):
    """Malformed density-matrix file."""


@dataclass(frozen=True)
class Violation:
    invariant: str
    residual: float
    tolerance: float

    def __str__(self) -> str:
        return f"{self.invariant} (residual {self.residual:.3e} > tol {self.tolerance:.1e})"


def as_matrix(m: Any) -> np.ndarray:
    """Coerce ``m`` to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"expected a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("matrix contains NaN or Inf entries")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


def _require_square(m: np.ndarray) -> None:
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"matrix must be square, got shape {m.shape}")


@dataclass(frozen=True)
class DensityMatrix:
    """A validated bipartite density matrix.

    Construct through :func:`validate` (or the family constructors in
    :mod:`steerpurity.states`); the constructor itself only checks shapes.
    """

    dim_a: int
    dim_b: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.dim_a < 2 or self.dim_b < 2:
            raise ValueError(f"subsystem dimensions must be >= 2, got ({self.dim_a}, {self.dim_b})")
        n = self.dim_a * self.dim_b
        if self.matrix.shape != (n, n):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match bipartition "
                f"{self.dim_a}x{self.dim_b}"
            )
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def dims(self) -> tuple[int, int]:
        return (self.dim_a, self.dim_b)

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def reduced(self, keep: Wing) -> "ReducedState":
        """Reduced state of wing ``keep``."""
        return partial_trace(self, keep.other)

    def purity(self) -> float:
        return purity(self.matrix)


@dataclass(frozen=True)
class ReducedState:
    dim: int
    matrix: np.ndarray = field(repr=False)
    traced_out: Wing

    def __post_init__(self):
        object.__setattr__(self, "matrix", _frozen(self.matrix))

    @property
    def kept(self) -> Wing:
        return self.traced_out.other

    def purity(self) -> float:
        return purity(self.matrix)


def kron(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b``.

    Raises
    ------
    ValueError
        If the product would exceed :data:`MAX_DIM` rows or columns.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    rows = a.shape[0] * b.shape[0]
    cols = a.shape[1] * b.shape[1]
    if rows > MAX_DIM or cols > MAX_DIM:
        raise ValueError(f"Kronecker product of size {rows}x{cols} exceeds MAX_DIM={MAX_DIM}")
    return np.kron(a, b)


def _partial_trace_array(m: np.ndarray, dim_a: int, dim_b: int, wing: Wing) -> np.ndarray:
    t = m.reshape(dim_a, dim_b, dim_a, dim_b)
    if wing is Wing.A:
        return np.einsum("ajak->jk", t)
    return np.einsum("ajbj->ab", t)


def partial_trace(rho: DensityMatrix, wing: Wing | str) -> ReducedState:
    """Trace out ``wing`` of ``rho``.

    Tracing out A returns the reduced state of B (dimension ``dim_b``) and
    vice versa.
    """
    wing = Wing(wing)
    red = _partial_trace_array(rho.matrix, rho.dim_a, rho.dim_b, wing)
    dim = rho.dim_b if wing is Wing.A else rho.dim_a
    return ReducedState(dim=dim, matrix=red, traced_out=wing)


def purity(m) -> float:
    """``tr(m^2)`` of a Hermitian matrix, computed as the sum of ``|m_ij|^2``."""
    if isinstance(m, (DensityMatrix, ReducedState)):
        m = m.matrix
    m = as_matrix(m)
    _require_square(m)
    return float(np.sum(m.real**2 + m.imag**2))


def _hermiticity_residual(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigenvalues(m, tol: float | None = None) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix in ascending order.

    Raises
    ------
    ValueError
        If ``m`` is not square or deviates from Hermiticity by more than ``tol``.
    """
    tol = _config.TOLERANCE if tol is None else tol
    m = as_matrix(m)
    _require_square(m)
    res = _hermiticity_residual(m)
    if res > tol:
        raise ValueError(f"matrix is not Hermitian (max |M - M^H| = {res:.3e})")
    # Symmetrize so that the solver sees an exactly Hermitian input.
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def find_violations(m, dim_a: int, dim_b: int, tol: float | None = None) -> list[Violation]:
    """Every density-matrix invariant broken by ``m``, with its residual.

    Returns an empty list for a valid state.  Shape problems raise
    ``ValueError`` instead since no residual is meaningful for them.
    """
    tol = _config.TOLERANCE if tol is None else tol
    m = as_matrix(m)
    _require_square(m)
    n = dim_a * dim_b
    if m.shape[0] != n:
        raise ValueError(f"matrix of size {m.shape[0]} does not match bipartition {dim_a}x{dim_b}")

    out = []
    herm = _hermiticity_residual(m)
    if herm > tol:
        out.append(Violation("hermitian", herm, tol))
    tr_res = abs(complex(np.trace(m)) - 1.0)
    if tr_res > tol:
        out.append(Violation("unit-trace", tr_res, tol))
    evals = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    if evals[0] < -tol:
        out.append(Violation("positive-semidefinite", float(-evals[0]), tol))
    return out


def validate(m, dim_a: int, dim_b: int, tol: float | None = None) -> DensityMatrix:
    """Check ``m`` and wrap it as a :class:`DensityMatrix`.

    Raises
    ------
    InvalidDensityMatrix
        Listing each violated invariant separately.
    """
    violations = find_violations(m, dim_a, dim_b, tol)
    if violations:
        raise InvalidDensityMatrix(violations)
    return DensityMatrix(dim_a, dim_b, as_matrix(m))


# -- file format -------------------------------------------------------------


def to_json_dict(rho: DensityMatrix) -> dict:
    return {
        "dim_a": rho.dim_a,
        "dim_b": rho.dim_b,
        "re": rho.matrix.real.tolist(),
        "im": rho.matrix.imag.tolist(),
    }


def _square_array(rows, name: str, n: int) -> np.ndarray:
    if not isinstance(rows, list) or len(rows) != n:
        raise ParseError(f"'{name}' must be a list of {n} rows")
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"'{name}' row {i} must have {n} entries")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (int, float)):
                raise ParseError(f"'{name}' row {i} contains a non-numeric entry {x!r}")
    return np.array(rows, dtype=np.float64)


def from_json_dict(data: dict, tol: float | None = None) -> DensityMatrix:
    """Parse and validate the ``{"dim_a", "dim_b", "re", "im"}`` format."""
    if not isinstance(data, dict):
        raise ParseError("top-level JSON value must be an object")
    for key in ("dim_a", "dim_b", "re", "im"):
        if key not in data:
            raise ParseError(f"missing key '{key}'")
    dim_a, dim_b = data["dim_a"], data["dim_b"]
    for name, d in (("dim_a", dim_a), ("dim_b", dim_b)):
        if isinstance(d, bool) or not isinstance(d, int) or d < 2:
            raise ParseError(f"'{name}' must be an integer >= 2, got {d!r}")
    n = dim_a * dim_b
    re = _square_array(data["re"], "re", n)
    im = _square_array(data["im"], "im", n)
    return validate(re + 1j * im, dim_a, dim_b, tol)


def dumps(rho: DensityMatrix) -> str:
    # json writes floats with repr(), the shortest string that round-trips exactly.
    return json.dumps(to_json_dict(rho))


def loads(text: str, tol: float | None = None) -> DensityMatrix:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc}") from exc
    return from_json_dict(data, tol)


def load(fp: IO[str], tol: float | None = None) -> DensityMatrix:
    return loads(fp.read(), tol)
