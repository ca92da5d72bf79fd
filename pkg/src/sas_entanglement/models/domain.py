"""Domain models."""

from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any, ClassVar, Literal

import numpy as np
from numpy.typing import NDArray

from sas_entanglement.config import get_tolerances
from sas_entanglement.exceptions import ValidationError

ComplexArray = NDArray[np.complex128]
FloatArray = NDArray[np.float64]

MAX_DIM = 8


def _as_complex_2d(entries: Any) -> ComplexArray:
    array = np.array(entries, dtype=np.complex128)
    if array.ndim != 2:
        raise ValidationError(f"Expected a 2-d matrix, got shape {array.shape}")
    rows, cols = array.shape
    if not (1 <= rows <= MAX_DIM and 1 <= cols <= MAX_DIM):
        raise ValidationError(f"Matrix dimensions must lie in 1..{MAX_DIM}, got {rows}x{cols}")
    array.flags.writeable = False
    return array


@dataclass(frozen=True)
class ComplexMatrix:
    """Dense complex matrix of size at most 8x8."""
    entries: ComplexArray

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", _as_complex_2d(self.entries))

    @property
    def dim_rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def dim_cols(self) -> int:
        return int(self.entries.shape[1])


@dataclass(frozen=True)
class HermitianMatrix:
    """Square complex matrix equal to its conjugate transpose, entrywise within tolerance."""
    entries: ComplexArray

    def __post_init__(self) -> None:
        array = _as_complex_2d(self.entries)
        if array.shape[0] != array.shape[1]:
            raise ValidationError(f"Hermitian matrix must be square, got {array.shape}")
        deviation = float(np.max(np.abs(array - array.conj().T)))
        if deviation > get_tolerances().hermitian:
            raise ValidationError(f"Matrix is not Hermitian (max |m - m^H| = {deviation:.3e})")
        object.__setattr__(self, "entries", array)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def trace(self) -> float:
        return float(np.real(np.trace(self.entries)))

    def purity(self) -> float:
        """Tr(m^2) for the Hermitian m."""
        return float(np.real(np.vdot(self.entries, self.entries)))


@dataclass(frozen=True)
class UnitaryMatrix:
    """Element of SU(d), d in {3, 4}, acting on the symmetric sector."""
    entries: ComplexArray

    ALLOWED_DIMS: ClassVar[tuple[int, ...]] = (3, 4)

    def __post_init__(self) -> None:
        array = _as_complex_2d(self.entries)
        dim = array.shape[0]
        if array.shape != (dim, dim) or dim not in self.ALLOWED_DIMS:
            raise ValidationError(f"Unitary must be square with dimension in {self.ALLOWED_DIMS}, got {array.shape}")
        tol = get_tolerances().unitary
        deviation = float(np.max(np.abs(array @ array.conj().T - np.eye(dim))))
        if deviation > tol:
            raise ValidationError(f"Matrix is not unitary (max |UU^H - I| = {deviation:.3e})")
        det_modulus = abs(complex(np.linalg.det(array)))
        if abs(det_modulus - 1.0) > tol:
            raise ValidationError(f"Determinant modulus {det_modulus:.12f} differs from 1")
        object.__setattr__(self, "entries", array)

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def conjugate(self, m: ComplexArray) -> ComplexArray:
        """U m U^H."""
        return self.entries @ m @ self.entries.conj().T


@dataclass(frozen=True)
class DickeBasis:
    """Dicke states |D_N^(k)>, k = 0..N, as columns in the 2^N computational basis.

    Qubit 0 is the most significant bit of a product-basis index and |+>, |-> are
    the computational states |0>, |1>.
    """
    n_qubits: int
    vectors: FloatArray

    @property
    def isometry(self) -> ComplexArray:
        """The 2^N x (N+1) matrix whose columns are the Dicke vectors."""
        return self.vectors.T.astype(np.complex128)


@dataclass(frozen=True)
class SymmetricDensityMatrix:
    """Symmetric N-qubit state written in the Dicke basis (dimension N+1)."""
    n_qubits: int
    matrix: HermitianMatrix

    def __post_init__(self) -> None:
        if self.n_qubits not in (2, 3):
            raise ValidationError(f"Only 2 or 3 qubits are supported, got {self.n_qubits}")
        if self.matrix.dim != self.n_qubits + 1:
            raise ValidationError(f"{self.n_qubits}-qubit symmetric state needs a {self.n_qubits + 1}-dim matrix, got {self.matrix.dim}")
        tol = get_tolerances()
        trace = self.matrix.trace()
        if abs(trace - 1.0) > tol.state_trace:
            raise ValidationError(f"Density matrix trace is {trace!r}, expected 1")
        min_eig = float(np.linalg.eigvalsh(self.matrix.entries)[0])
        if min_eig < -tol.psd:
            raise ValidationError(f"Density matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})")

    @classmethod
    def from_array(cls, n_qubits: int, entries: Any) -> "SymmetricDensityMatrix":
        return cls(n_qubits=n_qubits, matrix=HermitianMatrix(entries))

    @property
    def spin(self) -> float:
        return self.n_qubits / 2

    @property
    def entries(self) -> ComplexArray:
        return self.matrix.entries

    def eigenvalues(self) -> FloatArray:
        """Spectrum sorted non-ascending."""
        return np.sort(np.linalg.eigvalsh(self.matrix.entries))[::-1]


@dataclass(frozen=True)
class PTResult:
    """Minimal partial-transpose eigenvalue and the negativity it implies."""
    lambda_min: float
    negativity: float

    @classmethod
    def from_lambda_min(cls, lambda_min: float) -> "PTResult":
        return cls(lambda_min=lambda_min, negativity=2.0 * max(0.0, -lambda_min))


@dataclass(frozen=True)
class _Spectrum:
    """Sorted, normalized probability vector; re-sorted and re-normalized on construction."""
    values: tuple[float, ...]

    SIZE: ClassVar[int] = 0

    def __post_init__(self) -> None:
        tol = get_tolerances()
        values = np.asarray(self.values, dtype=np.float64).ravel()
        if values.size != self.SIZE:
            raise ValidationError(f"{type(self).__name__} needs {self.SIZE} values, got {values.size}")
        if not np.all(np.isfinite(values)):
            raise ValidationError(f"Spectrum has non-finite entries: {values.tolist()}")
        if np.min(values) < -tol.negative_entry:
            raise ValidationError(f"Spectrum has negative entries: {values.tolist()}")
        values = np.clip(values, 0.0, None)
        total = float(np.sum(values))
        if abs(total - 1.0) > tol.normalization_correction:
            raise ValidationError(f"Spectrum sums to {total!r}; normalization correction exceeds {tol.normalization_correction}")
        normalized = np.sort(values / total)[::-1]
        object.__setattr__(self, "values", tuple(float(v) for v in normalized))

    def __iter__(self) -> Iterator[float]:
        return iter(self.values)

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    def as_array(self) -> FloatArray:
        return np.array(self.values, dtype=np.float64)


@dataclass(frozen=True)
class Spectrum3(_Spectrum):
    """Spectrum tau_1 >= tau_2 >= tau_3 of a symmetric two-qubit state."""
    SIZE: ClassVar[int] = 3

    @property
    def tau(self) -> tuple[float, float, float]:
        t1, t2, t3 = self.values
        return t1, t2, t3


@dataclass(frozen=True)
class Spectrum4(_Spectrum):
    """Spectrum lambda_1 >= ... >= lambda_4 of a generic two-qubit state."""
    SIZE: ClassVar[int] = 4

    @property
    def lam(self) -> tuple[float, float, float, float]:
        l1, l2, l3, l4 = self.values
        return l1, l2, l3, l4


@dataclass(frozen=True)
class Spectrum4Sym(_Spectrum):
    """Spectrum tau_1 >= ... >= tau_4 of a symmetric three-qubit state."""
    SIZE: ClassVar[int] = 4

    @property
    def tau(self) -> tuple[float, float, float, float]:
        t1, t2, t3, t4 = self.values
        return t1, t2, t3, t4


CaseId = Literal["A-i", "A-ii", "A-iii", "A-iv", "B-i", "B-ii"]


@dataclass(frozen=True)
class CriticalPoint:
    """Critical point of the reduced two-qubit objective for one eigenvalue ordering.

    Case A points have eigenvalues of X depending on z, case B points on (y_1, y_2).
    """
    case_id: CaseId
    permutation: tuple[int, int, int]
    t: tuple[float, float, float]
    lambda_value: float
    parameters: dict[str, float | None] = field(default_factory=dict)


@dataclass(frozen=True)
class OrbitSearchResult:
    """Best orbit point found by the stochastic search."""
    best_value: float
    best_unitary: UnitaryMatrix
    n_evaluations: int
    converged: bool
    best_score: float


@dataclass(frozen=True)
class GridRow:
    """One sample of a scalar field on a 2-d slice."""
    x: float
    y: float
    value: float


@dataclass
class GridResult:
    """Tabulated scalar field over a 2-parameter region plus optional curve series."""
    axis_names: tuple[str, str]
    rows: list[GridRow]
    metadata: dict[str, Any]
    series: dict[str, list[GridRow]] = field(default_factory=dict)
