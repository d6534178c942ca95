"""Surface geometry, spatial correlation, and reduced-correlation traces.

Elements sit on a uniform rectangular grid indexed row-major (0-based): index
i maps to column i mod M_x and row floor(i / M_x).  Correlation between two
elements follows the isotropic rich-scattering model J0(2 pi d / lambda),
which is a positive-definite function of the planar separation d, so the
matrix is PSD up to rounding noise; tiny negative eigenvalues are clamped
before the symmetric square root is formed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .specfun import bessel_j0


@dataclass(frozen=True)
class SurfaceGeometry:
    """Element grid counts and aperture extents (in carrier wavelengths)."""

    m_x: int
    m_z: int
    width_x: float  # aperture along rows, multiples of the wavelength
    width_z: float  # aperture along columns, multiples of the wavelength
    wavelength: float  # meters

    def __post_init__(self):
        if self.m_x < 1 or self.m_z < 1:
            raise DomainError("element counts must be >= 1")
        if not (self.width_x > 0 and self.width_z > 0):
            raise DomainError("aperture extents must be > 0")
        if not self.wavelength > 0:
            raise DomainError("wavelength must be > 0")

    @property
    def n_elements(self) -> int:
        return self.m_x * self.m_z

    @property
    def spacing_x(self) -> float:
        """Physical inter-element spacing along a row, meters."""
        return self.width_x * self.wavelength / self.m_x

    @property
    def spacing_z(self) -> float:
        """Physical inter-element spacing along a column, meters."""
        return self.width_z * self.wavelength / self.m_z


@dataclass(frozen=True)
class CorrelationMatrix:
    """Spatial correlation matrix with its PSD symmetric square root.

    `clamped_mass` records the total magnitude of negative eigenvalues that
    were clamped to zero (a numerical-rank diagnostic), `eigen_floor` the
    smallest eigenvalue kept as-is.
    """

    matrix: np.ndarray
    sqrt: np.ndarray
    eigen_floor: float
    clamped_mass: float

    @property
    def n_elements(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class SelectionSet:
    """Ordered set of distinct active-element indices."""

    indices: tuple

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        object.__setattr__(self, "indices", idx)
        if len(idx) < 1:
            raise DomainError("selection must contain at least one element")
        if len(set(idx)) != len(idx):
            raise DomainError("selection indices must be distinct")
        if min(idx) < 0:
            raise DomainError("selection indices must be >= 0")

    def __len__(self) -> int:
        return len(self.indices)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.intp)


def index_to_coords(i: int, geometry: SurfaceGeometry) -> tuple[int, int]:
    """Map a flat element index to (column, row) on the grid."""
    i = int(i)
    if not 0 <= i < geometry.n_elements:
        raise IndexError(f"element index {i} out of range [0, {geometry.n_elements})")
    return i % geometry.m_x, i // geometry.m_x


def element_distance(i: int, l: int, geometry: SurfaceGeometry) -> float:
    """Euclidean distance in meters between two grid elements.

    Both coordinate differences enter squared; the distance is the true
    planar separation regardless of indexing direction.
    """
    ix_i, iz_i = index_to_coords(i, geometry)
    ix_l, iz_l = index_to_coords(l, geometry)
    dx = geometry.spacing_x * (ix_i - ix_l)
    dz = geometry.spacing_z * (iz_i - iz_l)
    return math.hypot(dx, dz)


def build_correlation(geometry: SurfaceGeometry, eigen_clamp: float = 1e-12) -> CorrelationMatrix:
    """Correlation matrix J[i,l] = J0(2 pi d_il / lambda) and its PSD root.

    The square root comes from a symmetric eigendecomposition; eigenvalues
    below eigen_clamp times the largest are treated as rounding noise and
    clamped to zero.
    """
    m = geometry.n_elements
    cols = np.arange(m) % geometry.m_x
    rows = np.arange(m) // geometry.m_x
    dx = geometry.spacing_x * (cols[:, None] - cols[None, :])
    dz = geometry.spacing_z * (rows[:, None] - rows[None, :])
    dist = np.hypot(dx, dz)
    args = 2.0 * math.pi * dist / geometry.wavelength
    flat, inverse = np.unique(args, return_inverse=True)
    j0_vals = np.array([bessel_j0(a) for a in flat])
    corr = j0_vals[inverse].reshape(m, m)
    corr = 0.5 * (corr + corr.T)
    np.fill_diagonal(corr, 1.0)

    try:
        eigvals, eigvecs = np.linalg.eigh(corr)
    except np.linalg.LinAlgError as exc:
        raise DomainError(f"eigendecomposition failed: {exc}") from exc
    floor = eigen_clamp * float(eigvals.max())
    clamped_mass = float(-eigvals[eigvals < 0.0].sum())
    kept = eigvals[eigvals >= floor]
    eigen_floor = float(kept.min()) if kept.size else 0.0
    lam = np.where(eigvals < floor, 0.0, eigvals)
    root = (eigvecs * np.sqrt(lam)) @ eigvecs.T
    root = 0.5 * (root + root.T)
    return CorrelationMatrix(matrix=corr, sqrt=root, eigen_floor=eigen_floor,
                             clamped_mass=clamped_mass)


def reduce_correlation(corr: CorrelationMatrix | np.ndarray, sel: SelectionSet) -> np.ndarray:
    """Principal submatrix of J on the selected indices."""
    matrix = corr.matrix if isinstance(corr, CorrelationMatrix) else np.asarray(corr, dtype=float)
    idx = sel.as_array()
    if idx.max() >= matrix.shape[0]:
        raise IndexError("selection index out of range for this matrix")
    return matrix[np.ix_(idx, idx)].copy()


def trace_power(a: np.ndarray, p: int) -> float:
    """Trace of A^2 or A^4 for symmetric A, via Frobenius norms."""
    a = np.asarray(a, dtype=float)
    if p == 2:
        return float(np.sum(a * a))
    if p == 4:
        a2 = a @ a
        return float(np.sum(a2 * a2))
    raise DomainError(f"exponent must be 2 or 4, got {p}")
