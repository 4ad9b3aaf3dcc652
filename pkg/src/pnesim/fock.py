"""Truncated two-mode Fock representation.

Density matrices of two bosonic modes are stored as dense complex arrays of
shape (D^2, D^2), where D is the per-mode Fock cutoff and the row/column
index packs the photon-number pair (n1, n2) row-major.  Energy is always the
*total* mean photon number over both modes.
"""

from dataclasses import dataclass, field

import numpy as np

MIN_CUTOFF = 2

# Default tolerance profile for state sanity checks.
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-10
MIN_EIGENVALUE_TOL = 1e-8


def check_cutoff(dim: int) -> int:
    """Validate a per-mode Fock cutoff (number of levels 0..D-1)."""
    if int(dim) != dim or dim < MIN_CUTOFF:
        raise ValueError(f"Fock cutoff must be an integer >= {MIN_CUTOFF}, got {dim}")
    return int(dim)


def index_pack(n1: int, n2: int, dim: int) -> int:
    """Row-major flat index of the two-mode Fock pair (n1, n2)."""
    if not (0 <= n1 < dim and 0 <= n2 < dim):
        raise ValueError(f"photon numbers ({n1}, {n2}) out of range for cutoff {dim}")
    return n1 * dim + n2


def index_unpack(index: int, dim: int) -> tuple[int, int]:
    """Inverse of :func:`index_pack`."""
    if not 0 <= index < dim * dim:
        raise ValueError(f"flat index {index} out of range for cutoff {dim}")
    return divmod(index, dim)


@dataclass(frozen=True)
class TwoModeState:
    """Two-mode density matrix truncated to ``dim`` Fock levels per mode.

    Parameters
    ----------
    dim : int
        Per-mode cutoff D; the stored matrix is D^2 x D^2.
    matrix : ndarray
        Dense complex matrix indexed by packed pairs (n1, n2).
    tail_bound : float
        Estimated probability weight lost beyond the cutoff (initial
        truncation loss plus any trace leak accumulated during evolution).
    """

    dim: int
    matrix: np.ndarray
    tail_bound: float = 0.0

    def __post_init__(self):
        check_cutoff(self.dim)
        d2 = self.dim * self.dim
        if self.matrix.shape != (d2, d2):
            raise ValueError(
                f"matrix shape {self.matrix.shape} does not match cutoff {self.dim}"
            )
        m = np.ascontiguousarray(self.matrix, dtype=complex)
        m.setflags(write=False)  # states are immutable after construction
        object.__setattr__(self, "matrix", m)

    def as_tensor(self) -> np.ndarray:
        """View of the matrix with separate mode indices [n1, n2, m1, m2]."""
        d = self.dim
        return self.matrix.reshape(d, d, d, d)

    def trace(self) -> complex:
        return np.trace(self.matrix)


def state_from_coeff_vector(psi: np.ndarray, dim: int, tail_bound: float = 0.0) -> TwoModeState:
    """Projector onto the pure state sum_n psi[n] |n,n> at the given cutoff."""
    dim = check_cutoff(dim)
    psi = np.asarray(psi, dtype=complex)
    if len(psi) > dim:
        raise ValueError(f"coefficient vector of length {len(psi)} exceeds cutoff {dim}")
    vec = np.zeros(dim * dim, dtype=complex)
    for n, c in enumerate(psi):
        vec[index_pack(n, n, dim)] = c
    return TwoModeState(dim=dim, matrix=np.outer(vec, vec.conj()), tail_bound=tail_bound)


def mean_total_photons(rho: TwoModeState) -> float:
    """Total mean photon number <n1 + n2> (the energy convention used
    throughout: e.g. |1,1><1,1| has energy 2)."""
    d = rho.dim
    n = np.arange(d)
    weights = (n[:, None] + n[None, :]).reshape(-1)
    diag = np.real(np.diagonal(rho.matrix))
    return float(np.dot(weights, diag))


def thermal_product_state(n_t: float, dim: int) -> TwoModeState:
    """Product of two single-mode thermal states with mean occupation n_t."""
    dim = check_cutoff(dim)
    if n_t < 0:
        raise ValueError("mean thermal occupation must be >= 0")
    n = np.arange(dim)
    if n_t == 0:
        p = np.zeros(dim)
        p[0] = 1.0
        tail = 0.0
    else:
        q = n_t / (1.0 + n_t)
        p = (1 - q) * q**n
        tail = q**dim
    diag2 = np.outer(p, p).reshape(-1)
    return TwoModeState(dim=dim, matrix=np.diag(diag2).astype(complex), tail_bound=2 * tail)


@dataclass(frozen=True)
class ToleranceProfile:
    """Thresholds used by :func:`sanity_check`."""

    hermiticity: float = HERMITICITY_TOL
    trace: float = TRACE_TOL
    min_eigenvalue: float = MIN_EIGENVALUE_TOL


DEFAULT_TOLERANCES = ToleranceProfile()


@dataclass(frozen=True)
class SanityReport:
    trace_deviation: float
    hermiticity_deviation: float
    min_eigenvalue: float
    tail_bound: float
    violations: tuple = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations


def sanity_check(rho: TwoModeState, tolerances: ToleranceProfile = DEFAULT_TOLERANCES) -> SanityReport:
    """Diagnostic report on trace, Hermiticity and positivity of a state.

    The trace check allows for the declared tail bound: a state that has
    leaked probability past the cutoff is flagged only when the deviation
    exceeds tolerance plus the recorded leak.
    """
    m = rho.matrix
    herm_dev = float(np.max(np.abs(m - m.conj().T)))
    trace_dev = float(abs(np.trace(m) - 1.0))
    min_eig = float(np.linalg.eigvalsh(0.5 * (m + m.conj().T)).min())

    violations = []
    if herm_dev > tolerances.hermiticity:
        violations.append(f"hermiticity deviation {herm_dev:.3e} > {tolerances.hermiticity:.1e}")
    if trace_dev > tolerances.trace + rho.tail_bound:
        violations.append(f"trace deviation {trace_dev:.3e} > {tolerances.trace:.1e}")
    if min_eig < -tolerances.min_eigenvalue:
        violations.append(f"min eigenvalue {min_eig:.3e} < -{tolerances.min_eigenvalue:.1e}")

    return SanityReport(
        trace_deviation=trace_dev,
        hermiticity_deviation=herm_dev,
        min_eigenvalue=min_eig,
        tail_bound=rho.tail_bound,
        violations=tuple(violations),
    )
