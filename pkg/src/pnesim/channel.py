"""Two-mode thermal/lossy Lindblad channel in the Fock basis.

Each mode damps independently under

    drho/dt = A sum_j D[a_j] rho + B sum_j D[a_j^dag] rho,
    D[O] rho = 2 O rho O^dag - O^dag O rho - rho O^dag O,

with A = Gamma (1 + N_T) / 2 and B = Gamma N_T / 2.  The equation couples a
single-mode matrix element rho_{n, n+d} only to its neighbours within the
same index difference d ("sector"), so the single-mode propagator splits
into small tridiagonal blocks that are exponentiated independently and then
applied mode-wise to the two-mode state.

Truncation at D levels is absorbing: the top sector row omits the inflow
from level D (the A term) but keeps all outflow, so the trace can only leak
downward.  The leak is monitored and the cutoff regrown when it exceeds
``TRACE_LEAK_TOL``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from .errors import CutoffError
from .fock import MIN_CUTOFF, TwoModeState, check_cutoff
from .states import PnesCoefficients, family_at_cutoff

THERMAL_TAIL_TOL = 1e-12
CUTOFF_FLOOR = 12
TRACE_LEAK_TOL = 1e-10
REGROW_STEP = 4
MAX_REGROW = 8


@dataclass(frozen=True)
class ChannelParams:
    """Damping rate ``gamma`` and mean thermal occupation ``n_t``.

    Times are measured in units of 1/gamma by default (gamma=1).
    """

    gamma: float = 1.0
    n_t: float = 0.0

    def __post_init__(self):
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")
        if self.n_t < 0:
            raise ValueError(f"n_t must be >= 0, got {self.n_t}")

    @property
    def a_rate(self) -> float:
        return 0.5 * self.gamma * (1.0 + self.n_t)

    @property
    def b_rate(self) -> float:
        return 0.5 * self.gamma * self.n_t

    @property
    def b_over_a(self) -> float:
        return self.n_t / (1.0 + self.n_t)

    @classmethod
    def from_b_over_a(cls, b_over_a: float, gamma: float = 1.0) -> "ChannelParams":
        if not 0 <= b_over_a < 1:
            raise ValueError(f"B/A must lie in [0, 1), got {b_over_a}")
        return cls(gamma=gamma, n_t=b_over_a / (1.0 - b_over_a))

    def thermal_cutoff(self, tol: float = THERMAL_TAIL_TOL) -> int:
        """Smallest D whose single-mode thermal steady-state tail is < tol."""
        q = self.b_over_a
        if q == 0:
            return MIN_CUTOFF
        return max(MIN_CUTOFF, math.ceil(math.log(tol) / math.log(q)))


@dataclass(frozen=True)
class SectorGenerator:
    """Tridiagonal generator of one index-difference sector d.

    Row k drives the element rho_{k, k+|d|} (sectors -d and +d share the
    same real generator by Hermitian symmetry).
    """

    sector: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.ascontiguousarray(self.matrix, dtype=float)
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)


def liouvillian_sector(params: ChannelParams, d: int, cutoff: int) -> SectorGenerator:
    """Generator of sector d at the given cutoff.

    For the elements rho_{n, n+d} (d >= 0):

        d/dt rho_{n,n+d} = A [2 sqrt((n+1)(n+d+1)) rho_{n+1,n+d+1} - (2n+d) rho_{n,n+d}]
                         + B [2 sqrt(n(n+d))     rho_{n-1,n+d-1} - (2n+d+2) rho_{n,n+d}]

    and the top row drops the A inflow (absorbing truncation).
    """
    cutoff = check_cutoff(cutoff)
    ad = abs(d)
    if ad >= cutoff:
        raise ValueError(f"sector |d| = {ad} does not fit below cutoff {cutoff}")
    a, b = params.a_rate, params.b_rate
    size = cutoff - ad
    n = np.arange(size)
    diag = -(a * (2 * n + ad) + b * (2 * n + ad + 2))
    up = 2 * a * np.sqrt((n[:-1] + 1) * (n[:-1] + ad + 1))
    down = 2 * b * np.sqrt((n[1:]) * (n[1:] + ad))
    gen = np.diag(diag) + np.diag(up, 1) + np.diag(down, -1)
    return SectorGenerator(sector=d, matrix=gen)


def sector_propagator(params: ChannelParams, t: float, cutoff: int, d: int) -> np.ndarray:
    """exp(t L_d) via scaling-and-squaring matrix exponential."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return expm(t * liouvillian_sector(params, d, cutoff).matrix)


def sector_propagator_ode(params: ChannelParams, t: float, cutoff: int, d: int,
                          rtol: float = 1e-12) -> np.ndarray:
    """exp(t L_d) via adaptive ODE integration (independent route)."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    gen = liouvillian_sector(params, d, cutoff).matrix
    size = gen.shape[0]
    if t == 0:
        return np.eye(size)
    sol = solve_ivp(lambda _, y: (gen @ y.reshape(size, size)).ravel(),
                    (0.0, t), np.eye(size).ravel(),
                    method="DOP853", rtol=rtol, atol=1e-14)
    if not sol.success:
        raise RuntimeError(f"sector ODE integration failed: {sol.message}")
    return sol.y[:, -1].reshape(size, size)


def _sector_blocks(params: ChannelParams, t: float, cutoff: int) -> list[np.ndarray]:
    """exp(t L_d) for every sector |d| = 0 .. cutoff-1."""
    return [sector_propagator(params, t, cutoff, d) for d in range(cutoff)]


class TransferTensor:
    """Single-mode channel propagator on Fock matrix units.

    ``image(n, m)`` returns M^{nm} = Phi_t(|n><m|), supported exactly on the
    sector m' - n' = m - n.  Blocks are stored per |d| and shared between
    the +d and -d sectors.
    """

    def __init__(self, params: ChannelParams, t: float, dim: int, blocks: list[np.ndarray]):
        self.params = params
        self.t = t
        self.dim = dim
        self._blocks = blocks
        for b in blocks:
            b.setflags(write=False)

    def block(self, d: int) -> np.ndarray:
        return self._blocks[abs(d)]

    def element(self, n: int, m: int, k: int, l: int) -> float:
        """M^{nm}_{kl}; zero unless l - k = m - n."""
        d = m - n
        if l - k != d:
            return 0.0
        row, col = (k, n) if d >= 0 else (l, m)
        return float(self._blocks[abs(d)][row, col])

    def image(self, n: int, m: int) -> np.ndarray:
        """Dense D x D image of the matrix unit |n><m|."""
        d = m - n
        block = self._blocks[abs(d)]
        size = self.dim - abs(d)
        out = np.zeros((self.dim, self.dim))
        k = np.arange(size)
        if d >= 0:
            out[k, k + d] = block[:, n]
        else:
            out[k - d, k] = block[:, m]
        return out

    def trace_defect(self, n: int) -> float:
        """|tr M^{nn} - 1|: deviation from trace preservation, which for the
        absorbing truncation grows with n and t but vanishes for n << D."""
        return float(abs(np.sum(self._blocks[0][:, n]) - 1.0))


def propagator(params: ChannelParams, t: float, cutoff: int) -> TransferTensor:
    """Full single-mode transfer tensor at time t."""
    cutoff = check_cutoff(cutoff)
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    return TransferTensor(params, t, cutoff, _sector_blocks(params, t, cutoff))


def support_dim(coeffs: PnesCoefficients) -> int:
    """Smallest cutoff that holds every nonzero coefficient."""
    nz = np.nonzero(coeffs.coeffs)[0]
    return max(MIN_CUTOFF, int(nz[-1]) + 1) if len(nz) else MIN_CUTOFF


def policy_cutoff(coeffs: PnesCoefficients, params: ChannelParams,
                  floor: int = CUTOFF_FLOOR) -> int:
    """Default cutoff: covers the state's support and the thermal
    steady-state tail (< THERMAL_TAIL_TOL), with a floor."""
    return max(floor, support_dim(coeffs), params.thermal_cutoff())


def evolve_pnes(coeffs: PnesCoefficients, params: ChannelParams, t: float,
                cutoff: int | None = None) -> TwoModeState:
    """Evolve the pure PNES sum_n psi_n |nn> for time t.

    rho(t)_{(n1,n2),(m1,m2)} = sum_{nm} psi_n psi_m^* M^{nm}_{n1 m1} M^{nm}_{n2 m2}.

    With ``cutoff=None`` the policy cutoff is used and grown in steps of
    ``REGROW_STEP`` until the truncation trace leak stays below
    ``TRACE_LEAK_TOL``; an explicit cutoff is used as-is (it must cover the
    coefficient support).  Whenever the evolution dimension exceeds the
    construction cutoff of a family state, the family tail is re-expanded to
    the evolution dimension (see :func:`pnesim.states.family_at_cutoff`).
    """
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    if cutoff is not None:
        if cutoff < support_dim(coeffs):
            raise CutoffError(
                f"cutoff {cutoff} does not cover the state support; "
                f"use cutoff >= {support_dim(coeffs)}"
            )
        return _evolve_pnes_at(coeffs, params, t, check_cutoff(cutoff))
    dim = policy_cutoff(coeffs, params)
    for _ in range(MAX_REGROW + 1):
        state = _evolve_pnes_at(coeffs, params, t, dim)
        leak = state.tail_bound - coeffs.truncation_loss
        if leak <= TRACE_LEAK_TOL:
            return state
        dim += REGROW_STEP
    raise CutoffError(
        f"trace leak {leak:.3e} still above {TRACE_LEAK_TOL:.1e} at cutoff {dim}; "
        f"state/parameters outside the supported regime"
    )


def _evolve_pnes_at(coeffs: PnesCoefficients, params: ChannelParams, t: float,
                    dim: int) -> TwoModeState:
    work = family_at_cutoff(coeffs, dim)
    psi = work.coeffs
    rho4 = np.zeros((dim, dim, dim, dim), dtype=complex)
    for d in range(dim):
        size = dim - d
        v = psi[:size] * np.conj(psi[d:])
        if not np.any(v):
            continue
        block = sector_propagator(params, t, dim, d)
        # W[k, l] = sum_n E[k, n] v[n] E[l, n]; both modes share the block
        w = (block * v) @ block.T
        k = np.arange(size)
        rows, cols = k[:, None], k[None, :]
        rho4[rows, cols, rows + d, cols + d] = w
        if d > 0:
            rho4[rows + d, cols + d, rows, cols] = w.conj()
    matrix = rho4.reshape(dim * dim, dim * dim)
    leak = max(0.0, 1.0 - float(np.real(np.trace(matrix))))
    return TwoModeState(dim=dim, matrix=matrix,
                        tail_bound=work.truncation_loss + leak)


def single_mode_superoperator(params: ChannelParams, t: float, dim: int) -> np.ndarray:
    """Dense D^2 x D^2 matrix S with rho'_{k,l} = S[(k,l),(n,m)] rho_{n,m}
    (row-major index pairs); assembled from the sector blocks."""
    dim = check_cutoff(dim)
    out = np.zeros((dim * dim, dim * dim))
    for d in range(dim):
        block = sector_propagator(params, t, dim, d)
        k = np.arange(dim - d)
        rows = k * dim + (k + d)
        out[rows[:, None], rows[None, :]] = block
        if d > 0:
            rows = (k + d) * dim + k
            out[rows[:, None], rows[None, :]] = block
    return out


def evolve_state(state: TwoModeState, params: ChannelParams, t: float) -> TwoModeState:
    """General mixed-state evolution: the single-mode superoperator applied
    mode-wise.  O(D^6); used for semigroup checks and non-PNES inputs."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    d = state.dim
    s = single_mode_superoperator(params, t, d)
    # reorder [n1,n2,m1,m2] -> [(n1,m1),(n2,m2)] so each mode is one axis
    y = state.as_tensor().transpose(0, 2, 1, 3).reshape(d * d, d * d)
    y = s @ y @ s.T
    out = y.reshape(d, d, d, d).transpose(0, 2, 1, 3).reshape(d * d, d * d)
    leak = max(0.0, float(np.real(np.trace(state.matrix) - np.trace(out))))
    return TwoModeState(dim=d, matrix=out, tail_bound=state.tail_bound + leak)


def energy_closed_form(e0: float, params: ChannelParams, t: float) -> float:
    """Total mean photon number after time t:
    E(t) = e^{-gamma t} E0 + (1 - e^{-gamma t}) 2 N_T."""
    if e0 < 0:
        raise ValueError(f"E0 must be >= 0, got {e0}")
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    decay = math.exp(-params.gamma * t)
    return decay * e0 + (1.0 - decay) * 2.0 * params.n_t
