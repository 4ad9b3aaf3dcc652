"""Two-mode Gaussian covariance-matrix algebra.

Quadratures are ordered (x1, p1, x2, p2) with [x, p] = i and the vacuum
covariance matrix equal to I/2, so the Simon PPT threshold for the smallest
partially transposed symplectic eigenvalue is 1/2.  Every state in scope is
in symmetric standard form (blocks a*I and c*diag(1, -1)), for which all
quantities reduce to closed forms in (a, c); the general 4x4 paths are kept
as independent verification routes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelParams
from .fock import TwoModeState

STD_FORM_TOL = 1e-12
FIRST_MOMENT_TOL = 1e-10


@dataclass(frozen=True)
class SymmetricStdForm:
    """Symmetric standard form: diagonal blocks a*I2, cross block c*diag(1,-1)."""

    a: float
    c: float

    def __post_init__(self):
        if self.a < 0.5 - STD_FORM_TOL:
            raise ValueError(f"unphysical form: a = {self.a} < 1/2")
        if self.a * self.a - self.c * self.c < 0.25 - STD_FORM_TOL:
            raise ValueError(
                f"unphysical form: a^2 - c^2 = {self.a**2 - self.c**2:.6g} < 1/4"
            )


VACUUM = SymmetricStdForm(a=0.5, c=0.0)


def twb_cm(r: float) -> SymmetricStdForm:
    """Twin-beam (two-mode squeezed vacuum) covariance:
    a = cosh(2r)/2, c = sinh(2r)/2."""
    if r < 0:
        raise ValueError(f"squeezing r must be >= 0, got {r}")
    return SymmetricStdForm(a=0.5 * math.cosh(2 * r), c=0.5 * math.sinh(2 * r))


def std_form_to_cm(form: SymmetricStdForm) -> np.ndarray:
    a, c = form.a, form.c
    return np.array([
        [a, 0.0, c, 0.0],
        [0.0, a, 0.0, -c],
        [c, 0.0, a, 0.0],
        [0.0, -c, 0.0, a],
    ])


def std_form_from_cm(cm: np.ndarray, tol: float = STD_FORM_TOL) -> SymmetricStdForm:
    """Extract (a, c); the input must actually be in symmetric standard form."""
    cm = np.asarray(cm, dtype=float)
    a = float(np.trace(cm)) / 4.0
    c = 0.5 * float(cm[0, 2] - cm[1, 3])
    form = SymmetricStdForm(a=a, c=c)
    residual = float(np.max(np.abs(cm - std_form_to_cm(form))))
    if residual > tol:
        raise ValueError(f"matrix is not in symmetric standard form (residual {residual:.3e})")
    return form


def evolve_cm(form: SymmetricStdForm, params: ChannelParams, t: float) -> SymmetricStdForm:
    """Channel action on the covariance: a -> e^{-Gt} a + (1-e^{-Gt})(N_T + 1/2),
    c -> e^{-Gt} c."""
    if t < 0:
        raise ValueError(f"t must be >= 0, got {t}")
    decay = math.exp(-params.gamma * t)
    return SymmetricStdForm(
        a=decay * form.a + (1.0 - decay) * (params.n_t + 0.5),
        c=decay * form.c,
    )


def nu_tilde_minus(form: SymmetricStdForm) -> float:
    """Smallest symplectic eigenvalue of the partially transposed covariance:
    a - |c| in symmetric standard form."""
    return form.a - abs(form.c)


def nu_tilde_minus_general(cm: np.ndarray) -> float:
    """General 4x4 route via the PT-flipped symplectic invariant
    Delta~ = det A + det B - 2 det C."""
    cm = np.asarray(cm, dtype=float)
    block_a = cm[:2, :2]
    block_b = cm[2:, 2:]
    block_c = cm[:2, 2:]
    delta = np.linalg.det(block_a) + np.linalg.det(block_b) - 2.0 * np.linalg.det(block_c)
    disc = max(0.0, delta * delta - 4.0 * np.linalg.det(cm))
    return math.sqrt(0.5 * (delta - math.sqrt(disc)))


def simon_separable(form: SymmetricStdForm) -> bool:
    """Simon PPT criterion (necessary and sufficient for two-mode Gaussian
    states): separable iff nu-tilde-minus >= 1/2."""
    return nu_tilde_minus(form) >= 0.5


def t_g_closed(r: float, params: ChannelParams) -> float:
    """Gaussian separation time of the twin beam with squeezing r:
    t_G = (1/gamma) ln(1 + (1 - e^{-2r}) / (2 N_T)); +inf for N_T = 0,
    0 for r <= 0 (already separable)."""
    if r <= 0:
        return 0.0
    if params.n_t == 0:
        return math.inf
    return math.log1p((1.0 - math.exp(-2.0 * r)) / (2.0 * params.n_t)) / params.gamma


def t_g_numeric(r: float, params: ChannelParams, rel_tol: float = 1e-12) -> float:
    """Root of nu_tilde_minus(t) = 1/2 by bisection; verification route for
    t_g_closed."""
    if r <= 0:
        return 0.0
    form0 = twb_cm(r)

    def margin(t: float) -> float:
        return nu_tilde_minus(evolve_cm(form0, params, t)) - 0.5

    lo, hi = 0.0, 1.0 / params.gamma
    while margin(hi) < 0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e6 / params.gamma:
            return math.inf
    while hi - lo > rel_tol * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        if margin(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def gaussian_negativity(form: SymmetricStdForm) -> float:
    """Negativity of the Gaussian state: N = max(0, (1/(2 nu~_-) - 1)/2),
    valid in the single-violation regime nu~_+ >= 1/2 (asserted)."""
    nu_plus = form.a + abs(form.c)
    if nu_plus < 0.5 - STD_FORM_TOL:
        raise ValueError(
            f"nu~_+ = {nu_plus:.6g} < 1/2: outside the single-violation regime"
        )
    nu_minus = nu_tilde_minus(form)
    return max(0.0, (1.0 / (2.0 * nu_minus) - 1.0) / 2.0)


def reference_ng(e_at_tg: float) -> float:
    """Negativity of the pure twin beam whose total energy is e_at_tg:
    sinh^2 r = E/2, N = tanh r / (1 - tanh r)."""
    if e_at_tg < 0:
        raise ValueError(f"energy must be >= 0, got {e_at_tg}")
    if e_at_tg == 0:
        return 0.0
    lam = math.sqrt(e_at_tg / (e_at_tg + 2.0))
    return lam / (1.0 - lam)


def _quadrature_ops(dim: int) -> tuple[np.ndarray, np.ndarray]:
    lower = np.diag(np.sqrt(np.arange(1, dim)), 1)
    x = (lower + lower.T) / math.sqrt(2.0)
    p = 1j * (lower.T - lower) / math.sqrt(2.0)
    return x, p


def cm_from_fock(rho: TwoModeState, first_moment_tol: float = FIRST_MOMENT_TOL) -> np.ndarray:
    """Covariance matrix from the Fock-basis second moments.

    First moments must vanish (they do for every state in scope); values
    above ``first_moment_tol`` raise a diagnostic error.
    """
    dim = rho.dim
    rho4 = rho.as_tensor()
    x, p = _quadrature_ops(dim)
    eye = np.eye(dim)

    def expect(op1: np.ndarray, op2: np.ndarray) -> complex:
        return complex(np.einsum("abcd,ca,db->", rho4, op1, op2))

    first = [expect(x, eye), expect(p, eye), expect(eye, x), expect(eye, p)]
    worst = max(abs(v) for v in first)
    if worst > first_moment_tol:
        raise ValueError(f"first moments not negligible (max |<R>| = {worst:.3e})")

    # mode-local entries need the symmetrized product; cross-mode operators
    # commute so the plain product suffices
    ops = [(0, x), (0, p), (1, x), (1, p)]
    cm = np.zeros((4, 4))
    for i, (mode_i, op_i) in enumerate(ops):
        for j, (mode_j, op_j) in enumerate(ops):
            if j < i:
                continue
            if mode_i == mode_j:
                sym = 0.5 * (op_i @ op_j + op_j @ op_i)
                val = expect(sym, eye) if mode_i == 0 else expect(eye, sym)
            else:
                val = expect(op_i, op_j)
            cm[i, j] = cm[j, i] = float(np.real(val))
    return cm
