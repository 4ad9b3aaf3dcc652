"""Photon-number entangled states (PNES) in Schmidt form.

A PNES is a pure two-mode state sum_n psi_n |n>|n>.  This module provides
the built-in families

* ``twb``   -- twin beam / two-mode squeezed vacuum, psi_n ~ lambda^n,
* ``pssv``  -- photon-subtracted squeezed vacuum, psi_n ~ (n+1) x^(n+1),
* ``psi01`` -- c0|00> + c1|11>,
* ``custom`` -- arbitrary user coefficients,

plus the pure-state measures (energy, negativity, entanglement entropy) and
a bisection solver that matches a family parameter to a target measure.
"""

import math
import re
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, CutoffError, StateSpecError, TargetRangeError
from .fock import check_cutoff

FAMILIES = ("twb", "pssv", "psi01", "custom")
MEASURES = ("energy", "negativity", "entropy")

# Truncation-tail threshold used when a constructor picks its own cutoff.
STATE_TAIL_TOL = 1e-12

# Bisection policy for solve_family_param.
BISECT_TOL = 1e-10
BISECT_MAX_ITER = 200
PARAM_HI = 1.0 - 1e-9


@dataclass(frozen=True)
class PnesCoefficients:
    """Schmidt coefficient vector of a PNES, normalized over its cutoff.

    ``truncation_loss`` records the probability weight of the untruncated
    family that fell beyond the cutoff before renormalization; it is 0 for
    finitely supported families.
    """

    coeffs: np.ndarray
    family: str = "custom"
    param: float | tuple | None = None
    truncation_loss: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if not np.iscomplexobj(c):
            c = c.astype(float)
        if c.ndim != 1 or len(c) < 1:
            raise ValueError("coefficients must form a non-empty vector")
        norm = np.linalg.norm(c)
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"coefficients not normalized: |sum - 1| = {abs(norm**2 - 1):.3e}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @property
    def cutoff(self) -> int:
        return len(self.coeffs)


@dataclass(frozen=True)
class TwbParams:
    """Squeezing parameter r and lambda = tanh(r) of a twin-beam state."""

    r: float
    lam: float

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("squeezing parameter r must be >= 0")
        if abs(self.lam - math.tanh(self.r)) > 1e-14:
            raise ValueError("lambda must equal tanh(r)")

    @classmethod
    def from_r(cls, r: float) -> "TwbParams":
        return cls(r=r, lam=math.tanh(r))

    @classmethod
    def from_lambda(cls, lam: float) -> "TwbParams":
        if not 0 <= lam < 1:
            raise ValueError(f"lambda must lie in [0, 1), got {lam}")
        return cls(r=math.atanh(lam), lam=lam)


@dataclass(frozen=True)
class MatchTarget:
    """A target value for one of the pure-state measures."""

    kind: str
    value: float

    def __post_init__(self):
        if self.kind not in MEASURES:
            raise ValueError(f"unknown measure kind {self.kind!r}, expected one of {MEASURES}")
        if not math.isfinite(self.value) or self.value < 0:
            raise ValueError(f"target value must be finite and >= 0, got {self.value}")


def _normalize(raw: np.ndarray, family: str, param, loss: float) -> PnesCoefficients:
    norm = np.linalg.norm(raw)
    if norm == 0:
        raise ValueError("all coefficients vanish; state undefined")
    return PnesCoefficients(coeffs=raw / norm, family=family, param=param,
                            truncation_loss=max(0.0, loss))


def twb_coeffs(lam: float, cutoff: int | None = None) -> PnesCoefficients:
    """Twin-beam coefficients psi_n ~ lambda^n, normalized over the cutoff.

    With ``cutoff=None`` the smallest cutoff with truncation loss below
    ``STATE_TAIL_TOL`` is used.
    """
    if not 0 <= lam < 1:
        raise ValueError(f"lambda must lie in [0, 1), got {lam}")
    if cutoff is None:
        cutoff = family_tail_cutoff("twb", lam)
    cutoff = check_cutoff(cutoff)
    n = np.arange(cutoff)
    raw = lam**n
    loss = lam ** (2 * cutoff)  # geometric tail of the untruncated state
    return _normalize(raw, "twb", lam, loss)


def pssv_coeffs(x: float, cutoff: int | None = None) -> PnesCoefficients:
    """Photon-subtracted squeezed vacuum, psi_n ~ (n+1) x^(n+1).

    The untruncated normalization is (1-y)^3 / (y(1+y)) with y = x^2.
    x = 0 is rejected: every coefficient vanishes there.
    """
    if x >= 1:
        raise ValueError(f"x must lie in (0, 1), got {x}")
    if x <= 0:
        raise ValueError("x = 0 leaves all coefficients zero; state undefined")
    if cutoff is None:
        cutoff = family_tail_cutoff("pssv", x)
    cutoff = check_cutoff(cutoff)
    n = np.arange(cutoff)
    raw = (n + 1) * x ** (n + 1)
    y = x * x
    norm_const = (1 - y) ** 3 / (y * (1 + y))
    loss = 1.0 - norm_const * float(np.sum((n + 1) ** 2 * y ** (n + 1)))
    return _normalize(raw, "pssv", x, loss)


def psi01_coeffs(c1_sq: float, cutoff: int = 2) -> PnesCoefficients:
    """Two-term state sqrt(1-c1_sq)|00> + sqrt(c1_sq)|11>."""
    if not 0 <= c1_sq <= 1:
        raise ValueError(f"c1_sq must lie in [0, 1], got {c1_sq}")
    cutoff = check_cutoff(cutoff)
    raw = np.zeros(cutoff)
    raw[0] = math.sqrt(1 - c1_sq)
    raw[1] = math.sqrt(c1_sq)
    return _normalize(raw, "psi01", c1_sq, 0.0)


def custom_coeffs(values, cutoff: int | None = None) -> PnesCoefficients:
    """Arbitrary coefficients, normalized on load; complex values allowed."""
    raw = np.asarray(values)
    if raw.ndim != 1 or len(raw) == 0:
        raise ValueError("custom coefficients must form a non-empty vector")
    if not np.iscomplexobj(raw):
        raw = raw.astype(float)
    elif np.max(np.abs(raw.imag)) == 0:
        raw = raw.real.astype(float)
    if cutoff is not None:
        cutoff = check_cutoff(cutoff)
        if cutoff < len(raw):
            raise ValueError("cutoff smaller than the coefficient vector")
        raw = np.concatenate([raw, np.zeros(cutoff - len(raw), dtype=raw.dtype)])
    elif len(raw) < 2:
        raw = np.concatenate([raw, np.zeros(1, dtype=raw.dtype)])
    return _normalize(raw, "custom", None, 0.0)


def family_tail_cutoff(family: str, param, tol: float = STATE_TAIL_TOL) -> int:
    """Smallest cutoff whose truncation loss for the family is below tol."""
    if family == "twb":
        lam = param
        if lam == 0:
            return 2
        return max(2, math.ceil(math.log(tol) / (2 * math.log(lam))))
    if family == "pssv":
        y = param * param
        norm_const = (1 - y) ** 3 / (y * (1 + y))
        partial = 0.0
        for d in range(1, 100000):
            partial += d * d * y**d
            if 1.0 - norm_const * partial < tol and d >= 2:
                return d
        raise ConvergenceError(f"no cutoff below 1e5 reaches tail {tol} for pssv x={param}")
    if family == "psi01":
        return 2
    raise ValueError(f"no tail rule for family {family!r}")


def pad_coeffs(coeffs: PnesCoefficients, cutoff: int) -> PnesCoefficients:
    """Zero-pad a coefficient vector to a larger cutoff."""
    cutoff = check_cutoff(cutoff)
    if cutoff < coeffs.cutoff:
        required = coeffs.cutoff
        raise CutoffError(
            f"cutoff {cutoff} cannot hold a state supported on {required} levels; "
            f"use cutoff >= {required}"
        )
    if cutoff == coeffs.cutoff:
        return coeffs
    padded = np.concatenate([coeffs.coeffs, np.zeros(cutoff - coeffs.cutoff, dtype=coeffs.coeffs.dtype)])
    return PnesCoefficients(coeffs=padded, family=coeffs.family, param=coeffs.param,
                            truncation_loss=coeffs.truncation_loss)


def family_at_cutoff(coeffs: PnesCoefficients, cutoff: int) -> PnesCoefficients:
    """The same state carried to a larger cutoff.

    Families with an analytic tail are rebuilt from their parameter, which
    restores the amplitude the original cutoff dropped; custom vectors are
    zero-padded exactly as given.  Rebuilding matters near separability
    thresholds: a weight tail of 1e-12 is an amplitude tail of 1e-6, large
    enough to distort partial-transpose eigenvalues at the 1e-9 scale.
    """
    if cutoff <= coeffs.cutoff or coeffs.family == "custom" or coeffs.param is None:
        return pad_coeffs(coeffs, cutoff)
    return _family_constructor(coeffs.family)(coeffs.param, cutoff)


# -- pure-state measures ---------------------------------------------------

def pnes_energy(coeffs: PnesCoefficients) -> float:
    """Total mean photon number 2 * sum_n n |psi_n|^2 (both modes)."""
    p = np.abs(coeffs.coeffs) ** 2
    return float(2.0 * np.dot(np.arange(len(p)), p))


def pure_negativity(coeffs: PnesCoefficients) -> float:
    """Negativity (||rho^T2||_1 - 1)/2 of the pure Schmidt-form state,
    which reduces to ((sum_n |psi_n|)^2 - 1)/2."""
    s = float(np.sum(np.abs(coeffs.coeffs)))
    return max(0.0, (s * s - 1.0) / 2.0)


def pure_entropy(coeffs: PnesCoefficients) -> float:
    """Entanglement entropy -sum p_n ln p_n in nats (p_n = |psi_n|^2)."""
    p = np.abs(coeffs.coeffs) ** 2
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def pure_entropy_bits(coeffs: PnesCoefficients) -> float:
    """Entanglement entropy in bits (ebits)."""
    return pure_entropy(coeffs) / math.log(2)


def measure_of(coeffs: PnesCoefficients, kind: str) -> float:
    if kind == "energy":
        return pnes_energy(coeffs)
    if kind == "negativity":
        return pure_negativity(coeffs)
    if kind == "entropy":
        return pure_entropy(coeffs)
    raise ValueError(f"unknown measure kind {kind!r}")


# -- parameter matching ----------------------------------------------------

def _family_constructor(family: str):
    if family == "twb":
        return twb_coeffs
    if family == "pssv":
        return pssv_coeffs
    if family == "psi01":
        return psi01_coeffs
    raise ValueError(f"cannot solve parameters for family {family!r}")


def _solve_bracket(family: str, kind: str) -> tuple[float, float]:
    if family == "twb":
        return 0.0, PARAM_HI
    if family == "pssv":
        return 1e-12, PARAM_HI
    # psi01: energy 2*c1_sq is monotone on [0, 1]; negativity and entropy
    # peak at c1_sq = 1/2, so those are solved on the monotone branch.
    if kind == "energy":
        return 0.0, 1.0
    return 0.0, 0.5


def solve_family_param(family: str, target: MatchTarget, cutoff: int | None = None) -> float:
    """Bisect the family parameter until the chosen measure hits the target.

    All three measures are strictly increasing on the solved bracket, so plain
    bisection converges; the measure must match within ``BISECT_TOL``
    (absolute).  Unattainable targets raise :class:`TargetRangeError`.
    """
    make = _family_constructor(family)
    lo, hi = _solve_bracket(family, target.kind)

    def f(p: float) -> float:
        return measure_of(make(p, cutoff) if cutoff else make(p), target.kind) - target.value

    f_lo = f(lo)
    if abs(f_lo) <= BISECT_TOL:
        return lo
    if f_lo > 0:
        raise TargetRangeError(
            f"{target.kind} = {target.value} lies below the attainable minimum "
            f"{f_lo + target.value:.6g} for {family}"
        )
    if family in ("twb", "pssv"):
        # all three measures diverge toward the upper bracket, so the
        # endpoint is never evaluated (its cutoff would be astronomical)
        pass
    else:
        f_hi = f(hi)
        if abs(f_hi) <= BISECT_TOL:
            return hi
        if f_hi < 0:
            raise TargetRangeError(
                f"{target.kind} = {target.value} exceeds the attainable maximum "
                f"{f_hi + target.value:.6g} for {family} on the solved bracket"
            )
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) <= BISECT_TOL:
            return mid
        if f_mid < 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection did not reach |{target.kind} - {target.value}| <= {BISECT_TOL} "
        f"within {BISECT_MAX_ITER} iterations (residual {f_mid:.3e})"
    )


# -- state specification mini-grammar ---------------------------------------

_SPEC_RE = re.compile(r"^(?P<family>[a-z0-9]+):(?P<rest>.+)$")

_PARAM_KEYS = {
    "twb": ("lambda", "r"),
    "pssv": ("x",),
    "psi01": ("c1sq",),
}


def parse_state_spec(spec: str, cutoff: int | None = None) -> PnesCoefficients:
    """Build a PNES from a spec string.

    Grammar: ``twb:lambda=0.5``, ``twb:r=0.4``, ``pssv:x=0.1``,
    ``psi01:c1sq=0.25``, ``custom:0.8,0.6`` and, for the solvable families,
    ``<family>:<energy|negativity|entropy>=<value>``.
    """
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise StateSpecError(f"malformed state spec {spec!r}; expected family:key=value")
    family, rest = m.group("family"), m.group("rest")
    if family not in FAMILIES:
        raise StateSpecError(f"unknown family {family!r} in {spec!r}")

    if family == "custom":
        try:
            values = [complex(tok) for tok in rest.split(",")]
        except ValueError as exc:
            raise StateSpecError(f"bad coefficient in {spec!r}: {exc}") from None
        return custom_coeffs(values, cutoff)

    if "=" not in rest:
        raise StateSpecError(f"missing '=' in state spec {spec!r}")
    key, _, value_str = rest.partition("=")
    try:
        value = float(value_str)
    except ValueError:
        raise StateSpecError(f"bad numeric value {value_str!r} in {spec!r}") from None

    if key in MEASURES:
        param = solve_family_param(family, MatchTarget(kind=key, value=value), cutoff)
    elif key in _PARAM_KEYS[family]:
        param = math.tanh(value) if (family == "twb" and key == "r") else value
    else:
        raise StateSpecError(
            f"unknown key {key!r} for family {family!r}; expected one of "
            f"{_PARAM_KEYS[family] + MEASURES}"
        )

    make = _family_constructor(family)
    try:
        return make(param, cutoff) if cutoff else make(param)
    except ValueError as exc:
        raise StateSpecError(f"invalid parameter in {spec!r}: {exc}") from None
