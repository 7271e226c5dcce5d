"""Distinguished logarithm and K-th root of an empirical characteristic function.

For a zero-free characteristic function phi there is a unique continuous
logarithm psi with psi(0) = 0 and e^psi = phi, and it satisfies

    psi(u) = integral_0^u phi'(z) / phi(z) dz.

The K-th root of phi that recovers the summand's characteristic function is
exp(psi/K).  Numerically the root is assembled from two pieces: the modulus
|phi_hat(u)|^{1/K} is taken directly (exact, no quadrature), and only the
phase Im psi_hat(u)/K comes from cumulative trapezoid integration of the
log-derivative.  Integration runs on the recentred evaluation (see charfn):
phi_hat'/phi_hat = i*c + centred log-derivative, and the i*c*u part is
integrated exactly.

Integration aborts with DenominatorTooSmall when |phi_hat| falls below
max(1e-3/sqrt(n), 1e-12): past that point the integrand is statistically
meaningless and the continuous-logarithm construction loses its footing.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .charfn import CfEvaluation, UGrid
from .errors import DenominatorTooSmall, ParameterError

__all__ = [
    "RootEstimate",
    "default_step",
    "denominator_floor",
    "distinguished_log",
    "distinguished_root",
    "feasible_root",
]

PHASE_STEP_BOUND = math.pi / 4.0


def default_step(u_range: float) -> float:
    """Default grid step for a requested frequency range."""
    return min(0.01, u_range / 4096.0)


def denominator_floor(n: int | None) -> float:
    """Smallest |phi_hat| the log-derivative integration will divide by."""
    if n is None:
        return 1e-12
    return max(1e-3 / math.sqrt(n), 1e-12)


@dataclass(frozen=True)
class RootEstimate:
    """The estimated summand characteristic function on a nonnegative grid.

    Stored in polar form: ``modulus_pow[k]`` is |phi_hat(u_k)|^{1/group_size}
    and ``phase[k]`` is the continuous phase Im psi_hat(u_k)/group_size with
    phase[0] = 0.  The negative half of the grid is the conjugate mirror.
    ``warnings`` collects (u, condition) records such as suspiciously large
    per-step phase increments.
    """

    grid: UGrid
    modulus_pow: np.ndarray
    phase: np.ndarray
    group_size: float
    warnings: list = field(default_factory=list)

    def values(self) -> np.ndarray:
        """phi_hat_X(u) on the nonnegative grid points."""
        return self.modulus_pow * np.exp(1j * self.phase)

    @property
    def u_limit(self) -> float:
        return self.grid.points[-1]

    @staticmethod
    def from_values(grid: UGrid, values, group_size: float = 1.0) -> "RootEstimate":
        """Wrap characteristic-function values given directly on a grid.

        Meant for analytic inputs: the continuous phase is recovered by
        unwrapping the pointwise argument, which is reliable only when the
        phase moves by well under pi per grid step.
        """
        vals = np.asarray(values, dtype=complex)
        if vals.shape != grid.points.shape:
            raise ParameterError("values must live on the grid's nonnegative points")
        phase = np.unwrap(np.angle(vals))
        phase -= phase[0]
        return RootEstimate(
            grid=grid,
            modulus_pow=np.abs(vals),
            phase=phase,
            group_size=float(group_size),
            warnings=[],
        )


def _require_in_range(cf: CfEvaluation, u_limit: float) -> int:
    if u_limit < 0:
        raise ParameterError(f"u_limit must be >= 0 (got {u_limit})")
    if u_limit > cf.grid.u_max + cf.grid.step * 1e-9:
        raise ParameterError(
            f"u_limit {u_limit} exceeds the evaluated range {cf.grid.u_max}"
        )
    return cf.grid.index_of(u_limit)


def _first_floor_violation(cf: CfEvaluation, k_limit: int):
    floor = denominator_floor(cf.n)
    mod = np.abs(cf.phi_centered[: k_limit + 1])
    bad = np.flatnonzero(mod < floor)
    if bad.size:
        k = int(bad[0])
        return k, float(cf.grid.points[k]), float(mod[k]), floor
    return None


def _centered_psi(cf: CfEvaluation, k_limit: int) -> np.ndarray:
    """Cumulative trapezoid of the centred log-derivative on [0, u_k]."""
    g = cf.dphi_centered[: k_limit + 1] / cf.phi_centered[: k_limit + 1]
    return cumulative_trapezoid(g, dx=cf.grid.step, initial=0.0)


def distinguished_log(cf: CfEvaluation, u_limit: float) -> np.ndarray:
    """psi_hat on the grid points of [0, u_limit]; psi_hat(0) = 0.

    exp(psi_hat(u)) reproduces phi_hat(u) up to O(step^2) quadrature error
    per unit length.  Raises DenominatorTooSmall if |phi_hat| dips below the
    floor inside the requested range.
    """
    k_limit = _require_in_range(cf, u_limit)
    hit = _first_floor_violation(cf, k_limit)
    if hit is not None:
        _, u, value, floor = hit
        raise DenominatorTooSmall(u, value, floor)
    psi = _centered_psi(cf, k_limit)
    u = cf.grid.points[: k_limit + 1]
    return psi + 1j * cf.center * u


def _assemble_root(cf: CfEvaluation, k_limit: int, group_size: float) -> RootEstimate:
    if k_limit < 1:
        raise ParameterError("a root estimate needs at least one grid step")
    step = cf.grid.step
    u = cf.grid.points[: k_limit + 1]
    modulus = np.abs(cf.phi_centered[: k_limit + 1])
    modulus_pow = modulus ** (1.0 / group_size)
    psi_c = _centered_psi(cf, k_limit)
    phase = (cf.center * u + psi_c.imag) / group_size

    warnings = []
    increments = np.abs(np.diff(phase))
    for k in np.flatnonzero(increments >= PHASE_STEP_BOUND):
        warnings.append(
            (
                float(u[k + 1]),
                f"phase increment {increments[k]:.3f} rad over one step of "
                f"{step:g}; unwrap may be unreliable here",
            )
        )
    return RootEstimate(
        UGrid(u_max=u[-1], step=step), modulus_pow, phase, group_size, warnings
    )


def distinguished_root(
    cf: CfEvaluation, u_limit: float, group_size: float | None = None
) -> RootEstimate:
    """phi_hat_X = |phi_hat|^{1/K} exp(i Im psi_hat / K) on [0, u_limit].

    ``group_size`` defaults to the evaluation's own; any real value >= 1 is
    accepted.  Raises DenominatorTooSmall as distinguished_log does.
    """
    gs = cf.group_size if group_size is None else float(group_size)
    if not (gs >= 1):
        raise ParameterError(f"group size must be >= 1 (got {gs})")
    k_limit = _require_in_range(cf, u_limit)
    hit = _first_floor_violation(cf, k_limit)
    if hit is not None:
        _, u, value, floor = hit
        raise DenominatorTooSmall(u, value, floor)
    return _assemble_root(cf, k_limit, gs)


def feasible_root(cf: CfEvaluation, group_size: float | None = None):
    """Root on the largest feasible prefix [0, u_feasible] of the grid.

    Returns (root, violation) where violation is None when the whole grid
    passed the denominator floor, else the u at which integration stopped.
    The root then covers grid points strictly before the violation.
    """
    gs = cf.group_size if group_size is None else float(group_size)
    if not (gs >= 1):
        raise ParameterError(f"group size must be >= 1 (got {gs})")
    k_limit = cf.grid.n_half
    hit = _first_floor_violation(cf, k_limit)
    violation = None
    if hit is not None:
        k_bad, u_bad, value, floor = hit
        if k_bad == 0:
            raise DenominatorTooSmall(u_bad, value, floor)
        k_limit = k_bad - 1
        violation = u_bad
    root = _assemble_root(cf, k_limit, gs)
    if violation is not None:
        root.warnings.append(
            (violation, "integration truncated at the denominator floor")
        )
    return root, violation
