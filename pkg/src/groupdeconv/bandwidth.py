"""Spectral-cutoff selection: adaptive threshold rule, oracle, diagnostics.

The adaptive cutoff is the first frequency at which |phi_hat| drops to

    t(n, K, eta) = (K n)^{-1/2} + sqrt(eta * log(n) / K) * n^{-1/2},

capped at n^{1/K}.  Past that level the empirical characteristic function
is noise-dominated and the K-th root cannot be estimated, so the spectrum
is cut there.  The oracle cutoff minimizes the exact L2 risk over a cutoff
grid and is computable only when the true density is known (simulation
benchmarking).  The diagnostic threshold locates where the *exact* |phi|
crosses a theoretical level, for comparing the data-driven cutoff against
what the risk analysis predicts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .charfn import UGrid, ecf_at, evaluate_grid
from .errors import LevelNotReached, ParameterError
from .inversion import XGrid, default_xgrid, invert_prefixes, l2_distance
from .rootlog import RootEstimate, default_step, feasible_root
from .samples import GroupedSample, TestLaw

__all__ = [
    "CutoffRecord",
    "threshold_value",
    "adaptive_cutoff",
    "oracle_risks",
    "oracle_cutoff",
    "default_oracle_grid",
    "diagnostic_threshold_u",
]

BISECTION_TOL = 1e-6
DEFAULT_K1_CAP = 1000.0


@dataclass(frozen=True)
class CutoffRecord:
    """A chosen cutoff plus how it was chosen.

    ``threshold_hit`` is False when the adaptive scan never crossed its
    threshold and the cap n^{1/K} was returned instead.
    """

    value: float
    rule: str  # adaptive | oracle | fixed | diagnostic
    threshold_hit: bool
    scan_resolution: float
    params: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "value": self.value,
            "rule": self.rule,
            "threshold_hit": self.threshold_hit,
            "scan_resolution": self.scan_resolution,
            **self.params,
        }


def threshold_value(n: int, group_size: float, eta: float) -> float:
    """The adaptive rule's |phi_hat| threshold t(n, K, eta)."""
    if n < 2:
        raise ParameterError(f"need n >= 2 (got {n})")
    if eta <= 1:
        raise ParameterError(f"eta must be > 1 (got {eta})")
    return (group_size * n) ** -0.5 + math.sqrt(
        eta * math.log(n) / group_size
    ) / math.sqrt(n)


def cutoff_cap(n: int, group_size: float, k1_cap: float = DEFAULT_K1_CAP) -> float:
    """n^{1/K}, replaced by a configurable cap when K == 1 (n itself would
    be impractically large)."""
    if group_size == 1.0:
        return float(min(n, k1_cap))
    return float(n) ** (1.0 / group_size)


def _bisect_crossing(f, lo: float, hi: float, tol: float = BISECTION_TOL) -> float:
    """First zero crossing of f (positive at lo, <= 0 at hi) to ``tol``."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def adaptive_cutoff(
    sample: GroupedSample,
    eta: float = 1.1,
    scan_resolution: float = 0.01,
    k1_cap: float = DEFAULT_K1_CAP,
) -> CutoffRecord:
    """Data-driven cutoff: scan |phi_hat| at ``scan_resolution``, refine the
    first threshold crossing by bisection, cap at n^{1/K}.

    Dips narrower than the scan resolution can be missed between grid
    points; |phi_hat| is Lipschitz with constant mean|Y|, so the default
    resolution is adequate for anything but extreme scales.
    """
    if scan_resolution <= 0:
        raise ParameterError(f"scan resolution must be > 0 (got {scan_resolution})")
    t = threshold_value(sample.n, sample.group_size, eta)
    cap = cutoff_cap(sample.n, sample.group_size, k1_cap)
    grid = UGrid(u_max=max(cap, scan_resolution), step=scan_resolution)
    ev = evaluate_grid(sample, grid, with_derivative=False)
    record = _adaptive_from_scan(ev.abs_phi, grid, sample, t, cap, eta, scan_resolution)
    return record


def _adaptive_from_scan(abs_phi, grid, sample, t, cap, eta, scan_resolution):
    below = np.flatnonzero(abs_phi <= t)
    params = {"eta": eta, "threshold": t, "cap": cap}
    if below.size == 0:
        return CutoffRecord(cap, "adaptive", False, scan_resolution, params)
    k = int(below[0])
    if grid.points[k] >= cap:
        return CutoffRecord(cap, "adaptive", False, scan_resolution, params)
    if k == 0:
        # |phi_hat(0)| = 1 <= t only for degenerate thresholds (t >= 1)
        return CutoffRecord(0.0, "adaptive", True, scan_resolution, params)
    value = _bisect_crossing(
        lambda u: abs(ecf_at(sample, u)) - t, grid.points[k - 1], grid.points[k]
    )
    return CutoffRecord(min(value, cap), "adaptive", True, scan_resolution, params)


def default_oracle_grid(u_hi: float, u_lo: float = 0.25, size: int = 60) -> np.ndarray:
    """Log-spaced cutoff candidates; the cutoff acts multiplicatively."""
    if u_hi <= u_lo:
        return np.asarray([u_hi])
    return np.geomspace(u_lo, u_hi, size)


def oracle_risks(
    root: RootEstimate, density, ms, xgrid: XGrid
) -> tuple[np.ndarray, np.ndarray]:
    """Exact-density L2 risks at each cutoff, sharing one root estimate.

    Cutoffs snap down to the root's grid and are deduplicated; returns the
    (snapped cutoffs, risks) pair sorted ascending.
    """
    step = root.grid.step
    ks = sorted({root.grid.index_of(m) for m in ms})
    ks = [k for k in ks if k >= 1]
    if not ks:
        raise ParameterError("no usable cutoff candidates on the root grid")
    snapped = np.array([k * step for k in ks])
    estimates = invert_prefixes(root, snapped, xgrid)
    target = density(xgrid.points) if callable(density) else np.asarray(density)
    risks = np.array(
        [l2_distance(target, vals, xgrid) for vals in estimates]
    )
    return snapped, risks


def oracle_cutoff(
    law: TestLaw,
    sample: GroupedSample,
    m_grid=None,
    xgrid: XGrid | None = None,
    k1_cap: float = DEFAULT_K1_CAP,
) -> CutoffRecord:
    """argmin_m ||f - f_m||^2 over the cutoff grid, ties toward smaller m.

    When |phi_hat| hits the integration floor before the largest candidate,
    the grid is truncated at the last feasible cutoff and the truncation
    point is recorded in the result's params.
    """
    cap = cutoff_cap(sample.n, sample.group_size, k1_cap)
    if m_grid is not None and len(m_grid) == 0:
        raise ParameterError("m_grid must be nonempty with positive entries")
    u_hi = cap if m_grid is None else float(np.max(m_grid))
    step = default_step(u_hi)
    ev = evaluate_grid(sample, UGrid(u_max=u_hi + step, step=step))
    root, violation = feasible_root(ev)
    if m_grid is None:
        m_grid = default_oracle_grid(min(u_hi, root.u_limit))
    else:
        m_grid = np.sort(np.asarray(m_grid, dtype=float))
        if m_grid.size == 0 or m_grid[0] <= 0:
            raise ParameterError("m_grid must be nonempty with positive entries")
        m_grid = m_grid[m_grid <= root.u_limit + step * 1e-9]
        if m_grid.size == 0:
            raise ParameterError(
                "no cutoff candidate is feasible: |phi_hat| hits the "
                f"integration floor at u = {violation:.6g}"
            )
    if xgrid is None:
        xgrid = default_xgrid(sample)
    snapped, risks = oracle_risks(root, law.pdf, m_grid, xgrid)
    best = int(np.argmin(risks))  # first minimum = smallest m on ties
    params = {"risk": float(risks[best]), "candidates": int(snapped.size)}
    if violation is not None:
        params["truncated_at"] = violation
    return CutoffRecord(float(snapped[best]), "oracle", True, step, params)


def diagnostic_threshold_u(
    law: TestLaw,
    n: int,
    group_size: float,
    gamma: float | None = None,
    eps: float = 0.1,
    delta: float = 0.1,
    u_max: float = 1e6,
) -> float:
    """First u >= 0 where |phi_X(u)|^K falls to (1+eps)*gamma*sqrt(log n/n).

    ``gamma`` defaults to sqrt(1 + 2/K + delta).  Levels >= 1 are already
    met at u = 0.  The bracketing scan assumes the benchmark laws'
    monotonically decaying |phi_X|; LevelNotReached signals that the level
    is never met before ``u_max``.
    """
    if n < 2:
        raise ParameterError(f"need n >= 2 (got {n})")
    if gamma is None:
        gamma = math.sqrt(1.0 + 2.0 / group_size + delta)
    level = (1.0 + eps) * gamma * math.sqrt(math.log(n) / n)
    if level >= 1.0:
        return 0.0

    def modulus_pow_k(u):
        return np.abs(law.cf(u)) ** group_size

    lo, hi = 0.0, 0.01
    while modulus_pow_k(hi) > level:
        lo = hi
        hi *= 1.3
        if hi > u_max:
            raise LevelNotReached(
                f"|phi(u)|^{group_size:g} stays above {level:.3e} up to u = {u_max:g}"
            )
    return _bisect_crossing(lambda u: modulus_pow_k(u) - level, lo, hi)
