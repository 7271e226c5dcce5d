"""Truncated Fourier inversion of a root estimate, and L2 risk machinery.

The density estimate with spectral cutoff m is

    f_m(x) = (1/2pi) integral_{-m}^{m} e^{-iux} phi_hat_X(u) du
           = (1/pi) Re integral_0^m e^{-iux} phi_hat_X(u) du,

real-valued by conjugate symmetry.  The u-integral is a composite trapezoid
on the root's grid restricted to [0, m] (the cutoff snaps down to the last
grid point <= m).  Inversion is direct quadrature per x-point, so the
x-grid is completely decoupled from the u-grid.
"""
from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import CutoffExceedsRange, ParameterError
from .rootlog import RootEstimate
from .samples import GroupedSample

__all__ = [
    "XGrid",
    "DensityEstimate",
    "default_xgrid",
    "invert",
    "invert_prefixes",
    "l2_distance",
    "energy_x",
    "energy_u",
]


@dataclass(frozen=True)
class XGrid:
    """Uniform evaluation grid on [x_min, x_max] with ``count`` points."""

    x_min: float
    x_max: float
    count: int = 1024

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise ParameterError(
                f"x_min must be < x_max (got {self.x_min}, {self.x_max})"
            )
        if self.count < 16:
            raise ParameterError(f"x-grid needs at least 16 points (got {self.count})")

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.count)

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.count - 1)


def default_xgrid(
    sample: GroupedSample, count: int = 1024, half_width_sigmas: float = 8.0
) -> XGrid:
    """Data-driven grid: centred at mean(Y)/K with half-width 8 sd of X.

    E[X] = E[Y]/K and Var(X) = Var(Y)/K, so this covers the summand's mass
    for any of the benchmark-style laws.
    """
    center = sample.mean / sample.group_size
    sigma = math.sqrt(max(sample.variance, 1e-300) / sample.group_size)
    half = half_width_sigmas * sigma
    return XGrid(center - half, center + half, count)


@dataclass(frozen=True)
class DensityEstimate:
    """f_m values on an x-grid together with how the cutoff was chosen.

    ``values`` is the raw inversion output: it may go negative.  An optional
    clipped-and-renormalized copy is available via ``nonnegative()``; the raw
    estimator is what all risks are computed from.
    """

    xgrid: XGrid
    values: np.ndarray
    cutoff_m: float
    cutoff_rule: dict
    group_size: float
    provenance: dict

    def nonnegative(self) -> np.ndarray:
        """Clip at zero and renormalize to unit mass (post-processing only)."""
        v = np.clip(self.values, 0.0, None)
        mass = np.trapezoid(v, self.xgrid.points)
        return v / mass if mass > 0 else v

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["x", "fhat"])
            for x, v in zip(self.xgrid.points, self.values):
                writer.writerow([f"{x:.12g}", f"{v:.12g}"])

    def to_json(self, path) -> None:
        payload = {
            "xgrid": {
                "x_min": self.xgrid.x_min,
                "x_max": self.xgrid.x_max,
                "count": self.xgrid.count,
            },
            "values": [float(v) for v in self.values],
            "cutoff": self.cutoff_rule | {"value": self.cutoff_m},
            "group_size": self.group_size,
            "provenance": self.provenance,
        }
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")

    @staticmethod
    def from_json(path) -> "DensityEstimate":
        payload = json.loads(Path(path).read_text())
        g = payload["xgrid"]
        cutoff = dict(payload["cutoff"])
        return DensityEstimate(
            xgrid=XGrid(g["x_min"], g["x_max"], g["count"]),
            values=np.asarray(payload["values"], dtype=float),
            cutoff_m=cutoff.pop("value"),
            cutoff_rule=cutoff,
            group_size=payload["group_size"],
            provenance=payload["provenance"],
        )


def _phase_matrix(x: np.ndarray, n_modes: int, step: float) -> np.ndarray:
    """E[j, k] = exp(-i * x_j * k * step) built by cumulative products."""
    base = np.exp(-1j * step * x)
    out = np.empty((x.size, n_modes + 1), dtype=complex)
    out[:, 0] = 1.0
    if n_modes >= 1:
        out[:, 1:] = base[:, None]
        np.cumprod(out[:, 1:], axis=1, out=out[:, 1:])
    return out


def _weighted_phase_sum(
    x: np.ndarray, weighted_vals: np.ndarray, step: float, chunk: int = 4096
) -> np.ndarray:
    """sum_k weighted_vals[k] * exp(-i x k step), blocked to bound memory."""
    n_modes = weighted_vals.size - 1
    base = np.exp(-1j * step * x)
    carry = np.ones(x.size, dtype=complex)
    acc = np.zeros(x.size, dtype=complex)
    k0 = 0
    while k0 <= n_modes:
        b = min(chunk, n_modes - k0 + 1)
        block = np.empty((x.size, b), dtype=complex)
        block[:, 0] = carry
        if b > 1:
            block[:, 1:] = base[:, None]
            np.cumprod(block[:, 1:], axis=1, out=block[:, 1:])
            block[:, 1:] *= carry[:, None]
        acc += block @ weighted_vals[k0 : k0 + b]
        carry = block[:, -1] * base
        k0 += b
    return acc


def _cutoff_index(root: RootEstimate, m: float) -> int:
    if not (m > 0):
        raise ParameterError(f"cutoff m must be > 0 (got {m})")
    if m > root.u_limit + root.grid.step * (1 + 1e-9):
        raise CutoffExceedsRange(
            f"cutoff m={m:.6g} exceeds the root estimate's range "
            f"[0, {root.u_limit:.6g}]"
        )
    return root.grid.index_of(m)


def invert(root: RootEstimate, m: float, xgrid: XGrid) -> DensityEstimate:
    """Spectral-cutoff inversion of the root estimate at cutoff m."""
    k_m = _cutoff_index(root, m)
    x = xgrid.points
    step = root.grid.step
    if k_m < 1:
        values = np.zeros(xgrid.count)
    else:
        vals = root.values()[: k_m + 1]
        weights = np.full(k_m + 1, step)
        weights[0] = weights[-1] = step / 2.0
        values = _weighted_phase_sum(x, vals * weights, step).real / math.pi
    return DensityEstimate(
        xgrid=xgrid,
        values=values,
        cutoff_m=m,
        cutoff_rule={"rule": "fixed"},
        group_size=root.group_size,
        provenance={},
    )


def invert_prefixes(root: RootEstimate, ms, xgrid: XGrid) -> list[np.ndarray]:
    """f_m values for several cutoffs sharing one root, cheaply.

    Equivalent to calling invert() per cutoff (up to float summation order):
    the trapezoid over [0, m'] is the prefix sum of per-interval trapezoid
    contributions, so all cutoffs come out of one cumulative pass.
    """
    ks = [_cutoff_index(root, m) for m in ms]
    k_max = max(ks)
    x = xgrid.points
    step = root.grid.step
    vals = root.values()[: k_max + 1]
    E = _phase_matrix(x, k_max, step)
    integrand = E * vals[None, :]
    segments = 0.5 * step * (integrand[:, :-1] + integrand[:, 1:])
    prefix = np.cumsum(segments.real, axis=1)  # prefix[:, k-1] = int_0^{u_k}
    out = []
    for k in ks:
        if k < 1:
            out.append(np.zeros(xgrid.count))
        else:
            out.append(prefix[:, k - 1] / math.pi)
    return out


def _values_on(f, xgrid: XGrid) -> np.ndarray:
    """Evaluate a density-like object on the grid points."""
    x = xgrid.points
    if isinstance(f, DensityEstimate):
        if f.xgrid == xgrid:
            return f.values
        return np.interp(x, f.xgrid.points, f.values)
    if callable(f):
        return np.asarray(f(x), dtype=float)
    arr = np.asarray(f, dtype=float)
    if arr.shape != x.shape:
        raise ParameterError(
            f"array of shape {arr.shape} does not match the x-grid ({x.shape})"
        )
    return arr


def l2_distance(a, b, xgrid: XGrid | None = None) -> float:
    """Trapezoid approximation of the squared L2 distance on the grid.

    ``a`` and ``b`` may be DensityEstimates, callables, or arrays on the
    grid; estimates on a different grid are linearly interpolated onto it.
    """
    if xgrid is None:
        for cand in (b, a):
            if isinstance(cand, DensityEstimate):
                xgrid = cand.xgrid
                break
        else:
            raise ParameterError("an explicit x-grid is required")
    va = _values_on(a, xgrid)
    vb = _values_on(b, xgrid)
    diff = va - vb
    return float(np.trapezoid(diff * diff, xgrid.points))


def energy_x(est: DensityEstimate) -> float:
    """integral of f_m(x)^2 over the estimate's grid (trapezoid)."""
    return float(np.trapezoid(est.values**2, est.xgrid.points))


def energy_u(root: RootEstimate, m: float) -> float:
    """(1/2pi) integral_{-m}^{m} |phi_hat_X|^2 du on the root's grid."""
    k_m = _cutoff_index(root, m)
    if k_m < 1:
        return 0.0
    mod2 = root.modulus_pow[: k_m + 1] ** 2
    return float(np.trapezoid(mod2, dx=root.grid.step) / math.pi)
