"""Finite-difference oracles: residuals, eigensolvers, band edges, parametric derivatives."""
from dataclasses import dataclass
import math
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, eigh, eigh_tridiagonal

from .elliptic import complete_K
from .errors import NumericalError
from .grid import GridFunction
from .models.lame import lame_potential


def second_difference(values, dx):
    return (values[2:] - 2.0 * values[1:-1] + values[:-2]) / (dx * dx)


def schrodinger_residual(V, psi, E):
    """max |-psi'' + V psi - E psi| / max |psi| over interior points (central differences)."""
    if len(V) != len(psi) or not math.isclose(V.x0, psi.x0, abs_tol=1e-12) or \
            not math.isclose(V.dx, psi.dx, rel_tol=1e-9):
        raise ValueError("potential and wavefunction live on different grids")
    p = psi.values
    r = -second_difference(p, psi.dx) + (V.values[1:-1] - E) * p[1:-1]
    return float(np.max(np.abs(r)) / np.max(np.abs(p)))


@dataclass(frozen=True)
class EigensolveConfig:
    domain: tuple
    n_points: int
    boundary: str = "dirichlet"
    energy_window: tuple = (-math.inf, math.inf)

    def __post_init__(self):
        lo, hi = self.domain
        if not hi > lo:
            raise ValueError(f"empty domain {self.domain}")
        if self.n_points < 100:
            raise ValueError(f"n_points must be >= 100, got {self.n_points}")
        if self.boundary not in ("dirichlet", "periodic"):
            raise ValueError(f"unknown boundary condition {self.boundary!r}")

    @property
    def dx(self):
        lo, hi = self.domain
        if self.boundary == "dirichlet":
            return (hi - lo) / (self.n_points - 1)
        return (hi - lo) / self.n_points

    def grid(self):
        return self.domain[0] + self.dx * np.arange(self.n_points)

    @classmethod
    def with_spacing(cls, domain, h, **kw):
        lo, hi = domain
        n = int(round((hi - lo) / h)) + 1
        return cls(domain=(lo, hi), n_points=n, **kw)


@dataclass(frozen=True, eq=False)
class SpectrumReport:
    eigenvalues: np.ndarray
    eigenvectors: list
    residuals: np.ndarray

    def __len__(self):
        return self.eigenvalues.size


def _sample(V, cfg):
    x = cfg.grid()
    if isinstance(V, GridFunction):
        if len(V) != cfg.n_points or not np.allclose(V.x, x, atol=1e-9 * max(1.0, abs(x).max())):
            raise ValueError("potential grid does not match the eigensolver configuration")
        return x, np.asarray(V.values, dtype=float)
    return x, np.asarray(V(x), dtype=float)


def eigensolve(V, cfg):
    """Eigenpairs of -d^2/dx^2 + V (second-order differences) inside the energy window.

    ``V`` is a GridFunction on ``cfg.grid()`` or a callable.
    """
    x, v = _sample(V, cfg)
    if not np.all(np.isfinite(v)):
        raise ValueError("potential must be finite on the grid")
    h = cfg.dx
    lo, hi = cfg.energy_window
    c = 1.0 / (h * h)
    if cfg.boundary == "dirichlet":
        d = 2.0 * c + v[1:-1]
        e = -c * np.ones(d.size - 1)
        try:
            if math.isinf(lo) and math.isinf(hi):
                w, vec = eigh_tridiagonal(d, e)
            else:
                lo_f = lo if math.isfinite(lo) else float(np.min(d)) - 4.0 * c
                hi_f = hi if math.isfinite(hi) else float(np.max(d)) + 4.0 * c
                w, vec = eigh_tridiagonal(d, e, select="v", select_range=(lo_f, hi_f))
        except (LinAlgError, ValueError) as exc:
            raise NumericalError(f"tridiagonal eigensolver failed: {exc}") from exc
        full = np.zeros((x.size, w.size))
        full[1:-1] = vec
        resid = np.abs(d[:, None] * vec + np.vstack([e[:, None] * vec[1:], np.zeros((1, w.size))])
                       + np.vstack([np.zeros((1, w.size)), e[:, None] * vec[:-1]]) - w * vec)
    else:
        H = np.diag(2.0 * c + v) - c * (np.eye(x.size, k=1) + np.eye(x.size, k=-1))
        H[0, -1] = H[-1, 0] = -c
        try:
            if math.isinf(lo) and math.isinf(hi):
                w, full = eigh(H)
            else:
                lo_f = lo if math.isfinite(lo) else float(np.min(v)) - 1.0
                hi_f = hi if math.isfinite(hi) else float(np.max(v)) + 4.0 * c + 1.0
                w, full = eigh(H, subset_by_value=(lo_f, hi_f))
        except LinAlgError as exc:
            raise NumericalError(f"eigensolver failed: {exc}") from exc
        resid = np.abs(H @ full - w * full)
    order = np.argsort(w)
    w, full = w[order], full[:, order]
    residuals = np.max(resid, axis=0)[order] / np.maximum(np.max(np.abs(full), axis=0), 1e-300) \
        if w.size else np.zeros(0)
    vectors = []
    for j in range(w.size):
        col = full[:, j]
        col = col / math.sqrt(np.sum(col * col) * h)
        if col[np.argmax(np.abs(col))] < 0:
            col = -col
        vectors.append(GridFunction.from_samples(x, col))
    return SpectrumReport(eigenvalues=w, eigenvectors=vectors, residuals=np.asarray(residuals))


@dataclass(frozen=True, eq=False)
class BandStructure:
    """Per-band [min, max] over the sampled Bloch phases of the N-cell periodic problem."""

    bands: np.ndarray  # shape (n_bands, 2)
    n_periods: int

    @property
    def edges(self):
        """Lower/upper edge of band 0 and lower edge of band 1 (the n=1 Lame edges)."""
        return np.array([self.bands[0, 0], self.bands[0, 1], self.bands[1, 0]])

    def gaps(self, tol=1e-6):
        """Spectral gaps wider than ``tol`` (the discretisation splits band crossings slightly)."""
        out = []
        for j in range(self.bands.shape[0] - 1):
            lo, hi = self.bands[j, 1], self.bands[j + 1, 0]
            if hi - lo > tol:
                out.append((float(lo), float(hi)))
        return out


def periodic_band_structure(V, period, n_periods, points_per_period=400, n_bands=3):
    """Spectrum of the periodic problem on ``n_periods`` cells, band by band.

    The N-cell discrete Hamiltonian is block-circulant, so its eigenvalues are those of
    the single-cell Bloch blocks with phases exp(2 pi i j / N), j = 0..N-1.
    """
    if isinstance(n_periods, float) and not float(n_periods).is_integer():
        raise ValueError(f"number of periods must be an integer, got {n_periods}")
    if int(n_periods) != n_periods or n_periods < 1:
        raise ValueError(f"number of periods must be a positive integer, got {n_periods}")
    n_periods = int(n_periods)
    n = int(points_per_period)
    h = period / n
    x = h * np.arange(n)
    v = np.asarray(V(x), dtype=float)
    c = 1.0 / (h * h)
    base = np.diag(2.0 * c + v).astype(complex) - c * (np.eye(n, k=1) + np.eye(n, k=-1))
    levels = np.empty((n_periods, n_bands))
    for j in range(n_periods):
        phase = np.exp(2j * math.pi * j / n_periods)
        H = base.copy()
        H[-1, 0] = -c * phase
        H[0, -1] = -c * np.conj(phase)
        levels[j] = eigh(H, eigvals_only=True, subset_by_index=(0, n_bands - 1))
    bands = np.column_stack([levels.min(axis=0), levels.max(axis=0)])
    return BandStructure(bands=bands, n_periods=n_periods)


def band_edges_numeric(m, n_periods=16, points_per_period=400):
    """Numerical band edges of the n=1 Lame potential (sorted)."""
    T = 2.0 * complete_K(m)
    bs = periodic_band_structure(lambda t: lame_potential(m, t), T, n_periods, points_per_period)
    return np.sort(bs.edges)


def fd_parametric_derivative(family, epsilon1, h_eps, x):
    """[u(x; eps1 + h) - u(x; eps1 - h)] / (2h) for ``family(eps, x) -> u``."""
    x = np.asarray(x, dtype=float)
    up = np.asarray(family(epsilon1 + h_eps, x))
    um = np.asarray(family(epsilon1 - h_eps, x))
    return GridFunction.from_samples(x, (up - um) / (2.0 * h_eps))


def find_gap_state(report, target, window=None):
    """Index of the eigenvalue closest to ``target``; ``None`` if the report is empty."""
    if not len(report):
        return None
    idx = int(np.argmin(np.abs(report.eigenvalues - target)))
    if window is not None and abs(report.eigenvalues[idx] - target) > window:
        return None
    return idx


def localization(psi, centre, half_width):
    """Fraction of |psi|^2 within [centre - half_width, centre + half_width]."""
    x = psi.x
    dens = np.abs(psi.values) ** 2
    inside = np.abs(x - centre) <= half_width
    return float(np.trapezoid(dens * inside, dx=psi.dx) / np.trapezoid(dens, dx=psi.dx))


def decay_length(gap_distance):
    """Free-particle estimate 1/sqrt(distance to the nearest band edge)."""
    return 1.0 / math.sqrt(gap_distance)


def bloch_decay_length(beta, period):
    """Decay length of a Bloch solution with multiplier ``beta`` per ``period``."""
    return period / abs(math.log(abs(beta)))


def bound_state_domain(centre, length, n_lengths=12.0, minimum=10.0, period: Optional[float] = None):
    """Dirichlet box at least ``n_lengths`` decay lengths ``length`` from ``centre``.

    With ``period`` the walls are snapped outward to multiples of the period so that
    they sit on zeros of the periodic potential's odd band-edge state.
    """
    half = max(n_lengths * length, minimum)
    lo, hi = centre - half, centre + half
    if period is not None:
        lo = math.floor(lo / period) * period
        hi = math.ceil(hi / period) * period
    return lo, hi
