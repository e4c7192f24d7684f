"""Uniform-grid sampled functions and the cumulative quadrature used by the oracles."""
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad_vec

from .errors import NodeError, QuadratureError


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Samples of a real or complex function on ``x0 + dx * arange(n)``."""

    x0: float
    dx: float
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values)
        if vals.ndim != 1 or vals.size < 5:
            raise ValueError("GridFunction needs a 1-D array of at least 5 samples")
        if not self.dx > 0:
            raise ValueError(f"grid spacing must be positive, got {self.dx}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("GridFunction samples must be finite")
        vals = vals.copy()
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_samples(cls, x, values):
        x = check_uniform(x)
        return cls(float(x[0]), float(x[1] - x[0]), np.asarray(values))

    @property
    def x(self):
        return self.x0 + self.dx * np.arange(self.values.size)

    def __len__(self):
        return self.values.size

    def norm(self):
        """Trapezoidal L2 norm."""
        return float(np.sqrt(np.trapezoid(np.abs(self.values) ** 2, dx=self.dx)))


def make_grid(x_min, x_max, n):
    if n < 5:
        raise ValueError(f"a grid needs at least 5 points, got {n}")
    if not x_max > x_min:
        raise ValueError(f"empty grid interval [{x_min}, {x_max}]")
    return np.linspace(float(x_min), float(x_max), int(n))


def check_uniform(x, rtol=1e-9):
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 5:
        raise ValueError("grid must be 1-D with at least 5 points")
    d = np.diff(x)
    if not np.all(d > 0) or np.ptp(d) > rtol * max(abs(d[0]), 1.0) * 10:
        raise ValueError("grid must be uniformly spaced and increasing")
    return x


def cumulative_integral(f, x, anchor, epsabs=1e-10):
    """Return ``int_anchor^{x_i} f(y) dy`` for each x_i.

    Every gap between consecutive sorted abscissas is integrated by a vectorised
    adaptive Gauss-Kronrod rule, then the pieces are summed outwards from ``anchor``.
    ``epsabs`` applies per piece, relative to the piece's size once that exceeds 1.
    """
    x = np.asarray(x, dtype=float)
    pts = np.unique(np.concatenate([x.ravel(), [float(anchor)]]))
    if pts.size == 1:
        return np.zeros_like(x, dtype=complex if np.iscomplexobj(f(pts)) else float)
    a, b = pts[:-1], pts[1:]
    width = b - a
    # pieces larger than 1 are integrated to relative accuracy, smaller ones absolutely
    with np.errstate(all="ignore"):
        probe = np.abs(f(0.5 * (a + b))) * width
    scale = np.where(np.isfinite(probe), np.maximum(probe, 1.0), 1.0)

    def piece(t):
        return f(a + t * width) * (width / scale)

    with np.errstate(divide="raise", invalid="raise", over="raise"):
        try:
            vals, err, info = quad_vec(piece, 0.0, 1.0, epsabs=epsabs, epsrel=0.0,
                                       norm="max", full_output=True)
        except FloatingPointError as exc:
            raise NodeError(f"integrand is singular on the integration path: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise NodeError("integrand is singular on the integration path")
    if not info.success:
        raise QuadratureError(f"adaptive quadrature failed: {info.message} (err={err:.3g})")
    cum = np.concatenate([[0.0], np.cumsum(vals * scale)])
    cum = cum - cum[np.searchsorted(pts, float(anchor))]
    return cum[np.searchsorted(pts, x)]
