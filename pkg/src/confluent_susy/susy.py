"""Second-order SUSY transformations built from Wronskians.

The confluent transformation with factorization energy eps1 uses

    w(x) = D + W(u1, du1/deps1),      w'(x) = -u1(x)**2,

and the partner potential

    Vt = V - 2 (ln w)'' = V + 4 u1 u1' / w + 2 u1**4 / w**2,

so no numerical differentiation is needed once the seed carries its analytic x- and
eps-derivatives.  The integral formula ``w = w0 - int_{x0}^x u1^2`` is provided as an
independent route for cross-checking.
"""
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.optimize import brentq

from .errors import ConsistencyError, NodeError, SingularTransformError
from .grid import GridFunction, check_uniform, cumulative_integral

IMAG_TOL = 1e-8


def wronskian(f, fprime, g, gprime):
    """W(f, g) = f g' - f' g (elementwise)."""
    return f * gprime - fprime * g


@dataclass(frozen=True)
class ConfluentSeed:
    """Factorization energy plus u1 and its x-, eps- and mixed derivatives.

    ``decay`` records where u1 vanishes asymptotically ("left", "right" or None); it
    fixes the limits of W(u1, du1/deps1) at +-infinity used by the D-scan.
    """

    epsilon1: float
    u1: Callable
    du1_dx: Callable
    du1_deps: Callable
    d2u1_dxdeps: Callable
    decay: Optional[str] = None
    label: str = ""

    def wronskian(self, x):
        """W(u1, du1/deps1) at x."""
        return wronskian(self.u1(x), self.du1_dx(x), self.du1_deps(x), self.d2u1_dxdeps(x))


@dataclass(frozen=True, eq=False)
class TransformResult:
    partner_potential: GridFunction
    w_function: GridFunction
    bound_state: GridFunction
    D: Optional[float]
    epsilon1: Optional[float]
    u1: GridFunction
    du1_dx: GridFunction


@dataclass(frozen=True, eq=False)
class IntertwinerCoefficients:
    """Coefficients of B+ = d^2/dx^2 + g d/dx + h."""

    g: GridFunction
    h: GridFunction
    d: float


def _to_real(values, what, scale=None):
    values = np.asarray(values)
    if not np.iscomplexobj(values):
        return values
    tol = IMAG_TOL * (1.0 if scale is None else scale)
    worst = float(np.max(np.abs(values.imag))) if values.size else 0.0
    if worst > tol:
        raise ConsistencyError(f"{what} has imaginary part {worst:.3g} above tolerance {tol:.3g}")
    return values.real.copy()


def _check_finite(*arrays):
    for arr in arrays:
        if not np.all(np.isfinite(arr)):
            raise ValueError("seed produced non-finite values on the grid")


def locate_sign_change(x, w, evaluate=None, xtol=1e-10):
    """First zero of the sampled real function w; refined by bisection if possible.

    Returns ``None`` when w keeps a strict sign on the grid.
    """
    wr = np.real(w)
    exact = np.flatnonzero(wr == 0.0)
    change = np.flatnonzero(np.sign(wr[:-1]) * np.sign(wr[1:]) < 0)
    if exact.size and (not change.size or exact[0] <= change[0]):
        return float(x[exact[0]])
    if not change.size:
        return None
    i = change[0]
    if evaluate is None:
        return float(x[i] - wr[i] * (x[i + 1] - x[i]) / (wr[i + 1] - wr[i]))
    return float(brentq(lambda t: float(np.real(evaluate(t))), x[i], x[i + 1], xtol=xtol))


def _normalized_state(u1, w, dx):
    psi = u1 / w
    scale = float(np.max(np.abs(psi)))
    psi = _to_real(psi, "bound state", scale)
    norm = np.sqrt(np.trapezoid(np.abs(psi) ** 2, dx=dx))
    return psi / norm


def _assemble(x, V, u, up, w, wr_scale, D, epsilon1):
    # V~ = V - 2 (ln w)'' with w' = -u^2, w'' = -2 u u'
    g = u * u / w
    vt = np.asarray(V(x)) + 4.0 * u * up / w + 2.0 * g * g
    vt = _to_real(vt, "partner potential")
    w_real = _to_real(w, "w(x)", wr_scale)
    psi = _normalized_state(u, w, x[1] - x[0])
    return TransformResult(
        partner_potential=GridFunction.from_samples(x, vt),
        w_function=GridFunction.from_samples(x, w_real),
        bound_state=GridFunction.from_samples(x, psi),
        D=D,
        epsilon1=epsilon1,
        u1=GridFunction.from_samples(x, u),
        du1_dx=GridFunction.from_samples(x, up),
    )


def confluent_partner_differential(seed, D, V, x):
    """Partner potential from w = D + W(u1, du1/deps1).

    Raises SingularTransformError (with the crossing location) if w changes sign or
    vanishes on the grid.
    """
    x = check_uniform(x)
    u, up = seed.u1(x), seed.du1_dx(x)
    ue, uep = seed.du1_deps(x), seed.d2u1_dxdeps(x)
    _check_finite(u, up, ue, uep)
    w = D + wronskian(u, up, ue, uep)
    crossing = locate_sign_change(x, w, lambda t: D + seed.wronskian(np.atleast_1d(t))[0])
    if crossing is not None:
        raise SingularTransformError(
            f"w(x) = D + W(u1, du1/deps1) vanishes near x = {crossing:.10g} (D = {D:g})", crossing)
    return _assemble(x, V, u, up, w, float(np.max(np.abs(w))), float(D), float(seed.epsilon1))


def _numeric_derivative(f, x, h=1e-3):
    # fourth-order central stencil; only used when no analytic derivative is supplied
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def confluent_partner_integral(u1, w0, x0, V, x, du1=None, epsilon1=None, epsabs=1e-10):
    """Partner potential from ``w = w0 - int_{x0}^x u1(y)^2 dy`` (adaptive quadrature)."""
    x = check_uniform(x)
    u = np.asarray(u1(x))
    up = np.asarray(du1(x)) if du1 is not None else _numeric_derivative(u1, x)
    _check_finite(u, up)
    integral = cumulative_integral(lambda y: u1(y) ** 2, x, x0, epsabs=epsabs)
    w = w0 - integral

    def w_at(t):
        return w0 - cumulative_integral(lambda y: u1(y) ** 2, np.atleast_1d(t), x0, epsabs=epsabs)[0]

    crossing = locate_sign_change(x, w, w_at)
    if crossing is not None:
        raise SingularTransformError(
            f"w(x) = w0 - int u1^2 vanishes near x = {crossing:.10g}", crossing)
    return _assemble(x, V, u, up, w, float(np.max(np.abs(w))), None, epsilon1)


def _check_nodeless(u1, x, anchor):
    lo, hi = min(float(np.min(x)), anchor), max(float(np.max(x)), anchor)
    probe = np.unique(np.concatenate([np.linspace(lo, hi, 4 * np.size(x) + 1), np.ravel(x), [anchor]]))
    u = np.real(np.asarray(u1(probe)))
    if np.any(u == 0.0) or np.any(np.sign(u[:-1]) != np.sign(u[1:])):
        bad = probe[np.flatnonzero((u[:-1] == 0) | (np.sign(u[:-1]) != np.sign(u[1:])))[0]]
        raise NodeError(f"u1 vanishes on the integration path near x = {bad:.6g}")


class OrthogonalSolution:
    """u1_perp(x) = u1(x) int_{anchor}^x u1^-2, so that W(u1, u1_perp) = 1."""

    def __init__(self, u1, anchor, du1=None):
        self.u1 = u1
        self.du1 = du1 if du1 is not None else (lambda t: _numeric_derivative(u1, t))
        self.anchor = float(anchor)

    def _integral(self, x):
        _check_nodeless(self.u1, x, self.anchor)
        return cumulative_integral(lambda y: 1.0 / self.u1(y) ** 2, x, self.anchor)

    def __call__(self, x):
        return self.value(x)

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.u1(x) * self._integral(x)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        u = self.u1(x)
        return self.du1(x) * self._integral(x) + 1.0 / u

    def evaluate(self, x):
        """(value, derivative) sharing one quadrature pass."""
        x = np.asarray(x, dtype=float)
        u = self.u1(x)
        integral = self._integral(x)
        return u * integral, self.du1(x) * integral + 1.0 / u


def orthogonal_solution(u1, anchor, du1=None):
    return OrthogonalSolution(u1, anchor, du1)


class JordanChainU2:
    """u2 = C u1 + D u1_perp + du1/deps1, closing (H - eps1) u2 = u1."""

    def __init__(self, seed, C, D, anchor):
        self.seed = seed
        self.C = float(C)
        self.D = float(D)
        self.perp = OrthogonalSolution(seed.u1, anchor, seed.du1_dx)

    def evaluate(self, x):
        s = self.seed
        pv, pd = self.perp.evaluate(x)
        value = self.C * s.u1(x) + self.D * pv + s.du1_deps(x)
        deriv = self.C * s.du1_dx(x) + self.D * pd + s.d2u1_dxdeps(x)
        return value, deriv

    def __call__(self, x):
        return self.evaluate(x)[0]

    def derivative(self, x):
        return self.evaluate(x)[1]

    def wronskian(self, x):
        """W(u1, u2), expanded term by term so W(u1, C u1) is an exact floating-point zero."""
        s = self.seed
        u, up = s.u1(x), s.du1_dx(x)
        pv, pd = self.perp.evaluate(x)
        return (self.C * wronskian(u, up, u, up)
                + self.D * wronskian(u, up, pv, pd)
                + wronskian(u, up, s.du1_deps(x), s.d2u1_dxdeps(x)))


def jordan_chain_u2(seed, C, D, anchor):
    return JordanChainU2(seed, C, D, anchor)


def intertwiner_coefficients(result, V):
    """g and h of B+ for a confluent transformation (c = 0, d = eps1)."""
    x = result.partner_potential.x
    u, up = result.u1.values, result.du1_dx.values
    w = result.w_function.values
    g = _to_real(u * u / w, "g")
    gp = _to_real(2.0 * u * up / w + (u * u / w) ** 2, "g'")
    d = float(result.epsilon1)
    h = -0.5 * gp + 0.5 * g * g - np.asarray(V(x)) + d
    return IntertwinerCoefficients(
        g=GridFunction.from_samples(x, g),
        h=GridFunction.from_samples(x, h),
        d=d,
    )


@dataclass(frozen=True)
class Solution:
    """A (generalised) eigenfunction: (H - energy) value = source, source=None meaning 0."""

    value: Callable
    derivative: Callable
    energy: float
    source: Optional[Callable] = None
    source_derivative: Optional[Callable] = None


def nonconfluent_partner(ua, ub, V, x):
    """Vt = V - 2 (ln W(ua, ub))'' with W' taken from the differential equations.

    For plain eigenfunctions W' = (eps_a - eps_b) ua ub; a Jordan-chain partner
    (source term) contributes -ua*s_b + s_a*ub, which is how the confluent case is
    recovered.  Equal energies without a source are rejected.
    """
    x = check_uniform(x)
    if ua.energy == ub.energy and ua.source is None and ub.source is None:
        raise ValueError("equal factorization energies: use the confluent transformation")
    a, ap = ua.value(x), ua.derivative(x)
    b, bp = ub.value(x), ub.derivative(x)
    _check_finite(a, ap, b, bp)
    zero = np.zeros_like(x)
    sa = ua.source(x) if ua.source is not None else zero
    sap = ua.source_derivative(x) if ua.source is not None else zero
    sb = ub.source(x) if ub.source is not None else zero
    sbp = ub.source_derivative(x) if ub.source is not None else zero
    de = ua.energy - ub.energy
    W = wronskian(a, ap, b, bp)
    Wp = de * a * b - a * sb + sa * b
    Wpp = de * (ap * b + a * bp) - ap * sb - a * sbp + sap * b + sa * bp
    crossing = locate_sign_change(x, W)
    if crossing is not None:
        raise SingularTransformError(f"W(ua, ub) vanishes near x = {crossing:.10g}", crossing)
    vt = np.asarray(V(x)) - 2.0 * (Wpp / W - (Wp / W) ** 2)
    return GridFunction.from_samples(x, _to_real(vt, "partner potential"))


@dataclass(frozen=True)
class ScanRow:
    D: float
    singular: bool
    crossing: Optional[float]


def _asymptotic_crossing(seed, D, x, w_grid):
    """Zero of w outside the grid implied by the limits of W at +-infinity."""
    if seed.decay == "left":
        limits = (D, -np.inf)  # W -> 0 at -inf, W -> -inf at +inf
    elif seed.decay == "right":
        limits = (np.inf, D)
    else:
        return None
    if np.sign(limits[0]) == np.sign(limits[1]) != 0:
        return None
    if D == 0.0:
        # w -> 0 exactly where u1 decays: the zero sits at that infinity
        return float(-np.inf if seed.decay == "left" else np.inf)

    def w_at(t):
        return float(np.real(D + seed.wronskian(np.array([t]))[0]))

    grid_sign = np.sign(np.real(w_grid[0]))
    # the zero lies on the side whose limit disagrees with the grid sign
    direction = -1.0 if np.sign(limits[0]) != grid_sign else 1.0
    edge = float(x[0]) if direction < 0 else float(x[-1])
    step = max(float(x[-1] - x[0]), 1.0)
    far = edge
    for _ in range(40):
        far = edge + direction * step
        if np.sign(w_at(far)) != grid_sign:
            lo, hi = sorted((edge, far))
            return float(brentq(w_at, lo, hi, xtol=1e-10))
        edge = far
        step *= 2.0
    return float(direction * np.inf)


def singularity_scan(seed, D_values, x):
    """Classify each D as singular or not; w is monotone so there is at most one zero.

    The grid is checked first; seeds that declare their decay direction are also
    checked against the limits of w at +-infinity, which makes the boundary exact.
    """
    x = check_uniform(x)
    W = seed.wronskian(x)
    rows = []
    for D in np.atleast_1d(np.asarray(D_values, dtype=float)):
        D = float(D)
        crossing = locate_sign_change(x, D + W, lambda t: D + seed.wronskian(np.atleast_1d(t))[0])
        if crossing is None:
            crossing = _asymptotic_crossing(seed, D, x, D + W)
        rows.append(ScanRow(D, crossing is not None, crossing))
    return rows
