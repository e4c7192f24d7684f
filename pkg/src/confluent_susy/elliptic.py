"""Elliptic functions for the Lame problem.

Complete integral K(m), Jacobi sn, and the Weierstrass functions wp, zeta, sigma on
the rectangular lattice with half-periods ``omega = K(m)`` and
``omega_prime = i K(1 - m)``.

The Weierstrass functions are evaluated from theta_1 q-series after translating the
argument into the fundamental cell |Re z| <= omega, |Im z| <= |omega_prime|; the
quasi-periodicity factors of sigma and zeta are tracked exactly.  With this
normalisation the invariants are those of the Jacobi form::

    e1 = (2 - m)/3,  e2 = (2m - 1)/3,  e3 = -(1 + m)/3

so that ``m sn^2(x|m) = wp(x + omega_prime) + (1 + m)/3``.
"""
from dataclasses import dataclass
import math

import numpy as np

from ._backend import kernels
from .errors import DomainError, PoleError

POLE_TOL = 1e-8


def _agm(a, b):
    for _ in range(64):
        if abs(a - b) <= 4e-16 * a:
            break
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_K(m):
    """Complete elliptic integral of the first kind, parameter convention.

    ``K(m) = int_0^{pi/2} (1 - m sin^2 t)^{-1/2} dt`` for 0 <= m < 1.
    """
    m = float(m)
    if not math.isfinite(m) or m < 0.0:
        raise DomainError(f"K(m) requires 0 <= m < 1, got m={m}")
    if m >= 1.0:
        raise DomainError(f"K(m) diverges logarithmically as m -> 1, got m={m}")
    return math.pi / (2.0 * _agm(1.0, math.sqrt(1.0 - m)))


def jacobi_sn(x, m):
    """Jacobi sn(x|m) for real x and 0 <= m <= 1 (descending Landen / AGM)."""
    m = float(m)
    if not 0.0 <= m <= 1.0:
        raise DomainError(f"jacobi_sn requires 0 <= m <= 1, got m={m}")
    xa = np.asarray(x, dtype=float)
    scalar = xa.ndim == 0
    xa = np.atleast_1d(xa)
    if m == 0.0:
        out = np.sin(xa)
    elif m == 1.0:
        out = np.tanh(xa)
    else:
        period = 4.0 * complete_K(m)
        xr = np.remainder(xa + 0.5 * period, period) - 0.5 * period
        out = kernels.sn_agm(xr.ravel(), m).reshape(xa.shape)
    return float(out[0]) if scalar else out


@dataclass(frozen=True)
class LatticeData:
    """Rectangular Weierstrass lattice attached to the Lame parameter m."""

    m: float
    omega: float
    omega_prime: complex
    g2: float
    g3: float
    e1: float
    e2: float
    e3: float
    eta: float  # zeta(omega)
    eta_prime: complex  # zeta(omega_prime)
    nome: float
    theta1p0: float  # theta_1'(0)
    nterms: int

    @property
    def period(self):
        """Real period 2*omega of wp (and of the n=1 Lame potential)."""
        return 2.0 * self.omega


def _nterms(q):
    # after reduction the k-th term is bounded by q**(k*k - 1/4) * (2k+1)**3
    for k in range(1, 64):
        if q ** (k * k - 0.25) * (2 * k + 1) ** 3 < 1e-18:
            return max(k, 3)
    return 64


def build_lattice(m):
    m = float(m)
    if not 0.0 < m < 1.0:
        raise DomainError(f"lattice construction requires 0 < m < 1, got m={m}")
    omega = complete_K(m)
    kp = complete_K(1.0 - m)
    q = math.exp(-math.pi * kp / omega)
    nterms = _nterms(q)
    t = kernels.theta1_derivs(np.zeros(1, dtype=complex), q, nterms)
    t1, t3 = t[1, 0].real, t[3, 0].real
    eta = -(math.pi ** 2) * t3 / (12.0 * omega * t1)
    omega_prime = 1j * kp
    eta_prime = (eta * omega_prime - 0.5j * math.pi) / omega
    e1, e2, e3 = (2.0 - m) / 3.0, (2.0 * m - 1.0) / 3.0, -(1.0 + m) / 3.0
    return LatticeData(
        m=m,
        omega=omega,
        omega_prime=omega_prime,
        g2=2.0 * (e1 * e1 + e2 * e2 + e3 * e3),
        g3=4.0 * e1 * e2 * e3,
        e1=e1,
        e2=e2,
        e3=e3,
        eta=eta,
        eta_prime=eta_prime,
        nome=q,
        theta1p0=t1,
        nterms=nterms,
    )


class _Reduced:
    """Argument translated into the fundamental cell with theta_1 data attached."""

    __slots__ = ("z0", "a", "b", "t", "scalar", "shape")

    def __init__(self, z, lat):
        za = np.asarray(z, dtype=complex)
        self.scalar = za.ndim == 0
        self.shape = za.shape
        za = za.ravel()
        self.a = np.round(za.real / (2.0 * lat.omega))
        self.b = np.round(za.imag / (2.0 * lat.omega_prime.imag))
        self.z0 = za - 2.0 * self.a * lat.omega - 2.0 * self.b * lat.omega_prime
        v = (0.5 * math.pi / lat.omega) * self.z0
        self.t = kernels.theta1_derivs(v, lat.nome, lat.nterms)

    def check_poles(self, what):
        bad = np.abs(self.z0) < POLE_TOL
        if np.any(bad):
            raise PoleError(f"{what} has a pole at lattice point(s) near z={self.z0[bad][:3] + 0}")

    def shaped(self, arr):
        return complex(arr[0]) if self.scalar else arr.reshape(self.shape)


def _wp_reduced(r, lat):
    s = 0.5 * math.pi / lat.omega
    t0, t1, t2, _ = r.t
    l1 = t1 / t0
    return -lat.eta / lat.omega + s * s * (l1 * l1 - t2 / t0)


def _zeta_reduced(r, lat):
    s = 0.5 * math.pi / lat.omega
    return (lat.eta / lat.omega) * r.z0 + s * r.t[1] / r.t[0] + 2.0 * r.a * lat.eta + 2.0 * r.b * lat.eta_prime


def _wp_prime_reduced(r, lat):
    s = 0.5 * math.pi / lat.omega
    t0, t1, t2, t3 = r.t
    l1 = t1 / t0
    return -(s ** 3) * (t3 / t0 - 3.0 * l1 * t2 / t0 + 2.0 * l1 ** 3)


def _log_sigma_reduced(r, lat):
    with np.errstate(divide="ignore"):
        base = (
            math.log(2.0 * lat.omega / math.pi)
            + lat.eta * r.z0 ** 2 / (2.0 * lat.omega)
            + np.log(r.t[0])
            - math.log(lat.theta1p0)
        )
    shift = 2.0 * r.a * lat.eta + 2.0 * r.b * lat.eta_prime
    sign = 1j * math.pi * np.remainder(r.a + r.b + r.a * r.b, 2.0)
    return base + sign + shift * (r.z0 + r.a * lat.omega + r.b * lat.omega_prime)


def wp(z, lat):
    """Weierstrass wp(z)."""
    r = _Reduced(z, lat)
    r.check_poles("wp")
    return r.shaped(_wp_reduced(r, lat))


def wzeta(z, lat):
    """Weierstrass zeta(z) (quasi-periodic, zeta' = -wp)."""
    r = _Reduced(z, lat)
    r.check_poles("zeta")
    return r.shaped(_zeta_reduced(r, lat))


def wp_prime(z, lat):
    """Derivative of wp."""
    r = _Reduced(z, lat)
    r.check_poles("wp'")
    return r.shaped(_wp_prime_reduced(r, lat))


def log_wsigma(z, lat):
    """Principal-sheet-free logarithm of sigma(z); -inf real part at lattice points.

    Only ``exp`` of differences of these values is meaningful; use it to form sigma
    quotients whose individual factors would overflow.
    """
    r = _Reduced(z, lat)
    return r.shaped(_log_sigma_reduced(r, lat))


def wsigma(z, lat):
    """Weierstrass sigma(z); exactly zero on lattice points."""
    r = _Reduced(z, lat)
    ls = _log_sigma_reduced(r, lat)
    with np.errstate(over="ignore"):
        out = np.where(r.t[0] == 0, 0.0, np.exp(ls))
    return r.shaped(out)


@dataclass(frozen=True)
class WeierstrassValues:
    log_sigma: np.ndarray
    zeta: np.ndarray
    wp: np.ndarray
    wp_prime: np.ndarray


def weierstrass_all(z, lat):
    """log sigma, zeta, wp and wp' from a single theta evaluation (arrays only)."""
    r = _Reduced(np.atleast_1d(np.asarray(z, dtype=complex)), lat)
    r.check_poles("Weierstrass functions")
    return WeierstrassValues(
        log_sigma=r.shaped(_log_sigma_reduced(r, lat)),
        zeta=r.shaped(_zeta_reduced(r, lat)),
        wp=r.shaped(_wp_reduced(r, lat)),
        wp_prime=r.shaped(_wp_prime_reduced(r, lat)),
    )
