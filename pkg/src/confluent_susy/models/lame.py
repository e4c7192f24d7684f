"""Single-gap Lame potential V(x) = 2 m sn^2(x|m) and its Bloch-function seeds.

The Bloch solutions at factorization energy eps1 are

    u1(x) = [sigma(w')/sigma(s + w')] [sigma(x + s + w')/sigma(x + w')] exp(-x zeta(s))

with w' = i K(1 - m), s = +delta (branch "beta") or -delta (branch "inverse_beta"),
and eps1 = 2(m + 1)/3 - wp(delta).  The normalisation gives u1(0) = 1.
"""
from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import brentq

from .. import elliptic as ell
from ..errors import ConsistencyError, DomainError, PoleError
from ..susy import ConfluentSeed, IMAG_TOL

BETA = "beta"
INVERSE_BETA = "inverse_beta"


def lame_potential(m, x):
    sn = ell.jacobi_sn(x, m)
    return 2.0 * m * np.asarray(sn) ** 2 if np.ndim(sn) else 2.0 * m * sn * sn


@dataclass(frozen=True)
class SpectrumBands:
    m: float
    band_edges: tuple

    @property
    def allowed(self):
        lo, mid, hi = self.band_edges
        return ((lo, mid), (hi, math.inf))

    @property
    def gaps(self):
        lo, mid, hi = self.band_edges
        return ((-math.inf, lo), (mid, hi))

    def classify(self, energy):
        """'infinite gap', 'finite gap', 'band' or 'edge'."""
        lo, mid, hi = self.band_edges
        if energy in self.band_edges:
            return "edge"
        if energy < lo:
            return "infinite gap"
        if mid < energy < hi:
            return "finite gap"
        return "band"


def lame_bands(m):
    m = float(m)
    if not 0.0 < m < 1.0:
        raise DomainError(f"Lame bands need 0 < m < 1, got {m}")
    return SpectrumBands(m, (m, 1.0, 1.0 + m))


def lame_delta_from_energy(m, epsilon1, lattice=None):
    """Displacement delta with wp(delta) = 2(m+1)/3 - eps1 on the cell boundary.

    Infinite gap: delta on the real segment (0, omega), where wp falls from +inf to e1.
    Finite gap: delta on w' + (0, omega), where wp rises from e3 to e2.
    """
    lat = lattice if lattice is not None else ell.build_lattice(m)
    where = lame_bands(m).classify(epsilon1)
    target = 2.0 * (lat.m + 1.0) / 3.0 - epsilon1
    if where == "infinite gap":
        def f(t):
            return ell.wp(t, lat).real - target
        lo = lat.omega
        hi = lat.omega / 2.0
        while f(hi) < 0:
            hi /= 2.0
        t = brentq(f, hi, lo, xtol=1e-15, rtol=1e-15)
        return complex(t, 0.0)
    if where == "finite gap":
        def f(t):
            return ell.wp(t + lat.omega_prime, lat).real - target
        t = brentq(f, 0.0, lat.omega, xtol=1e-15, rtol=1e-15)
        return complex(t, lat.omega_prime.imag)
    raise DomainError(
        f"eps1={epsilon1} is {'at a band edge' if where == 'edge' else 'inside an allowed band'}; "
        "a nodeless-Wronskian seed needs eps1 strictly inside a gap")


@dataclass(frozen=True)
class LameSeed:
    m: float
    epsilon1: float
    delta: complex
    branch: str
    lattice: ell.LatticeData
    shift: complex  # s = +-delta
    log_norm: complex  # log sigma(w') - log sigma(s + w')
    zeta_s: complex
    zeta_s_wp: complex  # zeta(s + w')
    wp_s: complex
    wp_prime_s: complex

    def _weierstrass(self, x):
        x = np.asarray(x, dtype=float)
        wpr = self.lattice.omega_prime
        z = np.concatenate([np.ravel(x) + self.shift + wpr, np.ravel(x) + wpr])
        vals = ell.weierstrass_all(z, self.lattice)
        n = np.size(x)
        return x, vals, n

    def evaluate(self, x):
        """u1, u1', du1/deps1, d(u1')/deps1 and the auxiliary f(x) at x."""
        x, vals, n = self._weierstrass(x)
        xr = np.ravel(x)
        lsig1, lsig2 = vals.log_sigma[:n], vals.log_sigma[n:]
        zeta1, zeta2 = vals.zeta[:n], vals.zeta[n:]
        wp1 = vals.wp[:n]
        u = np.exp(self.log_norm + lsig1 - lsig2 - xr * self.zeta_s)
        gamma = zeta1 - zeta2 - self.zeta_s
        up = gamma * u
        bracket = zeta1 - self.zeta_s_wp + xr * self.wp_s  # (du1/ds) / u1
        ue = -bracket * u / self.wp_prime_s
        uep = -((self.wp_s - wp1) * u + bracket * up) / self.wp_prime_s
        f = (wp1 - self.wp_s) / self.wp_prime_s
        shape = np.shape(x)
        return tuple(a.reshape(shape) for a in (u, up, ue, uep, f, gamma))

    def u1(self, x):
        return self.evaluate(x)[0]

    def du1_dx(self, x):
        return self.evaluate(x)[1]

    def du1_deps(self, x):
        return self.evaluate(x)[2]

    def d2u1_dxdeps(self, x):
        return self.evaluate(x)[3]

    def aux_f(self, x):
        """f(x) with W(u1, du1/deps1) = f u1^2."""
        return self.evaluate(x)[4]

    def potential(self, x):
        return lame_potential(self.m, x)

    @property
    def period(self):
        return self.lattice.period

    @property
    def decay(self):
        beta, _ = lame_bloch_factor(self)
        return "left" if abs(beta) > 1.0 else "right"

    def as_confluent_seed(self):
        return ConfluentSeed(
            epsilon1=self.epsilon1,
            u1=self.u1,
            du1_dx=self.du1_dx,
            du1_deps=self.du1_deps,
            d2u1_dxdeps=self.d2u1_dxdeps,
            decay=self.decay,
            label=f"lame(m={self.m:g}, eps1={self.epsilon1:g}, {self.branch})",
        )


def _analytic_residual(seed, x):
    """max |u1''/u1 - (V - eps1)| using gamma' + gamma^2 with gamma' = wp(x+w') - wp(x+s+w')."""
    lat = seed.lattice
    z1 = x + seed.shift + lat.omega_prime
    z2 = x + lat.omega_prime
    gamma = ell.wzeta(z1, lat) - ell.wzeta(z2, lat) - seed.zeta_s
    gp = ell.wp(z2, lat) - ell.wp(z1, lat)
    return float(np.max(np.abs(gp + gamma ** 2 - (lame_potential(seed.m, x) - seed.epsilon1))))


def make_lame_seed(m, epsilon1, branch=BETA):
    if branch not in (BETA, INVERSE_BETA):
        raise ValueError(f"branch must be {BETA!r} or {INVERSE_BETA!r}")
    lat = ell.build_lattice(m)
    delta = lame_delta_from_energy(m, epsilon1, lat)
    s = delta if branch == BETA else -delta
    wp_s = ell.wp(s, lat)
    wp_prime_s = ell.wp_prime(s, lat)
    if abs(wp_prime_s) < 1e-12:
        raise DomainError("wp'(delta) = 0: delta is a half-period (band edge), seed is degenerate")
    log_norm = ell.log_wsigma(lat.omega_prime, lat) - ell.log_wsigma(s + lat.omega_prime, lat)
    seed = LameSeed(
        m=lat.m,
        epsilon1=float(epsilon1),
        delta=delta,
        branch=branch,
        lattice=lat,
        shift=s,
        log_norm=log_norm,
        zeta_s=ell.wzeta(s, lat),
        zeta_s_wp=ell.wzeta(s + lat.omega_prime, lat),
        wp_s=wp_s,
        wp_prime_s=wp_prime_s,
    )
    # the segment <-> gap assignment is checked, not assumed
    probe = np.linspace(0.05, 2.0 * lat.omega - 0.05, 7) + 0.013
    try:
        res = _analytic_residual(seed, probe)
    except PoleError:
        res = _analytic_residual(seed, probe + 0.1)
    if res > 1e-8:
        raise ConsistencyError(f"Bloch seed fails the Schrodinger equation (residual {res:.3g})")
    beta, _ = lame_bloch_factor(seed)
    if abs(abs(beta) - 1.0) < 1e-12:
        raise ConsistencyError("gap energy produced a unimodular Bloch factor")
    return seed


def lame_seed(m, epsilon1, branch=BETA):
    """ConfluentSeed built from the Lame Bloch function at a gap energy."""
    return make_lame_seed(m, epsilon1, branch).as_confluent_seed()


def choose_branch(m, epsilon1, D):
    """Bloch branch whose decay direction admits a nonsingular transform for this D.

    w -> D at the end where u1 decays and w -> -+inf at the other, so D < 0 needs
    u1 decaying to the left and D > 0 needs it decaying to the right.
    """
    seed = make_lame_seed(m, epsilon1, BETA)
    want = "left" if D < 0 else "right"
    return BETA if seed.decay == want else INVERSE_BETA


def bloch_decay_length(seed):
    beta, _ = lame_bloch_factor(seed)
    return seed.period / abs(math.log(abs(beta)))


def lame_bloch_u1(seed, x):
    return seed.u1(x)


def lame_bloch_factor(seed):
    """(beta, quasi-momentum) with u1(x + 2 omega) = beta u1(x), beta = exp(i kappa).

    The quasi-momentum's real part is reduced into (-pi, pi].
    """
    lat = seed.lattice
    s = seed.shift
    beta = np.exp(2.0 * s * lat.eta - 2.0 * lat.omega * seed.zeta_s)
    kappa = 2j * (lat.omega * seed.zeta_s - s * lat.eta)
    re = math.remainder(kappa.real, 2.0 * math.pi)
    if re == -math.pi:
        re = math.pi
    return complex(beta), complex(re, kappa.imag)


def lame_partner_closed_form(seed, D, x):
    """V + {2 + 4 gamma (D u1^-2 + f)} / (D u1^-2 + f)^2, gamma = u1'/u1.

    At exact nodes of u1 (finite-gap seeds) the expression tends to V, which is
    returned there.
    """
    x = np.asarray(x, dtype=float)
    u, up, ue, uep, f, gamma = seed.evaluate(x)
    V = lame_potential(seed.m, x)
    with np.errstate(divide="ignore", invalid="ignore"):
        F = D / u ** 2 + f
        corr = (2.0 + 4.0 * gamma * F) / F ** 2
    node = u == 0
    if np.any(~node & (np.abs(F) == 0)):
        raise PoleError("D u1^-2 + f vanishes: partner potential has a pole")
    corr = np.where(node, 0.0, corr)
    if not np.all(np.isfinite(corr)):
        raise PoleError("D u1^-2 + f vanishes: partner potential has a pole")
    worst = float(np.max(np.abs(np.imag(corr)))) if np.size(corr) else 0.0
    if worst > IMAG_TOL:
        raise ConsistencyError(f"closed-form partner has imaginary part {worst:.3g}")
    out = V + np.real(corr)
    return float(out) if np.ndim(out) == 0 else out
