"""Self-checks run by ``confluent-susy verify``: identities and cross-path agreement."""
from dataclasses import dataclass
import math

import numpy as np

from . import elliptic as ell
from .grid import GridFunction, make_grid
from .models import free as free_model
from .models import lame as lame_model
from .susy import confluent_partner_differential, confluent_partner_integral
from .verify import schrodinger_residual

LATTICE_PARAMETERS = (0.1, 0.5, 0.9)
LAME_SETS = ((0.5, 0.1, -45.0), (0.1, 1.05, 20.0))


@dataclass(frozen=True)
class Check:
    suite: str
    name: str
    value: float
    tolerance: float

    @property
    def passed(self):
        return bool(np.isfinite(self.value) and self.value < self.tolerance)


def five_point(f, z, h):
    return (f(z - 2 * h) - 8 * f(z - h) + 8 * f(z + h) - f(z + 2 * h)) / (12 * h)


def random_cell_points(lat, n, rng, margin=0.06):
    """Points inside the period cell kept away from the half-lattice (poles of wp(2z))."""
    out = []
    while len(out) < n:
        a, b = rng.uniform(margin, 1.0 - margin, size=2)
        if min(abs(a - 0.5), abs(b - 0.5)) < margin:
            continue
        out.append(2.0 * a * lat.omega + 2.0 * b * lat.omega_prime)
    return np.array(out)


def _rel(a, b):
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1.0)))


def elliptic_checks(seed=20240501, n_points=100):
    rng = np.random.default_rng(seed)
    checks = []
    for m in LATTICE_PARAMETERS:
        lat = ell.build_lattice(m)
        eta = ell.wzeta(lat.omega, lat)
        eta_p = ell.wzeta(lat.omega_prime, lat)
        legendre = abs(eta * lat.omega_prime - eta_p * lat.omega - 0.5j * math.pi)
        checks.append(Check("elliptic", f"Legendre relation m={m}", legendre, 1e-10))

        z = random_cell_points(lat, n_points, rng)
        h = 1e-3
        sig = ell.wsigma(z, lat)
        d_sigma = five_point(lambda t: ell.wsigma(t, lat), z, h)
        checks.append(Check("elliptic", f"sigma' = sigma zeta m={m}",
                            _rel(d_sigma, sig * ell.wzeta(z, lat)), 1e-6))
        d_zeta = five_point(lambda t: ell.wzeta(t, lat), z, h)
        checks.append(Check("elliptic", f"zeta' = -wp m={m}", _rel(d_zeta, -ell.wp(z, lat)), 1e-6))
        wpp = ell.wp_prime(z, lat)
        dup = -ell.wsigma(2.0 * z, lat) / sig ** 4
        checks.append(Check("elliptic", f"wp' = -sigma(2z)/sigma^4 m={m}", _rel(dup, wpp), 1e-6))
        p = ell.wp(z, lat)
        ode = 4.0 * p ** 3 - lat.g2 * p - lat.g3
        checks.append(Check("elliptic", f"wp'^2 = 4wp^3 - g2 wp - g3 m={m}", _rel(wpp ** 2, ode), 1e-6))
    return checks


def free_checks(kappa1=1.0, x0=3.0):
    x = make_grid(-10.0, 10.0, 2001)
    seed = free_model.free_seed(kappa1)
    D = free_model.D_from_x0(kappa1, x0)
    generic = confluent_partner_differential(seed, D, free_model.free_potential, x)
    vt = generic.partner_potential.values
    # w(x) = D + W at the anchor fixes w0 for the quadrature route
    anchor = 0.0
    w0 = D + float(seed.wronskian(np.array([anchor]))[0])
    integral = confluent_partner_integral(seed.u1, w0, anchor, free_model.free_potential, x,
                                          du1=seed.du1_dx, epsilon1=seed.epsilon1)
    closed = free_model.free_partner_closed_form(kappa1, D, x)
    pt = free_model.poschl_teller(kappa1, x0, x)
    return [
        Check("free", "differential vs closed form", float(np.max(np.abs(vt - closed))), 1e-8),
        Check("free", "differential vs integral", float(np.max(np.abs(vt - integral.partner_potential.values))), 1e-6),
        Check("free", "closed form vs Poschl-Teller", float(np.max(np.abs(closed - pt))), 1e-8),
    ]


def lame_checks():
    checks = []
    for m, eps, D in LAME_SETS:
        tag = f"m={m} eps1={eps}"
        branch = lame_model.choose_branch(m, eps, D)
        ls = lame_model.make_lame_seed(m, eps, branch)
        x = make_grid(-4.0, 4.0, 8001)
        u = ls.u1(x)
        imag = float(np.max(np.abs(np.imag(u))) / np.max(np.abs(u)))
        checks.append(Check("lame", f"u1 real-valued {tag}", imag, 1e-10))
        V = GridFunction.from_samples(x, lame_model.lame_potential(m, x))
        res = schrodinger_residual(V, GridFunction.from_samples(x, np.real(u)), eps)
        checks.append(Check("lame", f"Bloch residual {tag}", res, 1e-5))

        beta, _ = lame_model.lame_bloch_factor(ls)
        xs = np.linspace(-1.0, 1.0, 41) + 0.0123
        ratio = ls.u1(xs + ls.period) / ls.u1(xs)
        checks.append(Check("lame", f"Bloch factor {tag}", float(np.max(np.abs(ratio - beta))), 1e-8))

        xg = make_grid(-20.0, 20.0, 4001)
        seed = ls.as_confluent_seed()
        generic = confluent_partner_differential(
            seed, D, lambda t: lame_model.lame_potential(m, t), xg).partner_potential.values
        closed = lame_model.lame_partner_closed_form(ls, D, xg)
        checks.append(Check("lame", f"specialized vs generic partner {tag}",
                            float(np.max(np.abs(generic - closed))), 1e-8))
    return checks


SUITES = {"elliptic": elliptic_checks, "free": free_checks, "lame": lame_checks}


def run_suites(names):
    out = []
    for name in names:
        out.extend(SUITES[name]())
    return out
