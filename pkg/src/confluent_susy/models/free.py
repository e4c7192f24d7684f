"""Free particle V = 0 with exponential seeds u1 = exp(+-kappa1 x), eps1 = -kappa1^2."""
import math

import numpy as np

from ..errors import DomainError, PoleError
from ..susy import ConfluentSeed

GROWING = "growing"
DECAYING = "decaying"


def free_potential(x):
    return np.zeros_like(np.asarray(x, dtype=float))


def kappa_from_energy(epsilon1):
    if not epsilon1 < 0:
        raise DomainError(f"free-particle seeds need eps1 < 0, got {epsilon1}")
    return math.sqrt(-epsilon1)


def free_seed(kappa1, orientation=GROWING):
    """Confluent seed e^{s kappa1 x} (s = +1 growing, -1 decaying).

    From eps1 = -kappa1^2, d kappa1/d eps1 = -1/(2 kappa1), hence
    du1/deps1 = -s x u1 / (2 kappa1).
    """
    kappa1 = float(kappa1)
    if not kappa1 > 0:
        raise DomainError(f"kappa1 must be positive, got {kappa1}")
    if orientation not in (GROWING, DECAYING):
        raise ValueError(f"orientation must be {GROWING!r} or {DECAYING!r}")
    s = 1.0 if orientation == GROWING else -1.0
    k = s * kappa1
    c = -s / (2.0 * kappa1)

    def u1(x):
        return np.exp(k * np.asarray(x, dtype=float))

    def du1_dx(x):
        return k * u1(x)

    def du1_deps(x):
        x = np.asarray(x, dtype=float)
        return c * x * u1(x)

    def d2u1_dxdeps(x):
        x = np.asarray(x, dtype=float)
        return c * (1.0 + k * x) * u1(x)

    return ConfluentSeed(
        epsilon1=-kappa1 * kappa1,
        u1=u1,
        du1_dx=du1_dx,
        du1_deps=du1_deps,
        d2u1_dxdeps=d2u1_dxdeps,
        decay="left" if s > 0 else "right",
        label=f"free({orientation}, kappa1={kappa1:g})",
    )


def D_from_x0(kappa1, x0, orientation=GROWING):
    """Constant D placing the Poschl-Teller well at x0.

    Growing seed: D = -(2 kappa1)^-1 exp(2 kappa1 x0) (the D < 0 branch); the
    decaying seed is its mirror image, D = (2 kappa1)^-1 exp(-2 kappa1 x0).
    """
    if orientation == GROWING:
        return -math.exp(2.0 * kappa1 * x0) / (2.0 * kappa1)
    return math.exp(-2.0 * kappa1 * x0) / (2.0 * kappa1)


def x0_from_D(kappa1, D, orientation=GROWING):
    if orientation == GROWING:
        if not D < 0:
            raise DomainError("for the growing seed only D < 0 maps to a well centre x0")
        return math.log(-2.0 * kappa1 * D) / (2.0 * kappa1)
    if not D > 0:
        raise DomainError("for the decaying seed only D > 0 maps to a well centre x0")
    return -math.log(2.0 * kappa1 * D) / (2.0 * kappa1)


def free_partner_closed_form(kappa1, D, x):
    """16 D k^3 e^{2kx} / (2 D k - e^{2kx})^2 for the growing seed."""
    x = np.asarray(x, dtype=float)
    e = np.exp(2.0 * kappa1 * x)
    den = 2.0 * D * kappa1 - e
    if np.any(np.abs(den) <= 1e-14 * np.maximum(e, 1.0)):
        raise PoleError("free partner potential evaluated at its pole 2 D kappa1 = exp(2 kappa1 x)")
    out = 16.0 * D * kappa1 ** 3 * e / den ** 2
    return float(out) if out.ndim == 0 else out


def poschl_teller(kappa1, x0, x):
    """-2 kappa1^2 sech^2(kappa1 (x - x0)); single bound state at -kappa1^2."""
    x = np.asarray(x, dtype=float)
    out = -2.0 * kappa1 ** 2 / np.cosh(kappa1 * (x - x0)) ** 2
    return float(out) if out.ndim == 0 else out
