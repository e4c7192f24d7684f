import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from confluent_susy.errors import DomainError, PoleError
from confluent_susy.grid import GridFunction, make_grid
from confluent_susy.models import (
    BETA,
    DECAYING,
    GROWING,
    INVERSE_BETA,
    D_from_x0,
    bloch_decay_length,
    choose_branch,
    free_partner_closed_form,
    free_potential,
    free_seed,
    kappa_from_energy,
    lame_bands,
    lame_bloch_factor,
    lame_delta_from_energy,
    lame_partner_closed_form,
    lame_potential,
    lame_seed,
    make_lame_seed,
    poschl_teller,
    x0_from_D,
)
from confluent_susy.susy import confluent_partner_differential
from confluent_susy.verify import schrodinger_residual


# ---------------------------------------------------------------- free particle

def test_kappa_from_energy():
    assert kappa_from_energy(-4.0) == 2.0
    with pytest.raises(DomainError):
        kappa_from_energy(0.5)


@pytest.mark.parametrize("orientation", [GROWING, DECAYING])
def test_free_seed_derivatives(orientation):
    kappa = 1.3
    seed = free_seed(kappa, orientation)
    x = np.linspace(-2, 2, 41)
    h = 1e-5
    np.testing.assert_allclose(seed.du1_dx(x), (seed.u1(x + h) - seed.u1(x - h)) / (2 * h), rtol=1e-8)
    eps = -kappa ** 2

    def u_at(e):
        return free_seed(math.sqrt(-e), orientation).u1(x)

    fd = (u_at(eps + h) - u_at(eps - h)) / (2 * h)
    np.testing.assert_allclose(seed.du1_deps(x), fd, rtol=1e-6, atol=1e-9)
    fd_mixed = (seed.du1_deps(x + h) - seed.du1_deps(x - h)) / (2 * h)
    np.testing.assert_allclose(seed.d2u1_dxdeps(x), fd_mixed, rtol=1e-6, atol=1e-9)
    assert seed.decay == ("left" if orientation == GROWING else "right")


def test_decaying_seed_mirrors_growing():
    kappa, x0 = 1.0, 2.0
    x = make_grid(-8, 8, 801)
    a = confluent_partner_differential(free_seed(kappa, DECAYING), D_from_x0(kappa, x0, DECAYING),
                                       free_potential, x).partner_potential.values
    np.testing.assert_allclose(a, poschl_teller(kappa, x0, x), atol=1e-10)


@given(kappa=st.floats(0.2, 3.0), x0=st.floats(-4, 4), orient=st.sampled_from([GROWING, DECAYING]))
def test_property_x0_D_roundtrip(kappa, x0, orient):
    D = D_from_x0(kappa, x0, orient)
    assert (D < 0) == (orient == GROWING)
    assert x0_from_D(kappa, D, orient) == pytest.approx(x0, abs=1e-12)


def test_x0_from_D_domain():
    with pytest.raises(DomainError):
        x0_from_D(1.0, 1.0)
    with pytest.raises(DomainError):
        x0_from_D(1.0, -1.0, DECAYING)


def test_free_closed_form_pole():
    D = 0.5  # 2 D kappa = e^{2 kappa x} at x = 0
    with pytest.raises(PoleError):
        free_partner_closed_form(1.0, D, 0.0)
    assert poschl_teller(1.0, 3.0, 3.0) == -2.0


# ---------------------------------------------------------------- Lame bands and seeds

def test_lame_bands_classification():
    b = lame_bands(0.1)
    assert b.band_edges == (0.1, 1.0, 1.1)
    assert b.gaps[1] == (1.0, 1.1)
    assert b.classify(0.05) == "infinite gap"
    assert b.classify(1.05) == "finite gap"
    assert b.classify(0.5) == "band"
    assert b.classify(2.0) == "band"
    assert b.classify(1.0) == "edge"
    with pytest.raises(DomainError):
        lame_bands(1.0)


def test_lame_potential_range():
    x = np.linspace(0, 10, 1001)
    v = lame_potential(0.5, x)
    assert v.min() >= 0 and v.max() <= 1.0 + 1e-14


@pytest.mark.parametrize("m,eps", [(0.5, 0.1), (0.1, 1.05), (0.5, 1.2), (0.9, -0.5)])
def test_delta_solves_energy_equation(m, eps):
    from confluent_susy import elliptic as ell
    lat = ell.build_lattice(m)
    delta = lame_delta_from_energy(m, eps, lat)
    assert abs(ell.wp(delta, lat) - (2 * (m + 1) / 3 - eps)) < 1e-12


@pytest.mark.parametrize("eps", [0.7, 1.0, 0.5, 2.0])
def test_delta_rejects_band_energies(eps):
    with pytest.raises(DomainError):
        lame_delta_from_energy(0.5, eps)


@pytest.mark.parametrize("m,eps", [(0.5, 0.1), (0.1, 1.05), (0.9, 0.3), (0.3, 1.2)])
@pytest.mark.parametrize("branch", [BETA, INVERSE_BETA])
def test_lame_seed_solves_equation(m, eps, branch):
    ls = make_lame_seed(m, eps, branch)
    x = make_grid(-3, 3, 3001)
    u = ls.u1(x)
    assert np.max(np.abs(u.imag)) < 1e-10 * np.max(np.abs(u))
    assert ls.u1(0.0) == pytest.approx(1.0, abs=1e-13)
    V = GridFunction.from_samples(x, lame_potential(m, x))
    assert schrodinger_residual(V, GridFunction.from_samples(x, u.real), eps) < 1e-5


def test_branches_have_reciprocal_bloch_factors():
    b1, k1 = lame_bloch_factor(make_lame_seed(0.5, 0.1, BETA))
    b2, k2 = lame_bloch_factor(make_lame_seed(0.5, 0.1, INVERSE_BETA))
    assert b1 * b2 == pytest.approx(1.0, abs=1e-12)
    assert abs(k1.imag + k2.imag) < 1e-12
    assert np.exp(1j * k1) == pytest.approx(b1, rel=1e-12)
    # infinite gap: real positive factor; finite gap: real negative
    assert abs(b1.imag) < 1e-12 and b1.real > 0
    b3, _ = lame_bloch_factor(make_lame_seed(0.1, 1.05, BETA))
    assert abs(b3.imag) < 1e-12 and b3.real < 0


def test_choose_branch_matches_figures():
    assert choose_branch(0.5, 0.1, -45.0) == INVERSE_BETA
    assert choose_branch(0.1, 1.05, 20.0) == BETA
    for m, eps in ((0.5, 0.1), (0.1, 1.05)):
        assert choose_branch(m, eps, -1.0) != choose_branch(m, eps, 1.0)


def test_decay_direction_and_length():
    ls = make_lame_seed(0.1, 1.05, BETA)
    assert ls.decay == "right"
    assert abs(ls.u1(40.0)) < abs(ls.u1(0.0))
    L = bloch_decay_length(ls)
    assert 30 < L < 50


def test_eps_derivative_against_finite_difference():
    m, eps = 0.5, 0.1
    ls = make_lame_seed(m, eps, INVERSE_BETA)
    x = np.linspace(-3, 3, 61)
    h = 1e-5
    fd = (make_lame_seed(m, eps + h, INVERSE_BETA).u1(x) - make_lame_seed(m, eps - h, INVERSE_BETA).u1(x)) / (2 * h)
    an = ls.du1_deps(x)
    assert np.max(np.abs(fd - an)) / np.max(np.abs(an)) < 1e-6
    hx = 1e-5
    fdx = (ls.du1_deps(x + hx) - ls.du1_deps(x - hx)) / (2 * hx)
    assert np.max(np.abs(fdx - ls.d2u1_dxdeps(x))) / np.max(np.abs(fdx)) < 1e-7


def test_aux_f_gives_wronskian():
    ls = make_lame_seed(0.5, 0.1, BETA)
    x = np.linspace(-2, 2, 21)
    seed = ls.as_confluent_seed()
    np.testing.assert_allclose(seed.wronskian(x), ls.aux_f(x) * ls.u1(x) ** 2, rtol=1e-10, atol=1e-13)


@pytest.mark.parametrize("m,eps,D", [(0.5, 0.1, -45.0), (0.1, 1.05, 20.0), (0.5, 0.1, -2.0)])
def test_closed_form_partner_matches_generic(m, eps, D):
    seed = lame_seed(m, eps, choose_branch(m, eps, D))
    ls = make_lame_seed(m, eps, choose_branch(m, eps, D))
    x = make_grid(-15, 15, 1501)
    generic = confluent_partner_differential(seed, D, lambda t: lame_potential(m, t), x).partner_potential.values
    assert np.max(np.abs(generic - lame_partner_closed_form(ls, D, x))) < 1e-8


def test_closed_form_scalar():
    ls = make_lame_seed(0.5, 0.1, INVERSE_BETA)
    v = lame_partner_closed_form(ls, -45.0, 0.3)
    assert isinstance(v, float)


def test_invalid_branch():
    with pytest.raises(ValueError):
        make_lame_seed(0.5, 0.1, "sideways")
