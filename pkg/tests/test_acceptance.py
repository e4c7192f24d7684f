"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line with details.

Run with ``pytest tests/test_acceptance.py -v``; the criterion lines are written
straight to the terminal even when output capture is on.
"""
import math
import time

import numpy as np
import pytest

from confluent_susy import elliptic as ell
from confluent_susy.grid import GridFunction, make_grid
from confluent_susy.models import (
    D_from_x0,
    choose_branch,
    free_partner_closed_form,
    free_potential,
    free_seed,
    lame_bands,
    lame_bloch_factor,
    lame_partner_closed_form,
    lame_potential,
    make_lame_seed,
    poschl_teller,
)
from confluent_susy.suites import elliptic_checks
from confluent_susy.susy import (
    confluent_partner_differential,
    confluent_partner_integral,
    intertwiner_coefficients,
    jordan_chain_u2,
    singularity_scan,
)
from confluent_susy.verify import (
    EigensolveConfig,
    band_edges_numeric,
    bloch_decay_length,
    bound_state_domain,
    eigensolve,
    fd_parametric_derivative,
    find_gap_state,
    schrodinger_residual,
    second_difference,
)

LAME_SETS = {"m=0.5 eps1=0.1 D=-45": (0.5, 0.1, -45.0), "m=0.1 eps1=1.05 D=20": (0.1, 1.05, 20.0)}


def report(capsys, number, title, checks):
    """checks: list of (label, value, tolerance); passes when value < tolerance."""
    ok = all(np.isfinite(v) and v < tol for _, v, tol in checks)
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title}")
        for label, value, tol in checks:
            flag = "ok " if np.isfinite(value) and value < tol else "BAD"
            print(f"    {flag} {label}: {value:.3e} (< {tol:g})")
    failed = [label for label, v, tol in checks if not (np.isfinite(v) and v < tol)]
    assert not failed, f"criterion {number} failed: {failed}"


def five_point(f, x, h):
    return (f(x - 2 * h) - 8 * f(x - h) + 8 * f(x + h) - f(x + 2 * h)) / (12 * h)


def node_free_segment(x, u):
    cuts = np.flatnonzero(np.sign(u[:-1]) != np.sign(u[1:])) + 1
    pieces = np.split(np.arange(x.size), cuts)
    best = max(pieces, key=len)[1:-1]
    return x[best]


def away_from_nodes(x, u, distance):
    """Mask of points farther than ``distance`` from every sign change of u."""
    i = np.flatnonzero(np.sign(u[:-1]) != np.sign(u[1:]))
    if not i.size:
        return np.ones(x.size, dtype=bool)
    nodes = 0.5 * (x[i] + x[i + 1])
    return np.min(np.abs(x[:, None] - nodes[None, :]), axis=1) > distance


def lame_family(m, branch):
    return lambda eps, x: make_lame_seed(m, eps, branch).u1(x)


# -------------------------------------------------------------------------- 1

def test_criterion_1_free_particle_chain(capsys):
    start = time.perf_counter()
    kappa, x0 = 1.0, 3.0
    x = make_grid(-10.0, 10.0, 2001)
    seed = free_seed(kappa)
    D = D_from_x0(kappa, x0)
    generic = confluent_partner_differential(seed, D, free_potential, x).partner_potential.values
    anchor = 0.0
    w0 = D + float(seed.wronskian(np.array([anchor]))[0])
    integral = confluent_partner_integral(seed.u1, w0, anchor, free_potential, x,
                                          du1=seed.du1_dx).partner_potential.values
    closed = free_partner_closed_form(kappa, D, x)
    pt = poschl_teller(kappa, x0, x)
    elapsed = time.perf_counter() - start
    report(capsys, 1, "free particle: differential = integral = closed form = Poschl-Teller", [
        ("max |differential - integral|", float(np.max(np.abs(generic - integral))), 1e-6),
        ("max |differential - closed form|", float(np.max(np.abs(generic - closed))), 1e-8),
        ("max |closed form - Poschl-Teller|", float(np.max(np.abs(closed - pt))), 1e-8),
        ("max |differential - Poschl-Teller|", float(np.max(np.abs(generic - pt))), 1e-8),
        ("runtime [s]", elapsed, 1.0),
    ])


# -------------------------------------------------------------------------- 2

def test_criterion_2_free_bound_state(capsys):
    start = time.perf_counter()
    seed = free_seed(1.0)
    D = D_from_x0(1.0, 3.0)

    def partner(t):
        return confluent_partner_differential(seed, D, free_potential, t).partner_potential.values

    cfg = EigensolveConfig.with_spacing((-17.0, 23.0), 1e-2, energy_window=(-math.inf, 0.0))
    spec = eigensolve(partner, cfg)
    negative = spec.eigenvalues[spec.eigenvalues < 0]
    elapsed = time.perf_counter() - start
    err = abs(negative[0] + 1.0) if negative.size == 1 else math.inf
    report(capsys, 2, "free partner holds exactly one bound state at eps1 = -1", [
        ("number of E < 0 minus one", float(abs(negative.size - 1)), 0.5),
        ("|E - (-1)|", float(err), 1e-3),
        ("runtime [s]", elapsed, 10.0),
    ])


# -------------------------------------------------------------------------- 3

def test_criterion_3_elliptic_identities(capsys):
    start = time.perf_counter()
    checks = elliptic_checks(seed=7, n_points=100)
    elapsed = time.perf_counter() - start
    rows = [(c.name, c.value, c.tolerance) for c in checks]
    rows.append(("runtime [s]", elapsed, 5.0))
    report(capsys, 3, "Weierstrass identity suite, m in {0.1, 0.5, 0.9}", rows)


# -------------------------------------------------------------------------- 4

def test_criterion_4_lame_two_forms(capsys):
    rows = []
    for m in (0.1, 0.5):
        lat = ell.build_lattice(m)
        x = np.linspace(0.0, 4.0 * lat.omega, 2001)
        jac = 2.0 * m * np.asarray(ell.jacobi_sn(x, m)) ** 2
        wei = 2.0 * (ell.wp(x + lat.omega_prime, lat) + (m + 1.0) / 3.0)
        rows.append((f"max |2m sn^2 - 2[wp(x+w')+(m+1)/3]| m={m}",
                     float(np.max(np.abs(jac - wei))), 1e-8))
        rows.append((f"imag part of the Weierstrass form m={m}", float(np.max(np.abs(np.imag(wei)))), 1e-8))
    report(capsys, 4, "Lame potential: Jacobi form = Weierstrass form", rows)


# -------------------------------------------------------------------------- 5

def test_criterion_5_bloch_seed(capsys):
    rows = []
    for tag, (m, eps, D) in LAME_SETS.items():
        branch = choose_branch(m, eps, D)
        ls = make_lame_seed(m, eps, branch)
        T = ls.period
        x = make_grid(-T, T, int(round(2 * T / 1e-3)) + 1)
        V = GridFunction.from_samples(x, lame_potential(m, x))
        u = ls.u1(x)
        rows.append((f"[{tag}] imag(u1)/max|u1|", float(np.max(np.abs(u.imag)) / np.max(np.abs(u))), 1e-10))
        u_re = GridFunction.from_samples(x, u.real)
        rows.append((f"[{tag}] Schrodinger residual of u1", schrodinger_residual(V, u_re, eps), 1e-5))

        beta, _ = lame_bloch_factor(ls)
        probe = np.linspace(-2.0, 2.0, 101) + 0.0137
        ratio = ls.u1(probe + T) / ls.u1(probe)
        rows.append((f"[{tag}] |u1(x+T)/u1(x) - beta|", float(np.max(np.abs(ratio - beta))), 1e-8))

        ue = ls.du1_deps(x).real
        jordan = -second_difference(ue, x[1] - x[0]) + (V.values[1:-1] - eps) * ue[1:-1] - u.real[1:-1]
        rows.append((f"[{tag}] Jordan residual |(H-eps1) du1/deps1 - u1|",
                     float(np.max(np.abs(jordan)) / np.max(np.abs(ue))), 1e-4))

        xs = np.linspace(-T, T, 401)
        fd = fd_parametric_derivative(lame_family(m, branch), eps, 1e-5, xs).values
        an = ls.du1_deps(xs)
        rows.append((f"[{tag}] analytic vs eps finite difference (relative)",
                     float(np.max(np.abs(fd - an)) / np.max(np.abs(an))), 1e-4))
    report(capsys, 5, "Lame Bloch seeds: equation, Bloch factor, Jordan chain, eps-derivative", rows)


# -------------------------------------------------------------------------- 6

def test_criterion_6_lame_partner(capsys):
    start = time.perf_counter()
    rows = []
    for tag, (m, eps, D) in LAME_SETS.items():
        branch = choose_branch(m, eps, D)
        ls = make_lame_seed(m, eps, branch)
        seed = ls.as_confluent_seed()
        T = ls.period

        def V(t, m=m):
            return lame_potential(m, t)

        x = make_grid(-20.0, 20.0, 4001)
        generic = confluent_partner_differential(seed, D, V, x).partner_potential.values
        closed = lame_partner_closed_form(ls, D, x)
        rows.append((f"[{tag}] specialized vs generic partner", float(np.max(np.abs(generic - closed))), 1e-8))

        wide = make_grid(-200.0, 200.0, 40001)
        scan = singularity_scan(seed, [D], wide)[0]
        rows.append((f"[{tag}] singular flag for the figure D", float(scan.singular), 0.5))

        far = np.concatenate([np.linspace(30.0, 60.0, 1501), np.linspace(-60.0 - T, -30.0 - T, 1501)])
        vt0 = lame_partner_closed_form(ls, D, far)
        vt1 = lame_partner_closed_form(ls, D, far + T)
        rows.append((f"[{tag}] periodicity defect |Vt(x+T) - Vt(x)|, 30 < |x| < 60",
                     float(np.max(np.abs(vt1 - vt0))), 1e-4))

        length = bloch_decay_length(lame_bloch_factor(ls)[0], T)
        domain = bound_state_domain(0.0, length, period=T)
        cfg = EigensolveConfig.with_spacing(domain, 0.01, energy_window=(eps - 0.05, eps + 0.05))

        def partner(t, seed=seed, D=D, V=V):
            return confluent_partner_differential(seed, D, V, t).partner_potential.values

        spec = eigensolve(partner, cfg)
        idx = find_gap_state(spec, eps)
        err = abs(spec.eigenvalues[idx] - eps) if idx is not None else math.inf
        rows.append((f"[{tag}] gap eigenvalue |E - eps1|", float(err), 1e-2))
    elapsed = time.perf_counter() - start
    rows.append(("runtime [s]", elapsed, 60.0))
    report(capsys, 6, "Lame partner: cross-path equality, regularity, periodicity, gap state", rows)


# -------------------------------------------------------------------------- 7

def test_criterion_7_band_edges(capsys):
    rows = []
    for m in (0.1, 0.5):
        numeric = band_edges_numeric(m, n_periods=16)
        analytic = np.array(lame_bands(m).band_edges)
        for a, n in zip(analytic, numeric):
            rows.append((f"m={m} edge {a:g}: |numeric - analytic|", float(abs(n - a)), 1e-2))
    report(capsys, 7, "Lame band edges {m, 1, 1+m}", rows)


# -------------------------------------------------------------------------- 8

def test_criterion_8_structural_invariants(capsys):
    rows = []
    cases = [("free kappa=1 x0=3", free_seed(1.0), D_from_x0(1.0, 3.0), free_potential, (-10.0, 10.0))]
    for tag, (m, eps, D) in LAME_SETS.items():
        ls = make_lame_seed(m, eps, choose_branch(m, eps, D))
        cases.append((tag, ls.as_confluent_seed(), D, (lambda t, m=m: lame_potential(m, t)), (-20.0, 20.0)))

    for tag, seed, D, V, (lo, hi) in cases:
        x = make_grid(lo, hi, 2001)
        res = confluent_partner_differential(seed, D, V, x)

        def w(t, seed=seed, D=D):
            return np.real(D + seed.wronskian(t))

        interior = x[2:-2]
        dw = five_point(w, interior, 1e-3)
        u2 = np.real(seed.u1(interior)) ** 2
        rows.append((f"[{tag}] w' = -u1^2 (relative to max u1^2)",
                     float(np.max(np.abs(dw + u2)) / np.max(u2)), 1e-6))

        # u1_perp needs a node-free path: finite-gap seeds use the widest such stretch
        seg = node_free_segment(x, np.real(seed.u1(x)))
        anchor = 0.5 * (seg[0] + seg[-1])
        ws = [jordan_chain_u2(seed, C, D, anchor).wronskian(seg) for C in (-5.0, 0.0, 7.0)]
        spread = max(float(np.max(np.abs(a - ws[0]))) for a in ws[1:])
        rows.append((f"[{tag}] W(u1,u2) spread over C in {{-5,0,7}}", spread, 1e-12))

        def gamma(t, seed=seed):
            return np.real(seed.du1_dx(t) / seed.u1(t))

        away = away_from_nodes(interior, np.real(seed.u1(interior)), 0.25)
        ricc = five_point(gamma, interior, 1e-3) + gamma(interior) ** 2 - (V(interior) - seed.epsilon1)
        rows.append((f"[{tag}] Riccati residual gamma' + gamma^2 - (V - eps1)",
                     float(np.max(np.abs(ricc[away]))), 1e-6))

        coeffs = intertwiner_coefficients(res, V)
        g = coeffs.g.values
        dx = x[1] - x[0]
        gp = (g[:-4] - 8 * g[1:-3] + 8 * g[3:-1] - g[4:]) / (12 * dx)
        gam = gamma(interior)
        bern = gp - g[2:-2] ** 2 - 2.0 * gam * g[2:-2]
        rows.append((f"[{tag}] Bernoulli residual g' - g^2 - 2 gamma g",
                     float(np.max(np.abs(bern[away]))), 1e-6))

    seed = free_seed(1.0)
    x = make_grid(-10.0, 10.0, 2001)
    Ds = np.concatenate([np.linspace(-5.0, 5.0, 101), [-1e-12, 1e-12, -1e-300, 0.0]])
    scan = singularity_scan(seed, Ds, x)
    mismatched = sum(r.singular != (r.D >= 0.0) for r in scan)
    rows.append(("free D-scan rows disagreeing with 'nonsingular iff D < 0'", float(mismatched), 0.5))
    report(capsys, 8, "structural invariants: w', C-independence, Riccati, Bernoulli, D boundary", rows)
