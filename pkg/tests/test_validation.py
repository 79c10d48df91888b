import numpy as np
import pytest

import szquad as sq
from szquad.errors import LogSingularityError, UnsupportedVariantError
from szquad.rulegen import spec_for_rule

from conftest import random_rule_setup


# --- exactness ---------------------------------------------------------------

def test_exactness_lebesgue_closed_form():
    rule = sq.generate_rule(sq.Lebesgue(), 4, 0)
    rep = sq.check_exactness(rule, sq.moments(sq.Lebesgue(), 5), 5)
    assert rep.precise_degree == 3
    assert rep.errors[4] == pytest.approx(1.0)   # sum z_s^{-4} = -1 against c_4 = 0
    assert rep.errors[0] <= 1e-13


def test_exactness_single_node():
    rule = sq.generate_rule(sq.Lebesgue(), 1, 0)
    rep = sq.check_exactness(rule, sq.moments(sq.Lebesgue(), 2), 2)
    assert rep.precise_degree == 0


def test_exactness_generic_equality(rng):
    # precise degree equals n-1-m for almost every random tail
    hits = 0
    total = 100
    for _ in range(total):
        measure, n, m, tail, eta = random_rule_setup(rng, n_max=12)
        rule = sq.generate_rule(measure, n, m, tail, eta)
        c = sq.moments(measure, n + 1)
        rep = sq.check_exactness(rule, c, n + 1)
        assert rep.precise_degree >= n - 1 - m
        hits += rep.precise_degree == n - 1 - m or m == 0 and rep.precise_degree >= n - 1
    assert hits >= 95


def test_exactness_report_record_fields():
    rule = sq.generate_rule(sq.Lebesgue(), 2, 0)
    rec = sq.check_exactness(rule, sq.moments(sq.Lebesgue(), 3), 3).to_record()
    assert {"k", "error"} <= set(rec["errors"][0])
    assert "precise_degree" in rec


# --- Caratheodory-series matching ---------------------------------------------

def test_caratheodory_lebesgue_golden():
    rule = sq.generate_rule(sq.Lebesgue(), 4, 0)
    rep = sq.caratheodory_match(rule, sq.moments(sq.Lebesgue(), 4))
    assert rep.max_error < 1e-13
    assert rep.schur_in_disk


def test_caratheodory_spec_route_matches_rule_route(rng):
    for _ in range(10):
        measure, n, m, tail, eta = random_rule_setup(rng, n_max=12)
        rule = sq.generate_rule(measure, n, m, tail, eta)
        spec = spec_for_rule(measure, n, m, tail, eta)
        c = sq.moments(measure, n)
        r1 = sq.caratheodory_match(rule, c)
        r2 = sq.caratheodory_match(spec, c)
        assert r1.max_error < 1e-9
        assert r2.max_error < 1e-9
        assert r1.schur_in_disk and r2.schur_in_disk


def test_caratheodory_detects_perturbation(rng):
    rule = sq.generate_rule(sq.BernsteinSzego(0.5), 6, 0)
    w = rule.weights.copy()
    w[0] += 1e-3
    w[1] -= 1e-3
    bad = sq.QuadratureRule(rule.nodes, w, rule.n, rule.m, rule.eta)
    rep = sq.caratheodory_match(bad, sq.moments(sq.BernsteinSzego(0.5), 6))
    assert rep.max_error > 1e-4


# --- S-function ---------------------------------------------------------------

def test_s_function_lebesgue_two_nodes():
    rule = sq.generate_rule(sq.Lebesgue(), 2, 0)
    trace = sq.s_function(rule, sq.Lebesgue(), samples=np.linspace(0.05, 6.2, 64))
    assert trace.max_s_minus_r < 1e-11
    assert trace.weight_residual < 1e-10
    assert trace.interlacing_violations == 0


def test_s_function_random_rules(rng):
    for _ in range(25):
        n = int(rng.integers(2, 13))
        n_half, gamma2 = n // 2, n % 2
        m_hi = n - 1 - (n_half + gamma2)
        if m_hi < 0:
            continue
        m = int(rng.integers(0, m_hi + 1))
        base = 0.45 * np.exp(1j * rng.uniform(0, 2 * np.pi, n - m - 1)) \
            * rng.uniform(0.2, 1.0, n - m - 1)
        tail = 0.6 * np.exp(1j * rng.uniform(0, 2 * np.pi, m)) * rng.uniform(0.2, 1.0, m)
        eta = np.exp(1j * rng.uniform(0, 2 * np.pi))
        measure = sq.ExplicitVerblunsky(base)
        rule = sq.generate_rule(measure, n, m, tail, eta)
        trace = sq.s_function(rule, measure)
        assert trace.max_s_minus_r <= 1e-9 * n
        assert trace.weight_residual <= 1e-10
        assert trace.interlacing_violations == 0
        assert trace.sign_consistent
        assert len(trace.s_zeros) == n


def test_s_function_requires_half_degree_exactness():
    rule = sq.generate_rule(sq.Lebesgue(), 6, 4, [0.1, 0.1, 0.1, 0.1], 1.0)
    with pytest.raises(ValueError):
        sq.s_function(rule, sq.Lebesgue())


def test_s_function_skips_samples_near_nodes():
    rule = sq.generate_rule(sq.Lebesgue(), 4, 0)
    samples = np.concatenate([[rule.nodes[0] + 1e-12], np.linspace(0.1, 1.0, 5)])
    trace = sq.s_function(rule, sq.Lebesgue(), samples=samples)
    assert len(trace.skipped) == 1
    assert trace.skipped[0][1] == "kernel-singularity"


def test_s_function_record_fields():
    rule = sq.generate_rule(sq.Lebesgue(), 4, 0)
    rec = sq.s_function(rule, sq.Lebesgue()).to_record()
    assert "max_s_minus_r" in rec and "interlacing_violations" in rec


# --- orthogonality ---------------------------------------------------------------

def test_orthogonality_lebesgue_szego_rule():
    rule = sq.generate_rule(sq.Lebesgue(), 4, 0)
    rep = sq.check_orthogonality(rule, sq.Lebesgue())
    assert rep.max_violation < 1e-12
    assert rep.n_checked > 0


def test_orthogonality_szego_rules_random_bases(rng):
    for _ in range(10):
        n = int(rng.integers(2, 14))
        base = 0.5 * np.exp(1j * rng.uniform(0, 2 * np.pi, n - 1)) \
            * rng.uniform(0.1, 1.0, n - 1)
        measure = sq.ExplicitVerblunsky(base)
        rule = sq.generate_rule(measure, n, 0, (), np.exp(1j * rng.uniform(0, 2 * np.pi)))
        rep = sq.check_orthogonality(rule, measure)
        assert rep.max_violation < 1e-10


def test_orthogonality_reduced_rules(rng):
    for _ in range(10):
        measure, n, m, tail, eta = random_rule_setup(rng, n_max=14)
        rule = sq.generate_rule(measure, n, m, tail, eta)
        rep = sq.check_orthogonality(rule, measure)
        if rep.n_checked:
            assert rep.max_violation < 1e-10


def test_orthogonality_explicit_weight_lebesgue(rng):
    tail = [0.3, -0.2 + 0.1j]
    spec = spec_for_rule(sq.Lebesgue(), 8, 2, tail, np.exp(0.4j))
    rep = sq.check_orthogonality(spec, sq.Lebesgue())
    assert rep.max_violation < 1e-12
    assert rep.explicit_weight_violation < 1e-12


def test_orthogonality_empty_class():
    rule = sq.generate_rule(sq.Lebesgue(), 3, 2, [0.1, 0.2], 1.0)
    rep = sq.check_orthogonality(rule, sq.Lebesgue())
    assert rep.n_checked == 0
    assert rep.max_violation == 0.0


# --- interlacing ------------------------------------------------------------------

def test_interlacing_same_level_distinct_eta(rng):
    measure = sq.ExplicitVerblunsky([0.3, -0.2j, 0.15])
    rule = sq.generate_rule(measure, 4, 0, (), 1.0)
    rep = sq.check_interlacing(rule, measure, 0, np.exp(0.9j))
    assert rep.violations == 0
    assert all(cnt == 1 for cnt in rep.arc_counts)


def test_interlacing_lebesgue_explicit():
    rule = sq.generate_rule(sq.Lebesgue(), 4, 0)
    rep = sq.check_interlacing(rule, sq.Lebesgue(), 1, 1.0)
    # reference zeros are the cube roots of -1
    assert np.allclose(rep.reference_zeros, [np.pi / 3, np.pi, 5 * np.pi / 3])
    assert rep.violations == 0


def test_interlacing_random_ensemble(rng):
    for _ in range(100):
        measure, n, m, tail, eta = random_rule_setup(rng, n_max=20)
        rule = sq.generate_rule(measure, n, m, tail, eta)
        l = int(rng.integers(m, n))
        kappa = np.exp(1j * rng.uniform(0, 2 * np.pi))
        rep = sq.check_interlacing(rule, measure, l, kappa)
        assert rep.violations == 0


def test_interlacing_validates_l_range():
    rule = sq.generate_rule(sq.Lebesgue(), 4, 2, [0.1, 0.1], 1.0)
    with pytest.raises(ValueError):
        sq.check_interlacing(rule, sq.Lebesgue(), 1, 1.0)


# --- asymptotics -------------------------------------------------------------------

def test_asymptotics_lebesgue_identically_zero():
    reports = sq.asymptotic_report(sq.Lebesgue(), [4, 8, 16])
    for rep in reports:
        assert rep.max_deviation < 1e-12


def test_asymptotics_bernstein_szego_decreasing():
    reports = sq.asymptotic_report(sq.BernsteinSzego(0.5), [8, 16, 32, 64])
    devs = [rep.max_deviation for rep in reports]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    # halves per doubling within factor 1.5
    for a, b in zip(devs, devs[1:]):
        assert b <= 1.5 * a / 2


def test_asymptotics_with_tail(rng):
    reports = sq.asymptotic_report(
        sq.BernsteinSzego(0.5), [8, 16, 32, 64],
        m_of_n=1, tail_of=lambda n, m: [0.3],
    )
    devs = [rep.max_deviation for rep in reports]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    assert np.max(np.abs(reports[0].g_values - 1.0)) > 1e-3   # tail factor active


def test_asymptotics_need_density():
    with pytest.raises(UnsupportedVariantError):
        sq.asymptotic_report(sq.ExplicitMoments([1, 0.5, 0.25]), [4])


def test_asymptotics_record_field():
    rep = sq.asymptotic_report(sq.Lebesgue(), [4])[0]
    assert "max_asym_dev" in rep.to_record()


# --- Szego function -----------------------------------------------------------------

def test_szego_function_flat():
    assert sq.szego_function(sq.Lebesgue(), 0.3 + 0.2j) == pytest.approx(1.0)


def test_szego_function_recovers_density():
    rep = sq.szego_report(sq.BernsteinSzego(0.5), [1, 2, 8], grid_size=1024)
    assert rep.density_residual < 1e-8


def test_szego_constant_trend_bernstein():
    rep = sq.szego_report(sq.BernsteinSzego(0.5), [1, 2, 5, 9])
    assert np.allclose(rep.kn_half, 0.75)
    assert rep.limit == pytest.approx(0.75, abs=1e-12)
    assert rep.max_trend_gap < 1e-12


def test_szego_constant_trend_infinite_sequence():
    # K_n/2 decreases monotonically toward exp(mean log f) when the
    # coefficient sequence never terminates
    grid = 2 * np.pi * np.arange(4096) / 4096
    spec = sq.DensitySamples(np.exp(0.5 * np.cos(grid)))
    rep = sq.szego_report(spec, [1, 2, 4, 8], grid_size=4096)
    gaps = [k - rep.limit for k in rep.kn_half]
    assert all(g > 0 for g in gaps)
    assert all(b < a for a, b in zip(gaps, gaps[1:]))


def test_szego_function_log_singularity():
    vals = np.ones(64)
    vals[10] = 0.0
    with pytest.raises(LogSingularityError):
        sq.szego_function(sq.DensitySamples(vals), 0.0)


def test_s_zero_separation_by_sign_changes(rng):
    # independent oracle: count sign changes of S on a dense grid between
    # consecutive nodes instead of extracting polynomial roots
    measure = sq.ExplicitVerblunsky([0.35, -0.2j, 0.15 + 0.1j])
    rule = sq.generate_rule(measure, 4, 0, (), np.exp(0.8j))
    trace = sq.s_function(rule, measure)
    nodes = rule.nodes
    ext = np.concatenate([nodes, [nodes[0] + 2 * np.pi]])
    assert len(trace.s_zeros) == rule.n
    for i in range(rule.n):
        grid = np.linspace(ext[i] + 1e-6, ext[i + 1] - 1e-6, 200)
        dense = sq.s_function(rule, measure, samples=grid)
        changes = np.sum(np.diff(np.sign(dense.s_values)) != 0)
        assert changes == 1


def test_real_imag_parts_of_inner_polynomial_alternate(rng):
    # the two halves of the rotated inner polynomial z*p: its real part
    # vanishes at the nodes, its imaginary part at the on-circle zeros of
    # eta*p* - z*p, and the two zero sets strictly alternate
    from szquad.validation import _halves_from_rule
    for _ in range(10):
        measure, n, m, tail, eta = random_rule_setup(rng, n_max=14)
        rule = sq.generate_rule(measure, n, m, tail, eta)
        _, n_poly = _halves_from_rule(rule)
        roots = np.roots(n_poly[::-1])
        assert np.max(np.abs(np.abs(roots) - 1.0)) < 1e-7
        imag_zeros = np.sort(np.mod(np.angle(roots), 2 * np.pi))
        ext = np.concatenate([rule.nodes, [rule.nodes[0] + 2 * np.pi]])
        for i in range(n):
            lifted = np.where(imag_zeros < ext[i], imag_zeros + 2 * np.pi, imag_zeros)
            assert np.sum((lifted > ext[i]) & (lifted < ext[i + 1])) == 1


def test_s_function_matches_direct_kernel_integral():
    # literal definition check for an even node count (where the nodes
    # polynomial is periodic and the integral is well defined):
    # S(psi) = (1/2pi) int cot((phi-psi)/2) (T(psi) - T(phi)) f(phi) dphi.
    # The integrand's singularity at phi = psi is removable, so the periodic
    # trapezoid rule converges spectrally and is independent of the moment
    # reduction. For odd node counts the literal formula depends on where
    # the anti-periodic T is cut, and only the half-degree-regularized
    # version used by s_function satisfies the weight identities.
    measure = sq.BernsteinSzego(0.5)
    rule = sq.generate_rule(measure, 6, 1, [0.25], np.exp(0.3j))
    samples = np.array([0.7, 2.1, 4.4])
    trace = sq.s_function(rule, measure, samples=samples)
    grid = 2 * np.pi * np.arange(16384) / 16384
    fvals = sq.density_eval(measure, grid)

    def t_eval(phis):
        out = np.ones_like(phis)
        for p in rule.nodes:
            out = out * np.sin((phis - p) / 2)
        return out

    t_grid = t_eval(grid)
    for psi, s_val in zip(trace.psi, trace.s_values):
        integrand = 1.0 / np.tan((grid - psi) / 2) * (t_eval(np.array([psi]))[0] - t_grid) * fvals
        s_direct = np.mean(integrand)
        assert abs(s_direct - s_val) < 1e-12
