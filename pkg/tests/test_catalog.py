import math

import numpy as np
import pytest

from hgineq.catalog import (VerificationReport, scaling_quotient,
                            verify_dilation_scaling, verify_embedding_norms,
                            verify_fractional, verify_hardy_equivalence,
                            verify_higher_order, verify_lp_sobolev,
                            verify_poincare, verify_polar_mc, verify_slz,
                            verify_weighted_l2_identity, verify_weighted_lp)
from hgineq.errors import DomainError, PreconditionError
from hgineq.euler import euler_apply
from hgineq.groups import anisotropic_group, euclidean_group
from hgineq.profiles import (DEFAULT_GRID, FuncForm, RadialProfile, bump_form,
                             complex_gauss_profile)
from hgineq.quadrature import log_trapz, lp_norm, weighted_lp_norm, WeightSpec


def zero_profile():
    return RadialProfile.from_form(DEFAULT_GRID,
                                   FuncForm(lambda u: np.zeros(np.shape(u)),
                                            lambda u: np.zeros(np.shape(u))),
                                   "zero", check_support=False)


def ball_bump():
    return RadialProfile.from_form(DEFAULT_GRID,
                                   bump_form(math.log(0.2), math.log(0.8)),
                                   "bump_ball")


# ---------------------------------------------------------------------------
# report plumbing
# ---------------------------------------------------------------------------

def test_report_requires_residual_or_margin():
    with pytest.raises(ValueError):
        VerificationReport("x", "g", {}, 0.0, 0.0, "pass")


def test_verdict_resolution_logic():
    from hgineq.catalog import _status_decided
    # stabilized quantities decide directly
    assert _status_decided([(True, 0.5)], True, None) == "pass"
    assert _status_decided([(False, -0.5)], True, None) == "fail"
    # unstabilized: decisive only when every check clears 10x its own drift
    assert _status_decided([(True, 0.5)], False, np.array([1e-3])) == "pass"
    assert _status_decided([(False, -0.5)], False, np.array([1e-3])) == "fail"
    assert _status_decided([(True, 0.5)], False, np.array([0.2])) == "inconclusive"
    assert _status_decided([(True, 0.5)], False, None) == "inconclusive"
    # one near-threshold check poisons an otherwise decisive verdict
    assert _status_decided([(True, 0.5), (True, 1e-9)], False,
                           np.array([1e-3, 1e-6])) == "inconclusive"


def test_report_serializes(heis, battery):
    rep = verify_lp_sobolev(heis, battery[0], 2.0)
    d = rep.to_dict()
    assert d["schema_version"] == 1
    assert d["status"] == "pass"
    assert isinstance(d["grid_meta"], dict)


# ---------------------------------------------------------------------------
# unweighted L^p with remainder
# ---------------------------------------------------------------------------

def test_sobolev_identity_p2_remainder_structure(heis, battery):
    # remainder must equal (2/Q)^2 * ||E phi + (Q/2) phi||^2 (quadrature oracle)
    phi = battery[0]
    rep = verify_lp_sobolev(heis, phi, 2.0)
    e = euler_apply(heis, phi)
    grid = phi.grid
    combo = e.values + 0.5 * heis.Q * phi.values
    oracle = (2.0 / heis.Q) ** 2 * log_trapz(
        grid, np.abs(combo) ** 2 * np.exp(heis.Q * grid.u))
    assert rep.remainder == pytest.approx(oracle, rel=1e-8)
    assert rep.residual <= 1e-8
    assert rep.status == "pass"


def test_sobolev_zero_profile(heis):
    rep = verify_lp_sobolev(heis, zero_profile(), 2.0)
    assert rep.lhs == 0.0 and rep.rhs == 0.0 and rep.remainder == 0.0
    assert rep.status == "pass"


def test_sobolev_strict_remainder_positivity(groups, battery):
    for g in groups:
        for phi in battery:
            for p in (1.5, 2.0, 3.0):
                rep = verify_lp_sobolev(g, phi, p)
                scale = max(rep.rhs**p, rep.lhs**p)
                assert rep.remainder > 1e-12 * scale


def test_sobolev_complex_identity_path_guard(heis):
    cpx = complex_gauss_profile()
    with pytest.raises(PreconditionError):
        verify_lp_sobolev(heis, cpx, 3.0, identity=True)
    rep = verify_lp_sobolev(heis, cpx, 3.0)  # auto: inequality only
    assert rep.residual is None and rep.margin > 0
    rep2 = verify_lp_sobolev(heis, cpx, 2.0)  # p=2 identity holds for complex
    assert rep2.residual is not None and rep2.residual <= 1e-8


def test_sobolev_domain(heis, battery):
    with pytest.raises(DomainError):
        verify_lp_sobolev(heis, battery[0], 1.0)


def test_sobolev_extreme_exponents_still_decisive(heis, battery):
    # near p = 1 the |E phi|^p norms converge slowly enough to hit the grid
    # cap, but the residual and margin are stable far from their thresholds,
    # so the verdict must stand rather than fall back to "inconclusive"
    for p in (1.05, 6.0):
        rep = verify_lp_sobolev(heis, battery[0], p)
        assert rep.status == "pass"
        assert rep.residual <= 1e-6


# ---------------------------------------------------------------------------
# Hardy
# ---------------------------------------------------------------------------

def test_hardy_constant_q4(heis, battery):
    # at Q=4, p=2 the constant is 2/(Q-2) = 1
    phi = battery[0]
    rep = verify_hardy_equivalence(heis, phi, 2.0)
    rhs_norm = weighted_lp_norm(heis, euler_apply(heis, phi),
                                WeightSpec(p=2.0, alpha=1.0))
    assert rep.rhs == pytest.approx(rhs_norm, rel=1e-9)
    assert rep.residual <= 1e-8
    assert rep.status == "pass"


def test_hardy_zero_profile(heis):
    rep = verify_hardy_equivalence(heis, zero_profile(), 2.0)
    assert rep.lhs == 0.0 and rep.rhs == 0.0


def test_hardy_domain_guards(battery):
    g3 = euclidean_group(3)
    with pytest.raises(DomainError):
        verify_hardy_equivalence(g3, battery[0], 3.0)  # needs p < Q
    g2 = euclidean_group(2)
    with pytest.raises(DomainError):
        verify_hardy_equivalence(g2, battery[0], 2.0)  # needs Q >= 3


# ---------------------------------------------------------------------------
# weighted L^p
# ---------------------------------------------------------------------------

def test_weighted_lp_constant_and_branches(heis, battery):
    phi = battery[0]
    rep = verify_weighted_lp(heis, phi, 2.0, 1.0)
    # |p/(Q - alpha p)| = 1 at Q=4, p=2, alpha=1
    rhs_norm = weighted_lp_norm(heis, euler_apply(heis, phi),
                                WeightSpec(p=2.0, alpha=1.0))
    assert rep.rhs == pytest.approx(rhs_norm, rel=1e-9)
    assert rep.margin >= 0
    crit = verify_weighted_lp(heis, phi, 2.0, 2.0)  # alpha p = Q
    assert crit.grid_meta["branch"] == "log"
    assert crit.margin >= 0
    # the critical-branch constant is p itself
    crit_rhs_norm = weighted_lp_norm(
        heis, euler_apply(heis, phi),
        WeightSpec(p=2.0, alpha=heis.Q / 2.0, lam1=1.0, R=1.0, log_shifted=False))
    assert crit.rhs == pytest.approx(2.0 * crit_rhs_norm, rel=1e-12)


def test_weighted_lp_zero_profile(heis):
    rep = verify_weighted_lp(heis, zero_profile(), 2.0, 1.0)
    assert rep.margin == 0.0


def test_weighted_lp_near_critical_warning(heis, battery):
    rep = verify_weighted_lp(heis, battery[0], 2.0, 2.0 - 1e-5)
    assert any("near-critical" in n for n in rep.notes)


# ---------------------------------------------------------------------------
# weighted L^2 identity
# ---------------------------------------------------------------------------

def test_weighted_l2_alpha_zero_reduces_to_sobolev(groups, battery):
    for g in groups:
        for phi in battery[:2]:
            a = verify_weighted_l2_identity(g, phi, 0.0)
            b = verify_lp_sobolev(g, phi, 2.0)
            assert a.lhs == pytest.approx(b.lhs, rel=1e-12)
            assert a.rhs == pytest.approx(b.rhs, rel=1e-12)
            assert a.remainder == pytest.approx(b.remainder, rel=1e-12)


def test_weighted_l2_identity_residual(heis, battery):
    for alpha in (-1.0, 0.0, 0.5, 1.0):
        rep = verify_weighted_l2_identity(heis, battery[0], alpha)
        assert rep.residual <= 1e-8
        assert rep.status == "pass"


def test_weighted_l2_remainder_constant_alpha1(heis, battery):
    # (Q - 2 alpha)/2 = 1 at Q=4, alpha=1: remainder = ||r^-1(E phi + phi)||^2
    phi = battery[0]
    rep = verify_weighted_l2_identity(heis, phi, 1.0)
    e = euler_apply(heis, phi)
    grid = phi.grid
    combo = e.values + phi.values
    oracle = log_trapz(grid, np.abs(combo) ** 2 * np.exp((heis.Q - 2.0) * grid.u))
    assert rep.remainder == pytest.approx(oracle, rel=1e-8)


def test_weighted_l2_complex_profile(heis):
    rep = verify_weighted_l2_identity(heis, complex_gauss_profile(), 0.5)
    assert rep.residual <= 1e-8


def test_weighted_l2_degenerate_constant(heis, battery):
    rep = verify_weighted_l2_identity(heis, battery[0], heis.Q / 2.0)
    assert rep.margin is None
    assert rep.residual <= 1e-8


# ---------------------------------------------------------------------------
# higher order
# ---------------------------------------------------------------------------

def test_higher_order_k1_matches_weighted_l2(heis, battery):
    a = verify_higher_order(heis, battery[0], 0.5, 1)
    b = verify_weighted_l2_identity(heis, battery[0], 0.5)
    assert a.lhs == pytest.approx(b.lhs, rel=1e-12)
    assert a.rhs == pytest.approx(b.rhs, rel=1e-12)
    assert a.remainder == pytest.approx(b.remainder, rel=1e-12)


def test_higher_order_constant_q5():
    # Q = 5, alpha = 1/2, k = 2: constant (2/|Q-2a|)^k = (1/2)^2 = 1/4
    g = anisotropic_group((2.0, 3.0))
    assert g.Q == 5.0
    from hgineq.profiles import standard_battery
    phi = standard_battery()[0]
    rep = verify_higher_order(g, phi, 0.5, 2)
    from hgineq.euler import euler_power
    ek_norm = weighted_lp_norm(g, euler_power(g, phi, 2),
                               WeightSpec(p=2.0, alpha=0.5))
    assert rep.rhs == pytest.approx(0.25 * ek_norm, rel=1e-9)
    assert rep.residual <= 1e-7


def test_higher_order_identity_chain(heis, battery):
    for k in (1, 2, 3, 4):
        rep = verify_higher_order(heis, battery[0], 0.5, k)
        assert rep.residual <= 1e-7
        assert rep.margin >= -1e-10 * rep.rhs
        assert rep.status == "pass"


def test_higher_order_lp_branch(heis, battery):
    rep = verify_higher_order(heis, battery[0], 0.5, 2, p=3.0)
    assert rep.residual is None
    assert rep.margin >= 0
    with pytest.raises(DomainError):
        verify_higher_order(heis, battery[0], heis.Q / 3.0, 2, p=3.0)


def test_higher_order_validates_k(heis, battery):
    with pytest.raises(DomainError):
        verify_higher_order(heis, battery[0], 0.5, 0)


# ---------------------------------------------------------------------------
# fractional
# ---------------------------------------------------------------------------

def test_fractional_bound_constant(heis, battery):
    # beta=1, k=1, Q=4: constant C(1/2,1) * (2/Q) = (4 sqrt2/pi)/2
    phi = battery[0]
    rep = verify_fractional(heis, phi, 1.0, 1)
    from hgineq.euler import OperatorSymbol, multiplier_apply
    n_pos = lp_norm(heis, multiplier_apply(heis, phi, OperatorSymbol.fractional(1.0)), 2)
    want_const = 4.0 * math.sqrt(2.0) / math.pi / 2.0
    assert rep.rhs == pytest.approx(want_const * n_pos, rel=1e-10)
    assert rep.margin >= 0
    assert rep.details["moment_margin"] >= 0


def test_fractional_zero_profile(heis):
    rep = verify_fractional(heis, zero_profile(), 1.0, 1)
    assert rep.margin == 0.0 and rep.details["moment_margin"] == 0.0


def test_fractional_complex_beta(heis, battery):
    rep = verify_fractional(heis, battery[1], 1.0 + 3.0j, 2)
    assert rep.status == "pass"


def test_fractional_domain(heis, battery):
    with pytest.raises(DomainError):
        verify_fractional(heis, battery[0], -1.0, 2)
    with pytest.raises(DomainError):
        verify_fractional(heis, battery[0], 2.0, 1)  # k <= Re beta / 2


# ---------------------------------------------------------------------------
# embedding norms
# ---------------------------------------------------------------------------

def test_embedding_bound_and_skip(heis, battery):
    rep = verify_embedding_norms(heis, battery, 2.0, 1)
    assert rep.rhs == pytest.approx(0.5)  # (p/Q)^k = 2/4
    assert rep.lhs < rep.rhs
    rep2 = verify_embedding_norms(heis, battery, 2.0, 2)
    assert rep2.rhs == pytest.approx(0.25)
    assert rep2.lhs < rep2.rhs
    # zero profile is skipped with a note (E annihilates it)
    rep3 = verify_embedding_norms(heis, battery + [zero_profile()], 2.0, 1)
    assert any("skipped" in n for n in rep3.notes)
    with pytest.raises(PreconditionError):
        verify_embedding_norms(heis, [zero_profile()], 2.0, 1)
    with pytest.raises(PreconditionError):
        verify_embedding_norms(heis, [], 2.0, 1)


def test_embedding_fractional_variant(heis, battery):
    rep = verify_embedding_norms(heis, battery, 2.0, 2, beta=1.0)
    assert rep.margin > 0
    with pytest.raises(DomainError):
        verify_embedding_norms(heis, battery, 3.0, 2, beta=1.0)


# ---------------------------------------------------------------------------
# Poincare
# ---------------------------------------------------------------------------

def test_poincare_margin_and_constant(heis):
    bump = ball_bump()
    rep = verify_poincare(heis, bump, 2.0, 1.0)
    # constant R p / Q = 1/2 at R=1, p=2, Q=4
    rhs_norm = weighted_lp_norm(heis, euler_apply(heis, bump),
                                WeightSpec(p=2.0, alpha=1.0))
    assert rep.rhs == pytest.approx(0.5 * rhs_norm, rel=1e-9)
    assert rep.margin > 0


def test_poincare_scale_covariance(heis):
    # shrinking both the profile and the ball by lam leaves lhs/rhs unchanged
    bump = ball_bump()
    lam = 0.5
    r1 = verify_poincare(heis, bump, 2.0, 1.0)
    r2 = verify_poincare(heis, bump.dilated(1.0 / lam), 2.0, lam)
    assert r1.lhs / r1.rhs == pytest.approx(r2.lhs / r2.rhs, rel=1e-8)


def test_poincare_support_guard(heis, battery):
    with pytest.raises(PreconditionError):
        verify_poincare(heis, battery[0], 2.0, 1.0)


# ---------------------------------------------------------------------------
# critical double-log embedding
# ---------------------------------------------------------------------------

def test_slz_margins_on_smooth_profile(groups, battery):
    for g in groups:
        rep = verify_slz(g, battery[0], 2.0, 2.0, 1.0)
        assert rep.status == "pass"
        assert rep.margin >= -1e-10 * rep.rhs
        assert rep.details["margin_inner"] >= -1e-10 * rep.details["inner_rhs"]
        assert rep.details["margin_outer"] >= -1e-10 * rep.details["outer_rhs"]


def test_slz_constant_is_q_over_gamma_minus_one(heis, battery):
    from hgineq.slz import slz_gradient_integral
    q, gamma, R = 3.0, 2.0, 1.0
    rep = verify_slz(heis, battery[0], q, gamma, R)
    e = euler_apply(heis, battery[0])
    u_eR = math.log(R) + 1.0
    grad = (slz_gradient_integral(e, q, gamma, u_eR, "inner")
            + slz_gradient_integral(e, q, gamma, u_eR, "outer"))
    assert rep.rhs == pytest.approx(q / (gamma - 1.0) * grad ** (1.0 / q),
                                    rel=1e-12)


def test_slz_exponent_guards(heis, battery):
    with pytest.raises(DomainError, match="gamma"):
        verify_slz(heis, battery[0], 2.0, 1.0, 1.0)
    with pytest.raises(DomainError, match="q"):
        verify_slz(heis, battery[0], 1.5, 3.0, 1.0)


def test_slz_constant_region_contributes_nothing(heis):
    # a profile constant on [R/2, 2 e^2 R] has vanishing difference integrand
    # there, and its gradient integrand vanishes wherever E phi = 0
    from hgineq.sharpness import smoothstep
    R = 1.0
    lo, hi = math.log(R / 2.0) - 0.2, math.log(2.0 * math.e**2 * R) + 0.2

    def val(u):
        u = np.asarray(u, dtype=float)
        return smoothstep((u - (lo - 3.0)) / 3.0) * smoothstep((hi + 3.0 - u) / 3.0)

    prof = RadialProfile.from_form(DEFAULT_GRID, FuncForm(val), "plateau",
                                   check_support=False)
    u_eR = math.log(R) + 1.0
    # difference integrand vanishes pointwise on the plateau
    for r in (R / 2.0, R, math.e * R * 0.999, 2.0 * R, math.e**2 * R):
        assert abs(prof.eval_log(math.log(r)) - prof.eval_log(math.log(R))) == 0.0


def test_dilation_scaling_report(heis, battery):
    rep = verify_dilation_scaling(heis, battery[0], 2.0, 3.0)
    assert rep.residual <= 1e-6
    rep2 = verify_dilation_scaling(heis, battery[0], 2.0, 2.0)
    assert rep2.residual <= 1e-6
    assert rep2.details["exponent"] == 0.0


def test_scaling_quotient_invariance_p_equals_q(heis, battery):
    q0 = scaling_quotient(heis, battery[0], 2.0, 2.0, 1.0)
    for lam in (0.25, 4.0):
        ql = scaling_quotient(heis, battery[0], 2.0, 2.0, lam)
        assert ql == pytest.approx(q0, rel=1e-6)


def test_polar_mc_report(heis):
    bump = RadialProfile.from_form(DEFAULT_GRID,
                                   bump_form(math.log(0.5), math.log(4.0)),
                                   "bump")
    rep = verify_polar_mc(heis, bump, 100_000, seed=5)
    assert rep.status == "pass"
    assert rep.details["sigma_distance"] <= 3.0
