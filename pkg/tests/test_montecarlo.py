import math

import numpy as np
import pytest

from hgineq.errors import GeometryError
from hgineq.groups import anisotropic_group, euclidean_group, heisenberg_group
from hgineq.montecarlo import (separable_group_integral, sphere_integral_mc)
from hgineq.profiles import DEFAULT_GRID, FuncForm, RadialProfile, bump_form
from hgineq.quadrature import radial_integral


def gaussian_r2_profile():
    # exp(-r^2) with exact Euler derivative, decaying at both grid ends
    def val(u):
        return np.exp(-np.exp(2.0 * np.asarray(u, dtype=float)))

    def dval(u):
        u = np.asarray(u, dtype=float)
        return -2.0 * np.exp(2.0 * u) * val(u)

    return RadialProfile.from_form(DEFAULT_GRID, FuncForm(val, dval), "gauss_r",
                                   check_support=False)


def test_euclidean_circle_measure():
    g = euclidean_group(2)
    est = sphere_integral_mc(g, None, 400_000, seed=7)
    assert est.std_error > 0
    assert est.within(2.0 * math.pi, n_sigma=3.0)


def test_zero_function_is_exactly_zero():
    g = euclidean_group(2)
    est = sphere_integral_mc(g, lambda pts: np.zeros(len(pts)), 10_000, seed=1)
    assert est.value == 0.0


def test_koranyi_sphere_mass_reproducible_across_seeds():
    g = heisenberg_group()
    e1 = sphere_integral_mc(g, None, 300_000, seed=101)
    e2 = sphere_integral_mc(g, None, 300_000, seed=202)
    pooled = math.hypot(e1.std_error, e2.std_error)
    assert abs(e1.value - e2.value) <= 3.0 * pooled


def test_determinism_given_seed():
    g = heisenberg_group()
    assert sphere_integral_mc(g, None, 50_000, seed=5) == \
        sphere_integral_mc(g, None, 50_000, seed=5)
    assert sphere_integral_mc(g, None, 50_000, seed=5) != \
        sphere_integral_mc(g, None, 50_000, seed=6)


def test_zero_acceptance_raises():
    g = euclidean_group(3)
    with pytest.raises(GeometryError):
        sphere_integral_mc(g, None, 200, seed=3, r_lo=1.0, r_hi=1.0 + 1e-9)


def test_factorized_equals_radial_times_mass():
    g = euclidean_group(2)
    prof = gaussian_r2_profile()
    cmp = separable_group_integral(g, prof, None, 100_000, seed=13)
    mass = sphere_integral_mc(g, None, 100_000, seed=13, stream=0)
    radial = radial_integral(g, prof, refine=False)
    assert cmp.factorized == pytest.approx(radial * mass.value, rel=1e-12)


def test_planar_gaussian_integral():
    # int_R2 exp(-|x|^2) dx = pi, via both estimators
    g = euclidean_group(2)
    prof = gaussian_r2_profile()
    cmp = separable_group_integral(g, prof, None, 400_000, seed=2, r_max=6.0)
    assert abs(cmp.factorized - math.pi) <= 3.0 * cmp.factorized_err
    assert abs(cmp.direct - math.pi) <= 3.0 * cmp.direct_err


@pytest.mark.parametrize("g", [euclidean_group(3), anisotropic_group((1.0, 2.0)),
                               heisenberg_group()], ids=lambda g: g.name)
def test_polar_decomposition_two_estimators_agree(g):
    bump = RadialProfile.from_form(DEFAULT_GRID,
                                   bump_form(math.log(0.5), math.log(4.0)),
                                   "bump")
    cmp = separable_group_integral(g, bump, None, 400_000, seed=11)
    assert cmp.sigma_distance <= 3.0


@pytest.mark.parametrize("g", [euclidean_group(3), anisotropic_group((1.0, 2.0)),
                               heisenberg_group()], ids=lambda g: g.name)
def test_polar_consistency_five_separable_functions(g):
    """Factorized and direct estimates agree for five separable integrands."""
    bump_wide = RadialProfile.from_form(
        DEFAULT_GRID, bump_form(math.log(0.5), math.log(4.0)), "bump_wide")
    bump_tight = RadialProfile.from_form(
        DEFAULT_GRID, bump_form(math.log(1.0), math.log(2.0)), "bump_tight")
    cases = [
        (bump_wide, None),
        (bump_tight, None),
        (bump_wide, lambda y: 1.0 + 0.5 * y[:, 0]),
        (bump_wide, lambda y: y[:, 0] ** 2 + 0.1),
        (bump_tight, lambda y: 2.0 + np.sin(3.0 * y[:, -1])),
    ]
    for i, (prof, h) in enumerate(cases):
        cmp = separable_group_integral(g, prof, h, 200_000, seed=31 + i)
        assert cmp.sigma_distance <= 3.0, f"case {i}: {cmp}"


def test_direct_estimator_with_angular_factor():
    # f(x) = phi(|x|) * h(y) with h(y) = 1 + first coordinate of y: the
    # odd part integrates to zero over the sphere, so the result matches h = 1
    g = euclidean_group(2)
    prof = gaussian_r2_profile()

    def h(pts):
        return 1.0 + pts[:, 0]

    cmp = separable_group_integral(g, prof, h, 400_000, seed=4, r_max=6.0)
    assert abs(cmp.factorized - math.pi) <= 3.0 * cmp.pooled_sigma + 3.0 * cmp.factorized_err
    assert abs(cmp.factorized - cmp.direct) <= 3.0 * cmp.pooled_sigma
