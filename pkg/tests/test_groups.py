import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hgineq.errors import ConfigError
from hgineq.groups import (BUILTIN_GROUPS, HomogeneousGroup, QuasiNormSpec,
                           anisotropic_group, dilate, euclidean_group,
                           group_from_config, heisenberg_group, quasi_norm)


def test_dilate_identity_any_group():
    g = heisenberg_group()
    x = np.array([0.3, -1.2, 2.5])
    assert np.array_equal(dilate(g, 1.0, x), x)


def test_dilate_componentwise_powers():
    g = heisenberg_group()
    assert np.allclose(dilate(g, 2.0, [1.0, 1.0, 1.0]), [2.0, 2.0, 4.0])
    g2 = anisotropic_group((1.0, 2.0))
    assert np.allclose(dilate(g2, 3.0, [1.0, 1.0]), [3.0, 9.0])


def test_dilate_rejects_nonpositive_lambda():
    g = euclidean_group(2)
    with pytest.raises(ValueError):
        dilate(g, 0.0, [1.0, 0.0])
    with pytest.raises(ValueError):
        dilate(g, -2.0, [1.0, 0.0])


def test_koranyi_unit_axis_point():
    g = heisenberg_group()
    assert quasi_norm(g, [1.0, 0.0, 0.0]) == pytest.approx(1.0, abs=0)


def test_power_norm_direct_formula():
    g = HomogeneousGroup((1.0, 2.0), QuasiNormSpec("power", power_m=1.0))
    # (|3|^2 + |4|^1)^(1/2)
    assert quasi_norm(g, [3.0, 4.0]) == pytest.approx(np.sqrt(13.0), rel=1e-14)


def test_power_norm_default_m_is_max_weight():
    g = anisotropic_group((1.0, 2.0))
    assert g.power_m == 2.0
    # (|x1|^4 + |x2|^2)^(1/4)
    assert quasi_norm(g, [1.0, 1.0]) == pytest.approx(2.0 ** 0.25, rel=1e-14)


@pytest.mark.parametrize("g", list(BUILTIN_GROUPS.values()), ids=lambda g: g.name)
def test_homogeneity_sampled(g):
    rng = np.random.default_rng(42)
    x = rng.normal(size=(1000, g.n)) * 3.0
    lam = np.exp(rng.uniform(-3, 3, size=1000))
    base = quasi_norm(g, x)
    scaled = np.array([quasi_norm(g, dilate(g, l, xi)) for l, xi in zip(lam, x)])
    assert np.all(np.abs(scaled - lam * base) <= 1e-12 * lam * base + 1e-300)


@pytest.mark.parametrize("g", list(BUILTIN_GROUPS.values()), ids=lambda g: g.name)
def test_symmetry_exact(g):
    rng = np.random.default_rng(7)
    x = rng.normal(size=(200, g.n))
    assert np.array_equal(quasi_norm(g, x), quasi_norm(g, -x))


@pytest.mark.parametrize("g", list(BUILTIN_GROUPS.values()), ids=lambda g: g.name)
def test_norm_zero_iff_zero(g):
    assert quasi_norm(g, np.zeros(g.n)) == 0.0
    rng = np.random.default_rng(3)
    x = rng.normal(size=(50, g.n))
    nz = np.any(x != 0, axis=1)
    assert np.all(quasi_norm(g, x)[nz] > 0)


@given(lam=st.floats(1e-3, 1e3), cx=st.floats(-5, 5), cy=st.floats(-5, 5),
       ct=st.floats(-5, 5))
@settings(max_examples=200, deadline=None)
def test_koranyi_homogeneity_property(lam, cx, cy, ct):
    g = heisenberg_group()
    x = np.array([cx, cy, ct])
    x[np.abs(x) < 1e-50] = 0.0  # keep squares out of the denormal range
    n0 = quasi_norm(g, x)
    n1 = quasi_norm(g, dilate(g, lam, x))
    assert abs(n1 - lam * n0) <= 1e-12 * lam * n0 + 1e-250


def test_q_recomputed_and_mismatch_rejected():
    g = HomogeneousGroup.create((1.0, 1.0, 2.0), QuasiNormSpec("koranyi"), Q=4.0)
    assert g.Q == 4.0
    with pytest.raises(ConfigError):
        HomogeneousGroup.create((1.0, 1.0, 2.0), QuasiNormSpec("koranyi"), Q=3.9)


def test_weights_must_be_positive():
    with pytest.raises(ConfigError):
        HomogeneousGroup((1.0, -1.0))
    with pytest.raises(ConfigError):
        HomogeneousGroup(())


def test_norm_weight_compatibility():
    with pytest.raises(ConfigError):
        HomogeneousGroup((1.0, 2.0), QuasiNormSpec("euclidean"))
    with pytest.raises(ConfigError):
        HomogeneousGroup((1.0, 1.0, 1.0), QuasiNormSpec("koranyi"))
    with pytest.raises(ConfigError):
        QuasiNormSpec("power", power_m=-1.0)
    with pytest.raises(ConfigError):
        QuasiNormSpec("taxicab")


def test_group_from_config():
    g = group_from_config({"weights": [1.0, 2.0], "norm": "power", "power_M": 2.0})
    assert g.Q == 3.0
    g2 = group_from_config({"name": "heisenberg"})
    assert g2.norm.variant == "koranyi"
    with pytest.raises(ConfigError):
        group_from_config({"name": "nosuch"})
    with pytest.raises(ConfigError):
        group_from_config({"norm": "power"})
    with pytest.raises(ConfigError):
        group_from_config({"weights": [1.0, 2.0], "Q": 2.5})
