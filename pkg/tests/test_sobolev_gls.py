import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glslab.periodic_field import PeriodicGrid, lp_norms, sample_catalog
from glslab.psi_space import PGrid, PsiFunction, fundamental_function, gls_norm, make_psi
from glslab.sobolev_gls import (
    SobolevParams,
    ThetaFamily,
    gw_norm,
    intermediate_check,
    jackson_residual,
    sobolev_norm,
    sobolev_norms,
    theta_norm,
    thm31_check,
)


@pytest.mark.parametrize("r", [1, 2, 5])
@pytest.mark.parametrize("p", [1.0, 2.0, 9.0])
def test_constant_sobolev_norm(r, p):
    assert sobolev_norm(sample_catalog("constant"), r, p) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("k", [1, 2, 7])
def test_cosine_sobolev_norm(k):
    f = sample_catalog("cosk", {"k": k})
    assert sobolev_norm(f, 1, 2.0) == pytest.approx(math.sqrt(0.5 + k * k / 2), abs=1e-12)


def test_sobolev_norm_matches_direct_sum():
    f = sample_catalog("holder_smooth")
    from glslab.periodic_field import derivative, lp_norm

    p = 3.0
    direct = (lp_norm(f, p) ** p + lp_norm(derivative(f, 2), p) ** p) ** (1 / p)
    assert sobolev_norm(f, 2, p) == pytest.approx(direct, rel=1e-12)


@pytest.mark.parametrize("r, p", [(-1, 2.0), (9, 2.0), (1, 0.5)])
def test_sobolev_params_reject(r, p):
    with pytest.raises(ValueError):
        SobolevParams(r, p)


def test_zero_order_is_lebesgue():
    f = sample_catalog("step")
    ps = [1.0, 2.0, 17.0]
    np.testing.assert_array_equal(sobolev_norms(f, 0, ps), lp_norms(f, ps))


def test_gw_constant(psi2):
    assert gw_norm(sample_catalog("constant"), 3, psi2).value == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name", ["holder", "step", "logsing", "cosk"])
def test_gw_zero_order_equals_grand_norm(name, psi2):
    f = sample_catalog(name)
    assert gw_norm(f, 0, psi2).value == gls_norm(f, psi2).value


def test_gw_self_normalized_cosine(pgrid_inf):
    f = sample_catalog("cosk")
    values = sobolev_norms(f, 1, pgrid_inf.points)
    psi = PsiFunction(lambda p: np.interp(np.log(p), np.log(pgrid_inf.points), np.log(values)))
    assert gw_norm(f, 1, psi, pgrid_inf).value == pytest.approx(1.0, abs=1e-12)


# -- theta family ----------------------------------------------------------------


def test_theta_of_zero():
    fam = ThetaFamily(8, 4.0, 16.0)
    assert theta_norm(sample_catalog("constant", {"c": 0.0}), fam) == 0.0


@pytest.mark.parametrize("n", [2, 8, 64])
def test_theta_of_one(n):
    fam = ThetaFamily(n, 4.0, 16.0)
    q = fam.qgrid()
    assert theta_norm(sample_catalog("constant"), fam) == pytest.approx(n ** (1 / q[0]), rel=1e-12)
    assert q[0] == pytest.approx(4.0 * (1 + 1e-3))


def test_theta_with_n_one_is_plain_sup():
    fam = ThetaFamily(1, 2.0, 32.0)
    f = sample_catalog("holder")
    assert theta_norm(f, fam) == pytest.approx(float(np.max(lp_norms(f, fam.qgrid()))), rel=1e-14)


@given(st.floats(-1e3, 1e3), st.integers(1, 128))
def test_theta_scaling(c, n):
    fam = ThetaFamily(n, 4.0)
    g = sample_catalog("step", grid=PeriodicGrid(64))
    assert theta_norm(c * g, fam) == pytest.approx(abs(c) * theta_norm(g, fam), rel=1e-12, abs=1e-300)


def test_theta_truncation_recorded():
    fam = ThetaFamily(4, 4.0)
    assert fam.truncated
    assert fam.upper == 64.0
    assert not ThetaFamily(4, 4.0, 16.0).truncated


def test_theta_rejects_outside_qgrid():
    with pytest.raises(ValueError):
        theta_norm(sample_catalog("constant"), ThetaFamily(4, 4.0, 16.0), qgrid=[3.0])


# -- smoothness bound --------------------------------------------------------------


def test_constant_residual_vanishes(psi2):
    f = sample_catalog("constant")
    np.testing.assert_allclose(jackson_residual(f, 8).samples, 0.0, atol=1e-14)
    rep = thm31_check(f, 1, psi2, 8)
    assert rep.lhs == pytest.approx(0.0, abs=1e-13)


def test_smoothness_bound_report(psi2):
    f = sample_catalog("holder_smooth")
    rep = thm31_check(f, 1, psi2, 16)
    assert rep.regime_relaxed
    assert not rep.degenerate
    assert rep.empirical_c3 == pytest.approx(rep.lhs / rep.rhs_core)
    assert rep.phi == pytest.approx(fundamental_function(psi2, 2 * math.pi / 16))
    assert rep.to_row()[:3] == (f.name, 1, 16)


@pytest.mark.parametrize("r", [0, 1, 2])
def test_smoothness_constant_stable_for_scaled_surrogate(r, psi2):
    c3 = []
    for n in (4, 8, 16, 32, 64):
        f = sample_catalog("holder_smooth", {"alpha": 0.25, "degree": 2 * n})
        c3.append(thm31_check(f, r, psi2, n).empirical_c3)
    assert max(c3) / min(c3) < 10


@pytest.mark.parametrize("r", [0, 1, 2])
def test_smoothness_constant_bounded_for_fixed_polynomial(r, psi2):
    f = sample_catalog("holder_smooth")
    c3 = [thm31_check(f, r, psi2, n).empirical_c3 for n in (4, 8, 16, 32, 64)]
    assert 0 < min(c3) and max(c3) < 10


def test_smoothness_check_rejects():
    psi = make_psi("psi_m", m=2)
    f = sample_catalog("holder")
    with pytest.raises(ValueError):
        thm31_check(f, 1, psi, 5)
    with pytest.raises(ValueError):
        thm31_check(f, 1, psi, 8, fam=ThetaFamily(4, 4.0))
    finite = PsiFunction(lambda p: np.log(p), b=6.0)
    with pytest.raises(ValueError, match="s1"):
        thm31_check(f, 1, finite, 8, grid=PGrid.for_support(6.0))


def test_intermediate_inequality_stable():
    f = sample_catalog("holder_smooth")
    ratios = [intermediate_check(f, 1, n, 2.0, 8.0).ratio for n in (4, 8, 16, 32, 64)]
    assert max(ratios) / min(ratios) < 10


def test_fundamental_function_nondecreasing_over_deltas(psi2):
    deltas = np.geomspace(1e-4, 2 * math.pi, 32)
    phi = [fundamental_function(psi2, d) for d in deltas]
    assert np.all(np.diff(phi) >= 0)
