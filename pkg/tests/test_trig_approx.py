import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from glslab.periodic_field import (
    PeriodicGrid,
    TrigPolynomial,
    convolve,
    fourier_coefficients,
    lp_norm,
    lp_norms,
    sample_catalog,
    translate,
)
from glslab.psi_space import Membership, PGrid, gls_norm, make_psi, natural_psi
from glslab.trig_approx import (
    KERNEL_KINDS,
    NormSpec,
    best_approx_gls,
    best_approx_lp,
    gls_direct,
    inverse_estimate,
    is_trig_polynomial,
    jackson_direct,
    kernel_build,
    modulus,
    modulus_profile,
    supinf_lower_bound,
    ta_diagnostic,
    vp_bound,
)

SMALL = PeriodicGrid(256)


@pytest.fixture(scope="module")
def small_pgrid(psi2):
    return PGrid.for_psi(psi2, count=24)


def _small(name, params=None):
    grid = PeriodicGrid.midpoint(256) if name in ("logsing", "singular") else SMALL
    return sample_catalog(name, params, grid)


# -- kernels ----------------------------------------------------------------------


def test_fejer_zero_is_mean_projection():
    k = kernel_build("fejer", 0)
    assert k.degree == 0
    assert k.coefficients.tolist() == [1.0]


def test_dirichlet_one():
    k = kernel_build("dirichlet", 1)
    assert k.coefficients.real.tolist() == [1.0, 1.0, 1.0]
    assert float(k(0.0)) == 3.0


@pytest.mark.parametrize("n", [1, 2, 3, 8, 9, 31, 64])
def test_jackson_kernel_is_a_nonnegative_unit_mass_of_degree_at_most_n(n):
    k = kernel_build("jackson", n)
    samples = k.sample(PeriodicGrid(1024)).samples
    assert k.degree <= n
    assert np.min(samples) >= -1e-12
    assert float(np.mean(samples)) == pytest.approx(1.0, abs=1e-10)


def test_jackson_eight_matches_squared_fejer():
    x = np.linspace(0.01, 2 * math.pi - 0.01, 101)
    m = 4
    fejer = (np.sin((m + 1) * x / 2) / np.sin(x / 2)) ** 2 / (m + 1)
    expected = fejer**2 / np.mean(kernel_build("fejer", m).sample(PeriodicGrid(1024)).samples ** 2)
    np.testing.assert_allclose(kernel_build("jackson", 8)(x), expected, rtol=1e-10, atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 16])
def test_vallee_poussin_reproduces_low_band(n):
    k = kernel_build("vallee_poussin", n)
    assert k.degree == 2 * n - 1
    np.testing.assert_allclose(k.weights()[: n + 1], 1.0, atol=1e-14)


@pytest.mark.parametrize("kind, n", [("nope", 2), ("jackson", 0), ("vallee_poussin", 0), ("fejer", -1)])
def test_kernel_rejects(kind, n):
    with pytest.raises(ValueError):
        kernel_build(kind, n)


def test_kernel_kinds_are_all_buildable():
    for kind in KERNEL_KINDS:
        assert kernel_build(kind, 3).label == f"{kind}[3]"


# -- modulus ----------------------------------------------------------------------


@pytest.mark.parametrize("norm", [1.0, 2.0, math.inf, make_psi("psi_m", m=2)])
def test_constant_has_zero_modulus(norm):
    assert modulus(sample_catalog("constant"), 0.7, norm) == 0.0


@pytest.mark.parametrize("delta", [1e-3, 0.1, 1.0, math.pi / 2, math.pi])
def test_cosine_l2_modulus(delta):
    assert modulus(sample_catalog("cosk"), delta, 2.0) == pytest.approx(math.sqrt(2) * math.sin(delta / 2), abs=1e-6)


@pytest.mark.parametrize("delta", [0.05, 0.5, 2.0])
def test_grand_modulus_is_sup_of_scaled_lp_moduli(delta):
    f = sample_catalog("cosk")
    grid = PGrid.for_support(math.inf, count=12)
    psi = natural_psi([f], grid)
    per_p = [modulus(f, delta, float(p)) / float(psi(p)) for p in grid.points]
    assert modulus(f, delta, NormSpec.gls(psi, grid)) == pytest.approx(max(per_p), abs=1e-6)


@pytest.mark.parametrize("name", ["cosk", "holder", "step", "holder_smooth", "logsing"])
@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_modulus_doubling(name, p):
    f = _small(name)
    for delta in (0.02, 0.2, 1.0):
        assert modulus(f, 2 * delta, p) <= 2 * modulus(f, delta, p) + 1e-8


def test_modulus_profile_nondecreasing():
    prof = modulus_profile(sample_catalog("holder"), np.linspace(0.01, math.pi, 16), 2.0)
    assert np.all(np.diff(prof.values) >= 0)
    assert np.all(prof.values >= prof.raw)
    assert prof.norm_label == "L2"


def test_modulus_profile_rejects_unsorted():
    with pytest.raises(ValueError):
        modulus_profile(sample_catalog("holder"), [1.0, 0.5])


# -- best approximation in L_p --------------------------------------------------------


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0])
def test_polynomials_are_exact(p):
    assert best_approx_lp(sample_catalog("cosk", {"k": 3}), 3, p).value <= 1e-12


@pytest.mark.parametrize("n", [0, 1, 5, 20])
def test_orthogonal_cosine(n):
    f = sample_catalog("cosk", {"k": n + 1})
    assert best_approx_lp(f, n, 2.0).value == pytest.approx(math.sqrt(0.5), abs=1e-12)


def test_holder_closed_form_tail():
    oracle = math.sqrt((8 / math.pi**2) * sum(1.0 / (4 * k * k - 1) ** 2 for k in range(9, 10**6)))
    f = sample_catalog("holder", grid=PeriodicGrid(8192))
    assert best_approx_lp(f, 8, 2.0).value == pytest.approx(oracle, rel=1e-4)


@pytest.mark.parametrize("name", ["holder", "step", "logsing"])
@pytest.mark.parametrize("n", [2, 4, 8, 16])
def test_discrete_parseval_oracle(name, n):
    f = sample_catalog(name)
    spec = f.spectrum()
    tail = math.sqrt(float(np.sum(np.abs(spec[np.abs(f.grid.wavenumbers) > n]) ** 2)))
    assert best_approx_lp(f, n, 2.0).value == pytest.approx(tail, abs=1e-10)


@pytest.mark.parametrize("p", [1.0, 3.0, 8.0])
def test_lp_bracket_is_ordered(p):
    sol = best_approx_lp(_small("holder"), 6, p)
    lo, hi = sol.bracket
    assert lo <= hi * (1 + 1e-12)
    assert hi - lo <= 1e-6 * hi


@pytest.mark.parametrize("name", ["holder", "step", "cosk", "logsing", "holder_smooth"])
@pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
def test_lp_error_nonincreasing_in_degree(name, p):
    f = _small(name)
    values = [best_approx_lp(f, n, p).value for n in range(0, 10)]
    assert np.all(np.diff(values) <= 1e-10)


def test_lp_rejects_too_high_degree():
    with pytest.raises(ValueError):
        best_approx_lp(sample_catalog("cosk", grid=PeriodicGrid(16)), 8, 2.0)


# -- best approximation in the grand space ------------------------------------------


def test_grand_error_vanishes_on_polynomials(psi2, small_pgrid):
    sol = best_approx_gls(_small("cosk", {"k": 2}), 2, psi2, small_pgrid)
    assert sol.value <= 1e-12


@pytest.mark.parametrize("name", ["holder", "step", "logsing", "holder_smooth", "constant", "cosk"])
@pytest.mark.parametrize("n", [1, 4])
def test_sandwich_lower_side(name, n, psi2, small_pgrid):
    f = _small(name)
    sol = best_approx_gls(f, n, psi2, small_pgrid)
    scale = max(1.0, gls_norm(f, psi2, small_pgrid).value)
    assert sol.lower <= sol.value + 1e-12 * scale
    assert sol.dual_lower <= sol.value + 1e-12 * scale
    supinf, lowers = supinf_lower_bound(f, n, psi2, small_pgrid)
    assert supinf <= sol.value + 1e-6 * scale
    assert lowers.shape == (len(small_pgrid),)


def test_holder_error_decreases_and_stays_below_a_feasible_mean(psi2, small_pgrid):
    f = _small("holder")
    values = []
    for n in (4, 8, 16, 32):
        sol = best_approx_gls(f, n, psi2, small_pgrid)
        values.append(sol.value)
        m = (n + 1) // 2
        feasible = gls_norm(f - convolve(f, kernel_build("vallee_poussin", m)), psi2, small_pgrid).value
        assert sol.value <= feasible + 1e-10
    assert np.all(np.diff(values) <= 1e-10)


@pytest.mark.parametrize("name", ["step", "logsing"])
def test_grand_error_nonincreasing(name, psi2, small_pgrid):
    f = _small(name)
    prev = None
    values = []
    for n in range(1, 7):
        sol = best_approx_gls(f, n, psi2, small_pgrid, start=prev, lower=False)
        prev = sol.minimizer
        values.append(sol.value)
    assert np.all(np.diff(values) <= 1e-10)


# -- direct, inverse and Vallee Poussin estimates ------------------------------------


@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_jackson_direct_constant(p):
    rep = jackson_direct(sample_catalog("constant"), 8, p)
    assert (rep.lhs, rep.rhs, rep.ratio) == pytest.approx((0.0, 0.0, 0.0), abs=1e-13)


@pytest.mark.parametrize("n", [2, 3, 8, 33])
def test_jackson_residual_of_cosine(n):
    f = sample_catalog("cosk")
    j1 = kernel_build("jackson", n).coefficient(1).real
    rep = jackson_direct(f, n, 2.0)
    assert rep.lhs == pytest.approx((1 - j1) * math.sqrt(0.5), abs=1e-10)


def test_gls_direct_constant(psi2):
    rep = gls_direct(sample_catalog("constant"), 8, psi2)
    assert (rep.lhs, rep.rhs) == (0.0, 0.0)


def test_gls_direct_left_side_unrolled(psi2, small_pgrid):
    f = _small("holder")
    rep = gls_direct(f, 8, psi2, small_pgrid)
    residual = f - convolve(f, kernel_build("jackson", 8))
    unrolled = float(np.max(lp_norms(residual, small_pgrid.points) / psi2(small_pgrid.points)))
    assert rep.lhs == pytest.approx(unrolled, abs=1e-9)
    assert rep.ratio == pytest.approx(rep.lhs / rep.rhs)


def test_is_trig_polynomial():
    assert is_trig_polynomial(sample_catalog("cosk", {"k": 3}), 3)
    assert not is_trig_polynomial(sample_catalog("cosk", {"k": 3}), 2)
    assert is_trig_polynomial(sample_catalog("constant", {"c": 0.0}), 0)


def test_inverse_estimate_for_polynomial(psi2, small_pgrid):
    rep = inverse_estimate(_small("cosk"), 4, psi2, small_pgrid)
    assert rep.polynomial
    assert rep.lhs > 0
    assert rep.rhs_lower == pytest.approx(0.0, abs=1e-9)


def test_inverse_estimate_constant(psi2, small_pgrid):
    rep = inverse_estimate(_small("constant"), 4, psi2, small_pgrid)
    assert rep.lhs == 0.0
    assert rep.rhs_lower == pytest.approx(0.0, abs=1e-12)


def test_inverse_estimate_holder_shares_work(psi2, small_pgrid):
    f = _small("holder")
    first = inverse_estimate(f, 4, psi2, small_pgrid, with_upper=True)
    lows = {k: v for k, v in zip(range(1, 5), first.lower_bounds)}
    second = inverse_estimate(f, 8, psi2, small_pgrid, lower_bounds=lows)
    assert np.all(np.isfinite([first.ratio_lower, second.ratio_lower]))
    assert first.rhs_lower <= first.rhs_upper + 1e-12
    np.testing.assert_allclose(second.lower_bounds[:4], first.lower_bounds)


def test_vp_bound_reproduces_half_band(psi2, small_pgrid):
    rep = vp_bound(_small("cosk", {"k": 2}), 4, psi2, small_pgrid)
    assert rep.lhs <= 1e-9
    assert rep.ratio == 0.0


def test_vp_bound_constant(psi2, small_pgrid):
    rep = vp_bound(_small("constant"), 4, psi2, small_pgrid)
    assert rep.lhs == pytest.approx(0.0, abs=1e-12)
    assert rep.rhs == pytest.approx(0.0, abs=1e-12)


def test_vp_bound_rejects_odd(psi2):
    with pytest.raises(ValueError):
        vp_bound(sample_catalog("holder"), 5, psi2)


def test_vp_bound_holder_decays(psi2, small_pgrid):
    reps = [vp_bound(_small("holder"), n, psi2, small_pgrid) for n in (8, 16, 32)]
    lhs = [r.lhs for r in reps]
    assert np.all(np.diff(lhs) < 0)
    assert max(r.ratio for r in reps) < 10


# -- approximability diagnostic -----------------------------------------------------


def test_bounded_function_is_approximable(psi2, small_pgrid):
    diag = ta_diagnostic(_small("holder"), psi2, small_pgrid, n_max=16)
    assert diag.verdict == "TA"
    assert diag.decay == "decay"
    assert diag.membership is Membership.IN_GO
    assert not diag.disagreement
    assert np.all(diag.lowers <= diag.errors * (1 + 1e-12))
    assert diag.to_dict()["ns"] == [1, 2, 4, 8, 16]


def test_polynomial_diagnostic(psi2, small_pgrid):
    diag = ta_diagnostic(_small("constant"), psi2, small_pgrid, n_max=4)
    assert diag.verdict == "TA"


@given(st.integers(0, 255), st.sampled_from(["holder", "step", "cosk"]))
def test_modulus_invariant_under_grid_shift(cells, name):
    f = _small(name)
    g = translate(f, cells * f.grid.step)
    assert modulus(g, 0.3, 2.0) == pytest.approx(modulus(f, 0.3, 2.0), rel=1e-12, abs=1e-15)


def test_trig_polynomial_sample_matches_evaluation():
    t = TrigPolynomial.from_real(0.5, [1.0, -2.0], [0.25, 0.0])
    g = PeriodicGrid.midpoint(64)
    np.testing.assert_allclose(t.sample(g).samples, t(g.points), atol=1e-13)
    np.testing.assert_allclose(fourier_coefficients(t.sample(g), 2), t.coefficients, atol=1e-14)
    assert lp_norm(t.sample(g), 2.0) > 0
