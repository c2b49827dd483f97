import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from glslab.periodic_field import (
    CATALOG,
    PeriodicFunction,
    PeriodicGrid,
    TrigPolynomial,
    arc_indicator,
    convolve,
    derivative,
    fourier_coefficients,
    fourier_truncate,
    holder_coefficients,
    lp_norm,
    lp_norms,
    parse_catalog_entry,
    sample_catalog,
    sup_norm,
    translate,
)
from glslab.psi_space import PGrid
from glslab.trig_approx import kernel_build

from conftest import random_polynomial


# -- grid and sampling --------------------------------------------------------


@pytest.mark.parametrize("size", [0, 7, 12, 1000])
def test_grid_rejects_non_power_of_two(size):
    with pytest.raises(ValueError):
        PeriodicGrid(size)


def test_midpoint_grid_avoids_origin():
    g = PeriodicGrid.midpoint(64)
    assert g.offset == pytest.approx(math.pi / 64)
    assert np.min(np.abs(np.sin(g.points / 2))) > 0


def test_constant_samples():
    f = sample_catalog("constant", {"c": 1.0}, PeriodicGrid(16))
    assert np.all(f.samples == 1.0)


def test_cosine_samples_on_small_grid():
    f = sample_catalog("cosk", {"k": 1}, PeriodicGrid(8))
    np.testing.assert_allclose(f.samples, np.cos(2 * np.pi * np.arange(8) / 8))


def test_singular_samples_are_finite_and_peak_next_to_origin():
    g = PeriodicGrid.midpoint(1024)
    f = sample_catalog("singular", {"gamma": 0.5}, g)
    assert np.all(np.isfinite(f.samples))
    assert sup_norm(f) == pytest.approx(abs(2 * math.sin(g.offset / 2)) ** -0.5, rel=1e-12)


@pytest.mark.parametrize("name", ["singular", "logsing"])
def test_singular_members_refuse_grid_through_origin(name):
    with pytest.raises(ValueError, match="singular"):
        sample_catalog(name, grid=PeriodicGrid(64))


def test_samples_are_read_only():
    f = sample_catalog("cosk", grid=PeriodicGrid(16))
    with pytest.raises(ValueError):
        f.samples[0] = 3.0


@pytest.mark.parametrize(
    "text, expected",
    [
        ("logsing(0.5)", ("logsing", {"s": 0.5})),
        ("cosk(3)", ("cosk", {"k": 3})),
        ("holder_smooth(0.5, degree=16)", ("holder_smooth", {"alpha": 0.5, "degree": 16})),
        ("step", ("step", {})),
    ],
)
def test_parse_catalog_entry(text, expected):
    assert parse_catalog_entry(text) == expected


@pytest.mark.parametrize("text", ["nope(1)", "holder(2)", "cosk(1, 2)", "holder(", "singular(1.0)"])
def test_parse_catalog_entry_rejects(text):
    with pytest.raises(ValueError):
        parse_catalog_entry(text)


def test_trig_polynomial_rejects_non_real_coefficients():
    with pytest.raises(ValueError, match="conjugate"):
        TrigPolynomial(np.array([1.0, 0.0, 0.0], dtype=complex))


@given(st.integers(0, 6), st.integers(0, 2**32 - 1))
def test_parameter_roundtrip(degree, seed):
    rng = np.random.default_rng(seed)
    t = TrigPolynomial.from_real(rng.normal(), rng.normal(size=degree), rng.normal(size=degree))
    back = TrigPolynomial.from_parameters(t.to_parameters())
    np.testing.assert_allclose(back.coefficients, t.coefficients, atol=1e-14)


# -- norms --------------------------------------------------------------------


@pytest.mark.parametrize("p", [1.0, 2.0, 7.5, 256.0, math.inf])
@pytest.mark.parametrize("c", [1.0, -3.0, 0.25])
def test_constant_norm(p, c):
    f = sample_catalog("constant", {"c": c}, PeriodicGrid(64))
    assert lp_norm(f, p) == pytest.approx(abs(c), rel=1e-14)


def test_cosine_l2_norm():
    assert lp_norm(sample_catalog("cosk"), 2.0) == pytest.approx(math.sqrt(0.5), abs=1e-12)


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0, 10.0])
@pytest.mark.parametrize("cells", [1, 100, 512, 1023])
def test_arc_indicator_norm(p, cells):
    g = PeriodicGrid(1024)
    f = arc_indicator(g, cells * g.step, start=0.3)
    assert lp_norm(f, p) == pytest.approx((cells / 1024) ** (1 / p), rel=1e-12)


def test_sup_norm_examples():
    g = PeriodicGrid(1024)
    assert sup_norm(sample_catalog("constant", {"c": -3.0}, g)) == 3.0
    assert sup_norm(sample_catalog("cosk", grid=g)) == 1.0
    holder = sample_catalog("holder", {"alpha": 1.0}, g)
    assert sup_norm(holder) == pytest.approx(1.0, abs=1e-15)
    assert holder.grid.points[np.argmax(holder.samples)] == pytest.approx(math.pi)


def test_norm_rejects_small_exponent():
    with pytest.raises(ValueError):
        lp_norm(sample_catalog("cosk"), 0.5)


def test_large_exponents_do_not_overflow():
    f = sample_catalog("constant", {"c": 1e200}, PeriodicGrid(16))
    assert lp_norm(f, 1e4) == pytest.approx(1e200)


@given(st.integers(1, 40), st.integers(0, 2**32 - 1))
def test_parseval_exactness(degree, seed):
    t = random_polynomial(np.random.default_rng(seed), degree)
    f = t.sample(PeriodicGrid(128))
    parseval = math.sqrt(float(np.sum(np.abs(t.coefficients) ** 2)))
    assert abs(lp_norm(f, 2.0) - parseval) <= 1e-12 * max(1.0, parseval)


@pytest.mark.parametrize("name", ["cosk", "holder", "step", "logsing", "singular", "holder_smooth"])
def test_norms_nondecreasing_in_p(name):
    f = sample_catalog(name)
    ps = PGrid.for_support(math.inf).points
    ps = ps[ps <= min(f.p_reliable, 256.0)]
    values = lp_norms(f, ps)
    assert np.all(np.diff(values) >= -1e-10 * values[1:])


# -- translation --------------------------------------------------------------


def test_translate_by_zero_is_identity():
    f = sample_catalog("holder")
    assert translate(f, 0.0) is f


def test_translate_cosine_gives_sine():
    f = sample_catalog("cosk")
    np.testing.assert_allclose(translate(f, math.pi / 2).samples, np.sin(f.grid.points), atol=1e-13)


@given(st.floats(-20.0, 20.0), st.integers(0, 2**32 - 1))
def test_translation_isometry_for_positive_band_limited(t, seed):
    """For f^p band-limited below Nyquist the grid quadrature is exact, so off-grid shifts are isometries."""
    rng = np.random.default_rng(seed)
    base = random_polynomial(rng, 3)
    shift = 2.0 * float(np.sum(np.abs(base.coefficients))) + 1.0
    f = (base + TrigPolynomial.from_real(shift)).sample(PeriodicGrid(512))
    for p in (1.0, 2.0, 3.0, 4.0, 8.0):
        assert abs(lp_norm(translate(f, t), p) - lp_norm(f, p)) <= 1e-10 * lp_norm(f, p)


@pytest.mark.parametrize("name", sorted(CATALOG))
@pytest.mark.parametrize("cells", [1, 17, 300, -5])
def test_grid_shift_isometry_for_every_member(name, cells):
    f = sample_catalog(name)
    g = translate(f, cells * f.grid.step)
    ps = [1.0, 2.0, 16.0, math.inf]
    np.testing.assert_allclose(lp_norms(g, ps), lp_norms(f, ps), rtol=1e-12)


# -- derivatives and coefficients -----------------------------------------------


def test_derivative_examples():
    g = PeriodicGrid(64)
    f = sample_catalog("cosk", {"k": 3}, g)
    assert derivative(f, 0) is f
    np.testing.assert_allclose(derivative(f, 2).samples, -9 * f.samples, atol=1e-12)
    np.testing.assert_allclose(derivative(sample_catalog("constant", grid=g), 1).samples, 0.0, atol=1e-14)


def test_cosine_coefficients():
    c = fourier_coefficients(sample_catalog("cosk"), 5)
    expected = np.zeros(11)
    expected[4] = expected[6] = 0.5
    np.testing.assert_allclose(c, expected, atol=1e-12)


def test_constant_coefficients():
    c = fourier_coefficients(sample_catalog("constant"), 3)
    np.testing.assert_allclose(c, [0, 0, 0, 1, 0, 0, 0], atol=1e-14)


def test_holder_closed_form_against_quadrature():
    closed = holder_coefficients(1.0, 4)
    k = np.arange(5)
    formula = (2 / math.pi) * np.where(k == 0, 1.0, -1.0 / (4 * k**2 - 1))
    np.testing.assert_allclose(closed, formula, rtol=1e-13)
    numeric = [quad(lambda x, j=j: math.sin(x / 2) * math.cos(j * x), 0, 2 * math.pi)[0] / (2 * math.pi) for j in k]
    np.testing.assert_allclose(closed, numeric, atol=1e-12)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.9])
def test_fractional_holder_coefficients_against_quadrature(alpha):
    closed = holder_coefficients(alpha, 3)
    numeric = [quad(lambda x, j=j: math.sin(x / 2) ** alpha * math.cos(j * x), 0, 2 * math.pi, limit=200)[0] / (2 * math.pi) for j in range(4)]
    np.testing.assert_allclose(closed, numeric, atol=1e-9)


def test_holder_smooth_is_band_limited():
    f = sample_catalog("holder_smooth", {"alpha": 1.0, "degree": 32})
    spec = np.abs(f.spectrum())
    assert np.max(spec[np.abs(f.grid.wavenumbers) > 32]) < 1e-15


# -- convolution ----------------------------------------------------------------


def test_mean_projection():
    f = sample_catalog("holder")
    out = convolve(f, kernel_build("fejer", 0))
    np.testing.assert_allclose(out.samples, f.mean(), atol=1e-14)


def test_dirichlet_and_fejer_on_cosine():
    f = sample_catalog("cosk")
    np.testing.assert_allclose(convolve(f, kernel_build("dirichlet", 1)).samples, f.samples, atol=1e-14)
    np.testing.assert_allclose(convolve(f, kernel_build("fejer", 1)).samples, 0.5 * f.samples, atol=1e-14)


@pytest.mark.parametrize("kind", ["fejer", "jackson", "vallee_poussin", "dirichlet"])
@pytest.mark.parametrize("n", [1, 4, 9])
def test_convolution_multiplies_coefficients(kind, n):
    f = sample_catalog("step")
    k = kernel_build(kind, n)
    m = k.degree + 3
    left = fourier_truncate(convolve(f, k), m).coefficients
    right = fourier_coefficients(f, m) * k.padded(m).coefficients
    np.testing.assert_allclose(left, right, atol=1e-12)


def test_mismatched_grids_refuse_arithmetic():
    a = sample_catalog("cosk", grid=PeriodicGrid(16))
    b = sample_catalog("cosk", grid=PeriodicGrid(32))
    with pytest.raises(ValueError):
        a + b


def test_function_arithmetic():
    g = PeriodicGrid(32)
    f = sample_catalog("cosk", grid=g)
    h = 2.0 * f - f
    assert isinstance(h, PeriodicFunction)
    np.testing.assert_allclose(h.samples, f.samples)
