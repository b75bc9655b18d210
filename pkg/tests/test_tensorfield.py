import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skewricci.catalog import lookup, nabla_ab, nvv_connection, slsgp_connection, wong_connection
from skewricci.jets import coordinates, einsum, parse_expression, stack
from skewricci.tensorfield import (
    Chart, Connection, RandomPolynomial, TensorField, bracket, contract, covariant_derivative,
    curvature, curvature_tensor, divergence, divergence_of, exterior_d, exterior_d_connection,
    exterior_derivative, grad, killing_of, lie_bracket, lie_derivative, nabla, ricci, ricci_tensor,
    sample_rng, scaled_error,
)

PLANE = Chart(("y1", "y2"), ((-1.0, 1.0), (-1.0, 1.0)))


def _flat_gamma(coords):
    z = coords[0] * 0.0
    return stack([[[z, z], [z, z]], [[z, z], [z, z]]])


FLAT = Connection(PLANE, _flat_gamma, "flat")


def _points(chart, n=50, label="pts"):
    return chart.sample(n, sample_rng(0, label))


def _const_field(variance, value):
    value = np.asarray(value, dtype=float)

    def fn(coords):
        return coords[0].like(value.reshape(value.shape + (1,) * (len(coords.shape) - 1))) + coords[0] * 0.0

    return TensorField(PLANE, variance, fn)


def test_flat_curvature_and_ricci_vanish():
    pts = _points(PLANE)
    assert np.all(curvature(FLAT, pts) == 0)
    assert np.all(ricci(FLAT, pts) == 0)


def test_flat_constant_tensor_is_parallel():
    pts = _points(PLANE)
    tau = _const_field("dd", [[1.0, 2.0], [2.0, -3.0]])
    assert np.allclose(covariant_derivative(tau, FLAT, pts), 0.0)
    v = _const_field("u", [1.5, -0.5])
    assert np.allclose(divergence(FLAT, v, pts), 0.0)


@pytest.mark.parametrize("potential", ["y1*y2", "y1*y2 + y1**2"])
def test_wong_ricci(potential):
    conn = wong_connection(parse_expression(potential, ("y1", "y2")))
    rho = ricci(conn, _points(PLANE))
    assert np.allclose(rho[0, 1], -1.0)
    assert np.allclose(rho[1, 0], 1.0)
    assert np.allclose(rho[0, 0], 0.0) and np.allclose(rho[1, 1], 0.0)


def test_wong_ricci_is_minus_mixed_partial():
    conn = wong_connection(parse_expression("sin(y1)*exp(y2)", ("y1", "y2")))
    pts = _points(PLANE)
    rho = ricci(conn, pts)
    assert np.allclose(rho[0, 1], -np.cos(pts[0]) * np.exp(pts[1]))


def test_curvature_on_frame_family():
    fc = nabla_ab(1, 0)
    conn = fc.connection()
    pts = _points(fc.chart)
    coords = coordinates(pts, 2 + conn.order_loss)
    e = fc.frame(coords).value
    r = curvature_tensor(conn.christoffel(coords)).value
    u, w = e[0], e[1]
    r_uww = np.einsum("jkls...,j...,k...,l...->s...", r, u, w, w)
    assert scaled_error(r_uww, 6.0 * w, 1) < 1e-9


def test_rho_uw_is_six_on_family():
    for a, b in [(1, 0), (-9, 0), (0, -15), (0, 1), (0, 3), (2.5, 0)]:
        fc = nabla_ab(a, b)
        pts = _points(fc.chart, 30)
        rho = ricci(fc.connection(), pts)
        e = fc.frame(coordinates(pts, 0)).value
        assert scaled_error(np.einsum("jk...,j...,k...->...", rho, e[0], e[1]), 6.0, 0) < 1e-9


def test_d_squared_vanishes():
    rng = sample_rng(1, "dd")
    pts = _points(PLANE)
    h = RandomPolynomial(rng, 2, "", pts.shape[1], degree=4)
    coords = coordinates(pts, 2)
    dd = exterior_d(exterior_d(h(coords), 0, 2), 1, 2)
    assert np.allclose(dd.value, 0.0, atol=1e-12)
    beta = RandomPolynomial(rng, 2, "d", pts.shape[1])
    assert np.allclose(exterior_d(exterior_d(beta(coords), 1, 2), 2, 2).value, 0.0, atol=1e-12)


def test_exterior_derivative_independent_of_torsion_free_connection():
    conn = slsgp_connection()
    pts = _points(conn.chart, 60)
    beta = RandomPolynomial(sample_rng(2, "beta"), 2, "d", pts.shape[1])
    coords = coordinates(pts, 1)
    direct = exterior_d(beta(coords), 1, 2).value
    via_nabla = exterior_d_connection(beta(coords), conn.christoffel(coords)).value
    assert scaled_error(direct, via_nabla, 2) < 1e-8


def test_exterior_derivative_rejects_vectors():
    with pytest.raises(ValueError):
        exterior_derivative(_const_field("u", [1.0, 0.0]), _points(PLANE))


def test_bracket_of_family_frame():
    fc = nabla_ab(1, 0)
    pts = _points(fc.chart)
    e = fc.frame(coordinates(pts, 1))
    assert scaled_error(bracket(e[0], e[1], 2).value, 2.0 * e[0].value, 1) < 1e-12


def test_bracket_of_nvv_frame():
    fc = nvv_connection()
    pts = _points(fc.chart)
    coords = coordinates(pts, 1)
    e = fc.frame(coords)
    psi = fc.scalars["psi"](coords).value
    expected = 6.0 * e[0].value + 2.0 * psi * e[1].value
    assert scaled_error(bracket(e[0], e[1], 2).value, expected, 1) < 1e-10


def test_bracket_with_itself():
    field = RandomPolynomial(sample_rng(3, "x"), 2, "u", 20)
    f = TensorField(PLANE, "u", field)
    assert np.allclose(lie_bracket(f, f, _points(PLANE, 20)), 0.0)


def test_nabla_minus_killing_is_skew():
    conn = slsgp_connection()
    pts = _points(conn.chart)
    xi = RandomPolynomial(sample_rng(4, "xi"), 2, "d", pts.shape[1])
    coords = coordinates(pts, 1)
    gamma = conn.christoffel(coords)
    diff = (nabla(xi(coords), gamma, "d") - killing_of(xi(coords), gamma)).value
    assert np.allclose(diff, -np.swapaxes(diff, 0, 1), atol=1e-12)


@pytest.mark.parametrize("cid", ["slsgp", "nabla_ab:1,0", "nullcone", "wong:y1*y2 + y2**3"])
def test_bochner(cid):
    conn = lookup(cid).connection
    pts = _points(conn.chart, 40, cid)
    w = RandomPolynomial(sample_rng(5, cid), 2, "u", pts.shape[1])
    coords = coordinates(pts, 2 + conn.order_loss)
    gamma = conn.christoffel(coords)
    rho = ricci_tensor(curvature_tensor(gamma))
    x = w(coords)
    nn = nabla(nabla(x, gamma, "u"), gamma, "du")
    rhs = einsum("kjk->j", nn) - einsum("jkk->j", nn)
    lhs = einsum("jk,k->j", rho, x)
    assert scaled_error(lhs.value, rhs.value, 1) < 1e-8
    # coordinate form: div of ∇w minus d(div w)
    div_nw = einsum("kjk->j", nn)
    d_div = grad(divergence_of(x, gamma), 2)
    assert scaled_error(lhs.value, (div_nw - d_div.truncate(div_nw.order)).value, 1) < 1e-8


@pytest.mark.parametrize("cid", ["nabla_ab:0,1", "slinv:1", "nvv", "nullcone", "slsgp"])
def test_torsion_free(cid):
    conn = lookup(cid).connection
    g = conn.christoffel(coordinates(_points(conn.chart, 30, cid), conn.order_loss)).value
    assert np.allclose(g, np.swapaxes(g, 0, 1), atol=1e-12)


@pytest.mark.parametrize("cid", ["nabla_ab:-9,0", "slinv:1", "wong:exp(y1*y2)"])
def test_first_bianchi(cid):
    conn = lookup(cid).connection
    r = curvature(conn, _points(conn.chart, 30, cid))
    cyclic = r + np.einsum("jkls...->kljs...", r) + np.einsum("jkls...->ljks...", r)
    assert np.allclose(cyclic, 0.0, atol=1e-10)
    assert np.allclose(r, -np.swapaxes(r, 0, 1), atol=1e-12)


def test_lie_derivative_of_two_form():
    pts = _points(PLANE)
    rng = sample_rng(6, "lie")
    v = RandomPolynomial(rng, 2, "u", pts.shape[1])
    f = RandomPolynomial(rng, 2, "", pts.shape[1])
    coords = coordinates(pts, 2)
    fj = f(coords)
    z = fj * 0.0
    zeta = stack([[z, fj], [-fj, z]])
    lhs = lie_derivative(zeta, v(coords), "dd", 2)
    rhs = exterior_d(contract(zeta, v(coords), 2, 0), 1, 2)
    assert scaled_error(lhs.value, rhs.truncate(lhs.order).value, 2) < 1e-10


def test_lie_derivative_of_function_is_directional_derivative():
    pts = _points(PLANE)
    rng = sample_rng(8, "dir")
    v = RandomPolynomial(rng, 2, "u", pts.shape[1])
    f = RandomPolynomial(rng, 2, "", pts.shape[1])
    coords = coordinates(pts, 1)
    lhs = lie_derivative(f(coords), v(coords), "", 2)
    rhs = einsum("i,i->", grad(f(coords), 2), v(coords))
    assert np.allclose(lhs.value, rhs.value)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3, 3), st.floats(-3, 3))
def test_scaled_error_is_symmetric_and_scale_free(a, b):
    assert scaled_error(a, b, 0) == scaled_error(b, a, 0)
    assert scaled_error(a, a, 0) == 0.0
    assert scaled_error(np.inf, a, 0) == float("inf")


def test_chart_sampling_respects_exclusions():
    chart = Chart(("y1", "y2"), ((-1.0, 1.0), (-1.0, 1.0)),
                  excluded=(parse_expression("y1", ("y1", "y2")),), margin=0.1)
    pts = chart.sample(200, sample_rng(0, "ex"))
    assert pts.shape == (2, 200)
    assert np.all(np.abs(pts[0]) >= 0.1)


def test_chart_rejects_bad_domains():
    with pytest.raises(ValueError):
        Chart(("y1",), ((1.0, -1.0),))
    with pytest.raises(ValueError):
        Chart(("y1", "y2"), ((0.0, 1.0),))


def test_sample_rng_is_label_stable():
    a = sample_rng(3, "label").random(4)
    b = sample_rng(3, "label").random(4)
    c = sample_rng(3, "other").random(4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)
