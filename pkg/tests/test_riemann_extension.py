import numpy as np
import pytest

from skewricci.catalog import dkleo_form, left_invariant_tensor, lookup
from skewricci.jets import coordinates, einsum, stack
from skewricci.riemann_extension import (
    PetrovError, RiemannExtension, cotangent_lift, cotangent_lift_killing, curvature4,
    div_v_field, einstein_check, hodge_star, kxi_pullback, lc_connection, petrov_type,
    quintuple, theta_section, translated_metric, transversal_extract, vertical_killing,
    walker_check, zero_tensor,
)
from skewricci.surface_rsts import RstsData, phi_squared
from skewricci.tensorfield import (
    Chart, Connection, RandomPolynomial, curvature_tensor, killing_of, ricci_tensor, sample_rng,
    scaled_error,
)

PLANE = Chart(("y1", "y2"), ((-1.0, 1.0), (-1.0, 1.0)))


def _flat(c):
    z = c[0] * 0.0
    return stack([[[z, z], [z, z]], [[z, z], [z, z]]])


FLAT = Connection(PLANE, _flat, "flat")


def _ext(cid, tau="0", **kw):
    conn = lookup(cid).connection
    return RiemannExtension(conn, zero_tensor if tau == "0" else phi_squared(conn), **kw)


def _pts(ext, n=30, label="ext"):
    return ext.chart.sample(n, sample_rng(0, label + ext.name))


def test_flat_base_gives_flat_metric():
    ext = RiemannExtension(FLAT)
    pts = _pts(ext)
    assert np.all(lc_connection(ext, pts) == 0)
    assert np.all(curvature4(ext, pts) == 0)
    assert np.all(transversal_extract(ext, pts) == 0)


def test_pairing_must_be_invertible():
    with pytest.raises(ValueError):
        RiemannExtension(FLAT, pairing=np.zeros((2, 2)))


@pytest.mark.parametrize("cid", ["nabla_ab:1,0", "slsgp", "nullcone"])
@pytest.mark.parametrize("tau", ["0", "phi-phi"])
def test_closed_forms(cid, tau):
    ext = _ext(cid, tau)
    j = ext.at(_pts(ext), 4)
    assert scaled_error(j.g_inv.value, j.closed_inverse_metric().value, 2) < 1e-8
    assert scaled_error(j.lc.value, j.closed_christoffel().value, 3) < 1e-8
    assert scaled_error(j.riemann.value, j.closed_riemann().value, 4) < 1e-8


@pytest.mark.parametrize("pairing", [[[2.0, 1.0], [0.0, 1.0]], [[0.0, 1.0], [-1.5, 0.3]]])
def test_non_identity_pairing(pairing):
    ext = _ext("nabla_ab:0,1", "phi-phi", pairing=np.array(pairing))
    pts = _pts(ext)
    report = einstein_check(ext, pts, 4)
    assert report.max_ricci < 1e-8 and report.max_scalar < 1e-8
    assert walker_check(ext, pts, 4).holds(1e-9)
    j = ext.at(pts, 4)
    assert scaled_error(j.riemann.value, j.closed_riemann().value, 4) < 1e-8


@pytest.mark.parametrize("cid", ["nabla_ab:-9,0", "slinv:1", "nvv"])
def test_ricci_flat_for_skew_base(cid):
    report = einstein_check(_ext(cid), _pts(_ext(cid)))
    assert report.max_ricci < 1e-8 and report.max_scalar < 1e-8


def test_symmetric_ricci_part_survives():
    def gamma(c):
        z = c[0] * 0.0
        return stack([[[z, c[1]], [c[1], z]], [[c[1], z], [c[0] * c[0], z]]])

    base = Connection(PLANE, gamma, "non-rsts")
    ext = RiemannExtension(base)
    pts = _pts(ext)
    rho = ricci_tensor(curvature_tensor(base.christoffel(coordinates(pts[:2], 2)))).value
    sym = rho + np.swapaxes(rho, 0, 1)
    assert np.abs(sym).max() > 0.1
    ricci_bar = einstein_check(ext, pts).ricci
    assert scaled_error(ricci_bar[:2, :2], sym, 2) < 1e-9
    assert np.allclose(ricci_bar[2:], 0.0, atol=1e-12)


@pytest.mark.parametrize("cid", ["nabla_ab:1,0", "nullcone"])
def test_curvature_symmetries(cid):
    ext = _ext(cid, "phi-phi")
    r = curvature4(ext, _pts(ext), 4)
    assert scaled_error(r, -np.swapaxes(r, 0, 1), 4) < 1e-9
    assert scaled_error(r, np.transpose(r, (2, 3, 0, 1, 4)), 4) < 1e-9
    bianchi = r + np.transpose(r, (0, 2, 3, 1, 4)) + np.transpose(r, (0, 3, 1, 2, 4))
    assert scaled_error(bianchi, 0.0, 4) < 1e-9


def test_walker_structure():
    ext = _ext("slsgp", "phi-phi")
    report = walker_check(ext, _pts(ext), 4)
    assert report.holds(1e-10)


def test_transversal_connection_is_base_connection():
    ext = _ext("nabla_ab:1,0")
    pts = _pts(ext)
    base = ext.base.christoffel(coordinates(pts[:2], 1)).value
    assert scaled_error(transversal_extract(ext, pts), base, 3) < 1e-10


def test_transversal_connection_ignores_tau():
    pts = _pts(_ext("nvv"))
    a = transversal_extract(_ext("nvv"), pts)
    b = transversal_extract(_ext("nvv", "phi-phi"), pts, 3)
    assert scaled_error(a, b, 3) < 1e-10


def test_petrov_type_iii_on_generic_member():
    ext = _ext("nabla_ab:1,0")
    tags, certs = petrov_type(ext, _pts(ext, 100))
    assert set(tags) == {"III"}
    assert all(c.rank == 2 and c.trace < 1e-9 and c.cube < 1e-8 and c.square > 1e-3 for c in certs)
    assert max(c.vertical_kernel for c in certs) < 1e-8


def test_petrov_type_iii_left_invariant_tau():
    entry = lookup("nabla_ab:-9,0")
    ext = RiemannExtension(entry.connection, left_invariant_tensor(np.array([[1.0, 0.4], [0.4, -2.0]])))
    tags, _ = petrov_type(ext, _pts(ext, 100), 2)
    assert set(tags) == {"III"}


def test_petrov_refuses_non_ricci_flat():
    def gamma(c):
        z = c[0] * 0.0
        return stack([[[z, c[1]], [c[1], z]], [[c[1], z], [c[0] * c[0], z]]])

    ext = RiemannExtension(Connection(PLANE, gamma, "non-rsts"))
    with pytest.raises(PetrovError):
        petrov_type(ext, _pts(ext, 5))


def test_hodge_star_is_involution_in_neutral_signature():
    ext = _ext("slinv:1", "phi-phi")
    g = ext.at(_pts(ext, 5), 2).g.value
    for i in range(g.shape[-1]):
        star = hodge_star(g[..., i])
        assert np.allclose(star @ star, np.eye(6), atol=1e-10)


@pytest.mark.parametrize("cid,tau", [("nabla_ab:1,0", "0"), ("nabla_ab:-9,0", "phi-phi"), ("nullcone", "0")])
def test_divergence_ten(cid, tau):
    ext = _ext(cid, tau)
    assert scaled_error(div_v_field(ext, _pts(ext)), 10.0, 0) < 1e-8


def test_quintuple_identities():
    ext = _ext("slinv:1", "phi-phi")
    pts = _pts(ext)
    q = quintuple(ext, pts)
    r = curvature4(ext, pts)
    sym = np.einsum("ab...,cd...->abcd...", q.zeta, q.eta) + np.einsum("ab...,cd...->abcd...", q.eta, q.zeta)
    assert scaled_error(2.0 * r, sym, 4) < 1e-7
    assert scaled_error(q.v[:2], 0.0, 1) < 1e-9
    w = RstsData.at(ext.base, pts[:2], 2).w.value
    assert scaled_error(8.0 * q.gamma[2:], w, 1) < 1e-7
    theta = theta_section(ext, pts)
    moved = pts.copy()
    moved[2:] += 0.37
    assert scaled_error(theta_section(ext, moved), theta, 0) < 1e-8


def test_vertical_killing_examples():
    entry = lookup("nabla_ab:-9,0")
    ext = RiemannExtension(entry.connection, left_invariant_tensor(np.array([[0.5, 1.0], [1.0, 0.0]])))
    pts = _pts(ext, 100)
    assert np.allclose(vertical_killing(ext, dkleo_form, pts), 0.0, atol=1e-10)

    def zero(c):
        return stack([c[0] * 0.0, c[0] * 0.0])

    assert np.all(vertical_killing(ext, zero, pts) == 0)


def test_vertical_field_from_recurrence_form():
    conn = lookup("nabla_ab:1,0").connection
    ext = RiemannExtension(conn)
    pts = _pts(ext)

    def phi(c):
        return RstsData(conn, c, check=False).phi

    residual = vertical_killing(ext, phi, pts)
    coords = coordinates(pts[:2], 1 + conn.order_loss + 2)
    l_phi = killing_of(phi(coords), conn.christoffel(coords)).value
    assert scaled_error(residual[:2, :2], 2.0 * l_phi, 2) < 1e-9
    assert np.allclose(residual[2:], 0.0, atol=1e-12)
    assert np.abs(l_phi).max() > 1.0


def test_cotangent_lifts():
    entry = lookup("nabla_ab:-9,0")
    ext = RiemannExtension(entry.connection, left_invariant_tensor(np.array([[1.0, -0.3], [-0.3, 2.0]])))
    pts = _pts(ext, 100)
    for name in ("v1", "v2"):
        assert scaled_error(cotangent_lift_killing(ext, entry.frame.fields[name], pts), 0.0, 2) < 1e-9

    def zero(c):
        return stack([c[0] * 0.0, c[0] * 0.0])

    assert np.all(cotangent_lift_killing(ext, zero, pts) == 0)
    # the non-right-invariant frame field u does not lift to a Killing field
    u = lambda c: entry.frame.frame(c)[0]  # noqa: E731
    assert np.abs(cotangent_lift_killing(ext, u, pts)).max() > 1e-3


def test_rotation_lift_on_slinv():
    ext = _ext("slinv:1")
    pts = _pts(ext, 100)
    a = np.array([[0.3, 1.0], [-0.5, -0.3]])
    field = lambda c: einsum("ij,j->i", a, c[:2])  # noqa: E731
    assert scaled_error(cotangent_lift_killing(ext, field, pts), 0.0, 2) < 1e-9
    coords = coordinates(pts, 1)
    assert cotangent_lift(ext, field, coords).shape[0] == 4


def test_kxi_zero_is_identity():
    ext = _ext("slsgp", "phi-phi")
    coords = coordinates(_pts(ext), 3)

    def zero(c):
        return stack([c[0] * 0.0, c[0] * 0.0])

    assert scaled_error(translated_metric(ext, zero, coords).value, ext.metric(coords).value, 2) == 0.0


def test_kxi_translation_by_killing_kernel_is_isometry():
    entry = lookup("nabla_ab:-9,0")
    ext = RiemannExtension(entry.connection, phi_squared(entry.connection))
    coords = coordinates(_pts(ext, 50), 4)
    moved = translated_metric(ext, dkleo_form, coords).value
    assert scaled_error(moved, ext.metric(coords).value, 2) < 1e-9
    pulled = kxi_pullback(ext, dkleo_form)
    assert scaled_error(pulled.metric(coords).value, ext.metric(coords).value, 2) < 1e-9


@pytest.mark.parametrize("cid", ["nullcone", "slinv:1"])
def test_kxi_random_forms(cid):
    ext = _ext(cid, "phi-phi")
    conn = ext.base
    coords = coordinates(_pts(ext, 25), 3 + conn.order_loss)
    xi = RandomPolynomial(sample_rng(9, cid), 2, "d", 25, n_fields=5)
    lhs = translated_metric(ext, xi, coords).value
    rhs = kxi_pullback(ext, xi).metric(coords).value
    assert scaled_error(lhs, rhs, 2) < 1e-9
