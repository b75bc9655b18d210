"""Recurrence structure of surface connections with skew-symmetric Ricci tensor.

On a surface every skew 2-form is a multiple of the single component
``ρ_12``, which is used to trivialize 2-forms: the recurrence 1-form ``φ``
(``∇ρ = φ ⊗ ρ``), the field ``w`` (``φ = ρ(w, ·)``), and the operators ``B``
and ``D`` are all solved by dividing by ``ρ_12``.

All operators act on jets and lower the jet order by the number of
derivatives they take, so compositions such as the fourth-order projector
remain exact as long as the input jets carry enough orders.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .jets import Jet, coordinates, det2, einsum, inv, stack
from .tensorfield import (
    Connection,
    codazzi_of,
    curvature_tensor,
    exterior_d,
    killing_of,
    nabla,
    ricci_tensor,
    scaled_error,
    wedge,
)

SKEW_TOLERANCE = 1e-8
RHO_MARGIN = 1e-6
REGIME_MARGIN = 1e-6


class NotRstsError(ValueError):
    """The Ricci tensor has a symmetric part."""


class DegenerateLocusError(ValueError):
    """The Ricci tensor vanishes (or nearly so) at a sampled point."""


class RegimeError(ValueError):
    """An operator was applied outside the regime (generic/special) it needs."""


class RstsData:
    """Ricci tensor ``ρ``, recurrence form ``φ`` and field ``w`` as jets.

    ``coords`` is a coordinate jet whose first two entries are the surface
    coordinates; it may carry extra variables (the surface is then pulled back
    along the projection that forgets them).
    """

    def __init__(self, conn: Connection, coords: Jet, check: bool = True):
        if conn.dim != 2:
            raise ValueError("recurrence data is defined for surface connections only")
        self.conn = conn
        self.coords = coords
        self.gamma = conn.christoffel(coords[:2])
        self.curvature = curvature_tensor(self.gamma)
        self.rho = ricci_tensor(self.curvature)
        self.rho12 = self.rho[0, 1]
        if check:
            values = self.rho.value
            if scaled_error(values, -np.swapaxes(values, 0, 1), 2) > SKEW_TOLERANCE:
                raise NotRstsError(f"{conn.name}: Ricci tensor is not skew-symmetric")
            if np.any(np.abs(self.rho12.value) < RHO_MARGIN):
                raise DegenerateLocusError(f"{conn.name}: Ricci tensor vanishes at a sample")
        self.nabla_rho = nabla(self.rho, self.gamma, "dd")
        self.phi = self.nabla_rho[:, 0, 1] / self.rho12
        self.w = stack([self.phi[1] / self.rho12, -self.phi[0] / self.rho12])

    @classmethod
    def at(cls, conn: Connection, points, order: int) -> "RstsData":
        """Data at ``points`` with ``order`` usable orders on top of the connection's own loss."""
        return cls(conn, coordinates(points, order + conn.order_loss))

    # basic fields ---------------------------------------------------------
    def cov(self, t: Jet, variance: str) -> Jet:
        return nabla(t, self.gamma, variance)

    def d(self, form: Jet, degree: int) -> Jet:
        return exterior_d(form, degree, 2)

    @cached_property
    def nabla_w(self) -> Jet:
        """``nabla_w[i, k] = (∇_{∂_i} w)^k``."""
        return self.cov(self.w, "u")

    @cached_property
    def q(self) -> Jet:
        """Matrix of ``Q = 4 Id + ∇w + (3/4) φ ⊗ w`` with ``q[k, j] = Q(∂_j)^k``."""
        return self.nabla_w.swap(0, 1) + einsum("k,j->kj", self.w, self.phi) * 0.75 + self._eye() * 4.0

    def _eye(self) -> np.ndarray:
        return np.eye(2).reshape((2, 2) + (1,) * (len(self.w.shape) - 1))

    @cached_property
    def q_inverse(self) -> Jet:
        return inv(self.q)

    @cached_property
    def det_q(self) -> Jet:
        return det2(self.q)

    def scaled_det_q(self) -> np.ndarray:
        q = self.q.value
        return np.abs(self.det_q.value) / np.maximum(np.sum(q * q, axis=(0, 1)), 1e-300)

    def regime(self) -> str:
        small = self.scaled_det_q() <= REGIME_MARGIN
        if np.all(small):
            return "special"
        if not np.any(small):
            return "generic"
        return "mixed"

    # operators ------------------------------------------------------------
    def killing(self, xi: Jet) -> Jet:
        return killing_of(xi, self.gamma)

    def codazzi(self, tau: Jet) -> Jet:
        return codazzi_of(tau, self.gamma)

    def b_op(self, tau: Jet) -> Jet:
        """1-form ``Bτ`` with ``(Bτ)(v) ρ = (d^∇ τ)(·, ·, v)``."""
        return self.codazzi(tau)[0, 1] / self.rho12

    def d_op(self, xi: Jet) -> Jet:
        """Function ``Dξ`` with ``2 (Dξ) ρ = ξ ∧ φ - dξ``."""
        num = wedge(xi, self.phi)[0, 1] - self.d(xi, 1)[0, 1]
        return num / (self.rho12 * 2.0)

    def z_op(self, tau: Jet) -> Jet:
        """``Zτ = 2 d[D(Bτ)] + 4 Bτ - τ(w, ·) + (3/2) D(Bτ) φ``."""
        b = self.b_op(tau)
        db = self.d_op(b)
        return (self.d(db, 0) * 2.0 + b * 4.0 - einsum("jk,j->k", tau, self.w)
                + self.phi * db * 1.5)

    def q_star(self, xi: Jet) -> Jet:
        """``(Q* ξ)(v) = ξ(Q v)``."""
        return einsum("kj,k->j", self.q, xi)

    def q_star_inverse(self, alpha: Jet) -> Jet:
        return einsum("kj,k->j", self.q_inverse, alpha)

    def projector(self, tau: Jet) -> Jet:
        """``Pτ = τ - L[(Q*)^{-1} Zτ]``; needs the generic regime."""
        if self.regime() != "generic":
            raise RegimeError(f"{self.conn.name}: projector needs an invertible Q")
        return tau - self.killing(self.q_star_inverse(self.z_op(tau)))

    def w_op(self, tau: Jet) -> Jet:
        """``Wτ = L Zτ / 10``; needs the special regime."""
        if self.regime() != "special":
            raise RegimeError(f"{self.conn.name}: W is defined for special connections")
        return self.killing(self.z_op(tau)) * 0.1

    def eigenform(self, eigenvalue: float, scale: Jet | None = None) -> Jet:
        """Nonzero 1-form ``α`` with ``Q* α = eigenvalue α`` (special regime).

        ``α`` is a left null vector of ``Q - eigenvalue``, multiplied by the
        optional scalar field ``scale``.
        """
        n = self.q - self._eye() * eigenvalue
        a = stack([n[1, 0], -n[0, 0]])
        b = stack([n[1, 1], -n[0, 1]])
        # use whichever row gives the better-conditioned null vector
        pick = np.abs(a.value).sum(axis=0) >= np.abs(b.value).sum(axis=0)
        alpha = stack([_where(pick, a[0], b[0]), _where(pick, a[1], b[1])])
        return alpha if scale is None else alpha * scale


def _where(mask: np.ndarray, a: Jet, b: Jet) -> Jet:
    order = min(a.order, b.order)
    a, b = a.truncate(order), b.truncate(order)
    return Jet(a.dim, order, np.where(mask, a.coeffs, b.coeffs))


# ---------------------------------------------------------------------------
# point-level operations


def recurrence_data(conn: Connection, points, order: int = 4) -> RstsData:
    """RSTS data of ``conn`` at ``points``; raises if ``ρ`` is not skew or vanishes."""
    return RstsData.at(conn, points, order)


def q_endomorphism(data: RstsData) -> np.ndarray:
    """Values of the matrix ``q[k, j]`` of ``Q``; its trace is 10."""
    return data.q.value


def codazzi(data: RstsData, tau) -> np.ndarray:
    t = tau(data.coords)
    if scaled_error(t.value, np.swapaxes(t.value, 0, 1), 2) > SKEW_TOLERANCE:
        raise ValueError("Codazzi operator needs a symmetric 2-tensor")
    return data.codazzi(t).value


def killing_L(conn: Connection, xi, points, order: int = 2) -> np.ndarray:
    coords = coordinates(points, order + conn.order_loss)
    return killing_of(xi(coords), conn.christoffel(coords)).value


def bd_coefficients(data: RstsData, tau, xi) -> tuple[np.ndarray, np.ndarray]:
    return data.b_op(tau(data.coords)).value, data.d_op(xi(data.coords)).value


def z_operator(data: RstsData, tau) -> np.ndarray:
    return data.z_op(tau(data.coords)).value


def p_projector(data: RstsData, tau) -> np.ndarray:
    return data.projector(tau(data.coords)).value


def w_operator(data: RstsData, tau) -> np.ndarray:
    return data.w_op(tau(data.coords)).value


def classify_rsts(data: RstsData) -> str:
    """``generic`` if ``det Q`` stays away from zero at every sample, ``special``
    if it vanishes at every sample, ``mixed`` otherwise."""
    return data.regime()


def phi_squared(conn: Connection):
    """The symmetric 2-tensor field ``φ ⊗ φ`` of ``conn``, as a field function."""

    def tau(coords: Jet) -> Jet:
        phi = RstsData(conn, coords, check=False).phi
        return einsum("i,j->ij", phi, phi)

    return tau
