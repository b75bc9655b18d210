"""Explicit surface connections with skew-symmetric Ricci tensor.

Connections given by a moving frame ``(e_1, e_2)`` and the expansion
``∇_{e_a} e_b = c^c_ab e_c`` are converted to Christoffel symbols in the
chart; the others are given by Christoffel symbols directly.  Every entry is
reachable from the command line through a string id such as
``nabla_ab:1,0`` or ``wong:y1*y2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .jets import Expr, Jet, coordinates, cos, cosh, det2, einsum, exp, inv, parse_expression, sin, sinh, stack
from .tensorfield import Chart, Connection, FieldFn, grad

FRAME_MARGIN = 1e-6


class FrameDegenerateError(ValueError):
    """The frame fields are linearly dependent at a sampled point."""


@dataclass(frozen=True)
class FrameConnection:
    """Connection specified by a frame and its expansion coefficients.

    ``frame(coords)[a, i]`` is component ``i`` of frame field ``a`` and
    ``coeffs(coords)[a, b, c]`` is ``c^c_ab``.  ``scalars`` and ``fields``
    attach named functions and vector fields used by the identity checks.
    """

    chart: Chart
    frame: FieldFn
    coeffs: FieldFn
    name: str
    frame_names: tuple[str, str] = ("e1", "e2")
    order_loss: int = 1
    scalars: dict[str, FieldFn] = field(default_factory=dict, compare=False)
    fields: dict[str, FieldFn] = field(default_factory=dict, compare=False)

    def christoffel(self, coords: Jet) -> Jet:
        e = self.frame(coords)
        det = det2(e).value
        if np.any(np.abs(det) < FRAME_MARGIN):
            raise FrameDegenerateError(f"{self.name}: frame is degenerate at a sample")
        f = inv(e)  # f[i, a]: sum_i e[a, i] f[i, b] = δ_ab
        de = grad(e, 2)  # de[j, b, l] = ∂_j e_b^l
        expansion = einsum("abd,dl->abl", self.coeffs(coords), e) - einsum("ai,ibl->abl", e, de)
        return einsum("ja,abl->jbl", f, einsum("kb,abl->akl", f, expansion))

    def connection(self) -> Connection:
        return Connection(self.chart, self.christoffel, self.name, self.order_loss)


def frame_to_christoffel(fc: FrameConnection, points, order: int = 0) -> np.ndarray:
    """Christoffel symbols ``Γ^l_jk`` of a frame connection at ``points``."""
    return fc.christoffel(coordinates(points, order + fc.order_loss)).value


def frame_expansion(gamma: Jet, frame: Jet) -> Jet:
    """Coefficients ``c^c_ab`` of ``∇_{e_a} e_b = c^c_ab e_c`` for a connection
    given by Christoffel symbols."""
    de = grad(frame, 2)
    on_b = einsum("bk,jkl->bjl", frame, gamma)
    along = einsum("aj,jbl->abl", frame, de) + einsum("aj,bjl->abl", frame, on_b)
    return einsum("abl,lc->abc", along, inv(frame))


# ---------------------------------------------------------------------------
# the left-invariant family


def _nuu_coeffs(a: float, b: float) -> Callable[[Jet], Jet]:
    table = np.array([
        [[3 + a, -a], [a, 3 - a]],
        [[a - 2, 3 - a], [a + b - 1, 2 - a]],
    ], dtype=float)

    def coeffs(coords: Jet) -> Jet:
        return coords[0].like(np.zeros(coords.shape[1:])) + table[(...,) + (None,) * (len(coords.shape) - 1)]

    return coeffs


def nuu_table(a: float, b: float) -> np.ndarray:
    """Frame coefficients ``c[a, b, c]`` of the family in the frame ``(u, w)``."""
    return _nuu_coeffs(a, b)(coordinates(np.zeros(2), 0)).value


def nabla_ab(a: float, b: float) -> FrameConnection:
    """Left-invariant connection with ``[u, w] = 2u`` in the chart ``(x, t)``,
    ``u = e^{-2t} ∂_x``, ``w = ∂_t``; requires ``ab = 0``."""
    if a * b != 0:
        raise ValueError(f"nabla_ab needs ab = 0, got a={a}, b={b}")
    chart = Chart(("x", "t"), ((-1.0, 1.0), (-1.0, 1.0)))

    def frame(coords: Jet) -> Jet:
        return stack([[exp(coords[1] * -2.0), 0.0], [0.0, 1.0]])

    def f(coords):
        return exp(coords[1] * -2.0)

    def psi(coords):
        return coords[0] * 2.0

    def v1(coords):
        return stack([coords[0] * 0.0 + 1.0, 0.0])

    def v2(coords):
        return stack([coords[0] * 2.0, -1.0])

    return FrameConnection(
        chart, frame, _nuu_coeffs(a, b), f"nabla_ab:{_num(a)},{_num(b)}", ("u", "w"),
        scalars={"f": f, "psi": psi}, fields={"v1": v1, "v2": v2},
    )


def dkleo_form(coords: Jet) -> Jet:
    """1-form with ``ξ(u) = 3f^2``, ``ξ(w) = 2f^2`` on the ``(a, b) = (-9, 0)``
    connection, written in the chart ``(x, t)`` of :func:`nabla_ab`."""
    f2 = exp(coords[1] * -4.0)
    # dual coframe: u* = e^{2t} dx, w* = dt
    return stack([f2 * 3.0 * exp(coords[1] * 2.0), f2 * 2.0])


def left_invariant_tensor(matrix: np.ndarray) -> FieldFn:
    """Symmetric 2-tensor with constant components in the coframe ``(u*, w*)``."""
    m = np.asarray(matrix, dtype=float)
    m = 0.5 * (m + m.T)

    def tau(coords: Jet) -> Jet:
        e2t = exp(coords[1] * 2.0)
        zero = coords[0] * 0.0
        coframe = stack([[e2t, zero], [zero, zero + 1.0]])  # coframe[a, i]
        return einsum("ai,aj->ij", coframe, einsum("ab,bj->aj", m, coframe))

    return tau


# ---------------------------------------------------------------------------
# coordinate-given connections


def wong_connection(potential: Expr | FieldFn, name: str | None = None) -> Connection:
    """Connection with ``Γ^1_11 = -∂_1 h``, ``Γ^2_22 = ∂_2 h`` and all other
    symbols zero for a potential ``h``; its Ricci tensor has ``ρ_12 = -∂_1∂_2 h``."""
    chart = Chart(("y1", "y2"), ((-1.0, 1.0), (-1.0, 1.0)))

    def gamma(coords: Jet) -> Jet:
        h = potential(coords)
        d1, d2 = h.partial(0), h.partial(1)
        z = d1 * 0.0
        return stack([[[-d1, z], [z, z]], [[z, z], [z, d2]]])

    return Connection(chart, gamma, name or f"wong:{potential}", 1)


def slsgp_connection() -> Connection:
    """Connection on the plane with ``∇_{∂_1}∂_1 = 0``, ``∇_{∂_1}∂_2 = (3y^1, 0)``,
    ``∇_{∂_2}∂_2 = (0, 3y^1)``."""
    chart = Chart(("y1", "y2"), ((-2.0, 2.0), (-2.0, 2.0)))

    def gamma(coords: Jet) -> Jet:
        s = coords[0] * 3.0
        z = s * 0.0
        return stack([[[z, z], [s, z]], [[s, z], [z, s]]])

    return Connection(chart, gamma, "slsgp")


def slsgp_frame(coords: Jet) -> Jet:
    """Frame ``u = (0, 1/y^1)``, ``w = (2y^1, 0)`` valid off ``y^1 = 0``."""
    y1 = coords[0]
    return stack([[y1 * 0.0, 1.0 / y1], [y1 * 2.0, 0.0]])


def slinv_connection(c: float) -> Connection:
    """Connection on the plane with, for constant ``u, v`` and radial ``w``,
    ``∇_u v = 2c[Ω(w,u)v + Ω(w,v)u] - c² Ω(w,u) Ω(w,v) w``."""
    if c == 0:
        raise ValueError("slinv needs c != 0")
    chart = Chart(("y1", "y2"), ((-2.0, 2.0), (-2.0, 2.0)))
    eye = np.eye(2)

    def gamma(coords: Jet) -> Jet:
        y = coords[:2]
        omega = stack([-coords[1], coords[0]])  # omega[j] = Ω(y, e_j)
        first = einsum("j,kl->jkl", omega, eye) + einsum("k,jl->jkl", omega, eye)
        second = einsum("jk,l->jkl", einsum("j,k->jk", omega, omega), y)
        return first * (2.0 * c) - second * (c * c)

    return Connection(chart, gamma, f"slinv:{_num(c)}")


AREA_FORM = np.array([[0.0, 1.0], [-1.0, 0.0]])


def pullback_connection(conn: Connection, matrix: np.ndarray, name: str) -> Connection:
    """Pull back a connection on the plane by the linear map ``y ↦ A y``."""
    a = np.asarray(matrix, dtype=float)
    a_inv = np.linalg.inv(a)

    def gamma(coords: Jet) -> Jet:
        g = conn.christoffel(einsum("ij,j->i", a, coords[:2]))
        # Γ'^l_jk(y) = (A^-1)^l_m A^p_j A^q_k Γ^m_pq(Ay)
        return einsum("pqm,pj,qk,lm->jkl", g, a, a, a_inv)

    return Connection(conn.chart, gamma, name)


# ---------------------------------------------------------------------------
# special family with a one-dimensional Killing kernel


def nvv_connection(offset: float = 1.0) -> FrameConnection:
    """Frame connection ``∇_v v = 5ψv``, ``∇_w v = ψw``, ``∇_v w = 6v + 3ψw``,
    ``∇_w w = 15χv - 4w``.

    Realized in the chart ``(x, t)`` with ``w = ∂_t``, ``ψ = e^{-4t}``,
    ``v = e^{-6t} ∂_x - ψ ∂_t`` and ``χ = offset - e^{4t}``, which satisfy
    ``[v, w] = 6v + 2ψw``, ``d_v ψ = 4ψ²``, ``d_w ψ = -4ψ``, ``d_v χ = 4``.
    """
    chart = Chart(("x", "t"), ((-1.0, 1.0), (-0.5, 0.5)))

    def psi(coords):
        return exp(coords[1] * -4.0)

    def chi(coords):
        return offset - exp(coords[1] * 4.0)

    def frame(coords):
        p = psi(coords)
        return stack([[exp(coords[1] * -6.0), -p], [p * 0.0, p * 0.0 + 1.0]])

    def coeffs(coords):
        p, x = psi(coords), chi(coords)
        z = p * 0.0
        return stack([
            [[p * 5.0, z], [z + 6.0, p * 3.0]],
            [[z, p], [x * 15.0, z - 4.0]],
        ])

    def killing_form(coords):
        # ξ(v) = 0, ξ(w) = 4ψ, written through the dual coframe
        e = frame(coords)
        f = inv(e)  # f[i, a]
        return f[:, 1] * (psi(coords) * 4.0)

    return FrameConnection(
        chart, frame, coeffs, "nvv", ("v", "w"),
        scalars={"psi": psi, "chi": chi}, fields={"xi": killing_form},
    )


# ---------------------------------------------------------------------------
# connection from the null cone of a Lorentzian 3-space

_P = np.array([1.0, 0.0, 1.0])
_Q = np.array([0.0, 1.0, 0.0])
_SIGNS = np.array([-1.0, 1.0, 1.0])


def _inner(a: list, b) -> Jet:
    return sum(a[i] * b[i] * _SIGNS[i] for i in range(3))


def _hyperboloid(coords: Jet) -> list:
    r, theta = coords[0], coords[1]
    return [sinh(r), cosh(r) * cos(theta), cosh(r) * sin(theta)]


def _nullcone_parts(coords: Jet):
    y = _hyperboloid(coords)
    psi = _inner(y, _P)
    tangent = grad(stack(y), 2)  # tangent[a, m]: ambient component m of ∂_a y
    basis = [[tangent[a, m] for m in range(3)] for a in range(2)]
    gram = stack([[_inner(basis[a], basis[b]) for b in range(2)] for a in range(2)])
    gram_inv = inv(gram)

    def to_chart(vec):
        rhs = stack([_inner(basis[a], vec) for a in range(2)])
        return einsum("ab,b->a", gram_inv, rhs)

    def v_sign(s):
        shifted = [y[m] + s * _Q[m] for m in range(3)]
        k = _inner(y, shifted) / psi
        return [shifted[m] - k * _P[m] for m in range(3)]

    return y, psi, v_sign(1.0), v_sign(-1.0), to_chart


def nullcone_connection() -> FrameConnection:
    """Frame connection on the hyperboloid ``<y, y> = 1`` of signature (-++)
    with frame ``X = ψ v+``, ``Z = v- / ψ`` and ``∇_X X = ψ³Z - ψX``,
    ``∇_X Z = -ψZ``, ``∇_Z X = ψZ``, ``∇_Z Z = 0``."""

    def psi_fn(coords):
        return _inner(_hyperboloid(coords), _P)

    chart = Chart(("r", "theta"), ((-0.5, 0.5), (1.0, 2.1)), excluded=(psi_fn,), margin=0.05)

    def frame(coords):
        _, psi, vp, vm, to_chart = _nullcone_parts(coords)
        return stack([to_chart(vp) * psi, to_chart(vm) / psi])

    def coeffs(coords):
        psi = psi_fn(coords)
        z = psi * 0.0
        return stack([[[-psi, psi * psi * psi], [z, -psi]], [[z, psi], [z, z]]])

    def v_plus(coords):
        parts = _nullcone_parts(coords)
        return parts[4](parts[2])

    def v_minus(coords):
        parts = _nullcone_parts(coords)
        return parts[4](parts[3])

    def ambient_norms(coords):
        y, _, vp, vm, _ = _nullcone_parts(coords)
        return stack([_inner(vp, vp), _inner(vm, vm), _inner(vp, vm), _inner(y, y)])

    return FrameConnection(
        chart, frame, coeffs, "nullcone", ("X", "Z"), 2,
        scalars={"psi": psi_fn, "ambient_norms": ambient_norms},
        fields={"v+": v_plus, "v-": v_minus},
    )


# ---------------------------------------------------------------------------
# lookup by id


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    connection: Connection
    frame: FrameConnection | None = None
    params: tuple = ()

    @property
    def kind(self) -> str:
        return self.id.split(":")[0]


DEFAULT_IDS = (
    "nabla_ab:1,0", "nabla_ab:-9,0", "nabla_ab:0,-15", "nabla_ab:0,1",
    "slsgp", "slinv:1", "nvv", "nullcone",
)


def lookup(catalog_id: str) -> CatalogEntry:
    """Build the catalog connection named by ``catalog_id``."""
    kind, _, arg = catalog_id.partition(":")
    try:
        if kind == "nabla_ab":
            a, b = (float(s) for s in arg.split(","))
            fc = nabla_ab(a, b)
            return CatalogEntry(fc.name, fc.connection(), fc, (a, b))
        if kind == "wong":
            if not arg:
                raise ValueError("wong needs a potential expression")
            potential = parse_expression(arg, ("y1", "y2"))
            return CatalogEntry(catalog_id, wong_connection(potential, catalog_id), None, (arg,))
        if kind == "slsgp" and not arg:
            return CatalogEntry("slsgp", slsgp_connection())
        if kind == "slinv":
            c = float(arg)
            conn = slinv_connection(c)
            return CatalogEntry(conn.name, conn, None, (c,))
        if kind == "nvv" and not arg:
            fc = nvv_connection()
            return CatalogEntry("nvv", fc.connection(), fc)
        if kind == "nullcone" and not arg:
            fc = nullcone_connection()
            return CatalogEntry("nullcone", fc.connection(), fc)
    except (TypeError, ValueError) as err:
        raise ValueError(f"bad catalog id {catalog_id!r}: {err}") from None
    raise ValueError(f"unknown catalog id {catalog_id!r}")


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))
