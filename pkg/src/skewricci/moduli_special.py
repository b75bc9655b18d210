"""Finite-dimensional algebra behind the locally homogeneous family, and the
identities satisfied by special connections.

The family ``∇(a, b)`` is parametrized by the coordinate axes ``ab = 0``. A
left-invariant torsion-free connection on the non-abelian 2-dimensional Lie
algebra (``[u, w] = 2u``) is described by two matrices ``B_u``, ``B_w``
depending on ``(a, b, c, s)``; asking for a Lie-algebra homomorphism gives
three quadratic equations whose solution set is ``c = s = a``, ``ab = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import sympy as sp

from .catalog import lookup, nabla_ab, nuu_table
from .jets import einsum, inv
from .surface_rsts import RegimeError, RstsData
from .tensorfield import Connection, RandomPolynomial, sample_rng, scaled_error

GRID_BOUNDS = (-20.0, 20.0)
GRID_STEP = 0.25
GRID_TOLERANCE = 1e-9


@dataclass(frozen=True)
class ModuliPoint:
    """Point of the moduli curve; both coordinates may not be nonzero at once."""

    a: float
    b: float

    def __post_init__(self):
        if self.a * self.b != 0:
            raise ValueError(f"({self.a}, {self.b}) is off the moduli curve ab = 0")


def _on_curve(a: float, b: float) -> ModuliPoint:
    return ModuliPoint(float(a), float(b))


# ---------------------------------------------------------------------------
# the homomorphism system


def apb_residuals(a, b, c, s) -> np.ndarray:
    """The three homomorphism equations as residuals, stacked on a new leading axis."""
    a, b, c, s = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, c, s)))
    return np.stack([
        (a + b - 1) * s - (a - 3) * c - 2 * a,
        (a + b - 1) * a - (c - 1) * c,
        (a - 3) * a - (c - 3) * s,
    ])


def bracket_matrices(a: float, b: float, c: float | None = None,
                     s: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of ``B_u`` and ``B_w`` in the basis ``u, w``.

    With ``c`` and ``s`` omitted they take the values ``c = s = a`` of the
    moduli curve.
    """
    c = a if c is None else c
    s = a if s is None else s
    bu = np.array([[a, c], [-s, -a]], dtype=float)
    bw = np.array([[c - 2, a + b - 1], [3 - a, 2 - c]], dtype=float)
    return bu, bw


def homomorphism_residual(a: float, b: float, c: float, s: float) -> float:
    bu, bw = bracket_matrices(a, b, c, s)
    return float(np.linalg.norm(bu @ bw - bw @ bu - 2 * bu))


def homomorphism_check(a: float, b: float) -> float:
    """``‖B_u B_w - B_w B_u - 2 B_u‖`` on the moduli curve."""
    p = _on_curve(a, b)
    return homomorphism_residual(p.a, p.b, p.a, p.a)


@dataclass(frozen=True)
class ExactElimination:
    """Symbolic solution of the homomorphism system.

    ``basis`` is the reduced lex Gröbner basis (order ``c > s > b > a``);
    ``identities`` maps each intermediate identity of the hand elimination to
    whether it lies in the ideal.
    """

    solutions: tuple[dict, ...]
    basis: tuple[str, ...]
    identities: dict[str, bool]

    @property
    def is_moduli_curve(self) -> bool:
        return set(self.basis) == {"-a + c", "-a + s", "a*b"}


def apb_exact() -> ExactElimination:
    a, b, c, s = sp.symbols("a b c s")
    eqs = apb_residuals_symbolic(a, b, c, s)
    solutions = sp.solve(eqs, [a, b, c, s], dict=True)
    basis = sp.groebner(eqs, c, s, b, a, order="lex")
    steps = {
        "c*s = a**2": c * s - a ** 2,
        "(a - c)*c = 0": (a - c) * c,
        "a*b = 0": a * b,
        "c = a": c - a,
        "s = a": s - a,
    }
    return ExactElimination(
        solutions=tuple({str(k): str(v) for k, v in sol.items()} for sol in solutions),
        basis=tuple(str(g) for g in basis.exprs),
        identities={name: bool(basis.contains(expr)) for name, expr in steps.items()},
    )


def apb_residuals_symbolic(a, b, c, s) -> list:
    return [
        sp.expand((a + b - 1) * s - (a - 3) * c - 2 * a),
        sp.expand((a + b - 1) * a - (c - 1) * c),
        sp.expand((a - 3) * a - (c - 3) * s),
    ]


@dataclass(frozen=True)
class GridScan:
    values: np.ndarray
    tolerance: float
    zeros: np.ndarray          # (4, n) grid points with max residual below tolerance
    off_curve: np.ndarray      # the subset violating c = s = a, ab = 0

    @property
    def n_points(self) -> int:
        return len(self.values) ** 4


def grid_values(bounds: tuple[float, float] = GRID_BOUNDS, step: float | None = GRID_STEP,
                per_axis: int | None = None) -> np.ndarray:
    """Axis values: ``bounds`` divided by ``step``, or into ``per_axis`` evenly spaced points."""
    lo, hi = bounds
    if per_axis is None:
        if step is None or step <= 0:
            raise ValueError("grid step must be positive")
        per_axis = int(round((hi - lo) / step)) + 1
    if per_axis < 1:
        raise ValueError("grid needs at least one value per axis")
    return np.linspace(lo, hi, per_axis)


def apb_grid_scan(values: np.ndarray | None = None, tolerance: float = GRID_TOLERANCE) -> GridScan:
    """Brute-force scan of the homomorphism system over ``values``⁴.

    The residual of a point is the max of the three absolute residuals. The
    second equation does not involve ``s``, so it is evaluated on the
    ``(a, b, c)`` grid first and only its zeros are paired with every ``s``.
    This discards no point whose max residual is below ``tolerance``.
    """
    v = grid_values() if values is None else np.asarray(values, dtype=float)
    a, b, c = np.meshgrid(v, v, v, indexing="ij", sparse=True)
    second = np.abs((a + b - 1) * a - (c - 1) * c) < tolerance
    ia, ib, ic = np.nonzero(second)
    a3, b3, c3 = v[ia][:, None], v[ib][:, None], v[ic][:, None]
    res = np.abs(apb_residuals(a3, b3, c3, v[None, :])).max(axis=0)
    rows, cols = np.nonzero(res < tolerance)
    zeros = np.stack([v[ia[rows]], v[ib[rows]], v[ic[rows]], v[cols]])
    za, zb, zc, zs = zeros
    on = (zc == za) & (zs == za) & (za * zb == 0)
    return GridScan(v, tolerance, zeros, zeros[:, ~on])


def apb_solutions(mode: str = "exact", **kwargs):
    """Solve the homomorphism system exactly (``mode="exact"``) or by grid scan."""
    if mode == "exact":
        return apb_exact()
    if mode == "grid":
        values = kwargs.pop("values", None)
        if values is None:
            values = grid_values(kwargs.pop("bounds", GRID_BOUNDS), kwargs.pop("step", GRID_STEP),
                                 kwargs.pop("per_axis", None))
        return apb_grid_scan(values, **kwargs)
    raise ValueError(f"unknown mode {mode!r}")


# ---------------------------------------------------------------------------
# the matrix of Q


@dataclass(frozen=True)
class MatQ:
    matrix: np.ndarray
    det: Fraction

    @property
    def singular(self) -> bool:
        return self.det == 0


def mat_q(a: float, b: float) -> MatQ:
    """Matrix of ``Q`` in the frame ``u, w`` of ``∇(a, b)``, with its exact determinant.

    On the moduli curve the determinant is ``(5a + 3b + 45)/2``.
    """
    fa, fb = Fraction(a), Fraction(b)
    m = [[fa + 4, fa + fb - 1], [-fa - Fraction(3, 2), 6 - fa]]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return MatQ(np.array(m, dtype=float), det)


def det_formula(a: float, b: float) -> Fraction:
    return (5 * Fraction(a) + 3 * Fraction(b) + 45) / 2


def q_in_frame(a: float, b: float, points, order: int = 3) -> np.ndarray:
    """Field-level ``Q`` of ``∇(a, b)`` expressed in its frame, shape (2, 2, n)."""
    fc = nabla_ab(a, b)
    data = RstsData.at(fc.connection(), points, order)
    e = fc.frame(data.coords).swap(0, 1)  # columns are u, w
    return einsum("ck,kb->cb", inv(e), einsum("kj,jb->kb", data.q, e)).value


@dataclass(frozen=True)
class KernelWitness:
    """Obstruction to a Killing kernel for a special ``∇(a, b)``.

    A 1-form ``ξ`` with ``Lξ = 0`` must vanish on the image of ``Q``, so
    ``ξ = ψ · direction`` in the coframe. The diagonal Killing equations give
    ``d_u ψ = lam_u ψ`` and ``d_w ψ = lam_w ψ``; applying both to
    ``[u, w] = bracket[0] u + bracket[1] w`` forces ``coefficient · ψ = 0``.
    """

    direction: np.ndarray
    lam_u: float
    lam_w: float
    bracket: np.ndarray
    coefficient: float


def kernel_witness(a: float, b: float) -> KernelWitness:
    m = mat_q(a, b)
    if not m.singular:
        raise RegimeError(f"nabla_ab:{a},{b} is generic; Q has no image line")
    cols = m.matrix
    image = cols[:, np.argmax(np.abs(cols).sum(axis=0))]
    xi = np.array([image[1], -image[0]])
    xi = xi / xi[np.argmax(np.abs(xi))]
    table = nuu_table(a, b)  # table[p, q, r]: coefficient of e_r in ∇_{e_p} e_q
    if np.any(xi == 0):
        raise ValueError("kernel direction is a frame covector; diagonal equations degenerate")
    lam_u = float(xi @ table[0, 0] / xi[0])
    lam_w = float(xi @ table[1, 1] / xi[1])
    bracket = table[0, 1] - table[1, 0]
    coefficient = float(bracket[0] * lam_u + bracket[1] * lam_w)
    return KernelWitness(xi, lam_u, lam_w, bracket, coefficient)


# ---------------------------------------------------------------------------
# special-regime suite

SPECIAL_ORDER = 13  # W³ takes twelve derivatives


@dataclass
class SpecialReport:
    name: str
    samples: int
    errors: dict[str, float] = field(default_factory=dict)
    witness: KernelWitness | None = None


def special_suite(target: str | Connection, samples: int = 100, seed: int = 0,
                  n_fields: int = 20) -> SpecialReport:
    """Scaled errors of the special-regime identities on random polynomial inputs.

    ``target`` is a catalog id or a connection. Refuses connections that are
    not special at every sample.
    """
    entry = lookup(target) if isinstance(target, str) else None
    conn = entry.connection if entry else target
    rng = sample_rng(seed, f"special:{conn.name}")
    points = conn.chart.sample(samples, rng)
    data = RstsData.at(conn, points, SPECIAL_ORDER)
    if data.regime() != "special":
        raise RegimeError(f"{conn.name} is not special")

    q = data.q
    xi = RandomPolynomial(rng, 2, "d", samples, n_fields)(data.coords)
    tau = RandomPolynomial(rng, 2, "dd", samples, n_fields, symmetric=True)(data.coords)
    scale = RandomPolynomial(rng, 2, "", samples, n_fields)(data.coords)

    qs = data.q_star(xi)
    w1 = data.w_op(tau)
    w2 = data.w_op(w1)
    w3 = data.w_op(w2)
    alpha = data.eigenform(10.0, scale)
    alpha0 = data.eigenform(0.0, scale)
    l_alpha = data.killing(alpha)
    l_alpha0 = data.killing(alpha0)

    report = SpecialReport(conn.name, samples)
    report.errors = {
        "(Q - 10)Q = 0": scaled_error(einsum("ij,jk->ik", q, q).value, 10 * q.value, 2),
        "(Q* - 10)Q* = 0": scaled_error(data.q_star(qs).value, 10 * qs.value, 1),
        "ZL = Q*": scaled_error(data.z_op(data.killing(xi)).value, qs.value, 1),
        "W^3 = W^2": scaled_error(w3.value, w2.value, 2),
        "Q* alpha = 10 alpha": scaled_error(data.q_star(alpha).value, 10 * alpha.value, 1),
        "W(L alpha) = L alpha": scaled_error(data.w_op(l_alpha).value, l_alpha.value, 2),
        "Q* alpha0 = 0": scaled_error(data.q_star(alpha0).value, 0.0, 1),
        "Z(L alpha0) = 0": scaled_error(data.z_op(l_alpha0).value, 0.0, 1),
    }
    if entry is not None and entry.kind == "nabla_ab":
        report.witness = kernel_witness(*entry.params)
    return report
