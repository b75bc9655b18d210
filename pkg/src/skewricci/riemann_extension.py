"""Riemann extensions of surface connections and their curvature.

The metric ``g = g^∇ + 2π*τ`` lives on the cotangent bundle of a surface in
coordinates ``(y^1, y^2, x^1, x^2)`` with fibre coordinates ``x^λ`` related to
the canonical momenta by ``q_j = P_jλ x^λ`` for a constant nonsingular
pairing matrix ``P``.  Indices ``0, 1`` of four-dimensional tensors are base
indices and ``2, 3`` are fibre indices.

Everything is computed generically from the metric in jet arithmetic (inverse
metric, Levi-Civita symbols, curvature); the closed-form expressions in terms
of base data are provided separately so the two routes can be compared.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations

import numpy as np

from .jets import Jet, coordinates, einsum, inv, stack
from .surface_rsts import RstsData
from .tensorfield import (
    Chart,
    Connection,
    FieldFn,
    curvature_tensor,
    divergence_of,
    grad,
    killing_of,
    lie_derivative,
    nabla,
    ricci_tensor,
)

BASE = (0, 1)
FIBRE = (2, 3)
PAIRS = tuple(combinations(range(4), 2))  # basis dx^a ∧ dx^b, a < b, of 2-forms


class PetrovError(ValueError):
    """The curvature at a point does not admit the requested classification."""


def zero_tensor(coords: Jet) -> Jet:
    z = coords[0] * 0.0
    return stack([[z, z], [z, z]])


@dataclass(frozen=True)
class RiemannExtension:
    """Riemann extension of ``base`` deformed by the symmetric 2-tensor ``tau``."""

    base: Connection
    tau: FieldFn = field(default=zero_tensor, compare=False)
    pairing: np.ndarray = field(default_factory=lambda: np.eye(2), compare=False)
    fibre_domain: tuple = ((-1.0, 1.0), (-1.0, 1.0))
    name: str = ""

    def __post_init__(self):
        p = np.asarray(self.pairing, dtype=float)
        if p.shape != (2, 2) or abs(np.linalg.det(p)) < 1e-12:
            raise ValueError("pairing must be a nonsingular 2x2 matrix")
        object.__setattr__(self, "pairing", p)
        if not self.name:
            object.__setattr__(self, "name", f"ext[{self.base.name}]")

    @property
    def chart(self) -> Chart:
        base = self.base.chart
        return Chart(base.names + ("x1", "x2"), base.domain + tuple(self.fibre_domain),
                     base.excluded, base.margin)

    @property
    def pairing_inverse(self) -> np.ndarray:
        return np.linalg.inv(self.pairing)

    def with_tau(self, tau: FieldFn, name: str | None = None) -> "RiemannExtension":
        return RiemannExtension(self.base, tau, self.pairing, self.fibre_domain, name or self.name)

    def at(self, points, order: int) -> "ExtensionJets":
        """Jets at ``points``; ``order`` counts orders beyond the base connection's loss."""
        return ExtensionJets(self, coordinates(points, order + self.base.order_loss))

    def metric(self, coords: Jet) -> Jet:
        """Components ``g_ab`` at a coordinate jet (which may be composed)."""
        gamma = self.base.christoffel(coords[:2])
        tau = self.tau(coords[:2])
        q = einsum("sl,l->s", self.pairing, coords[2:4])  # q_s = P_sλ x^λ
        base = (tau - einsum("s,jks->jk", q, gamma)) * 2.0
        p = self.pairing
        z = coords[0] * 0.0
        return stack([
            [base[0, 0], base[0, 1], z + p[0, 0], z + p[0, 1]],
            [base[1, 0], base[1, 1], z + p[1, 0], z + p[1, 1]],
            [z + p[0, 0], z + p[1, 0], z, z],
            [z + p[0, 1], z + p[1, 1], z, z],
        ])


def levi_civita(g: Jet, g_inv: Jet) -> Jet:
    """``Γ̄[a, b, c] = Γ̄^c_ab = ½ g^{cd} (∂_a g_bd + ∂_b g_ad - ∂_d g_ab)``."""
    n = g.shape[0]
    dg = grad(g, n)  # dg[e, a, b] = ∂_e g_ab
    lowered = (dg + einsum("bad->abd", dg) - einsum("dab->abd", dg)) * 0.5
    return einsum("abd,dc->abc", lowered, g_inv)


def lower_last(curv: Jet, g: Jet) -> Jet:
    """``R̄_abcd = g_de R_abc^e``."""
    return einsum("abce,ed->abcd", curv, g)


class ExtensionJets:
    """Metric, Levi-Civita connection and curvature of an extension as jets."""

    def __init__(self, ext: RiemannExtension, coords: Jet):
        if coords.dim != 4:
            raise ValueError("extension quantities need jets in four variables")
        self.ext = ext
        self.coords = coords
        self.g = ext.metric(coords)
        self.g_inv = inv(self.g)
        self.gamma = ext.base.christoffel(coords[:2])
        self.tau = ext.tau(coords[:2])

    @cached_property
    def lc(self) -> Jet:
        return levi_civita(self.g, self.g_inv)

    @cached_property
    def curvature(self) -> Jet:
        return curvature_tensor(self.lc)

    @cached_property
    def riemann(self) -> Jet:
        return lower_last(self.curvature, self.g)

    @cached_property
    def ricci(self) -> Jet:
        return ricci_tensor(self.curvature)

    @cached_property
    def scalar_curvature(self) -> Jet:
        return einsum("ab,ab->", self.ricci, self.g_inv)

    @cached_property
    def rsts(self) -> RstsData:
        return RstsData(self.ext.base, self.coords)

    @property
    def fibre(self) -> Jet:
        return self.coords[2:4]

    @cached_property
    def pxw(self) -> Jet:
        """``g_pλ x^λ w^p``."""
        q = einsum("sl,l->s", self.ext.pairing, self.fibre)
        return einsum("s,s->", q, self.rsts.w)

    @cached_property
    def dbt(self) -> Jet:
        """``D(Bτ)``."""
        d = self.rsts
        return d.d_op(d.b_op(self.tau))

    # closed forms ---------------------------------------------------------
    def closed_inverse_metric(self) -> Jet:
        """``g^jk = 0``, ``g^{jλ} = (P^-1)_λj``, ``g^{λμ} = -g^{jλ} g^{kμ} g_jk``."""
        pinv = self.ext.pairing_inverse
        base = self.g[0:2, 0:2]
        fib = -einsum("jk,lj,mk->lm", base, pinv, pinv)
        z = self.coords[0] * 0.0
        return stack([
            [z, z, z + pinv[0, 0], z + pinv[1, 0]],
            [z, z, z + pinv[0, 1], z + pinv[1, 1]],
            [z + pinv[0, 0], z + pinv[0, 1], fib[0, 0], fib[0, 1]],
            [z + pinv[1, 0], z + pinv[1, 1], fib[1, 0], fib[1, 1]],
        ])

    def closed_christoffel(self) -> Jet:
        """All ``Γ̄^c_ab`` from base data.

        Base-base-base is ``Γ``, symbols with a fibre lower index and a base
        upper index vanish, fibre-fibre symbols vanish, ``Γ̄^μ_jλ = -g_sλ g^kμ Γ^s_jk``,
        and ``Γ̄^μ_jl`` is solved from the expression for ``g_kμ Γ̄^μ_jl``.
        """
        p, pinv = self.ext.pairing, self.ext.pairing_inverse
        gamma = self.gamma
        mixed = -einsum("jks,sl,mk->jlm", gamma, p, pinv)  # [j, λ, μ]
        low = self.lowered_fibre_symbols()  # [j, l, k] = g_kμ Γ̄^μ_jl
        top = einsum("jlk,mk->jlm", low, pinv)
        z = self.coords[0] * 0.0
        rows = []
        for a in range(4):
            row = []
            for b in range(4):
                if a < 2 and b < 2:
                    row.append(stack([gamma[a, b, 0], gamma[a, b, 1], top[a, b, 0], top[a, b, 1]]))
                elif a < 2 and b >= 2:
                    row.append(stack([z, z, mixed[a, b - 2, 0], mixed[a, b - 2, 1]]))
                elif a >= 2 and b < 2:
                    row.append(stack([z, z, mixed[b, a - 2, 0], mixed[b, a - 2, 1]]))
                else:
                    row.append(stack([z, z, z, z]))
            rows.append(row)
        return stack(rows)

    def lowered_fibre_symbols(self) -> Jet:
        """``g_kμ Γ̄^μ_jl = q_s (R_lkj^s - ∂_j Γ^s_lk + Γ^s_kp Γ^p_jl + Γ^s_lp Γ^p_jk)
        + τ_lk,j + (d^∇τ)_lkj`` as ``[j, l, k]``."""
        gamma = self.gamma
        q = einsum("sl,l->s", self.ext.pairing, self.fibre)
        curv = curvature_tensor(gamma)
        dgam = grad(gamma, 2)  # [j, l, k, s] = ∂_j Γ^s_lk
        inner = (einsum("lkjs->jlks", curv) - dgam
                 + einsum("kps,jlp->jlks", gamma, gamma) + einsum("lps,jkp->jlks", gamma, gamma))
        ntau = nabla(self.tau, gamma, "dd")  # [j, l, k] = τ_lk,j
        codazzi = ntau - ntau.swap(0, 1)  # [l, k', j'] pattern: (d^∇τ)_abc = τ_bc,a - τ_ac,b
        dtau = einsum("lkj->jlk", codazzi)
        return einsum("jlks,s->jlk", inner, q) + ntau + dtau

    def closed_riemann(self) -> Jet:
        """``R̄_abcd`` from base data: zero with two or more fibre indices,
        ``R̄_jklλ = g_lλ ρ_jk`` and its symmetry images, and
        ``R̄_jkls = [g_pλ x^λ w^p + 2D(Bτ)] ρ_jk ρ_ls``."""
        rho = self.rsts.rho
        p = self.ext.pairing
        factor = self.pxw + self.dbt * 2.0
        base = einsum("jk,ls->jkls", rho, rho) * factor
        one = einsum("jk,lm->jklm", rho, p)  # [j, k, l, λ] = g_lλ ρ_jk
        z = self.coords[0] * 0.0
        entries = {}
        for a in range(4):
            for b in range(4):
                for c in range(4):
                    for d in range(4):
                        fib = [i >= 2 for i in (a, b, c, d)]
                        if sum(fib) >= 2:
                            val = z
                        elif not any(fib):
                            val = base[a, b, c, d]
                        elif fib[3]:
                            val = one[a, b, c, d - 2]
                        elif fib[2]:
                            val = -one[a, b, d, c - 2]
                        elif fib[1]:
                            val = one[c, d, a, b - 2]
                        else:
                            val = -one[c, d, b, a - 2]
                        entries[a, b, c, d] = val
        return stack([[[[entries[a, b, c, d] for d in range(4)] for c in range(4)]
                       for b in range(4)] for a in range(4)])

    # quintuple ------------------------------------------------------------
    @cached_property
    def zeta(self) -> Jet:
        """``ζ = -2π*ρ``."""
        rho = self.rsts.rho * -2.0
        z = self.coords[0] * 0.0
        return _embed_base(rho, z)

    @cached_property
    def eta(self) -> Jet:
        """``η_jk = -[D(Bτ) + g_pλ x^λ w^p / 2] ρ_jk``, ``η_λj = -η_jλ = g_jλ``."""
        rho = self.rsts.rho
        base = rho * -(self.dbt + self.pxw * 0.5)
        p = self.ext.pairing
        z = self.coords[0] * 0.0
        return stack([
            [base[0, 0], base[0, 1], z - p[0, 0], z - p[0, 1]],
            [base[1, 0], base[1, 1], z - p[1, 0], z - p[1, 1]],
            [z + p[0, 0], z + p[1, 0], z, z],
            [z + p[0, 1], z + p[1, 1], z, z],
        ])

    @cached_property
    def nabla_eta(self) -> Jet:
        return nabla(self.eta, self.lc, "dd")

    @cached_property
    def gamma_form(self) -> Jet:
        """``γ`` solved from ``∇̄η = 2γ⊗ζ`` through the ``(0, 1)`` component of ``ζ``."""
        return self.nabla_eta[:, 0, 1] / (self.zeta[0, 1] * 2.0)

    @cached_property
    def morphism_a(self) -> Jet:
        """``A[a, c] = A^c_a`` with ``η(u, ·) = g(Au, ·)``."""
        return einsum("ab,bc->ac", self.eta, self.g_inv)

    @cached_property
    def v_field(self) -> Jet:
        """``g(v, u) = 4[γ(u) - γ(Au)]``, returned with an upper index."""
        gam = self.gamma_form
        lowered = (gam - einsum("ac,c->a", self.morphism_a, gam)) * 4.0
        return einsum("ba,a->b", self.g_inv, lowered)

    def veq_remainder(self, transpose_q: bool = False) -> Jet:
        """``v^λ - g^{jλ} g_kμ x^μ Q^k_j``, which must not depend on the fibre."""
        q = self.rsts.q  # q[k, j] = Q(∂_j)^k
        if transpose_q:
            q = q.swap(0, 1)
        qx = einsum("kl,l->k", self.ext.pairing, self.fibre)
        term = einsum("lj,j->l", self.ext.pairing_inverse, einsum("kj,k->j", q, qx))
        return self.v_field[2:4] - term

    def theta(self) -> Jet:
        """Component ``θ(∂_{x^1}, ∂_{x^2})`` of the vertical area form dual to ``ζ``."""
        return self.coords[0] * 0.0 + np.linalg.det(self.ext.pairing) / self.zeta[0, 1]

    def div_v(self) -> Jet:
        return divergence_of(self.v_field, self.lc)

    def fibre_div_v(self) -> Jet:
        v = self.v_field
        return v[2].partial(2) + v[3].partial(3)


def _embed_base(t: Jet, z: Jet) -> Jet:
    return stack([
        [t[0, 0], t[0, 1], z, z],
        [t[1, 0], t[1, 1], z, z],
        [z, z, z, z],
        [z, z, z, z],
    ])


# ---------------------------------------------------------------------------
# point-level operations


def lc_connection(ext: RiemannExtension, points, order: int = 2) -> np.ndarray:
    return ext.at(points, order + 1).lc.value


def curvature4(ext: RiemannExtension, points, order: int = 2) -> np.ndarray:
    """``R̄_abcd`` at ``points``."""
    return ext.at(points, order + 2).riemann.value


@dataclass
class EinsteinReport:
    ricci: np.ndarray
    scalar: np.ndarray

    @property
    def max_ricci(self) -> float:
        return float(np.abs(self.ricci).max())

    @property
    def max_scalar(self) -> float:
        return float(np.abs(self.scalar).max())


def einstein_check(ext: RiemannExtension, points, order: int = 2) -> EinsteinReport:
    jets = ext.at(points, order)
    return EinsteinReport(jets.ricci.value, jets.scalar_curvature.value)


@dataclass
class WalkerReport:
    null: float
    parallel: float
    curvature_condition: float

    def holds(self, tol: float) -> bool:
        return max(self.null, self.parallel, self.curvature_condition) <= tol


def walker_check(ext: RiemannExtension, points, order: int = 2) -> WalkerReport:
    """Residuals of: ``V`` null, ``V`` parallel, ``R̄(u, ·, v, ·) = 0`` on ``V``."""
    jets = ext.at(points, order)
    g = jets.g.value
    lc = jets.lc.value
    r = jets.riemann.value
    null = np.abs(g[2:, 2:]).max()
    parallel = np.abs(lc[:, 2:, :2]).max()  # ∇̄_a ∂_λ has no base component
    ccn = np.abs(r[2:, :, 2:, :]).max()
    return WalkerReport(float(null), float(parallel), float(ccn))


def transversal_extract(ext: RiemannExtension, points, order: int = 1) -> np.ndarray:
    """Base components of ``∇̄_{∂_j} ∂_k``, projected by ``dπ``."""
    return ext.at(points, order + 1).lc.value[:2, :2, :2]


# ---------------------------------------------------------------------------
# self-dual Weyl operator


def _levi_civita_symbol() -> np.ndarray:
    eps = np.zeros((4, 4, 4, 4))
    for perm in permutations(range(4)):
        inversions = sum(perm[i] > perm[j] for i, j in combinations(range(4), 2))
        eps[perm] = (-1) ** inversions
    return eps


_EPS = _levi_civita_symbol()


@dataclass
class PetrovData:
    """Self-dual curvature at one point, in the basis ``dx^a ∧ dx^b`` (a < b)."""

    star: np.ndarray  # 6x6, star @ star = Id
    operator: np.ndarray  # curvature operator on 2-forms
    inner: np.ndarray  # induced inner product on 2-forms
    selfdual_basis: np.ndarray  # 6x3
    weyl_plus: np.ndarray  # 3x3 restriction to the self-dual space
    orientation: int

    @property
    def full(self) -> np.ndarray:
        """Curvature operator composed with the self-dual projection."""
        return self.operator @ (np.eye(6) + self.star) / 2

    def kernel_form(self) -> np.ndarray:
        """Self-dual 2-form spanning ``Ker W⁺``, as a 4x4 skew matrix."""
        _, _, vt = np.linalg.svd(self.weyl_plus)
        coeffs = self.selfdual_basis @ vt[-1]
        form = np.zeros((4, 4))
        for i, (a, b) in enumerate(PAIRS):
            form[a, b], form[b, a] = coeffs[i], -coeffs[i]
        return form


def _two_form_vector(form: np.ndarray) -> np.ndarray:
    return np.array([form[a, b] for a, b in PAIRS])


def hodge_star(g: np.ndarray, orientation: int = 1) -> np.ndarray:
    """Matrix of ``*`` on 2-forms: ``(*ω)_cd = ½ ε_abcd ω^{ab}``."""
    g_inv = np.linalg.inv(g)
    vol = orientation * np.sqrt(abs(np.linalg.det(g)))
    star = np.zeros((6, 6))
    for j, (a, b) in enumerate(PAIRS):
        omega = np.zeros((4, 4))
        omega[a, b], omega[b, a] = 1.0, -1.0
        raised = g_inv @ omega @ g_inv.T
        dual = 0.5 * vol * np.einsum("abcd,ab->cd", _EPS, raised)
        star[:, j] = _two_form_vector(dual)
    return star


def petrov_data(g: np.ndarray, riemann: np.ndarray) -> PetrovData:
    """Self-dual Weyl data at one point from ``g_ab`` and ``R̄_abcd``.

    The orientation is the one that makes ``g(∂_{x^1}) ∧ g(∂_{x^2})`` self-dual.
    """
    vertical = np.outer(g[2], g[3]) - np.outer(g[3], g[2])
    vv = _two_form_vector(vertical)
    orientation = 1
    star = hodge_star(g, orientation)
    if np.linalg.norm(star @ vv - vv) > np.linalg.norm(star @ vv + vv):
        orientation = -1
        star = -star
    if np.linalg.norm(star @ vv - vv) > 1e-8 * (1 + np.linalg.norm(vv)):
        raise PetrovError("vertical plane is neither self-dual nor anti-self-dual")
    g_inv = np.linalg.inv(g)
    raised = np.einsum("abef,ec,fd->abcd", riemann, g_inv, g_inv)
    operator = np.array([[raised[a, b, c, d] for (c, d) in PAIRS] for (a, b) in PAIRS])
    inner = np.array([[g_inv[p, r] * g_inv[q, s] - g_inv[p, s] * g_inv[q, r] for (r, s) in PAIRS]
                      for (p, q) in PAIRS])
    u, s, _ = np.linalg.svd((np.eye(6) + star) / 2)
    basis = u[:, :3]
    if s[2] < 0.5 or s[3] > 0.5:
        raise PetrovError("Hodge star eigenspaces are ill-conditioned")
    weyl_plus = np.linalg.lstsq(basis, operator @ basis, rcond=None)[0]
    return PetrovData(star, operator, inner, basis, weyl_plus, orientation)


@dataclass
class PetrovCertificate:
    """Normalized diagnostics of ``W⁺`` at one point.

    ``square`` is ``‖W²‖/‖W‖²``; ``balanced_square`` is ``‖W²‖/(σ₁σ₂)``, which
    stays of order one when the singular values are far apart.
    """

    trace: float
    self_adjoint: float
    singular_values: np.ndarray
    cube: float
    square: float
    balanced_square: float
    vertical_kernel: float
    commutes: float

    @property
    def rank(self) -> int:
        s = self.singular_values
        return int(np.sum(s > 1e-8 * s[0])) if s[0] > 0 else 0

    def is_type_iii(self) -> bool:
        return (self.rank == 2 and self.cube < 1e-8 and self.balanced_square > 1e-3
                and self.trace < 1e-9 and self.self_adjoint < 1e-9)


def petrov_certificate(data: PetrovData) -> PetrovCertificate:
    m = data.full
    scale = np.linalg.norm(m)
    if scale == 0:
        raise PetrovError("curvature vanishes")
    w = data.weyl_plus
    sym = data.inner @ data.operator
    kernel = data.kernel_form()
    sv = np.linalg.svd(m, compute_uv=False)
    return PetrovCertificate(
        trace=abs(np.trace(w)) / scale,
        self_adjoint=np.abs(sym - sym.T).max() / max(np.abs(sym).max(), 1e-300),
        singular_values=np.linalg.svd(w, compute_uv=False),
        cube=np.linalg.norm(m @ m @ m) / scale**3,
        square=np.linalg.norm(m @ m) / scale**2,
        balanced_square=np.linalg.norm(m @ m) / (sv[0] * sv[1]) if sv[1] > 0 else 0.0,
        vertical_kernel=np.abs(kernel[2:, :]).max() / np.abs(kernel).max(),
        commutes=np.abs(data.operator @ data.star - data.star @ data.operator).max() / scale,
    )


def petrov_type(ext: RiemannExtension, points, order: int = 2,
                ricci_tol: float = 1e-8) -> tuple[list[str], list[PetrovCertificate]]:
    """Petrov tag (``III`` or ``other``) and certificate at each point."""
    jets = ext.at(points, order)
    ricci = jets.ricci.value
    g, r = jets.g.value, jets.riemann.value
    tags, certs = [], []
    for i in range(g.shape[-1]):
        scale = 1 + np.abs(r[..., i]).max()
        if np.abs(ricci[..., i]).max() > ricci_tol * scale:
            raise PetrovError(f"{ext.name}: metric is not Ricci-flat at sample {i}")
        cert = petrov_certificate(petrov_data(g[..., i], r[..., i]))
        certs.append(cert)
        tags.append("III" if cert.is_type_iii() else "other")
    return tags, certs


# ---------------------------------------------------------------------------
# quintuple and divergence


@dataclass
class Quintuple:
    zeta: np.ndarray
    eta: np.ndarray
    a: np.ndarray
    gamma: np.ndarray
    v: np.ndarray


def quintuple(ext: RiemannExtension, points, order: int = 2) -> Quintuple:
    jets = ext.at(points, order + 5)
    return Quintuple(jets.zeta.value, jets.eta.value, jets.morphism_a.value,
                     jets.gamma_form.value, jets.v_field.value)


def theta_section(ext: RiemannExtension, points, order: int = 1) -> np.ndarray:
    return ext.at(points, order + 3).theta().value


def div_v_field(ext: RiemannExtension, points) -> np.ndarray:
    return ext.at(points, 7).div_v().value


# ---------------------------------------------------------------------------
# symmetries


def translated_metric(ext: RiemannExtension, xi: FieldFn, coords: Jet) -> Jet:
    """Pullback of ``g`` through the fibre translation ``x^λ ↦ x^λ + g^{jλ} ξ_j``."""
    shift = einsum("lj,j->l", ext.pairing_inverse, xi(coords[:2]))
    moved = stack([coords[0], coords[1], coords[2] + shift[0], coords[3] + shift[1]])
    jac = grad(moved, 4)  # jac[a, c] = ∂_a Φ^c
    return einsum("ac,bcd->ab", jac, einsum("bd,cd->bcd", jac, ext.metric(moved)))


def kxi_pullback(ext: RiemannExtension, xi: FieldFn) -> RiemannExtension:
    """Extension with ``τ`` replaced by ``τ + Lξ``."""

    def tau(coords: Jet) -> Jet:
        return ext.tau(coords) + killing_of(xi(coords), ext.base.christoffel(coords))

    return ext.with_tau(tau, f"{ext.name}+L")


def vertical_field(ext: RiemannExtension, xi: FieldFn, coords: Jet) -> Jet:
    """Vertical ``v`` with ``π*ξ = g(v, ·)``: ``v^λ = g^{jλ} ξ_j``."""
    up = einsum("lj,j->l", ext.pairing_inverse, xi(coords[:2]))
    z = coords[0] * 0.0
    return stack([z, z, up[0], up[1]])


def cotangent_lift(ext: RiemannExtension, field: FieldFn, coords: Jet) -> Jet:
    """``X̂ = X^j ∂_{y^j} - q_k (∂_j X^k) ∂_{q_j}`` in the coordinates ``(y, x)``."""
    x = field(coords[:2])
    dx = grad(x, 2)  # dx[j, k] = ∂_j X^k
    q = einsum("sl,l->s", ext.pairing, coords[2:4])
    up = -einsum("lj,j->l", ext.pairing_inverse, einsum("jk,k->j", dx, q))
    return stack([x[0], x[1], up[0], up[1]])


def killing_residual(ext: RiemannExtension, vector: Jet, coords: Jet) -> Jet:
    """``L_X g`` for a vector field given as a jet."""
    return lie_derivative(ext.metric(coords), vector, "dd", 4)


def vertical_killing(ext: RiemannExtension, xi: FieldFn, points, order: int = 1) -> np.ndarray:
    coords = coordinates(points, order + 2 + ext.base.order_loss)
    return killing_residual(ext, vertical_field(ext, xi, coords), coords).value


def cotangent_lift_killing(ext: RiemannExtension, field: FieldFn, points, order: int = 1) -> np.ndarray:
    coords = coordinates(points, order + 3 + ext.base.order_loss)
    return killing_residual(ext, cotangent_lift(ext, field, coords), coords).value
