"""Registry of verification checks, grouped into suites.

A *task* computes shared data once (for example the jets of one Riemann
extension) and yields several check results. Each task draws its sample
points from a generator seeded by the run seed and the task id, so results do
not depend on which other tasks run or in what order.
"""

from __future__ import annotations

import fnmatch
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np

from . import __version__
from .catalog import DEFAULT_IDS, dkleo_form, left_invariant_tensor, lookup
from .jets import coordinates, einsum, stack
from .moduli_special import (
    apb_exact,
    apb_grid_scan,
    grid_values,
    homomorphism_check,
    kernel_witness,
    mat_q,
    q_in_frame,
    special_suite,
)
from .riemann_extension import (
    RiemannExtension,
    cotangent_lift,
    kxi_pullback,
    petrov_type,
    translated_metric,
    vertical_field,
    killing_residual,
    zero_tensor,
)
from .selfcheck import engine_self_check
from .surface_rsts import RstsData, phi_squared
from .tensorfield import (
    RandomPolynomial,
    divergence_of,
    exterior_d,
    killing_of,
    nabla,
    sample_rng,
    scaled_error,
)

SUITES = ("rsts-core", "killing", "riemann-ext", "petrov", "quintuple", "moduli", "special")
FORMATS = ("json", "text")
MODULI_AXIS = (-15.0, -9.0, 0.0, 1.0, 3.0, 10.0)


@dataclass(frozen=True)
class SuiteConfig:
    suite: str = "all"
    catalog: tuple[str, ...] = DEFAULT_IDS
    samples: int = 100
    seed: int = 0
    tolerances: tuple[tuple[str, float], ...] = ()  # (check-id glob, threshold)
    format: str = "json"
    jobs: int = 1

    def __post_init__(self):
        if self.suite != "all" and self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")
        for pattern, value in self.tolerances:
            if not value > 0:
                raise ValueError(f"tolerance for {pattern!r} must be positive")
        for cid in self.catalog:
            lookup(cid)

    @property
    def suites(self) -> tuple[str, ...]:
        return SUITES if self.suite == "all" else (self.suite,)

    def threshold(self, check_id: str, default: float) -> float:
        out = default
        for pattern, value in self.tolerances:
            if fnmatch.fnmatchcase(check_id, pattern):
                out = value
        return out


@dataclass(frozen=True)
class CheckResult:
    id: str
    anchor: str
    samples: int
    max_err: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.max_err <= self.threshold)

    def to_dict(self) -> dict:
        err = self.max_err if np.isfinite(self.max_err) else np.finfo(float).max
        return {"id": self.id, "anchor": self.anchor, "samples": int(self.samples),
                "max_err": float(err), "threshold": float(self.threshold), "pass": self.passed}


@dataclass
class VerificationReport:
    suite: str
    seed: int
    checks: list[CheckResult] = field(default_factory=list)
    wall_ms: int = 0
    engine: str = __version__

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"suite": self.suite, "seed": int(self.seed), "engine": self.engine,
                "checks": [c.to_dict() for c in self.checks], "wall_ms": int(self.wall_ms)}


# a raw result before thresholds are applied: (id, anchor, samples, error, default threshold)
Raw = tuple[str, str, int, float, float]


@dataclass(frozen=True)
class Task:
    id: str
    suites: tuple[str, ...]
    run: Callable[[SuiteConfig], Iterator[Raw]]


def _rng(cfg: SuiteConfig, task_id: str) -> np.random.Generator:
    return sample_rng(cfg.seed, task_id)


def _zero(x) -> float:
    return scaled_error(x, 0.0, 0)


# ---------------------------------------------------------------------------
# rsts-core


def _rsts_core(cid: str) -> Task:
    tid = f"rsts-core/{cid}"

    def run(cfg: SuiteConfig):
        entry = lookup(cid)
        conn = entry.connection
        n = cfg.samples
        rng = _rng(cfg, tid)
        pts = conn.chart.sample(n, rng)
        d = RstsData.at(conn, pts, 3)
        rho, phi, w = d.rho, d.phi, d.w
        yield (f"{tid}/nabla-rho", "∇ρ = φ⊗ρ", n,
               scaled_error(d.nabla_rho.value, einsum("j,kl->jkl", phi, rho).value, 3), 1e-8)
        yield (f"{tid}/phi-from-w", "φ = ρ(w,·)", n,
               scaled_error(phi.value, einsum("j,jk->k", w, rho).value, 1), 1e-8)
        yield f"{tid}/phi-of-w", "φ(w) = 0", n, _zero(einsum("j,j->", phi, w).value), 1e-8
        yield (f"{tid}/d-phi", "dφ = 2ρ", n,
               scaled_error(exterior_d(phi, 1, 2).value, 2 * rho.value, 2), 1e-8)
        yield (f"{tid}/div-w", "div w = 2", n,
               scaled_error(divergence_of(w, d.gamma).value, 2.0, 0), 1e-8)
        v = RandomPolynomial(rng, 2, "u", n)(d.coords)
        lhs = exterior_d(einsum("j,jk->k", v, rho), 1, 2)
        rhs = rho * (divergence_of(v, d.gamma) + einsum("j,j->", phi, v))
        yield (f"{tid}/d-rho-v", "d[ρ(v,·)] = [div v + φ(v)]ρ", n,
               scaled_error(lhs.value, rhs.value, 2), 1e-8)
        yield f"{tid}/trace-q", "tr Q = 10", n, scaled_error(einsum("kk->", d.q).value, 10.0, 0), 1e-8
        x = RandomPolynomial(rng, 2, "u", n)(d.coords)
        nn = nabla(nabla(x, d.gamma, "u"), d.gamma, "du")  # nn[i, j, k] = ∇_i ∇_j x^k
        bochner = einsum("kjk->j", nn) - einsum("jkk->j", nn)
        yield (f"{tid}/bochner", "ρ(·,w) = div[∇w] − d[div w]", n,
               scaled_error(einsum("jk,k->j", rho, x).value, bochner.value, 1), 1e-8)

        if entry.kind == "nabla_ab":
            a, b = entry.params
            frame = entry.frame.frame(d.coords)
            u, wf = frame[0], frame[1]
            rho_uw = einsum("j,jk->k", u, rho)
            yield (f"{tid}/rho-uw", "ρ(u,w) = 6", n,
                   scaled_error(einsum("k,k->", rho_uw, wf).value, 6.0, 0), 1e-9)
            phi_frame = einsum("aj,j->a", frame, phi)
            yield (f"{tid}/phi-frame", "φ(u) = −6, φ(w) = 0", n,
                   scaled_error(phi_frame.value, np.array([-6.0, 0.0])[:, None], 1), 1e-9)
            yield (f"{tid}/mat-q", "Q represented by [[a+4, a+b−1], [−a−3/2, 6−a]]", n,
                   scaled_error(q_in_frame(a, b, pts), mat_q(a, b).matrix[:, :, None], 2), 1e-8)
            if (a, b) == (1.0, 0.0):
                yield from _zff(tid, conn, pts)

    return Task(tid, ("rsts-core",), run)


def _zff(tid: str, conn, pts) -> Iterator[Raw]:
    n = pts.shape[1]
    d = RstsData.at(conn, pts, 6)
    tau = einsum("i,j->ij", d.phi, d.phi)
    yield (f"{tid}/z-phi-phi", "Z(φ⊗φ) = 15φ/2", n,
           scaled_error(d.z_op(tau).value, 7.5 * d.phi.value, 1), 1e-7)
    yield (f"{tid}/b-phi-phi", "B(φ⊗φ) = 3φ", n,
           scaled_error(d.b_op(tau).value, 3 * d.phi.value, 1), 1e-7)
    yield f"{tid}/d-phi-coefficient", "Dφ = −1", n, scaled_error(d.d_op(d.phi).value, -1.0, 0), 1e-7


def _engine() -> Task:
    tid = "rsts-core/engine"

    def run(cfg: SuiteConfig):
        check = engine_self_check(200, cfg.seed)
        yield f"{tid}/jets-vs-fd", "jet derivatives = central differences", 200, check.max_error, 1e-5

    return Task(tid, ("rsts-core",), run)


# ---------------------------------------------------------------------------
# killing


def _killing_identities(cid: str) -> Task:
    tid = f"killing/{cid}"

    def run(cfg: SuiteConfig):
        conn = lookup(cid).connection
        n = cfg.samples
        rng = _rng(cfg, tid)
        d = RstsData.at(conn, conn.chart.sample(n, rng), 5)
        xi = RandomPolynomial(rng, 2, "d", n)(d.coords)
        tau = d.killing(xi)
        yield (f"{tid}/z-of-l", "Q*ξ = Zτ", n,
               scaled_error(d.z_op(tau).value, d.q_star(xi).value, 1), 1e-7)
        nx = nabla(xi, d.gamma, "d")
        rhs = tau + d.rho * ((einsum("j,j->", xi, d.w) - d.d_op(d.b_op(tau)) * 2.0) * 0.25)
        yield (f"{tid}/nabla-xi", "∇ξ = τ + [ξ(w) − 2D(Bτ)]ρ/4", n,
               scaled_error(nx.value, rhs.value, 2), 1e-7)
        nnx = nabla(nx, d.gamma, "dd")
        rhs = einsum("i,jk->ijk", d.b_op(tau) - xi, d.rho) + nabla(tau, d.gamma, "dd")
        yield (f"{tid}/nabla-nabla-xi", "∇∇ξ = (Bτ − ξ)⊗ρ + ∇τ", n,
               scaled_error(nnx.value, rhs.value, 3), 1e-7)

    return Task(tid, ("killing",), run)


def _dkleo() -> Task:
    tid = "killing/nabla_ab:-9,0/dkleo"

    def run(cfg: SuiteConfig):
        conn = lookup("nabla_ab:-9,0").connection
        n = cfg.samples
        pts = conn.chart.sample(n, _rng(cfg, tid))
        coords = coordinates(pts, 1 + conn.order_loss)
        xi = dkleo_form(coords)
        residual = killing_of(xi, conn.christoffel(coords)).value
        yield f"{tid}/l-xi", "Lξ = 0 for ξ(u) = 3f², ξ(w) = 2f²", n, scaled_error(residual, 0.0, 2), 1e-7
        norm = np.linalg.norm(xi.value, axis=0).min()
        yield f"{tid}/xi-nonzero", "ξ ≠ 0 (1e-6 / min |ξ|)", n, 1e-6 / norm, 1.0

    return Task(tid, ("killing",), run)


PROJECTOR_ORDER = 9


def _projector() -> Task:
    tid = "killing/nabla_ab:1,0/projector"

    def run(cfg: SuiteConfig):
        conn = lookup("nabla_ab:1,0").connection
        n = cfg.samples
        rng = _rng(cfg, tid)
        d = RstsData.at(conn, conn.chart.sample(n, rng), PROJECTOR_ORDER)
        tau = RandomPolynomial(rng, 2, "dd", n, n_fields=10, symmetric=True)(d.coords)
        p = d.projector(tau)
        yield f"{tid}/idempotent", "P² = P", n, scaled_error(d.projector(p).value, p.value, 2), 1e-6
        lxi = d.killing(RandomPolynomial(rng, 2, "d", n, n_fields=10)(d.coords))
        yield f"{tid}/kills-image", "P(Lξ) = 0", n, scaled_error(d.projector(lxi).value, 0.0, 2), 1e-6
        yield f"{tid}/z-of-p", "Z(Pτ) = 0", n, scaled_error(d.z_op(p).value, 0.0, 1), 1e-6

    return Task(tid, ("killing",), run)


def _mobility() -> Task:
    tid = "killing/minnn"

    def run(cfg: SuiteConfig):
        entry = lookup("nabla_ab:-9,0")
        n = cfg.samples
        rng = _rng(cfg, tid)
        m = rng.uniform(-2, 2, size=(2, 2))
        ext = RiemannExtension(entry.connection, left_invariant_tensor(m + m.T))
        coords = coordinates(ext.chart.sample(n, rng), 4 + ext.base.order_loss)
        fields = {
            "vertical": vertical_field(ext, dkleo_form, coords),
            "lift-v1": cotangent_lift(ext, entry.frame.fields["v1"], coords),
            "lift-v2": cotangent_lift(ext, entry.frame.fields["v2"], coords),
        }
        for name, vec in fields.items():
            yield (f"{tid}/{name}", "L_X g = 0", n,
                   scaled_error(killing_residual(ext, vec, coords).value, 0.0, 2), 1e-7)
        mat = np.stack([vec.value for vec in fields.values()])  # (3, 4, n)
        sv = np.linalg.svd(np.moveaxis(mat, -1, 0), compute_uv=False)
        ratio = (sv[:, 2] / sv[:, 0]).min()
        yield f"{tid}/independent", "three independent Killing fields (1e-6 / min σ₃/σ₁)", n, 1e-6 / ratio, 1.0

    return Task(tid, ("killing",), run)


def _rotation_lift() -> Task:
    tid = "killing/slinv:1/dhthr"

    def run(cfg: SuiteConfig):
        ext = RiemannExtension(lookup("slinv:1").connection)
        n = cfg.samples
        rng = _rng(cfg, tid)
        a = rng.uniform(-1, 1, size=(2, 2))
        a -= np.trace(a) / 2 * np.eye(2)
        coords = coordinates(ext.chart.sample(n, rng), 4)
        vec = cotangent_lift(ext, lambda c: einsum("ij,j->i", a, c[:2]), coords)
        yield (f"{tid}/sl2-lift", "cotangent lift of sl(2) field is Killing", n,
               scaled_error(killing_residual(ext, vec, coords).value, 0.0, 2), 1e-7)

    return Task(tid, ("killing",), run)


# ---------------------------------------------------------------------------
# riemann-ext and quintuple


TAUS = ("0", "phi-phi")


def _extension(cid: str, tau_name: str) -> Task:
    tid = f"ext/{cid}/tau={tau_name}"

    def run(cfg: SuiteConfig):
        conn = lookup(cid).connection
        tau = zero_tensor if tau_name == "0" else phi_squared(conn)
        ext = RiemannExtension(conn, tau)
        n = cfg.samples
        pts = ext.chart.sample(n, _rng(cfg, tid))
        order = 6 if "quintuple" in cfg.suites else 4
        j = ext.at(pts, order)
        if "riemann-ext" in cfg.suites:
            rid = f"riemann-ext/{cid}/tau={tau_name}"
            yield (f"{rid}/inverse-metric", "closed-form inverse metric", n,
                   scaled_error(j.g_inv.value, j.closed_inverse_metric().value, 2), 1e-8)
            yield (f"{rid}/christoffel", "closed-form Christoffel symbols", n,
                   scaled_error(j.lc.value, j.closed_christoffel().value, 3), 1e-8)
            yield (f"{rid}/curvature", "R̄_jkls = [g_pλ x^λ w^p + 2D(Bτ)] ρ_jk ρ_ls", n,
                   scaled_error(j.riemann.value, j.closed_riemann().value, 4), 1e-8)
            yield f"{rid}/ricci", "ρ̄ = 0", n, scaled_error(j.ricci.value, 0.0, 2), 1e-8
            yield f"{rid}/scalar", "scalar curvature = 0", n, _zero(j.scalar_curvature.value), 1e-8
            g, lc, r = j.g.value, j.lc.value, j.riemann.value
            yield f"{rid}/walker-null", "vertical distribution null", n, scaled_error(g[2:, 2:], 0.0, 2), 1e-8
            yield (f"{rid}/walker-parallel", "vertical distribution parallel", n,
                   scaled_error(lc[:, 2:, :2], 0.0, 3), 1e-8)
            yield (f"{rid}/walker-ccn", "R̄(u,·,v,·) = 0 for vertical u, v", n,
                   scaled_error(r[2:, :, 2:, :], 0.0, 4), 1e-8)
        if "quintuple" in cfg.suites:
            qid = f"quintuple/{cid}/tau={tau_name}"
            zeta, eta = j.zeta, j.eta
            sym = einsum("ab,cd->abcd", zeta, eta) + einsum("ab,cd->abcd", eta, zeta)
            yield (f"{qid}/curvature", "2R̄ = ζ⊗η + η⊗ζ", n,
                   scaled_error((j.riemann * 2.0).value, sym.value, 4), 1e-7)
            yield (f"{qid}/nabla-eta", "∇̄η = 2γ⊗ζ", n,
                   scaled_error(j.nabla_eta.value, (einsum("a,bc->abc", j.gamma_form, zeta) * 2.0).value, 3),
                   1e-7)
            egl = einsum("kl,k->l", ext.pairing, j.rsts.w)
            yield (f"{qid}/gamma", "γ_λ = g_kλ w^k / 8", n,
                   scaled_error((j.gamma_form[2:4] * 8.0).value, egl.value, 1), 1e-7)
            yield f"{qid}/v-vertical", "v^j = 0", n, scaled_error(j.v_field[0:2].value, 0.0, 1), 1e-7
            rem = j.veq_remainder()
            yield (f"{qid}/v-affine", "v^λ − g^{jλ} g_kμ x^μ Q^k_j independent of x", n,
                   max(scaled_error(rem.partial(k).value, 0.0, 1) for k in (2, 3)), 1e-7)
            yield f"{qid}/div-v", "div v = 10", n, scaled_error(j.div_v().value, 10.0, 0), 1e-8
            yield (f"{qid}/fibre-div-v", "fibrewise divergence of v = 10", n,
                   scaled_error(j.fibre_div_v().value, 10.0, 0), 1e-8)
            theta = j.theta()
            yield (f"{qid}/theta", "θ constant along fibres", n,
                   max(_zero(theta.partial(k).value) for k in (2, 3)), 1e-8)

    return Task(tid, ("riemann-ext", "quintuple"), run)


def _kxi(cid: str) -> Task:
    tid = f"riemann-ext/{cid}/kxi"

    def run(cfg: SuiteConfig):
        conn = lookup(cid).connection
        ext = RiemannExtension(conn, phi_squared(conn))
        n = cfg.samples
        rng = _rng(cfg, tid)
        coords = coordinates(ext.chart.sample(n, rng), 1 + conn.order_loss + 2)
        xi = RandomPolynomial(rng, 2, "d", n, n_fields=5)
        lhs = translated_metric(ext, xi, coords).value
        rhs = kxi_pullback(ext, xi).metric(coords).value
        yield f"{tid}/pullback", "K_ξ* g(∇,τ) = g(∇,τ+Lξ)", n, scaled_error(lhs, rhs, 2), 1e-9

    return Task(tid, ("riemann-ext",), run)


def _petrov(cid: str, tau_name: str) -> Task:
    tid = f"petrov/{cid}/tau={tau_name}"

    def run(cfg: SuiteConfig):
        conn = lookup(cid).connection
        tau = zero_tensor if tau_name == "0" else phi_squared(conn)
        ext = RiemannExtension(conn, tau)
        n = cfg.samples
        _, certs = petrov_type(ext, ext.chart.sample(n, _rng(cfg, tid)), 2 if tau_name == "0" else 4)
        yield f"{tid}/trace", "tr W⁺ = 0", n, max(c.trace for c in certs), 1e-9
        yield f"{tid}/self-adjoint", "W⁺ self-adjoint", n, max(c.self_adjoint for c in certs), 1e-9
        yield f"{tid}/rank", "rank W⁺ = 2 (|rank − 2|)", n, max(abs(c.rank - 2) for c in certs), 0.0
        yield f"{tid}/cube", "(W⁺)³ = 0", n, max(c.cube for c in certs), 1e-8
        yield (f"{tid}/square", "(W⁺)² ≠ 0 (1e-3 / min ‖(W⁺)²‖/‖W⁺‖²)", n,
               1e-3 / min(c.square for c in certs), 1.0)
        if tau_name != "0":
            # scale-free companion: τ-terms spread the singular values apart
            yield (f"{tid}/square-balanced", "(W⁺)² ≠ 0 (1e-3 / min ‖(W⁺)²‖/(σ₁σ₂))", n,
                   1e-3 / min(c.balanced_square for c in certs), 1.0)
        yield f"{tid}/kernel", "Ker W⁺ = vertical plane", n, max(c.vertical_kernel for c in certs), 1e-8

    return Task(tid, ("petrov",), run)


# ---------------------------------------------------------------------------
# moduli and special


def _moduli() -> Task:
    tid = "moduli"

    def run(cfg: SuiteConfig):
        exact = apb_exact()
        ok = exact.is_moduli_curve and all(exact.identities.values())
        yield f"{tid}/apb-exact", "c = s = a and ab = 0", 1, 0.0 if ok else 1.0, 0.0
        scan = apb_grid_scan(grid_values())
        yield (f"{tid}/apb-grid", "no off-curve solutions on [−20,20]⁴ step 0.25", scan.n_points,
               float(scan.off_curve.shape[1]), 0.0)
        coarse = apb_grid_scan(grid_values(per_axis=26))
        yield (f"{tid}/apb-grid-26", "no off-curve solutions on 26⁴ grid", coarse.n_points,
               float(coarse.off_curve.shape[1]), 0.0)
        axis = [(a, 0.0) for a in MODULI_AXIS] + [(0.0, b) for b in MODULI_AXIS]
        yield (f"{tid}/homomorphism", "B_u B_w − B_w B_u = 2 B_u", len(axis),
               max(homomorphism_check(a, b) for a, b in axis), 1e-12)
        dets = abs(mat_q(1, 0).det - 25) + abs(mat_q(-9, 0).det) + abs(mat_q(0, -15).det)
        yield f"{tid}/det-q", "2 det Q = 5a + 3b + 45", 3, float(dets), 0.0
        rng = _rng(cfg, f"{tid}/mat-q")
        errs = []
        for a, b in axis:
            entry = lookup(f"nabla_ab:{a:g},{b:g}")
            pts = entry.connection.chart.sample(cfg.samples, rng)
            errs.append(scaled_error(q_in_frame(a, b, pts), mat_q(a, b).matrix[:, :, None], 2))
        yield f"{tid}/mat-q-field", "field Q agrees with the matrix of Q", cfg.samples * len(axis), max(errs), 1e-8
        witness = kernel_witness(0, -15)
        image_ok = np.allclose(witness.direction * 8, [3, 8])
        yield (f"{tid}/kerkz", "6ψ = 2d_uψ = d_[u,w]ψ", 1,
               abs(witness.coefficient - 6) + (0.0 if image_ok else 1.0), 1e-12)

    return Task(tid, ("moduli",), run)


def _special(cid: str) -> Task:
    tid = f"special/{cid}"

    def run(cfg: SuiteConfig):
        report = special_suite(cid, cfg.samples, cfg.seed)
        for name, err in report.errors.items():
            slug = "".join(ch if ch.isalnum() else "-" for ch in name.lower().replace("*", "-star")).strip("-")
            while "--" in slug:
                slug = slug.replace("--", "-")
            yield f"{tid}/{slug}", name, cfg.samples, err, 1e-7

    return Task(tid, ("special",), run)


def _special_ids(catalog: tuple[str, ...]) -> list[str]:
    out = []
    for cid in catalog:
        entry = lookup(cid)
        if entry.kind == "nabla_ab" and mat_q(*entry.params).singular:
            out.append(entry.id)
    return out


# ---------------------------------------------------------------------------
# assembly


def build_tasks(cfg: SuiteConfig) -> list[Task]:
    bases = [lookup(cid).id for cid in cfg.catalog]
    ab_bases = [b for b in bases if b.startswith("nabla_ab:")]
    tasks: list[Task] = [_rsts_core(cid) for cid in bases] + [_engine()]
    killing_targets = [c for c in ("slsgp", "nabla_ab:1,0") if c in bases] or ["slsgp", "nabla_ab:1,0"]
    tasks += [_killing_identities(c) for c in killing_targets]
    tasks += [_dkleo(), _projector(), _mobility(), _rotation_lift()]
    tasks += [_extension(c, t) for c in bases for t in TAUS]
    tasks += [_kxi(c) for c in bases]
    tasks += [_petrov(c, t) for c in bases for t in TAUS]
    tasks.append(_moduli())
    # only special members of the chosen catalog; none selected means no special checks
    tasks += [_special(c) for c in _special_ids(tuple(ab_bases))]
    wanted = set(cfg.suites)
    return [t for t in tasks if wanted.intersection(t.suites)]


def _execute(task: Task, cfg: SuiteConfig) -> list[CheckResult]:
    out = []
    try:
        for cid, anchor, samples, err, default in task.run(cfg):
            out.append(CheckResult(cid, anchor, samples, float(err), cfg.threshold(cid, default)))
    except Exception as exc:  # a crashing task is a failing check, not a crashed run
        cid = f"{task.id}/error"
        out.append(CheckResult(cid, f"{type(exc).__name__}: {exc}", 0, float("inf"),
                               cfg.threshold(cid, 0.0)))
    return out


def run_suite(cfg: SuiteConfig) -> VerificationReport:
    """Run every check of ``cfg.suite``; results are ordered by check id."""
    start = time.perf_counter()
    tasks = build_tasks(cfg)
    if cfg.jobs == 1:
        batches = [_execute(t, cfg) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            batches = list(pool.map(lambda t: _execute(t, cfg), tasks))
    checks = sorted((c for batch in batches for c in batch), key=lambda c: c.id)
    wall_ms = int(round((time.perf_counter() - start) * 1000))
    return VerificationReport(cfg.suite, cfg.seed, checks, wall_ms)
