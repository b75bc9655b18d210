"""Acceptance gate: every identity at its stated tolerance on the default catalog, 100 samples, seed 0."""

import fnmatch
import subprocess
import sys
from fractions import Fraction

import pytest

from skewricci.catalog import DEFAULT_IDS
from skewricci.moduli_special import apb_exact, apb_grid_scan, grid_values, mat_q
from skewricci.selfcheck import engine_self_check
from skewricci.suites import SuiteConfig, run_suite

TAUS = ("0", "phi-phi")
AB_IDS = [c for c in DEFAULT_IDS if c.startswith("nabla_ab:")]
CORE = ("nabla-rho", "d-phi", "phi-from-w", "d-rho-v", "div-w", "phi-of-w", "trace-q", "bochner")


@pytest.fixture(scope="module")
def report():
    rep = run_suite(SuiteConfig(samples=100, seed=0))
    return {c.id: c for c in rep.checks}


def _below(report, ids, tol):
    """Failure messages for ids missing from the report or with error not below ``tol``."""
    out = []
    for cid in ids:
        check = report.get(cid)
        if check is None:
            out.append(f"{cid} missing")
        elif not check.max_err < tol:
            out.append(f"{cid} err {check.max_err:.2e}")
    return out


def _passing(report, ids):
    out = []
    for cid in ids:
        check = report.get(cid)
        if check is None:
            out.append(f"{cid} missing")
        elif not check.passed:
            out.append(f"{cid} err {check.max_err:.2e} > {check.threshold:.0e}")
    return out


def _matching(report, pattern):
    return sorted(fnmatch.filter(report, pattern))


def test_rsts_core_identities(report, verdict):
    ids = [f"rsts-core/{c}/{k}" for c in DEFAULT_IDS for k in CORE]
    assert all(report[i].samples == 100 for i in ids if i in report)
    verdict(1, "recurrence, div w, tr Q, Bochner on 8 catalog ids < 1e-8", _below(report, ids, 1e-8))


def test_family_frame_values(report, verdict):
    ids = [f"rsts-core/{c}/{k}" for c in AB_IDS for k in ("rho-uw", "phi-frame")]
    verdict(2, "rho(u,w) = 6, phi(u) = -6, phi(w) = 0 on every family member < 1e-9",
            _below(report, ids, 1e-9))


def test_z_of_phi_squared(report, verdict):
    verdict(3, "Z(phi phi) = 15 phi / 2 on the (1,0) member < 1e-7",
            _below(report, ["rsts-core/nabla_ab:1,0/z-phi-phi"], 1e-7))


def test_killing_equation_identities(report, verdict):
    ids = [f"killing/{c}/{k}" for c in ("slsgp", "nabla_ab:1,0") for k in ("z-of-l", "nabla-xi", "nabla-nabla-xi")]
    failures = _below(report, ids, 1e-7)
    failures += _passing(report, ["killing/nabla_ab:-9,0/dkleo/l-xi", "killing/nabla_ab:-9,0/dkleo/xi-nonzero"])
    verdict(4, "Z(L xi) = Q* xi and second-derivative identity < 1e-7; explicit Killing kernel form", failures)


def test_generic_projector(report, verdict):
    ids = [f"killing/nabla_ab:1,0/projector/{k}" for k in ("idempotent", "kills-image", "z-of-p")]
    verdict(5, "P^2 = P, P(L xi) = 0, Z(P tau) = 0 on the (1,0) member < 1e-6", _below(report, ids, 1e-6))


def test_special_regime(report, verdict):
    ids = [f"special/nabla_ab:-9,0/{k}" for k in ("q-star-10-q-star-0", "w-3-w-2", "w-l-alpha-l-alpha")]
    verdict(6, "(Q*-10)Q* = 0, W^3 = W^2, W(L alpha) = L alpha on the (-9,0) member < 1e-7",
            _below(report, ids, 1e-7))


def test_riemann_extension(report, verdict):
    exact = [f"riemann-ext/{c}/tau={t}/{k}" for c in DEFAULT_IDS for t in TAUS
             for k in ("inverse-metric", "christoffel", "curvature", "ricci", "scalar")]
    walker = [f"riemann-ext/{c}/tau={t}/{k}" for c in DEFAULT_IDS for t in TAUS
              for k in ("walker-null", "walker-parallel", "walker-ccn")]
    verdict(7, "closed forms, Ricci-flat, scalar-flat < 1e-8; Walker triple",
            _below(report, exact, 1e-8) + _passing(report, walker))


def test_petrov_type_iii(report, verdict):
    failures = []
    for c in DEFAULT_IDS:
        for t in TAUS:
            base = f"petrov/{c}/tau={t}"
            failures += _below(report, [f"{base}/trace"], 1e-9)
            failures += _below(report, [f"{base}/cube"], 1e-8)
            failures += _below(report, [f"{base}/kernel"], 1e-8)
            # rank is reported as |rank - 2|; square as 1e-3 / min ratio
            failures += _below(report, [f"{base}/rank"], 0.5)
            failures += _passing(report, [f"{base}/square"])
    verdict(8, "W+ trace < 1e-9, rank 2, cube < 1e-8, square ratio > 1e-3, vertical kernel", failures)


def test_divergence_of_v(report, verdict):
    ids = [f"quintuple/{c}/tau={t}/{k}" for c in DEFAULT_IDS for t in TAUS for k in ("div-v", "fibre-div-v")]
    verdict(9, "div v = 10 and fibrewise divergence 10 on every extension < 1e-8", _below(report, ids, 1e-8))


def test_quintuple(report, verdict):
    ids = [f"quintuple/{c}/tau={t}/{k}" for c in DEFAULT_IDS for t in TAUS
           for k in ("curvature", "nabla-eta", "gamma", "v-vertical")]
    verdict(10, "quintuple curvature, nabla eta, gamma, v^j = 0 < 1e-7", _below(report, ids, 1e-7))


def test_moduli(report, verdict):
    failures = []
    exact = apb_exact()
    if not exact.is_moduli_curve:
        failures.append(f"elimination basis {exact.basis}")
    scan = apb_grid_scan(grid_values(per_axis=26))
    if scan.n_points != 26 ** 4 or scan.off_curve.shape[1]:
        failures.append(f"26^4 scan: {scan.off_curve.shape[1]} off-curve zeros")
    for ab, det in (((1, 0), 25), ((-9, 0), 0), ((0, -15), 0)):
        d = mat_q(*ab).det
        if not (isinstance(d, Fraction) and d == det):
            failures.append(f"det Q{ab} = {d}")
    failures += _passing(report, ["moduli/apb-exact", "moduli/apb-grid", "moduli/apb-grid-26", "moduli/det-q"])
    verdict(11, "exact elimination gives c = s = a, ab = 0; 26^4 grid clean; exact det Q", failures)


def test_mobility_witnesses(report, verdict):
    ids = [f"killing/minnn/{k}" for k in ("lift-v1", "lift-v2", "vertical")]
    failures = _below(report, ids, 1e-7) + _passing(report, ["killing/minnn/independent"])
    verdict(12, "three independent Killing fields on the left-invariant extension < 1e-7", failures)


def test_fibre_translation_pullback(report, verdict):
    ids = _matching(report, "riemann-ext/*/kxi/pullback")
    failures = [] if len(ids) == len(DEFAULT_IDS) else [f"{len(ids)} pullback checks"]
    verdict(13, "K_xi pullback equals the extension of tau + L xi < 1e-9", failures + _below(report, ids, 1e-9))


def test_engine_and_determinism(verdict):
    failures = []
    check = engine_self_check(200)
    if not check.max_error < 1e-5:
        failures.append(f"jets vs differences {check.max_error:.2e}")
    cmd = [sys.executable, "-m", "skewricci", "--suite", "rsts-core", "--seed", "42", "--no-timing"]
    runs = [subprocess.run(cmd, capture_output=True).stdout for _ in range(2)]
    if not runs[0] or runs[0] != runs[1]:
        failures.append("reports differ between runs")
    verdict(14, "jets match central differences on 200 expressions < 1e-5; byte-identical reports", failures)
