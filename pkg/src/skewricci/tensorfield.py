"""Charts, tensor fields, affine connections and their calculus.

Tensor components are jets whose leading tensor slots are coordinate indices
and whose trailing axes are sample batches.  Index conventions:

* Christoffel symbols ``gamma[j, k, l]`` are ``Γ^l_jk``, so that
  ``∇_{∂_j} ∂_k = Γ^l_jk ∂_l``.
* Derivatives put the new (differentiation) index first: ``grad(T)[i, ...]``
  is ``∂_i T`` and ``nabla(T)[i, ...]`` is ``(∇_{∂_i} T)``.
* Curvature ``R[j, k, l, s]`` holds the components of
  ``R(∂_j, ∂_k) ∂_l = R_jkl^s ∂_s`` for the operator
  ``R(v, w) = ∇_w ∇_v - ∇_v ∇_w + ∇_[v,w]``.
* The Ricci tensor is ``ρ(v, w) = tr[u ↦ R(v, u) w]``.

Only the first ``n`` jet variables are differentiated by the surface-level
operators, so surface fields can be evaluated on jets of a higher-dimensional
chart whose leading coordinates are the surface coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from string import ascii_lowercase
from typing import Callable, Sequence

import numpy as np

from .jets import Expr, Jet, coordinates, einsum, jet_lift, stack

FieldFn = Callable[[Jet], Jet]


@dataclass(frozen=True)
class Chart:
    """Coordinate chart with a box-shaped sample domain.

    ``excluded`` lists scalar fields whose zero sets are avoided: a sampled
    point is rejected when any of them has absolute value below ``margin``.
    """

    names: tuple[str, ...]
    domain: tuple[tuple[float, float], ...]
    excluded: tuple[FieldFn | Expr, ...] = ()
    margin: float = 1e-3

    def __post_init__(self):
        if len(self.names) != len(self.domain):
            raise ValueError("one sample interval per coordinate is required")
        for lo, hi in self.domain:
            if not lo <= hi:
                raise ValueError(f"empty sample interval [{lo}, {hi}]")
        if self.margin < 1e-3:
            raise ValueError("exclusion margin must be at least 1e-3")

    @property
    def dim(self) -> int:
        return len(self.names)

    def admissible(self, points: np.ndarray) -> np.ndarray:
        keep = np.ones(points.shape[1], dtype=bool)
        for locus in self.excluded:
            values = np.asarray(jet_lift(locus, points, 0).value)
            keep &= np.isfinite(values) & (np.abs(values) >= self.margin)
        return keep

    def sample(self, n: int, rng: np.random.Generator) -> np.ndarray:
        """``n`` uniform points of the domain off the excluded loci, shape (dim, n)."""
        lo = np.array([a for a, _ in self.domain])
        hi = np.array([b for _, b in self.domain])
        found = []
        total = 0
        for _ in range(1000):
            batch = lo[:, None] + (hi - lo)[:, None] * rng.random((self.dim, max(2 * n, 16)))
            batch = batch[:, self.admissible(batch)]
            found.append(batch)
            total += batch.shape[1]
            if total >= n:
                return np.concatenate(found, axis=1)[:, :n]
        raise RuntimeError("sample domain is (almost) entirely excluded")


@dataclass(frozen=True)
class Connection:
    """Torsion-free connection given by its Christoffel-symbol field.

    ``order_loss`` is how many jet orders evaluating ``gamma`` consumes (frame
    connections differentiate their frame); consumers add it to the order
    they request.
    """

    chart: Chart
    gamma: FieldFn
    name: str = "connection"
    order_loss: int = 0

    @property
    def dim(self) -> int:
        return self.chart.dim

    def christoffel(self, coords: Jet) -> Jet:
        return self.gamma(coords)


@dataclass(frozen=True)
class TensorField:
    """Tensor field; ``variance`` has one letter per slot, ``d`` (covariant)
    or ``u`` (contravariant)."""

    chart: Chart
    variance: str
    fn: FieldFn = field(compare=False)

    def __post_init__(self):
        if set(self.variance) - {"d", "u"}:
            raise ValueError(f"bad variance {self.variance!r}")

    @property
    def covariant_rank(self) -> int:
        return self.variance.count("d")

    @property
    def contravariant_rank(self) -> int:
        return self.variance.count("u")

    def __call__(self, coords: Jet) -> Jet:
        out = self.fn(coords)
        expected = (self.chart.dim,) * len(self.variance)
        if out.shape[: len(expected)] != expected:
            raise ValueError(f"field returned shape {out.shape}, expected leading {expected}")
        return out


# ---------------------------------------------------------------------------
# jet-level calculus


def grad(t: Jet, n: int) -> Jet:
    """Partial derivatives along the first ``n`` variables, new index first."""
    return stack([t.partial(i) for i in range(n)])


def nabla(t: Jet, gamma: Jet, variance: str) -> Jet:
    """Covariant derivative of a tensor with the given slot variance."""
    n = gamma.shape[0]
    out = grad(t, n)
    letters = ascii_lowercase[: len(variance)]
    for slot, kind in enumerate(variance):
        replaced = letters[:slot] + "z" + letters[slot + 1:]
        if kind == "d":
            term = einsum(f"y{letters[slot]}z,{replaced}->y{letters}", gamma, t)
            out = out - term
        else:
            term = einsum(f"yz{letters[slot]},{replaced}->y{letters}", gamma, t)
            out = out + term
    return out


def curvature_tensor(gamma: Jet) -> Jet:
    """``R[j, k, l, s] = R_jkl^s`` from Christoffel symbols."""
    n = gamma.shape[0]
    dg = grad(gamma, n)  # dg[i, j, k, l] = ∂_i Γ^l_jk
    d_k = einsum("kjls->jkls", dg)
    d_j = einsum("jkls->jkls", dg)
    quad = einsum("jlm,kms->jkls", gamma, gamma) - einsum("klm,jms->jkls", gamma, gamma)
    return d_k - d_j + quad


def ricci_tensor(curv: Jet) -> Jet:
    return einsum("jsks->jk", curv)


def exterior_d(form: Jet, degree: int, n: int) -> Jet:
    """Coordinate exterior derivative of a 0-, 1- or 2-form."""
    if degree == 0:
        return grad(form, n)
    g = grad(form, n)
    if degree == 1:
        return g - g.swap(0, 1)
    if degree == 2:
        return g + einsum("jki->ijk", g) + einsum("kij->ijk", g)
    raise ValueError(f"exterior derivative of degree {degree} forms is not supported")


def exterior_d_connection(beta: Jet, gamma: Jet) -> Jet:
    """``dβ(u, w) = (∇_u β)(w) - (∇_w β)(u)`` for a torsion-free connection."""
    nb = nabla(beta, gamma, "d")
    return nb - nb.swap(0, 1)


def bracket(u: Jet, v: Jet, n: int) -> Jet:
    """Lie bracket ``[u, v]^j = u^k ∂_k v^j - v^k ∂_k u^j``."""
    return einsum("kj,k->j", grad(v, n), u) - einsum("kj,k->j", grad(u, n), v)


def divergence_of(v: Jet, gamma: Jet) -> Jet:
    return einsum("kk->", nabla(v, gamma, "u"))


def codazzi_of(tau: Jet, gamma: Jet) -> Jet:
    """``(d^∇ τ)(u, v, ·) = (∇_u τ)(v, ·) - (∇_v τ)(u, ·)``."""
    nt = nabla(tau, gamma, "dd")
    return nt - nt.swap(0, 1)


def killing_of(xi: Jet, gamma: Jet) -> Jet:
    """Symmetrized covariant derivative ``2 (Lξ)(u, v) = (∇_u ξ)(v) + (∇_v ξ)(u)``."""
    nx = nabla(xi, gamma, "d")
    return (nx + nx.swap(0, 1)) * 0.5


def lie_derivative(t: Jet, v: Jet, variance: str, n: int) -> Jet:
    """Lie derivative of a tensor field along the vector field ``v``."""
    letters = ascii_lowercase[: len(variance)]
    out = einsum(f"y{letters},y->{letters}", grad(t, n), v)
    dv = grad(v, n)  # dv[i, c] = ∂_i v^c
    for slot, kind in enumerate(variance):
        replaced = letters[:slot] + "z" + letters[slot + 1:]
        if kind == "d":
            out = out + einsum(f"{letters[slot]}z,{replaced}->{letters}", dv, t)
        else:
            out = out - einsum(f"z{letters[slot]},{replaced}->{letters}", dv, t)
    return out


def wedge(a: Jet, b: Jet) -> Jet:
    """``(a ∧ b)(u, w) = a(u) b(w) - b(u) a(w)`` for 1-forms."""
    return einsum("i,j->ij", a, b) - einsum("i,j->ij", b, a)


def tensor(a: Jet, b: Jet) -> Jet:
    """Tensor product of two 1-forms or vectors."""
    return einsum("i,j->ij", a, b)


def contract(form: Jet, vector: Jet, rank: int, slot: int = 0) -> Jet:
    """Insert ``vector`` into the given slot of a rank-``rank`` covariant tensor."""
    letters = ascii_lowercase[:rank]
    rest = letters[:slot] + letters[slot + 1:]
    return einsum(f"{letters},{letters[slot]}->{rest}", form, vector)


# ---------------------------------------------------------------------------
# point-level operations


def _eval(conn: Connection, points, order: int) -> tuple[Jet, Jet]:
    coords = coordinates(points, order + conn.order_loss)
    return coords, conn.christoffel(coords)


def curvature(conn: Connection, points, order: int = 2) -> np.ndarray:
    """Values ``R_jkl^s`` at the given points (shape ``(n, n, n, n, *batch)``)."""
    _, gamma = _eval(conn, points, order)
    return _finite(curvature_tensor(gamma).value, "curvature")


def ricci(conn: Connection, points, order: int = 2) -> np.ndarray:
    _, gamma = _eval(conn, points, order)
    return _finite(ricci_tensor(curvature_tensor(gamma)).value, "Ricci tensor")


def covariant_derivative(t: TensorField, conn: Connection, points, order: int = 2) -> np.ndarray:
    coords, gamma = _eval(conn, points, order)
    return _finite(nabla(t(coords), gamma, t.variance).value, "covariant derivative")


def exterior_derivative(form: TensorField, points, order: int = 1) -> np.ndarray:
    if "u" in form.variance:
        raise ValueError("exterior derivative needs a differential form")
    coords = coordinates(points, order)
    return exterior_d(form(coords), len(form.variance), form.chart.dim).value


def lie_bracket(u: TensorField, v: TensorField, points, order: int = 1) -> np.ndarray:
    coords = coordinates(points, order)
    return bracket(u(coords), v(coords), u.chart.dim).value


def divergence(conn: Connection, v: TensorField, points, order: int = 2) -> np.ndarray:
    coords, gamma = _eval(conn, points, order)
    return _finite(divergence_of(v(coords), gamma).value, "divergence")


def _finite(values: np.ndarray, what: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise FloatingPointError(f"non-finite {what} at a sampled point")
    return values


# ---------------------------------------------------------------------------
# error metric and random fields


def scaled_error(lhs, rhs, tensor_ndim: int) -> float:
    """Max over samples of ``max|lhs - rhs| / (1 + max(|lhs|, |rhs|))``.

    The first ``tensor_ndim`` axes are tensor slots; the rest index samples.
    """
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    lhs, rhs = np.broadcast_arrays(lhs, rhs)
    axes = tuple(range(tensor_ndim))
    if not np.all(np.isfinite(lhs)) or not np.all(np.isfinite(rhs)):
        return float("inf")
    err = np.abs(lhs - rhs).max(axis=axes) if axes else np.abs(lhs - rhs)
    mag = np.maximum(np.abs(lhs), np.abs(rhs))
    mag = mag.max(axis=axes) if axes else mag
    return float(np.max(err / (1.0 + mag), initial=0.0))


def _monomials(dim: int, degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(degree + 1):
        for combo in combinations_with_replacement(range(dim), d):
            alpha = [0] * dim
            for var in combo:
                alpha[var] += 1
            out.append(tuple(alpha))
    return out


class RandomPolynomial:
    """Tensor field with random polynomial components.

    ``n_fields`` independent polynomials of degree ``degree`` with coefficients
    uniform in ``[-scale, scale]`` are drawn; sample ``i`` of a batch of
    ``n_samples`` points evaluates field ``i % n_fields``.
    """

    def __init__(self, rng: np.random.Generator, dim: int, variance: str, n_samples: int,
                 n_fields: int = 20, degree: int = 3, scale: float = 2.0, symmetric: bool = False):
        self.dim = dim
        self.variance = variance
        self.monomials = _monomials(dim, degree)
        shape = (len(self.monomials),) + (dim,) * len(variance) + (n_fields,)
        coeffs = rng.uniform(-scale, scale, size=shape)
        if symmetric:
            if len(variance) != 2:
                raise ValueError("symmetric random fields must have two slots")
            coeffs = 0.5 * (coeffs + np.swapaxes(coeffs, 1, 2))
        self.coeffs = coeffs[..., np.arange(n_samples) % n_fields]

    def __call__(self, coords: Jet) -> Jet:
        powers = [[coords[0].like(np.ones(coords.shape[1:]))] for _ in range(self.dim)]
        top = max(sum(m) for m in self.monomials)
        for var in range(self.dim):
            for _ in range(top):
                powers[var].append(powers[var][-1] * coords[var])
        total = None
        for m, alpha in enumerate(self.monomials):
            mono = powers[0][alpha[0]]
            for var in range(1, self.dim):
                if alpha[var]:
                    mono = mono * powers[var][alpha[var]]
            term = mono * self.coeffs[m]
            total = term if total is None else total + term
        return total


def sample_rng(seed: int, label: str) -> np.random.Generator:
    """Generator seeded by ``seed`` and a stable label, independent of call order."""
    import zlib

    return np.random.default_rng([seed, zlib.crc32(label.encode())])


def as_points(points: Sequence) -> np.ndarray:
    points = np.asarray(points, dtype=float)
    return points if points.ndim > 1 else points[:, None]
