"""Truncated multivariate Taylor jets.

A :class:`Jet` holds the Taylor coefficients of a smooth quantity at a point
in ``dim`` chart variables, truncated at total degree ``order``.  Coefficients
are stored densely along the leading axis in graded-lexicographic order of
multi-indices; any trailing axes are tensor slots and sample batches, and they
broadcast like numpy arrays (right-aligned).

Differentiation lowers the order by one, so an order-``N`` jet of a field
yields exact derivatives of the field up to order ``N`` at the base point.
Binary operations between jets of different orders truncate to the smaller
order; reading a value off a jet whose order has dropped below zero raises
:class:`JetOrderError`.
"""

from __future__ import annotations

import ast
import functools
import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Callable, Sequence

import numpy as np

# Above this many gathered floats the pairwise product switches to a loop
# over the left factor's coefficients to bound memory.
_GATHER_LIMIT = 4_000_000


class JetDomainError(ValueError):
    """A non-smooth operation (division by zero, log or sqrt of a non-positive
    constant term) was applied to a jet."""

    def __init__(self, message: str, expression: str | None = None):
        if expression is not None:
            message = f"{message} in sub-expression `{expression}`"
        super().__init__(message)
        self.expression = expression


class JetOrderError(ValueError):
    """The jet order is too low for the requested derivative."""


@dataclass(frozen=True)
class _Table:
    dim: int
    order: int
    indices: tuple[tuple[int, ...], ...]
    position: dict
    sizes: tuple[int, ...]  # sizes[k] = number of multi-indices of degree <= k
    degrees: np.ndarray
    left: np.ndarray  # pair factors, sorted by target
    right: np.ndarray
    starts: np.ndarray
    targets_by_left: tuple[np.ndarray, ...]
    deriv_src: tuple[np.ndarray, ...]
    deriv_fac: tuple[np.ndarray, ...]


def _multi_indices(dim: int, order: int) -> list[tuple[int, ...]]:
    out = []
    for degree in range(order + 1):
        block = []
        for combo in combinations_with_replacement(range(dim), degree):
            alpha = [0] * dim
            for var in combo:
                alpha[var] += 1
            block.append(tuple(alpha))
        block.sort(reverse=True)
        out.extend(block)
    return out


@functools.lru_cache(maxsize=None)
def table(dim: int, order: int) -> _Table:
    """Multi-index bookkeeping for jets in ``dim`` variables up to ``order``."""
    if dim < 1 or order < 0:
        raise ValueError(f"invalid jet shape dim={dim}, order={order}")
    indices = _multi_indices(dim, order)
    position = {alpha: i for i, alpha in enumerate(indices)}
    degrees = np.array([sum(a) for a in indices])
    sizes = tuple(int(np.sum(degrees <= k)) for k in range(order + 1))

    left, right, target = [], [], []
    targets_by_left = []
    for i, a in enumerate(indices):
        count = sizes[order - degrees[i]]
        row = [position[tuple(x + y for x, y in zip(a, indices[j]))] for j in range(count)]
        targets_by_left.append(np.array(row, dtype=np.intp))
        left.extend([i] * count)
        right.extend(range(count))
        target.extend(row)
    target = np.array(target)
    perm = np.argsort(target, kind="stable")
    target = target[perm]
    starts = np.flatnonzero(np.r_[True, target[1:] != target[:-1]])

    deriv_src, deriv_fac = [], []
    if order > 0:
        lower = indices[: sizes[order - 1]]
        for var in range(dim):
            src, fac = [], []
            for alpha in lower:
                bumped = list(alpha)
                bumped[var] += 1
                src.append(position[tuple(bumped)])
                fac.append(bumped[var])
            deriv_src.append(np.array(src, dtype=np.intp))
            deriv_fac.append(np.array(fac, dtype=float))
    return _Table(
        dim, order, tuple(indices), position, sizes, degrees,
        np.array(left, dtype=np.intp)[perm], np.array(right, dtype=np.intp)[perm],
        starts, tuple(targets_by_left), tuple(deriv_src), tuple(deriv_fac),
    )


def _expand(coeffs: np.ndarray, ndim: int) -> np.ndarray:
    """Insert axes after the coefficient axis so trailing dims right-align."""
    missing = ndim - (coeffs.ndim - 1)
    if missing <= 0:
        return coeffs
    return coeffs.reshape(coeffs.shape[:1] + (1,) * missing + coeffs.shape[1:])


def _pair_product(a: np.ndarray, b: np.ndarray, tab: _Table, combine) -> np.ndarray:
    """Cauchy product of coefficient stacks with ``combine`` applied per pair."""
    first = combine(a[:1], b[:1])
    if len(tab.left) * max(a[0].size, b[0].size, first.size) <= _GATHER_LIMIT:
        prod = combine(a[tab.left], b[tab.right])
        return np.add.reduceat(prod, tab.starts, axis=0)
    out = np.zeros((len(tab.indices),) + first.shape[1:])
    for i, targets in enumerate(tab.targets_by_left):
        out[targets] += combine(a[i:i + 1], b[: len(targets)])
    return out


class Jet:
    """Truncated Taylor expansion, possibly tensor- and batch-valued."""

    __slots__ = ("dim", "order", "coeffs")
    __array_ufunc__ = None  # make numpy defer to the reflected operators

    def __init__(self, dim: int, order: int, coeffs):
        coeffs = np.asarray(coeffs, dtype=float)
        tab = table(dim, order)
        if coeffs.shape[0] != len(tab.indices):
            raise ValueError(
                f"expected {len(tab.indices)} coefficients for dim={dim}, "
                f"order={order}, got {coeffs.shape[0]}"
            )
        self.dim = dim
        self.order = order
        self.coeffs = coeffs

    # construction ---------------------------------------------------------
    @classmethod
    def constant(cls, value, dim: int, order: int, shape=()) -> "Jet":
        value = np.broadcast_to(np.asarray(value, dtype=float), shape)
        coeffs = np.zeros((len(table(dim, order).indices),) + value.shape)
        coeffs[0] = value
        return cls(dim, order, coeffs)

    def like(self, value) -> "Jet":
        """Constant jet with this jet's dim and order."""
        return Jet.constant(value, self.dim, self.order, np.shape(value))

    # views ----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[1:]

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def __len__(self) -> int:
        return self.shape[0]

    def __getitem__(self, key) -> "Jet":
        if not isinstance(key, tuple):
            key = (key,)
        return Jet(self.dim, self.order, self.coeffs[(slice(None),) + key])

    def __iter__(self):
        for i in range(len(self)):
            yield self[i]

    def __repr__(self) -> str:
        return f"Jet(dim={self.dim}, order={self.order}, shape={self.shape})"

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise JetOrderError(f"cannot raise jet order {self.order} to {order}")
        if order == self.order:
            return self
        n = table(self.dim, self.order).sizes[order]
        return Jet(self.dim, order, self.coeffs[:n])

    def transpose(self, *axes) -> "Jet":
        return Jet(self.dim, self.order, np.transpose(self.coeffs, (0,) + tuple(a + 1 for a in axes)
                                                      + tuple(range(len(axes) + 1, self.coeffs.ndim))))

    def swap(self, i: int, j: int) -> "Jet":
        return Jet(self.dim, self.order, np.swapaxes(self.coeffs, i + 1, j + 1))

    def reshape(self, *shape) -> "Jet":
        return Jet(self.dim, self.order, self.coeffs.reshape((self.coeffs.shape[0],) + shape))

    # calculus -------------------------------------------------------------
    def partial(self, var: int) -> "Jet":
        """Jet of the partial derivative along ``var``; order drops by one."""
        if self.order == 0:
            raise JetOrderError("insufficient jet order for another derivative")
        tab = table(self.dim, self.order)
        fac = tab.deriv_fac[var].reshape((-1,) + (1,) * (self.coeffs.ndim - 1))
        return Jet(self.dim, self.order - 1, self.coeffs[tab.deriv_src[var]] * fac)

    def derivative(self, multi_index: Sequence[int]) -> float | np.ndarray:
        """Raw partial derivative ``∂^α`` at the base point."""
        return jet_partial(self, multi_index)

    # arithmetic -----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.dim != self.dim:
                raise ValueError(f"jets in {self.dim} and {other.dim} variables do not mix")
            return other
        if isinstance(other, Expr):
            return NotImplemented
        return np.asarray(other, dtype=float)

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, Jet):
            order = min(self.order, other.order)
            a, b = self.truncate(order), other.truncate(order)
            nd = max(a.coeffs.ndim, b.coeffs.ndim) - 1
            return Jet(self.dim, order, _expand(a.coeffs, nd) + _expand(b.coeffs, nd))
        shape = np.broadcast_shapes(self.shape, other.shape)
        coeffs = np.broadcast_to(_expand(self.coeffs, len(shape)), self.coeffs.shape[:1] + shape).copy()
        coeffs[0] += other
        return Jet(self.dim, self.order, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.dim, self.order, -self.coeffs)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, Jet):
            order = min(self.order, other.order)
            a, b = self.truncate(order), other.truncate(order)
            nd = max(a.coeffs.ndim, b.coeffs.ndim) - 1
            tab = table(self.dim, order)
            return Jet(self.dim, order, _pair_product(_expand(a.coeffs, nd), _expand(b.coeffs, nd), tab, np.multiply))
        return Jet(self.dim, self.order, _expand(self.coeffs, other.ndim) * other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if isinstance(other, Jet):
            return self * reciprocal(other)
        if np.any(other == 0):
            raise JetDomainError("division by zero")
        return Jet(self.dim, self.order, _expand(self.coeffs, other.ndim) / other)

    def __rtruediv__(self, other):
        return reciprocal(self) * other

    def __pow__(self, exponent):
        return power(self, exponent)


# ---------------------------------------------------------------------------
# construction helpers


def coordinates(point, order: int) -> Jet:
    """Jets of the chart coordinates at ``point``.

    ``point`` has shape ``(dim,)`` or ``(dim, *batch)``; the result has shape
    ``(dim, *batch)`` and its ``i``-th entry is the jet of the ``i``-th
    coordinate function.
    """
    point = np.asarray(point, dtype=float)
    dim = point.shape[0]
    tab = table(dim, order)
    coeffs = np.zeros((len(tab.indices),) + point.shape)
    coeffs[0] = point
    if order >= 1:
        for var in range(dim):
            coeffs[1 + var, var] = 1.0
    return Jet(dim, order, coeffs)


def as_jet(x, like: Jet) -> Jet:
    if isinstance(x, Jet):
        return x
    return like.like(np.asarray(x, dtype=float))


def stack(items, axis: int = 0) -> Jet:
    """Stack (nested lists of) jets and numbers into one tensor-valued jet."""
    out = _stack(items, axis)
    if not isinstance(out, Jet):
        raise ValueError("stack needs at least one jet to fix dim and order")
    return out


def _stack(items, axis: int = 0):
    if isinstance(items, Jet):
        return items
    items = [_stack(x) if isinstance(x, (list, tuple)) else x for x in items]
    ref = next((x for x in items if isinstance(x, Jet)), None)
    if ref is None:
        return np.array(items, dtype=float)
    order = min(x.order for x in items if isinstance(x, Jet))
    ndim = max(len(x.shape) for x in items if isinstance(x, Jet))

    def lift(x):
        if isinstance(x, Jet):
            return x.truncate(order)
        x = np.asarray(x, dtype=float)
        if x.ndim:  # tensor slots lead, so pad the missing batch axes
            x = x.reshape(x.shape + (1,) * max(ndim - x.ndim, 0))
        return Jet.constant(x, ref.dim, order, x.shape)

    jets = [lift(x) for x in items]
    shape = np.broadcast_shapes(*(j.shape for j in jets))
    n = len(table(ref.dim, order).indices)
    arrays = [np.broadcast_to(_expand(j.coeffs, len(shape)), (n,) + shape) for j in jets]
    return Jet(ref.dim, order, np.stack(arrays, axis=axis + 1))


def einsum(subscripts: str, *operands) -> Jet:
    """Tensor contraction of jets (and constant arrays) over named slots.

    Slot letters must be lowercase; the jet coefficient axis is labelled ``Z``.

    ``subscripts`` names only tensor slots, e.g. ``"ij,jk->ik"``; trailing batch
    axes of jet operands broadcast implicitly.  Constant numpy operands carry
    no batch axes.  At most two jet operands are allowed per call.
    """
    inputs, output = subscripts.replace(" ", "").split("->")
    terms = inputs.split(",")
    if len(terms) != len(operands):
        raise ValueError(f"subscripts {subscripts!r} expects {len(terms)} operands")
    jets = [(t, op) for t, op in zip(terms, operands) if isinstance(op, Jet)]
    consts = [(t, np.asarray(op, dtype=float)) for t, op in zip(terms, operands) if not isinstance(op, Jet)]
    if not jets or len(jets) > 2:
        raise ValueError("einsum needs one or two jet operands")
    const_terms = [t for t, _ in consts]
    const_arrays = [a for _, a in consts]
    if len(jets) == 1:
        (t, jet), = jets
        sub = ",".join([f"Z{t}..."] + const_terms) + f"->Z{output}..."
        return Jet(jet.dim, jet.order, np.einsum(sub, jet.coeffs, *const_arrays))
    (ta, a), (tb, b) = jets
    order = min(a.order, b.order)
    a, b = a.truncate(order), b.truncate(order)
    tab = table(a.dim, order)
    sub = ",".join([f"Z{ta}...", f"Z{tb}..."] + const_terms) + f"->Z{output}..."

    def combine(x, y):
        return np.einsum(sub, x, y, *const_arrays)

    return Jet(a.dim, order, _pair_product(a.coeffs, b.coeffs, tab, combine))


def jet_sum(jet: Jet, axis: int = 0) -> Jet:
    return Jet(jet.dim, jet.order, jet.coeffs.sum(axis=axis + 1))


# ---------------------------------------------------------------------------
# elementary functions


def _compose(x: Jet, taylor: Sequence[np.ndarray]) -> Jet:
    """``sum_k taylor[k] * (x - x0)^k`` by Horner's rule."""
    h = Jet(x.dim, x.order, np.concatenate([np.zeros_like(x.coeffs[:1]), x.coeffs[1:]]))
    result = Jet.constant(taylor[-1], x.dim, x.order, np.shape(taylor[-1]))
    for t in reversed(taylor[:-1]):
        result = result * h + t
    return result


def _check_positive(x: Jet, name: str) -> None:
    if np.any(x.value <= 0):
        raise JetDomainError(f"{name} of a jet with non-positive constant term")


def reciprocal(x: Jet) -> Jet:
    c = x.value
    if np.any(c == 0):
        raise JetDomainError("division by a jet with zero constant term")
    inv = 1.0 / c
    return _compose(x, [(-1.0) ** k * inv ** (k + 1) for k in range(x.order + 1)])


def _exp(x: Jet) -> Jet:
    e = np.exp(x.value)
    return _compose(x, [e / math.factorial(k) for k in range(x.order + 1)])


def _log(x: Jet) -> Jet:
    _check_positive(x, "log")
    c = x.value
    taylor = [np.log(c)] + [(-1.0) ** (k + 1) / (k * c ** k) for k in range(1, x.order + 1)]
    return _compose(x, taylor)


def _sin_cos(x: Jet, shift: int) -> Jet:
    s, c = np.sin(x.value), np.cos(x.value)
    cycle = [s, c, -s, -c]
    return _compose(x, [cycle[(k + shift) % 4] / math.factorial(k) for k in range(x.order + 1)])


def _real_power(x: Jet, p: float) -> Jet:
    c = x.value
    taylor, coef = [], 1.0
    for k in range(x.order + 1):
        taylor.append(coef * c ** (p - k))
        coef *= (p - k) / (k + 1)
    return _compose(x, taylor)


def _sqrt(x: Jet) -> Jet:
    _check_positive(x, "sqrt")
    return _real_power(x, 0.5)


def power(x, exponent):
    if isinstance(x, Expr) or isinstance(exponent, Expr):
        return _BinOp("**", _lift(x), _lift(exponent))
    if not isinstance(x, Jet):
        return np.power(x, exponent)
    if float(exponent).is_integer():
        n = int(exponent)
        if n < 0:
            return reciprocal(power(x, -n))
        result, base = x.like(np.ones(x.shape)), x
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result
    _check_positive(x, "non-integer power")
    return _real_power(x, float(exponent))


def _dispatch(name: str, jet_fn, num_fn):
    def fn(x):
        if isinstance(x, Expr):
            return _Func(name, x)
        if isinstance(x, Jet):
            return jet_fn(x)
        return num_fn(x)

    fn.__name__ = name
    fn.__doc__ = f"{name} of a jet, expression or number."
    return fn


exp = _dispatch("exp", _exp, np.exp)
log = _dispatch("log", _log, np.log)
sin = _dispatch("sin", lambda x: _sin_cos(x, 0), np.sin)
cos = _dispatch("cos", lambda x: _sin_cos(x, 1), np.cos)
sqrt = _dispatch("sqrt", _sqrt, np.sqrt)


def sinh(x):
    return (exp(x) - exp(-x)) / 2


def cosh(x):
    return (exp(x) + exp(-x)) / 2


# ---------------------------------------------------------------------------
# matrices


def inv(m: Jet) -> Jet:
    """Inverse of a square-matrix-valued jet (matrix slots first)."""
    m0 = np.moveaxis(m.value, (0, 1), (-2, -1))
    if np.any(np.abs(np.linalg.det(m0)) == 0):
        raise JetDomainError("inverse of a singular matrix jet")
    a0 = np.moveaxis(np.linalg.inv(m0), (-2, -1), (0, 1))
    h = Jet(m.dim, m.order, np.concatenate([np.zeros_like(m.coeffs[:1]), m.coeffs[1:]]))
    const = Jet.constant(a0, m.dim, m.order, a0.shape)
    step = -einsum("ij,jk->ik", const, h)
    term = const
    result = const
    for _ in range(m.order):
        term = einsum("ij,jk->ik", step, term)
        result = result + term
    return result


def det2(m: Jet) -> Jet:
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


# ---------------------------------------------------------------------------
# public operations


def jet_partial(jet: Jet, multi_index: Sequence[int]):
    """``α!`` times the Taylor coefficient of ``α``: the raw partial derivative."""
    alpha = tuple(int(a) for a in multi_index)
    if len(alpha) != jet.dim:
        raise ValueError(f"multi-index {alpha} has wrong length for dim {jet.dim}")
    if sum(alpha) > jet.order:
        raise JetOrderError(f"derivative of degree {sum(alpha)} exceeds jet order {jet.order}")
    pos = table(jet.dim, jet.order).position[alpha]
    scale = math.prod(math.factorial(a) for a in alpha)
    return jet.coeffs[pos] * scale


def jet_lift(expr, point, order: int) -> Jet:
    """Jet of a scalar-field expression at ``point``.

    ``expr`` is an :class:`Expr` or a callable taking the coordinate jet (shape
    ``(dim, *batch)``) and returning a jet.
    """
    coords = coordinates(point, order)
    if isinstance(expr, Expr):
        return expr.evaluate(coords)
    out = expr(coords)
    return as_jet(out, coords[0])


# ---------------------------------------------------------------------------
# scalar-field expressions


class Expr:
    """Symbolic scalar-field expression evaluated in jet arithmetic."""

    def evaluate(self, coords: Jet) -> Jet:
        try:
            out = self._eval(coords)
        except JetDomainError as err:
            if err.expression is None:
                raise JetDomainError(str(err), expression=str(self)) from None
            raise
        return as_jet(out, coords[0])

    def __call__(self, coords: Jet) -> Jet:
        return self.evaluate(coords)

    def _eval(self, coords):
        raise NotImplementedError

    def __add__(self, other):
        return _BinOp("+", self, _lift(other))

    def __radd__(self, other):
        return _BinOp("+", _lift(other), self)

    def __sub__(self, other):
        return _BinOp("-", self, _lift(other))

    def __rsub__(self, other):
        return _BinOp("-", _lift(other), self)

    def __mul__(self, other):
        return _BinOp("*", self, _lift(other))

    def __rmul__(self, other):
        return _BinOp("*", _lift(other), self)

    def __truediv__(self, other):
        return _BinOp("/", self, _lift(other))

    def __rtruediv__(self, other):
        return _BinOp("/", _lift(other), self)

    def __pow__(self, other):
        return _BinOp("**", self, _lift(other))

    def __neg__(self):
        return _Neg(self)


def _lift(x) -> Expr:
    return x if isinstance(x, Expr) else Const(float(x))


@dataclass(frozen=True, eq=False)
class Var(Expr):
    index: int
    name: str

    def _eval(self, coords):
        return coords[self.index]

    def __str__(self):
        return self.name


@dataclass(frozen=True, eq=False)
class Const(Expr):
    value: float

    def _eval(self, coords):
        return coords[0].like(np.full(coords.shape[1:], self.value))

    def __str__(self):
        return repr(self.value) if self.value != int(self.value) else str(int(self.value))


@dataclass(frozen=True, eq=False)
class _Neg(Expr):
    arg: Expr

    def _eval(self, coords):
        return -self.arg.evaluate(coords)

    def __str__(self):
        return f"-({self.arg})"


_BINARY = {
    "+": lambda a, b: a + b,
    "-": lambda a, b: a - b,
    "*": lambda a, b: a * b,
    "/": lambda a, b: a / b,
}


@dataclass(frozen=True, eq=False)
class _BinOp(Expr):
    op: str
    left: Expr
    right: Expr

    def _eval(self, coords):
        a = self.left.evaluate(coords)
        if self.op == "**":
            if not isinstance(self.right, Const):
                return exp(self.right.evaluate(coords) * log(a))
            return power(a, self.right.value)
        return _BINARY[self.op](a, self.right.evaluate(coords))

    def __str__(self):
        return f"({self.left} {self.op} {self.right})"


_FUNCS: dict[str, Callable] = {}


@dataclass(frozen=True, eq=False)
class _Func(Expr):
    name: str
    arg: Expr

    def _eval(self, coords):
        return _FUNCS[self.name](self.arg.evaluate(coords))

    def __str__(self):
        return f"{self.name}({self.arg})"


_FUNCS.update(exp=_exp, log=_log, sqrt=_sqrt,
              sin=lambda x: _sin_cos(x, 0), cos=lambda x: _sin_cos(x, 1))


def variables(*names: str) -> tuple[Var, ...]:
    return tuple(Var(i, n) for i, n in enumerate(names))


_PARSE_FUNCS = {"exp": exp, "log": log, "sin": sin, "cos": cos, "sqrt": sqrt, "sinh": sinh, "cosh": cosh}
_PARSE_CONSTS = {"pi": math.pi, "e": math.e}


def parse_expression(text: str, names: Sequence[str]) -> Expr:
    """Parse an arithmetic expression over the coordinate ``names``."""
    coords = dict(zip(names, variables(*names)))
    tree = ast.parse(text.strip(), mode="eval")

    def walk(node):
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return Const(float(node.value))
        if isinstance(node, ast.Name):
            if node.id in coords:
                return coords[node.id]
            if node.id in _PARSE_CONSTS:
                return Const(_PARSE_CONSTS[node.id])
            raise ValueError(f"unknown name {node.id!r} in {text!r}")
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            arg = walk(node.operand)
            return -arg if isinstance(node.op, ast.USub) else arg
        if isinstance(node, ast.BinOp):
            ops = {ast.Add: "+", ast.Sub: "-", ast.Mult: "*", ast.Div: "/", ast.Pow: "**"}
            op = ops.get(type(node.op))
            if op is None:
                raise ValueError(f"unsupported operator in {text!r}")
            return _BinOp(op, walk(node.left), walk(node.right))
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name) and len(node.args) == 1:
            fn = _PARSE_FUNCS.get(node.func.id)
            if fn is None:
                raise ValueError(f"unknown function {node.func.id!r} in {text!r}")
            return fn(walk(node.args[0]))
        raise ValueError(f"unsupported syntax in {text!r}")

    return walk(tree)
