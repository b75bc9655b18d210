"""Engine self-check: jet derivatives against central finite differences.

Random expressions are generated as text. The jet route parses the text and
differentiates by Taylor arithmetic; the reference route evaluates the same
text with plain numpy and differentiates by central differences.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .jets import coordinates, jet_partial, parse_expression

NAMES = ("x", "y", "z")

# Unary wrappers that stay smooth and bounded on the sample box.
_UNARY = (
    "sin({})",
    "cos({})",
    "exp(0.3*{})",
    "sqrt(1.5 + sin({}))",
    "log(2 + cos({}))",
)
_BINARY = ("({} + {})", "({} - {})", "({} * {})", "({} / (2 + sin({})))")

_NUMPY_NS = {"sin": np.sin, "cos": np.cos, "exp": np.exp, "sqrt": np.sqrt, "log": np.log}


def random_expression(rng: np.random.Generator, depth: int = 3, dim: int = 3) -> str:
    if depth == 0 or rng.random() < 0.2:
        if rng.random() < 0.75:
            return NAMES[rng.integers(dim)]
        return f"{rng.uniform(-2, 2):.3f}"
    if rng.random() < 0.4:
        return _UNARY[rng.integers(len(_UNARY))].format(random_expression(rng, depth - 1, dim))
    form = _BINARY[rng.integers(len(_BINARY))]
    return form.format(random_expression(rng, depth - 1, dim), random_expression(rng, depth - 1, dim))


def _numeric(text: str, point: np.ndarray) -> float:
    ns = dict(_NUMPY_NS)
    ns.update(zip(NAMES, point))
    return float(eval(text, {"__builtins__": {}}, ns))  # text is generated above


def finite_difference_derivatives(text: str, point: np.ndarray, h1: float = 1e-5,
                                  h2: float = 1e-4) -> tuple[np.ndarray, np.ndarray]:
    """Gradient and Hessian of ``text`` at ``point`` by central differences."""
    n = len(point)
    eye = np.eye(n)
    grad = np.array([(_numeric(text, point + h1 * e) - _numeric(text, point - h1 * e)) / (2 * h1)
                     for e in eye])
    hess = np.empty((n, n))
    for i in range(n):
        for j in range(n):
            ei, ej = h2 * eye[i], h2 * eye[j]
            hess[i, j] = (_numeric(text, point + ei + ej) - _numeric(text, point + ei - ej)
                          - _numeric(text, point - ei + ej) + _numeric(text, point - ei - ej)) / (4 * h2 * h2)
    return grad, hess


def jet_derivatives(text: str, point: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = len(point)
    jet = parse_expression(text, NAMES[:n]).evaluate(coordinates(point, 2))
    eye = np.eye(n, dtype=int)
    grad = np.array([jet_partial(jet, e) for e in eye], dtype=float)
    hess = np.array([[jet_partial(jet, eye[i] + eye[j]) for j in range(n)] for i in range(n)], dtype=float)
    return grad, hess


@dataclass(frozen=True)
class SelfCheck:
    expressions: tuple[str, ...]
    errors: np.ndarray  # relative error per expression

    @property
    def max_error(self) -> float:
        return float(self.errors.max(initial=0.0))


def engine_self_check(n: int = 200, seed: int = 0, depth: int = 3) -> SelfCheck:
    """Relative disagreement ``|jet - fd| / (1 + |fd|)`` over gradient and Hessian entries."""
    rng = np.random.default_rng(seed)
    texts, errors = [], []
    for _ in range(n):
        text = random_expression(rng, depth)
        point = rng.uniform(-1, 1, size=len(NAMES))
        g_fd, h_fd = finite_difference_derivatives(text, point)
        g_jet, h_jet = jet_derivatives(text, point)
        fd = np.concatenate([g_fd, h_fd.ravel()])
        jet = np.concatenate([g_jet, h_jet.ravel()])
        texts.append(text)
        errors.append(float(np.max(np.abs(jet - fd) / (1 + np.abs(fd)))))
    return SelfCheck(tuple(texts), np.array(errors))
